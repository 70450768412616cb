#pragma once

#include <iosfwd>
#include <string>

namespace kirby {

// Runs the seven-point acceptance suite against a corpus directory,
// printing one PASS/FAIL line per criterion (with timing) to `out`.
// Returns true iff every criterion passes.
bool run_corpus_acceptance(const std::string& corpus_dir, std::ostream& out);

}  // namespace kirby
