#pragma once

// Legality-checked Kirby moves over handle structures, plus the move-script
// verifier.  Every move separates what the engine actually checked
// (`verified`) from geometric conditions it had to take on faith
// (`asserted`); certificates carry both lists so a reader knows exactly how
// much of a proof script is machine-checked.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kirby/handlebody.hpp"

namespace kirby {

struct MoveEffect {
    HandleStructure result;
    std::vector<std::string> verified;
    std::vector<std::string> asserted;
};

// Slide `handle` over `over` (sign +1: add, -1: subtract): linking row and
// framing updated by the congruence, geometric flags of `handle` dropped,
// d3 rewritten for the new basis.  Exactly invertible by the opposite sign.
MoveEffect slide(const HandleStructure& X, const std::string& handle,
                 const std::string& over, int sign);

// Introduce a disjoint ±1-framed unknot.
MoveEffect blow_up(const HandleStructure& X, int sign,
                   const std::optional<std::string>& id = {});

// Delete a ±1-framed unlinked handle whose attaching circle is an unknot
// (geometric condition: flagged or assumed).
MoveEffect blow_down(const HandleStructure& X, const std::string& target);

struct SliceRestore {
    std::string target;  // plain dotted handle that becomes slice-dotted
    std::string knot;    // its slice knot label
    bool operator==(const SliceRestore&) const = default;
};

// Cancel a (1,2)-pair: the framed handle must link the plain dotted handle
// exactly once; every other framed handle is first slid across `framed`
// until its linking with `dotted` is zero.  The optional restore step
// re-identifies another plain dotted handle as a slice 1-handle (asserted).
MoveEffect cancel_12(const HandleStructure& X, const std::string& dotted,
                     const std::string& framed,
                     const std::optional<SliceRestore>& restore = {});

// Cancel a (2,3)-pair: 0-framed, unlinked, unknotted (asserted) 2-handle
// against a 3-handle attached along its belt sphere (d3 row = +-e_target).
MoveEffect cancel_23(const HandleStructure& X, const std::string& target);

// Replace a dotted circle by a 0-framed 2-handle (surgery on the 1-handle).
// Changes the 4-manifold, preserves its boundary.
MoveEffect surger_dot(const HandleStructure& X, const std::string& target);

// Put a dot on a 0-framed 2-handle: plain dot when the circle is an unknot
// (flagged or assumed), slice-dotted when a knot label says K # -K.
MoveEffect add_dot(const HandleStructure& X, const std::string& target,
                   const std::optional<std::string>& knot = {});

// Redraw a slice 1-handle as two plain 1-handles joined by a 0-framed
// 2-handle, per the stored template for its knot label.  The template is
// checked on the spot to preserve all five invariants.
MoveEffect expand_slice(const HandleStructure& X, const std::string& target);

// Introduce geometrically cancelling pairs.
MoveEffect add_cancelling_pair_12(const HandleStructure& X,
                                  const std::optional<std::string>& dotted_id = {},
                                  const std::optional<std::string>& framed_id = {});
MoveEffect add_cancelling_pair_23(const HandleStructure& X,
                                  const std::optional<std::string>& id = {});

// ---------------------------------------------------------------------------
// Move scripts and certificates

struct ParsedMove {
    std::string op;
    // string operands by field name (handle, over, target, dotted, framed,
    // id, knot, kind), present when the script supplied them
    std::map<std::string, std::string> args;
    std::optional<int> sign;
    // cosmetic annotation: half-twists on the slide band (recorded, no
    // algebraic effect)
    std::optional<long long> half_twists;
    std::optional<SliceRestore> slice;

    bool operator==(const ParsedMove&) const = default;
};

MoveEffect apply_move(const HandleStructure& X, const ParsedMove& move);

struct ScriptAssert {
    std::string handle;
    std::optional<bool> unknot;
    std::map<std::string, Int> geometric_runs;
    bool operator==(const ScriptAssert&) const = default;
};

struct ExpectedInvariants {
    std::optional<long long> chi;
    std::optional<int> sigma;
    std::optional<AbelianGroup> h1;
    std::optional<AbelianGroup> h2;
    std::optional<AbelianGroup> boundary_h1;
    bool operator==(const ExpectedInvariants&) const = default;
};

struct MoveScript {
    std::string start;  // .kby path, relative to the script file
    std::vector<ScriptAssert> asserts;
    std::vector<ParsedMove> moves;
    ExpectedInvariants expect;
    bool operator==(const MoveScript&) const = default;
};

struct CertStep {
    std::size_t index = 0;  // 1-based position in the script
    ParsedMove move;
    std::vector<std::string> verified;
    std::vector<std::string> asserted;
};

struct Certificate {
    InvariantSummary initial;
    InvariantSummary final_invariants;
    ExpectedInvariants expected;
    std::vector<CertStep> steps;
    std::vector<std::string> script_assertions;
    std::vector<std::string> caveats;
    std::vector<std::string> failures;  // empty iff the script verifies

    bool passed() const { return failures.empty(); }
    bool has_assertions() const;
    // "pass" / "pass-with-assertions" (strict mode only) / "fail"
    std::string verdict(bool strict) const;
};

// Runs the script against a loaded start structure: applies the script's
// assert block, applies each move (fail-fast on illegal moves), then
// compares the final invariants against the expectations.
Certificate verify_script(const HandleStructure& start, const MoveScript& script);

MoveScript script_from_json_text(const std::string& text);
std::string certificate_to_json_text(const Certificate& cert, bool strict);

}  // namespace kirby
