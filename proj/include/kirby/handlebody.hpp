#pragma once

// Handle structures for 4-manifolds: dotted circles (1-handles), slice
// 1-handles, framed 2-handles with an integer linking matrix, plus counts of
// 3- and 4-handles and an optional 3-handle attaching matrix.  Geometric
// facts the linking matrix cannot see (unknottedness, geometric run counts)
// travel as explicit flags so that moves can distinguish machine-verified
// conditions from user-asserted ones.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kirby/ints.hpp"
#include "kirby/zmatrix.hpp"

namespace kirby {

enum class HandleKind { Dotted, SliceDotted, Framed };

std::string to_string(HandleKind kind);

struct Handle {
    std::string id;
    HandleKind kind = HandleKind::Framed;
    // Knot type of the circle: required for slice-dotted handles (the slice
    // knot K # -K, e.g. "square"); optional descriptive label for framed
    // handles (attaching-circle knot type).  Plain dotted handles are
    // unknotted by definition and carry no label.
    std::optional<std::string> knot;
    Int framing = 0;  // framed handles only
    // Algebraic linking numbers with other handles, keyed by id.  Kept
    // symmetric across the structure; zero entries are not stored.
    std::map<std::string, Int> links;
    // Geometric flags.  `unknot` asserts the attaching circle is an unknot
    // (meaningful for framed handles).  `geometric_runs` on a framed handle
    // counts geometric passages through each 1-handle; it dominates the
    // algebraic linking number and has the same parity.
    std::optional<bool> unknot;
    std::map<std::string, Int> geometric_runs;

    bool operator==(const Handle&) const = default;
    bool is_dotted() const { return kind != HandleKind::Framed; }
};

struct HandleStructure {
    std::vector<Handle> handles;  // order is preserved by io and moves
    long long three_handles = 0;
    long long four_handles = 0;
    // Attaching matrix of the 3-handles on second homology: one row per
    // 3-handle, keyed by framed-handle id (missing key = 0).  When absent it
    // defaults to the zero matrix; reports carry a caveat in that case.
    std::optional<std::vector<std::map<std::string, Int>>> d3;
    bool closed = false;  // closed manifold: boundary invariants are skipped

    bool operator==(const HandleStructure&) const = default;

    const Handle* find(const std::string& id) const;
    Handle* find(const std::string& id);
    bool has(const std::string& id) const { return find(id) != nullptr; }
    // Symmetric linking number between two distinct handles.
    Int link(const std::string& a, const std::string& b) const;
    // Sets the linking number symmetrically, erasing zero entries.
    void set_link(const std::string& a, const std::string& b, const Int& v);
    std::vector<std::size_t> dotted_indices() const;
    std::vector<std::size_t> framed_indices() const;
    void erase(const std::string& id);  // drops the handle and all links to it
};

// Structural sanity: unique ids, kind/field consistency, symmetric links,
// dotted-dotted links zero, run counts dominating |linking| with equal
// parity, d3 shape and the chain condition (boundary2 . d3^T = 0).
// Throws ValidationError.
void validate(const HandleStructure& X);

long long euler_characteristic(const HandleStructure& X);

// Boundary map of 2-handles on 1-handles: rows = dotted handles, cols =
// framed handles, entries = algebraic linking numbers (order of appearance).
Mat boundary2(const HandleStructure& X);

// Framed-framed intersection form: diagonal = framings, off-diagonal =
// linking numbers (order of appearance).
Mat linking_form(const HandleStructure& X);

// Full symmetric linking matrix over all 1- and 2-handles with every dotted
// circle replaced by a 0-framed component (surgery presentation of the
// boundary before 3-handles are attached).
Mat full_linking_matrix(const HandleStructure& X);

// d3 as a dense matrix, rows = 3-handles, cols = framed handles; the zero
// matrix of the right shape when d3 is absent.
Mat d3_matrix(const HandleStructure& X);

// H1 and H2 of the 4-manifold from the handle chain complex
//   Z^{3-handles} --d3--> Z^{framed} --boundary2--> Z^{dotted}.
std::pair<AbelianGroup, AbelianGroup> homology(const HandleStructure& X);

// H1 of the boundary 3-manifold: cokernel of the full dot-to-zero linking
// matrix, with the free rank reduced by one for each 3-handle (each
// 3-handle caps off an S^1 x S^2 summand of the surgered boundary).
// Throws ValidationError if the free rank is smaller than the 3-handle
// count, and std::logic_error if called on a closed structure.
AbelianGroup boundary_h1(const HandleStructure& X);

// Signature of the linking form restricted to the sublattice of framed
// classes with zero algebraic linking against every dotted circle.
int signature(const HandleStructure& X);

struct InvariantSummary {
    long long chi = 0;
    int sigma = 0;
    AbelianGroup h1;
    AbelianGroup h2;
    std::optional<AbelianGroup> boundary;  // absent for closed structures

    bool operator==(const InvariantSummary&) const = default;
    std::string to_string() const;
};

InvariantSummary invariants(const HandleStructure& X);

// JSON io.  The loader accepts linking maps naming each pair once (it
// symmetrizes) but rejects contradictory duplicates; the result is
// validated.  The printer emits a canonical form that round-trips:
// parse(print(X)) == X.
HandleStructure kby_from_json_text(const std::string& text);
std::string kby_to_json_text(const HandleStructure& X);

}  // namespace kirby
