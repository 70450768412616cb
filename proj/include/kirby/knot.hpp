#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "kirby/laurent.hpp"
#include "kirby/zmatrix.hpp"

namespace kirby {

// One crossing of a planar diagram in PD convention: arcs[0] is the incoming
// under-strand edge, arcs[1..3] follow counterclockwise. Edges are numbered
// 1..2c consecutively along the knot's orientation, so the under-strand
// leaves at arcs[2] = next(arcs[0]); the over-strand runs arcs[1] -> arcs[3]
// at a positive crossing and arcs[3] -> arcs[1] at a negative one.
struct Crossing {
    std::array<int, 4> arcs;
    int sign; // +1 or -1
    bool operator==(const Crossing&) const = default;
};

struct KnotDiagram {
    std::vector<Crossing> crossings;

    int num_crossings() const { return static_cast<int>(crossings.size()); }
    int num_edges() const { return 2 * num_crossings(); }
    int next_edge(int e) const { return e % num_edges() + 1; }

    bool operator==(const KnotDiagram&) const = default;
};

// sigma_{generator}^{sign}: the strand at position `generator` crosses the
// strand at position generator+1 (over for sign +1, under for sign -1).
struct BraidLetter {
    int generator;
    int sign;
    bool operator==(const BraidLetter&) const = default;
};

struct BraidWord {
    int strands = 1;
    std::vector<BraidLetter> letters;
    bool operator==(const BraidWord&) const = default;
};

// Structural validation: arc ranges, under/over consecutiveness, sign
// consistency, one-in/one-out per edge, and planarity (face count c + 2
// via the rotation system). Throws ValidationError.
void validate(const KnotDiagram& d);

// Diagram of the closure of `w`, edges numbered along the knot starting from
// strand position 1 at the top. Throws ValidationError if the word is
// malformed or its closure has more than one component.
KnotDiagram pd_from_braid(const BraidWord& w);

// Reflect the diagram: at every crossing the rotation reverses
// (arcs[1] <-> arcs[3]) and the sign flips.
KnotDiagram mirror(const KnotDiagram& d);

// Cyclically shift all edge labels by `shift` (relabels the same diagram).
KnotDiagram rotate_edges(const KnotDiagram& d, int shift);

// Arc splice forming a#b by cutting the highest-numbered edge of each
// diagram and cross-joining the halves. Correct for any valid inputs, but
// the result is braid-form only if the cut edges lie on outermost Seifert
// circles.
KnotDiagram splice_sum(const KnotDiagram& a, const KnotDiagram& b);

// Connected sum. Cut edges are chosen on outermost Seifert circles when the
// summands are braid-form, so braid-form is preserved and both Alexander
// routes stay available on the result.
KnotDiagram connected_sum(const KnotDiagram& a, const KnotDiagram& b);

// Seifert circles of the oriented smoothing; each circle is an edge cycle.
std::vector<std::vector<int>> seifert_circles(const KnotDiagram& d);

// Genus of the Seifert surface: (c - s + 1) / 2.
int seifert_genus(const KnotDiagram& d);

// Braid-closure structure recovered from a diagram: for each gap between
// adjacent Seifert circles, its crossings in braid-word order, tagged with
// their global word position. nullopt when the diagram is not braid-form.
struct BraidForm {
    struct GapCrossing {
        int crossing; // index into d.crossings
        int sign;
        int pos; // global position in the recovered word
    };
    std::vector<std::vector<GapCrossing>> gaps;
};
std::optional<BraidForm> recognize_braid_form(const KnotDiagram& d);

// Seifert matrix of the Seifert surface. Supported for braid-form diagrams
// (everything the catalog and the constructors above produce); throws
// UnsupportedError otherwise, never a wrong answer.
Mat seifert_matrix(const KnotDiagram& d);

// Signature of V + V^T.
int knot_signature(const KnotDiagram& d);

// Alexander polynomial, Seifert-matrix route: det(V - t V^T) normalized to
// the symmetric representative with delta(1) = +1.
LaurentPoly alexander(const KnotDiagram& d);

// Alexander polynomial, Wirtinger/Fox-calculus route; same normalization.
// Independent of the Seifert route: works on the raw PD code.
LaurentPoly alexander_fox(const KnotDiagram& d);

// Shared normalization: center exponents, verify delta(t) = delta(t^-1) and
// |delta(1)| = 1, scale so delta(1) = +1.
LaurentPoly normalize_alexander(const LaurentPoly& raw);

// Built-in catalog: unknot, trefoil (= trefoil_left, the left-handed one),
// trefoil_right, figure_eight, granny, square.
std::vector<std::string> catalog_names();
bool catalog_has(const std::string& name);
BraidWord catalog_braid(const std::string& name); // throws ParseError if unknown
KnotDiagram catalog_knot(const std::string& name);

// JSON diagram files: a list of {"arcs":[a,b,c,d],"sign":s} records.
KnotDiagram knot_from_json_text(const std::string& text);
std::string knot_to_json_text(const KnotDiagram& d);

} // namespace kirby
