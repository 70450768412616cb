#pragma once

// Torus markings, diagram-level knot surgery, and the Seiberg-Witten
// bookkeeping that travels with it.  Surgery rewrites a marked torus
// neighborhood in place using the stored complement template for the chosen
// knot; the Seiberg-Witten side multiplies the invariant by the knot's
// Alexander polynomial evaluated at the doubled torus class.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kirby/handlebody.hpp"
#include "kirby/laurent.hpp"
#include "kirby/moves.hpp"

namespace kirby {

// A requested torus marking failed one of its structural conditions.
class MarkingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The marked square: two plain dotted handles carrying a 0-framed 2-handle
// that runs over each of them twice, algebraically zero -- the standard
// picture of a torus of self-intersection 0.  `cusp_handles` records the
// pair of -1-framed vanishing cycles when the torus sits in a cusp
// neighborhood.
struct TorusMarking {
    std::string dotted_a;
    std::string dotted_b;
    std::string framed_t;
    std::optional<std::pair<std::string, std::string>> cusp_handles;

    bool operator==(const TorusMarking&) const = default;
};

// Validates the marking conditions and returns the marking; throws
// MarkingError naming the first failed condition.  When `cusp` is omitted,
// the vanishing-cycle pair is auto-detected if each marked dot carries
// exactly one candidate.
TorusMarking mark_torus(const HandleStructure& X, const std::string& dotted_a,
                        const std::string& dotted_b, const std::string& framed_t,
                        const std::optional<std::pair<std::string, std::string>>&
                            cusp = {});

// Knot surgery on the marked torus: cuts out the torus neighborhood and
// reglues it using the stored handle template for the knot's complement
// (only "trefoil" ships a template).  Fixed template ids: the slice
// 1-handle "s1" replacing `dotted_a`, plus "ks_d1", "ks_h1", "ks_h2" and
// one new 3-handle.  Preserves chi, sigma, H1, H2 and H1(boundary); the
// result is generally not diffeomorphic to the input.
MoveEffect knot_surgery_diagram(const HandleStructure& X, const TorusMarking& marking,
                                const std::string& knot);

// Remove a -1-framed 2-handle attached along a vanishing cycle (it links
// exactly one dotted handle, once).  Turns a cusp neighborhood into a
// fishtail neighborhood.
MoveEffect undo_dual_handle(const HandleStructure& X, const std::string& delta);

// ---------------------------------------------------------------------------
// Seiberg-Witten invariants as symmetric Laurent polynomials over the chosen
// basis of basic class coordinates.

struct SWInvariant {
    std::vector<std::string> basis;  // variable names, e.g. {"T"}
    long long epsilon = 0;           // (e + sigma) / 4
    LaurentPoly poly;

    bool operator==(const SWInvariant&) const = default;
};

// (e + sigma) / 4; throws ValidationError unless divisible.
long long epsilon_of(long long e, long long sigma);

// coeff(m^-1) == (-1)^epsilon * coeff(m) for every monomial.
bool sw_symmetry_holds(const SWInvariant& sw);

// SW of the result of knot surgery: multiply by the Alexander polynomial
// with its variable sent to the square of the torus class (exponential
// coordinates: t = exp(2 [T])).  `torus_class` writes [T] in the basis.
// The Alexander polynomial must be symmetric with delta(1) = 1.
SWInvariant sw_knot_surgery(const SWInvariant& sw_x, const LaurentPoly& alexander,
                            const std::string& alexander_var,
                            const std::map<std::string, Exp>& torus_class);

// Monomials with nonzero coefficient, in the polynomial's descending order.
std::vector<Monomial> basic_classes(const SWInvariant& sw);

// "2T", "0", "-2T", "2T - S", ...
std::string format_class(const Monomial& m);

// Exponential-coordinate rendering: "exp(2T) - 1 + exp(-2T)".
std::string format_sw_exponential(const LaurentPoly& poly);

// Same basis and epsilon but different polynomials: homeomorphism-type data
// agree while the smooth invariants differ.  Mismatched bases are not
// comparable (ValidationError); mismatched epsilons are distinguished
// classically, hence not a fake pair.
bool is_fake_pair(const SWInvariant& a, const SWInvariant& b);

// ---------------------------------------------------------------------------
// Catalog entries (.sw.json)

struct SWCatalogEntry {
    std::string manifold;
    SWInvariant sw;

    bool operator==(const SWCatalogEntry&) const = default;
};

// {"manifold": ..., "basis": [...], "epsilon": n | "e": ..., "sigma": ...,
//  "sw": "<laurent text>"}
SWCatalogEntry sw_entry_from_json_text(const std::string& text);
std::string sw_entry_to_json_text(const SWCatalogEntry& entry);

}  // namespace kirby
