#include "kirby/surgery.hpp"

#include <set>
#include <sstream>

#include "json.hpp"

#include "kirby/errors.hpp"

namespace kirby {

using ordered_json = nlohmann::ordered_json;

namespace {

[[noreturn]] void fail_marking(const std::string& msg) { throw MarkingError(msg); }

// A vanishing cycle for the dot `x`: -1-framed, links exactly `x` exactly
// once, runs over it exactly once.
bool is_cusp_handle(const Handle& g, const std::string& x, const std::string& t) {
    if (g.is_dotted() || g.id == t) return false;
    if (g.framing != -1) return false;
    if (g.links.size() != 1) return false;
    auto it = g.links.find(x);
    if (it == g.links.end() || (it->second != 1 && it->second != -1)) return false;
    return g.geometric_runs == std::map<std::string, Int>{{x, Int(1)}};
}

void check_cusp_handle(const HandleStructure& X, const std::string& gid,
                       const std::string& x, const std::string& t) {
    const Handle* g = X.find(gid);
    if (g == nullptr) fail_marking("cusp handle '" + gid + "' does not exist");
    if (g->is_dotted()) fail_marking("cusp handle '" + gid + "' is not a 2-handle");
    if (g->id == t) fail_marking("cusp handle '" + gid + "' is the marked 2-handle");
    if (g->framing != -1)
        fail_marking("cusp handle '" + gid + "' has framing " + g->framing.str() +
                     ", need -1");
    auto it = g->links.find(x);
    if (g->links.size() != 1 || it == g->links.end() ||
        (it->second != 1 && it->second != -1))
        fail_marking("cusp handle '" + gid + "' must link exactly the dot '" + x +
                     "', exactly once");
    if (g->geometric_runs != std::map<std::string, Int>{{x, Int(1)}})
        fail_marking("cusp handle '" + gid + "' must run over '" + x +
                     "' exactly once (geometric_runs flag required)");
}

}  // namespace

TorusMarking mark_torus(const HandleStructure& X, const std::string& dotted_a,
                        const std::string& dotted_b, const std::string& framed_t,
                        const std::optional<std::pair<std::string, std::string>>& cusp) {
    validate(X);
    if (dotted_a == dotted_b) fail_marking("the two marked dots must be distinct");
    for (const std::string& id : {dotted_a, dotted_b}) {
        const Handle* d = X.find(id);
        if (d == nullptr) fail_marking("marked dot '" + id + "' does not exist");
        if (d->kind != HandleKind::Dotted)
            fail_marking("marked dot '" + id + "' is not a plain dotted handle");
    }
    const Handle* t = X.find(framed_t);
    if (t == nullptr) fail_marking("marked 2-handle '" + framed_t + "' does not exist");
    if (t->is_dotted())
        fail_marking("marked 2-handle '" + framed_t + "' is not a framed 2-handle");
    if (t->framing != 0)
        fail_marking("marked 2-handle '" + framed_t + "' has framing " +
                     t->framing.str() + ", need 0 (trivial normal bundle)");
    if (X.link(framed_t, dotted_a) != 0 || X.link(framed_t, dotted_b) != 0)
        fail_marking("marked 2-handle '" + framed_t +
                     "' must link the marked dots algebraically zero times");
    std::map<std::string, Int> want{{dotted_a, Int(2)}, {dotted_b, Int(2)}};
    if (t->geometric_runs != want)
        fail_marking("marked 2-handle '" + framed_t + "' must run over '" + dotted_a +
                     "' and '" + dotted_b +
                     "' exactly twice each (geometric_runs flags required)");

    TorusMarking m;
    m.dotted_a = dotted_a;
    m.dotted_b = dotted_b;
    m.framed_t = framed_t;
    if (cusp) {
        check_cusp_handle(X, cusp->first, dotted_a, framed_t);
        check_cusp_handle(X, cusp->second, dotted_b, framed_t);
        if (cusp->first == cusp->second)
            fail_marking("the two cusp handles must be distinct");
        m.cusp_handles = cusp;
    } else {
        std::vector<std::string> for_a, for_b;
        for (const Handle& g : X.handles) {
            if (is_cusp_handle(g, dotted_a, framed_t)) for_a.push_back(g.id);
            if (is_cusp_handle(g, dotted_b, framed_t)) for_b.push_back(g.id);
        }
        if (for_a.size() == 1 && for_b.size() == 1 && for_a[0] != for_b[0])
            m.cusp_handles = std::make_pair(for_a[0], for_b[0]);
    }
    return m;
}

MoveEffect knot_surgery_diagram(const HandleStructure& X, const TorusMarking& marking,
                                const std::string& knot) {
    // re-validate against this structure; stale markings must not slip through
    TorusMarking m = mark_torus(X, marking.dotted_a, marking.dotted_b,
                                marking.framed_t, marking.cusp_handles);
    if (knot != "trefoil")
        throw UnsupportedError("no complement template for knot '" + knot + "'");

    const std::string& a = m.dotted_a;
    const std::string& b = m.dotted_b;
    const std::string& t = m.framed_t;

    if (!X.find(t)->links.empty())
        fail_marking("marked 2-handle '" + t +
                     "' algebraically links other handles; the surgery template "
                     "needs a clean torus neighborhood");
    if (X.d3)
        for (const auto& row : *X.d3) {
            auto it = row.find(t);
            if (it != row.end() && it->second != 0)
                fail_marking("a 3-handle runs over the marked 2-handle '" + t + "'");
        }
    for (const char* id : {"s1", "ks_d1", "ks_h1", "ks_h2"})
        if (X.has(id))
            throw IllegalMoveError(std::string("surgery template id '") + id +
                                   "' already in use");

    MoveEffect eff;
    eff.verified.push_back("marking: '" + a + "', '" + b +
                           "' are plain dots and '" + t +
                           "' is 0-framed, runs twice over each, zero linking");
    if (m.cusp_handles)
        eff.verified.push_back("vanishing cycles '" + m.cusp_handles->first + "', '" +
                               m.cusp_handles->second +
                               "' (-1-framed, one dot each): cusp neighborhood");
    eff.verified.push_back("no 3-handle runs over '" + t + "'");
    eff.asserted.push_back("the marked handles trace an embedded torus with trivial "
                           "normal bundle (geometric run pattern taken on faith)");
    eff.asserted.push_back("regluing follows the stored '" + knot +
                           "' complement template; 's1' carries the slice knot "
                           "'square' (" + knot + " # -" + knot + ")");

    eff.result = X;
    HandleStructure& Y = eff.result;

    // dotted_a becomes the slice 1-handle "s1", keeping every attachment
    for (Handle& h : Y.handles) {
        auto lit = h.links.find(a);
        if (lit != h.links.end()) {
            Int v = lit->second;
            h.links.erase(lit);
            h.links["s1"] = v;
        }
        auto rit = h.geometric_runs.find(a);
        if (rit != h.geometric_runs.end()) {
            Int v = rit->second;
            h.geometric_runs.erase(rit);
            h.geometric_runs["s1"] = v;
        }
    }
    Handle& s1 = *Y.find(a);
    s1.id = "s1";
    s1.kind = HandleKind::SliceDotted;
    s1.knot = "square";

    Handle ksd;
    ksd.id = "ks_d1";
    ksd.kind = HandleKind::Dotted;
    Y.handles.push_back(std::move(ksd));
    for (const char* id : {"ks_h1", "ks_h2"}) {
        Handle h;
        h.id = id;
        h.kind = HandleKind::Framed;
        h.framing = 0;
        h.unknot = true;
        Y.handles.push_back(std::move(h));
    }

    // the marked 2-handle is rerouted through the new slice handle and the
    // complement's 1-handle
    Y.set_link(t, "s1", Int(1));
    Y.set_link(t, b, Int(1));
    Y.set_link(t, "ks_d1", Int(1));
    Handle& T = *Y.find(t);
    T.geometric_runs = {{"s1", Int(1)}, {b, Int(1)}, {"ks_d1", Int(1)}};
    T.unknot.reset();

    if (!Y.d3) {
        Y.d3 = std::vector<std::map<std::string, Int>>(
            static_cast<std::size_t>(Y.three_handles));
        if (Y.three_handles > 0)
            eff.verified.push_back("d3 materialized: pre-existing 3-handles recorded "
                                   "as zero rows (the documented default)");
    }
    Y.d3->push_back({{"ks_h2", Int(1)}});
    Y.three_handles += 1;

    validate(Y);
    if (invariants(X) != invariants(Y))
        throw std::logic_error("knot surgery template failed the invariant "
                               "preservation check");
    eff.verified.push_back("surgery preserved chi, sigma, H1, H2 and H1(boundary)");
    return eff;
}

MoveEffect undo_dual_handle(const HandleStructure& X, const std::string& delta) {
    const Handle* d = X.find(delta);
    if (d == nullptr) throw IllegalMoveError("no handle with id '" + delta + "'");
    if (d->is_dotted())
        throw IllegalMoveError("'" + delta + "' is not a framed 2-handle");
    if (d->framing != -1)
        throw IllegalMoveError("undo_dual_handle: framing of '" + delta + "' is " +
                               d->framing.str() + ", need -1");
    if (d->links.size() != 1)
        throw IllegalMoveError("undo_dual_handle: '" + delta +
                               "' must link exactly one handle");
    const auto& [dot, v] = *d->links.begin();
    const Handle* dh = X.find(dot);
    if (dh == nullptr || !dh->is_dotted() || (v != 1 && v != -1))
        throw IllegalMoveError("undo_dual_handle: '" + delta +
                               "' must link exactly one dotted handle, exactly once");
    if (X.d3)
        for (const auto& row : *X.d3) {
            auto it = row.find(delta);
            if (it != row.end() && it->second != 0)
                throw IllegalMoveError("undo_dual_handle: a 3-handle runs over '" +
                                       delta + "'");
        }

    MoveEffect eff;
    eff.verified.push_back("'" + delta + "' is -1-framed and links exactly the dot '" +
                           dot + "', exactly once");
    if (d->geometric_runs == std::map<std::string, Int>{{dot, Int(1)}})
        eff.verified.push_back("'" + delta + "' runs over '" + dot +
                               "' exactly once (structure flag)");
    else if (d->geometric_runs.empty())
        eff.asserted.push_back("'" + delta + "' runs over '" + dot +
                               "' exactly once (not flagged; assumed)");
    else
        throw IllegalMoveError("undo_dual_handle: geometric runs of '" + delta +
                               "' contradict a vanishing cycle");
    eff.asserted.push_back("'" + delta +
                           "' is attached along a vanishing cycle of the marked torus");

    eff.result = X;
    eff.result.erase(delta);
    validate(eff.result);
    return eff;
}

// ---------------------------------------------------------------------------
// Seiberg-Witten side

long long epsilon_of(long long e, long long sigma) {
    long long s = e + sigma;
    if (s % 4 != 0)
        throw ValidationError("(e + sigma) = " + std::to_string(s) +
                              " is not divisible by 4");
    return s / 4;
}

bool sw_symmetry_holds(const SWInvariant& sw) {
    bool negate = (sw.epsilon % 2) != 0;
    for (const auto& [m, c] : sw.poly.terms()) {
        Int mirror = sw.poly.coeff(monomial_inverse(m));
        if (mirror != (negate ? -c : c)) return false;
    }
    return true;
}

SWInvariant sw_knot_surgery(const SWInvariant& sw_x, const LaurentPoly& alexander,
                            const std::string& alexander_var,
                            const std::map<std::string, Exp>& torus_class) {
    for (const auto& [m, c] : alexander.terms())
        for (const auto& [var, e] : m)
            if (var != alexander_var)
                throw ValidationError("Alexander polynomial uses variable '" + var +
                                      "', expected only '" + alexander_var + "'");
    if (!alexander.is_symmetric())
        throw ValidationError("Alexander polynomial is not symmetric");
    if (alexander.substitute(alexander_var, LaurentPoly::constant(Int(1))) !=
        LaurentPoly::constant(Int(1)))
        throw ValidationError("Alexander polynomial is not normalized: delta(1) != 1");
    std::set<std::string> basis(sw_x.basis.begin(), sw_x.basis.end());
    for (const auto& [var, e] : torus_class)
        if (!basis.count(var))
            throw ValidationError("torus class uses '" + var +
                                  "', which is not a basis coordinate");

    Monomial doubled;
    for (const auto& [var, e] : torus_class)
        if (e != 0) doubled[var] = 2 * e;  // t = exp(2 [T])

    SWInvariant out;
    out.basis = sw_x.basis;
    out.epsilon = sw_x.epsilon;
    out.poly = sw_x.poly * alexander.substitute(alexander_var,
                                                LaurentPoly::monomial(doubled, Int(1)));
    if (!sw_symmetry_holds(out))
        throw std::logic_error("knot surgery broke the SW symmetry");
    return out;
}

std::vector<Monomial> basic_classes(const SWInvariant& sw) {
    std::vector<Monomial> out;
    for (const auto& [m, c] : sw.poly.terms()) out.push_back(m);
    return out;
}

std::string format_class(const Monomial& m) {
    if (m.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [var, e] : m) {
        if (first) {
            if (e == -1)
                os << "-";
            else if (e != 1)
                os << e;
        } else {
            os << (e < 0 ? " - " : " + ");
            long long a = e < 0 ? -e : e;
            if (a != 1) os << a;
        }
        os << var;
        first = false;
    }
    return os.str();
}

std::string format_sw_exponential(const LaurentPoly& poly) {
    if (poly.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : poly.terms()) {
        bool neg = c < 0;
        Int a = neg ? Int(-c) : c;
        if (first)
            os << (neg ? "-" : "");
        else
            os << (neg ? " - " : " + ");
        if (m.empty()) {
            os << a.str();
        } else {
            if (a != 1) os << a.str() << "*";
            os << "exp(" << format_class(m) << ")";
        }
        first = false;
    }
    return os.str();
}

bool is_fake_pair(const SWInvariant& a, const SWInvariant& b) {
    if (a.basis != b.basis)
        throw ValidationError("SW invariants over different bases are not comparable");
    if (a.epsilon != b.epsilon) return false;  // classically distinguished
    return a.poly != b.poly;
}

// ---------------------------------------------------------------------------
// Catalog io

SWCatalogEntry sw_entry_from_json_text(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("SW catalog entry must be an object");
    if (!j.contains("manifold") || !j["manifold"].is_string())
        throw ParseError("SW catalog entry needs a 'manifold' name");
    if (!j.contains("basis") || !j["basis"].is_array())
        throw ParseError("SW catalog entry needs a 'basis' array");
    if (!j.contains("sw") || !j["sw"].is_string())
        throw ParseError("SW catalog entry needs an 'sw' polynomial string");

    SWCatalogEntry entry;
    entry.manifold = j["manifold"].get<std::string>();
    std::set<std::string> seen;
    for (const auto& bj : j["basis"]) {
        if (!bj.is_string()) throw ParseError("basis entries must be strings");
        std::string name = bj.get<std::string>();
        if (name.empty() || !seen.insert(name).second)
            throw ParseError("basis names must be nonempty and distinct");
        entry.sw.basis.push_back(std::move(name));
    }

    auto get_int = [&](const char* key) -> long long {
        if (!j[key].is_number_integer())
            throw ParseError(std::string("'") + key + "' must be an integer");
        return j[key].get<long long>();
    };
    bool have_eps = j.contains("epsilon");
    bool have_es = j.contains("e") && j.contains("sigma");
    if (!have_eps && !have_es)
        throw ParseError("SW catalog entry needs 'epsilon' or both 'e' and 'sigma'");
    if (have_es) {
        long long eps;
        try {
            eps = epsilon_of(get_int("e"), get_int("sigma"));
        } catch (const ValidationError& e) {
            throw ParseError(e.what());
        }
        entry.sw.epsilon = eps;
    }
    if (have_eps) {
        long long eps = get_int("epsilon");
        if (have_es && eps != entry.sw.epsilon)
            throw ParseError("'epsilon' disagrees with (e + sigma)/4");
        entry.sw.epsilon = eps;
    }

    entry.sw.poly = LaurentPoly::parse(j["sw"].get<std::string>());
    std::set<std::string> basis(entry.sw.basis.begin(), entry.sw.basis.end());
    for (const auto& [m, c] : entry.sw.poly.terms())
        for (const auto& [var, e] : m)
            if (!basis.count(var))
                throw ParseError("'sw' uses variable '" + var +
                                 "' outside the declared basis");
    return entry;
}

std::string sw_entry_to_json_text(const SWCatalogEntry& entry) {
    ordered_json j;
    j["manifold"] = entry.manifold;
    j["basis"] = entry.sw.basis;
    j["epsilon"] = entry.sw.epsilon;
    j["sw"] = entry.sw.poly.to_string();
    return j.dump(2) + "\n";
}

}  // namespace kirby
