#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "kirby/errors.hpp"
#include "kirby/handlebody.hpp"
#include "kirby/knot.hpp"
#include "kirby/moves.hpp"
#include "kirby/surgery.hpp"

#include "test_util.hpp"

using namespace kirby;

namespace {

HandleStructure load(const std::string& name) {
    return kby_from_json_text(kirby::testutil::corpus_file(name));
}

SWInvariant k3_sw() {
    return sw_entry_from_json_text(kirby::testutil::corpus_file("k3.sw.json")).sw;
}

}  // namespace

TEST_CASE("mark_torus accepts the corpus tori and autodetects cusp pairs") {
    TorusMarking m = mark_torus(load("torus.kby"), "d1", "d2", "t1");
    CHECK(m.dotted_a == "d1");
    CHECK(m.framed_t == "t1");
    CHECK_FALSE(m.cusp_handles.has_value());

    TorusMarking c = mark_torus(load("cusp_nbhd.kby"), "d1", "d2", "t1");
    REQUIRE(c.cusp_handles.has_value());
    CHECK(c.cusp_handles->first == "g1");
    CHECK(c.cusp_handles->second == "g2");

    // explicit pair validates too
    TorusMarking e = mark_torus(load("cusp_nbhd.kby"), "d1", "d2", "t1",
                                std::make_pair(std::string("g1"), std::string("g2")));
    CHECK(e == c);

    // fishtail has only one vanishing cycle: marking valid, pair absent
    TorusMarking f = mark_torus(load("fishtail_nbhd.kby"), "d1", "d2", "t1");
    CHECK_FALSE(f.cusp_handles.has_value());

    // a 3-handle in the picture does not disturb the marking
    TorusMarking n = mark_torus(load("figure9.kby"), "d1", "d2", "t1");
    CHECK(n.framed_t == "t1");
}

TEST_CASE("mark_torus rejects each broken condition") {
    HandleStructure X = load("torus.kby");
    auto bad = [&](const HandleStructure& S, const std::string& a, const std::string& b,
                   const std::string& t) {
        CHECK_THROWS_AS((void)mark_torus(S, a, b, t), MarkingError);
    };
    bad(X, "d1", "d1", "t1");   // dots must differ
    bad(X, "d1", "zz", "t1");   // missing dot
    bad(X, "d1", "t1", "t1");   // not a dotted handle
    bad(X, "d1", "d2", "d1");   // t not framed
    bad(X, "d1", "d2", "zz");   // missing t

    HandleStructure fr = X;
    fr.find("t1")->framing = 1;
    bad(fr, "d1", "d2", "t1");  // framing must be 0

    HandleStructure lk = X;
    lk.set_link("t1", "d1", Int(2));
    validate(lk);
    bad(lk, "d1", "d2", "t1");  // nonzero algebraic linking

    HandleStructure rn = X;
    rn.find("t1")->geometric_runs["d1"] = 4;
    validate(rn);
    bad(rn, "d1", "d2", "t1");  // wrong run count

    HandleStructure dropped = X;
    dropped.find("t1")->geometric_runs.erase("d2");
    validate(dropped);
    bad(dropped, "d1", "d2", "t1");  // run flags are required

    HandleStructure sl = X;
    sl.find("d1")->kind = HandleKind::SliceDotted;
    sl.find("d1")->knot = "square";
    validate(sl);
    bad(sl, "d1", "d2", "t1");  // slice dot is not a plain dot

    // explicit cusp pairs are validated strictly
    HandleStructure C = load("cusp_nbhd.kby");
    auto badc = [&](const std::string& g1, const std::string& g2) {
        CHECK_THROWS_AS((void)mark_torus(C, "d1", "d2", "t1",
                                         std::make_pair(g1, g2)),
                        MarkingError);
    };
    badc("g1", "g1");  // must be distinct
    badc("g2", "g1");  // g2 links d2, not d1
    badc("g1", "zz");  // missing
    badc("g1", "t1");  // the marked handle itself
    HandleStructure C2 = C;
    C2.find("g2")->framing = -2;
    CHECK_THROWS_AS((void)mark_torus(C2, "d1", "d2", "t1",
                                     std::make_pair(std::string("g1"),
                                                    std::string("g2"))),
                    MarkingError);
}

TEST_CASE("knot surgery regenerates the shipped corpus outputs") {
    HandleStructure torus = load("torus.kby");
    MoveEffect fig7 =
        knot_surgery_diagram(torus, mark_torus(torus, "d1", "d2", "t1"), "trefoil");
    CHECK(kby_to_json_text(fig7.result) == kirby::testutil::corpus_file("figure7.kby"));
    CHECK(invariants(fig7.result) == invariants(torus));

    HandleStructure cusp = load("cusp_nbhd.kby");
    MoveEffect cstar =
        knot_surgery_diagram(cusp, mark_torus(cusp, "d1", "d2", "t1"), "trefoil");
    CHECK(kby_to_json_text(cstar.result) ==
          kirby::testutil::corpus_file("cusp_star.kby"));
    CHECK(invariants(cstar.result) == invariants(cusp));

    HandleStructure fish = load("fishtail_nbhd.kby");
    MoveEffect fstar =
        knot_surgery_diagram(fish, mark_torus(fish, "d1", "d2", "t1"), "trefoil");
    CHECK(kby_to_json_text(fstar.result) ==
          kirby::testutil::corpus_file("fishtail_star.kby"));
    CHECK(invariants(fstar.result) == invariants(fish));

    HandleStructure fig12 = expand_slice(cstar.result, "s1").result;
    CHECK(kby_to_json_text(fig12) == kirby::testutil::corpus_file("figure12.kby"));

    // surgery in the presence of a 3-handle: d3 grows by the template row
    HandleStructure nine = load("figure9.kby");
    MoveEffect nstar =
        knot_surgery_diagram(nine, mark_torus(nine, "d1", "d2", "t1"), "trefoil");
    CHECK(invariants(nstar.result) == invariants(nine));
    REQUIRE(nstar.result.d3.has_value());
    REQUIRE(nstar.result.d3->size() == 2);
    CHECK((*nstar.result.d3)[0] == std::map<std::string, Int>{{"c1", Int(1)}});
    CHECK((*nstar.result.d3)[1] == std::map<std::string, Int>{{"ks_h2", Int(1)}});
}

TEST_CASE("knot surgery rejects unsupported knots and unclean neighborhoods") {
    HandleStructure torus = load("torus.kby");
    TorusMarking m = mark_torus(torus, "d1", "d2", "t1");
    CHECK_THROWS_AS((void)knot_surgery_diagram(torus, m, "figure_eight"),
                    UnsupportedError);

    // the marked 2-handle must not link anything
    HandleStructure lk = torus;
    lk.handles.push_back([] {
        Handle h;
        h.id = "extra";
        h.kind = HandleKind::Framed;
        h.framing = 0;
        return h;
    }());
    lk.set_link("t1", "extra", Int(1));
    validate(lk);
    CHECK_THROWS_AS(
        (void)knot_surgery_diagram(lk, mark_torus(lk, "d1", "d2", "t1"), "trefoil"),
        MarkingError);

    // no 3-handle may run over the marked 2-handle
    HandleStructure nine = load("figure9.kby");
    (*nine.d3)[0]["t1"] = Int(2);
    validate(nine);
    CHECK_THROWS_AS(
        (void)knot_surgery_diagram(nine, mark_torus(nine, "d1", "d2", "t1"), "trefoil"),
        MarkingError);

    // template ids must be free
    HandleStructure coll = torus;
    coll.handles.push_back([] {
        Handle h;
        h.id = "ks_h1";
        h.kind = HandleKind::Framed;
        h.framing = 2;
        return h;
    }());
    validate(coll);
    CHECK_THROWS_AS(
        (void)knot_surgery_diagram(coll, mark_torus(coll, "d1", "d2", "t1"), "trefoil"),
        IllegalMoveError);

    // a stale marking is re-validated against the structure it is applied to
    HandleStructure other = load("cusp.kby");
    CHECK_THROWS_AS((void)knot_surgery_diagram(other, m, "trefoil"), MarkingError);
}

TEST_CASE("undo_dual_handle turns cusp pictures into fishtail pictures") {
    MoveEffect eff = undo_dual_handle(load("cusp_nbhd.kby"), "g2");
    CHECK(eff.result == load("fishtail_nbhd.kby"));
    CHECK_FALSE(eff.verified.empty());

    MoveEffect star = undo_dual_handle(load("cusp_star.kby"), "g2");
    CHECK(star.result == load("fishtail_star.kby"));

    // chi drops by one; H1 of the boundary grows a factor
    InvariantSummary before = invariants(load("cusp_nbhd.kby"));
    InvariantSummary after = invariants(eff.result);
    CHECK(after.chi == before.chi - 1);
    CHECK(before.boundary == AbelianGroup::parse("Z"));
    CHECK(after.boundary == AbelianGroup::parse("Z^2"));

    // runs flag absent: allowed, recorded as an assertion
    HandleStructure noflag = load("cusp_nbhd.kby");
    noflag.find("g2")->geometric_runs.clear();
    validate(noflag);
    MoveEffect assertedEff = undo_dual_handle(noflag, "g2");
    CHECK_FALSE(assertedEff.asserted.empty());

    CHECK_THROWS_AS((void)undo_dual_handle(load("cusp_nbhd.kby"), "t1"),
                    IllegalMoveError);  // framing 0
    CHECK_THROWS_AS((void)undo_dual_handle(load("cusp_nbhd.kby"), "d1"),
                    IllegalMoveError);  // dotted
    HandleStructure contradict = load("cusp_nbhd.kby");
    contradict.find("g2")->geometric_runs["d2"] = 3;
    validate(contradict);
    CHECK_THROWS_AS((void)undo_dual_handle(contradict, "g2"), IllegalMoveError);
}

TEST_CASE("epsilon and the SW symmetry") {
    CHECK(epsilon_of(24, -16) == 2);   // K3
    CHECK(epsilon_of(4, 0) == 1);      // S^2 x S^2-like data
    CHECK(epsilon_of(-4, 0) == -1);
    CHECK_THROWS_AS((void)epsilon_of(5, 1), ValidationError);

    SWInvariant sw;
    sw.basis = {"T"};
    sw.epsilon = 2;
    sw.poly = LaurentPoly::parse("T^2 - 1 + T^-2");
    CHECK(sw_symmetry_holds(sw));

    sw.poly = LaurentPoly::parse("T^2 - 1");
    CHECK_FALSE(sw_symmetry_holds(sw));

    // odd epsilon flips the required sign
    SWInvariant odd;
    odd.basis = {"T"};
    odd.epsilon = 1;
    odd.poly = LaurentPoly::parse("T - T^-1");
    CHECK(sw_symmetry_holds(odd));
    odd.poly = LaurentPoly::parse("T + T^-1");
    CHECK_FALSE(sw_symmetry_holds(odd));
}

TEST_CASE("knot surgery transforms SW by the Alexander polynomial") {
    SWInvariant k3 = k3_sw();
    CHECK(k3.epsilon == 2);
    CHECK(k3.poly == LaurentPoly::constant(Int(1)));
    CHECK(sw_symmetry_holds(k3));

    LaurentPoly trefoil = alexander(catalog_knot("trefoil"));
    SWInvariant out = sw_knot_surgery(k3, trefoil, "t", {{"T", 1}});
    CHECK(out.poly == LaurentPoly::parse("T^2 - 1 + T^-2"));
    CHECK(out.epsilon == 2);
    CHECK(sw_symmetry_holds(out));
    CHECK(format_sw_exponential(out.poly) == "exp(2T) - 1 + exp(-2T)");

    std::vector<Monomial> classes = basic_classes(out);
    REQUIRE(classes.size() == 3);
    CHECK(format_class(classes[0]) == "2T");
    CHECK(format_class(classes[1]) == "0");
    CHECK(format_class(classes[2]) == "-2T");

    // the unknot does nothing
    SWInvariant trivial =
        sw_knot_surgery(k3, alexander(catalog_knot("unknot")), "t", {{"T", 1}});
    CHECK(trivial.poly == k3.poly);

    CHECK(is_fake_pair(k3, out));
    CHECK_FALSE(is_fake_pair(k3, trivial));

    SWInvariant other_basis;
    other_basis.basis = {"S"};
    other_basis.epsilon = 2;
    other_basis.poly = LaurentPoly::constant(Int(1));
    CHECK_THROWS_AS((void)is_fake_pair(k3, other_basis), ValidationError);
    SWInvariant other_eps = k3;
    other_eps.epsilon = 3;
    CHECK_FALSE(is_fake_pair(k3, other_eps));
}

TEST_CASE("sw_knot_surgery validates its inputs") {
    SWInvariant k3 = k3_sw();
    CHECK_THROWS_AS(
        (void)sw_knot_surgery(k3, LaurentPoly::parse("t - 1"), "t", {{"T", 1}}),
        ValidationError);  // not symmetric
    CHECK_THROWS_AS(
        (void)sw_knot_surgery(k3, LaurentPoly::parse("-1"), "t", {{"T", 1}}),
        ValidationError);  // delta(1) = -1
    CHECK_THROWS_AS(
        (void)sw_knot_surgery(k3, LaurentPoly::parse("s - 1 + s^-1"), "t", {{"T", 1}}),
        ValidationError);  // wrong variable
    CHECK_THROWS_AS(
        (void)sw_knot_surgery(k3, LaurentPoly::parse("t - 1 + t^-1"), "t", {{"U", 1}}),
        ValidationError);  // class outside the basis
}

TEST_CASE("exponential display is pinned") {
    CHECK(format_sw_exponential(LaurentPoly::parse("T^2 - 1 + T^-2")) ==
          "exp(2T) - 1 + exp(-2T)");
    CHECK(format_sw_exponential(LaurentPoly::parse("-T^2 + 3 - T^-2")) ==
          "-exp(2T) + 3 - exp(-2T)");
    CHECK(format_sw_exponential(LaurentPoly::constant(Int(1))) == "1");
    CHECK(format_sw_exponential(LaurentPoly()) == "0");
    CHECK(format_sw_exponential(LaurentPoly::parse("2T^3 - 2T^-3")) ==
          "2*exp(3T) - 2*exp(-3T)");
    CHECK(format_class(Monomial{{"S", -1}, {"T", 2}}) == "-S + 2T");
}

TEST_CASE("SW catalog entries parse, validate and round-trip") {
    std::string text = kirby::testutil::corpus_file("k3.sw.json");
    SWCatalogEntry entry = sw_entry_from_json_text(text);
    CHECK(entry.manifold == "K3");
    CHECK(entry.sw.basis == std::vector<std::string>{"T"});
    CHECK(entry.sw.epsilon == 2);
    CHECK(sw_entry_to_json_text(entry) == text);

    // (e, sigma) form
    SWCatalogEntry es = sw_entry_from_json_text(
        R"({"manifold": "K3", "basis": ["T"], "e": 24, "sigma": -16, "sw": "1"})");
    CHECK(es.sw.epsilon == 2);

    auto bad = [](const std::string& t) {
        CHECK_THROWS_AS((void)sw_entry_from_json_text(t), ParseError);
    };
    bad("nope");
    bad(R"({"basis": ["T"], "epsilon": 2, "sw": "1"})");          // no manifold
    bad(R"({"manifold": "X", "epsilon": 2, "sw": "1"})");          // no basis
    bad(R"({"manifold": "X", "basis": ["T"], "sw": "1"})");        // no epsilon
    bad(R"({"manifold": "X", "basis": ["T"], "epsilon": 2})");     // no sw
    bad(R"({"manifold": "X", "basis": ["T", "T"], "epsilon": 2, "sw": "1"})");
    bad(R"({"manifold": "X", "basis": ["T"], "epsilon": 2, "sw": "U - 1"})");
    bad(R"({"manifold": "X", "basis": ["T"], "e": 25, "sigma": -16, "sw": "1"})");
    bad(R"({"manifold": "X", "basis": ["T"], "epsilon": 3, "e": 24, "sigma": -16, "sw": "1"})");
}
