#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <string>
#include <vector>

#include "kirby/errors.hpp"
#include "kirby/knot.hpp"
#include "test_util.hpp"

using namespace kirby;
using testutil::mat;

namespace {

LaurentPoly P(const std::string& s) { return LaurentPoly::parse(s); }

KnotDiagram braid(int strands, std::vector<BraidLetter> letters) {
    return pd_from_braid(BraidWord{strands, std::move(letters)});
}

// Is PᵀMP == T for some unimodular P with entries in [-2,2]? (2x2 only.)
bool congruent_2x2(const Mat& M, const Mat& T) {
    for (int a = -2; a <= 2; ++a)
        for (int b = -2; b <= 2; ++b)
            for (int c = -2; c <= 2; ++c)
                for (int d = -2; d <= 2; ++d) {
                    int det = a * d - b * c;
                    if (det != 1 && det != -1) continue;
                    Mat p = mat({{a, b}, {c, d}});
                    if (p.transpose() * M * p == T) return true;
                }
    return false;
}

BraidWord random_knot_braid(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> strands(2, 4), len(1, 8), sgn(0, 1);
    for (;;) {
        BraidWord w;
        w.strands = strands(rng);
        int n = len(rng);
        std::uniform_int_distribution<int> gen(1, w.strands - 1);
        for (int i = 0; i < n; ++i) w.letters.push_back({gen(rng), sgn(rng) ? 1 : -1});
        try {
            pd_from_braid(w);
            return w;
        } catch (const ValidationError&) {
            // closure was a link; draw again
        }
    }
}

} // namespace

TEST_CASE("pd_from_braid: pinned right-trefoil code") {
    KnotDiagram d = braid(2, {{1, 1}, {1, 1}, {1, 1}});
    REQUIRE(d.num_crossings() == 3);
    CHECK(d.crossings[0] == Crossing{{4, 1, 5, 2}, 1});
    CHECK(d.crossings[1] == Crossing{{2, 5, 3, 6}, 1});
    CHECK(d.crossings[2] == Crossing{{6, 3, 1, 4}, 1});
}

TEST_CASE("pd_from_braid rejects malformed words and links") {
    CHECK_THROWS_AS(pd_from_braid(BraidWord{0, {}}), ValidationError);
    CHECK_THROWS_AS(braid(2, {{2, 1}}), ValidationError);  // generator out of range
    CHECK_THROWS_AS(braid(2, {{1, 2}}), ValidationError);  // bad sign
    CHECK_THROWS_AS(braid(3, {{1, 1}}), ValidationError);  // Hopf link + split unknot
    CHECK_THROWS_AS(braid(2, {{1, 1}, {1, 1}}), ValidationError); // 2-component torus link
    CHECK_THROWS_AS(pd_from_braid(BraidWord{2, {}}), ValidationError); // split 2-unlink
    CHECK(pd_from_braid(BraidWord{1, {}}).num_crossings() == 0); // unknot
}

TEST_CASE("validate accepts catalog diagrams and rejects corrupt ones") {
    for (const auto& name : catalog_names()) CHECK_NOTHROW(validate(catalog_knot(name)));

    KnotDiagram tre = catalog_knot("trefoil_right");
    SUBCASE("arc out of range") {
        tre.crossings[0].arcs[1] = 7;
        CHECK_THROWS_AS(validate(tre), ValidationError);
    }
    SUBCASE("under-strand must exit at successor") {
        tre.crossings[0].arcs[2] = 6;
        CHECK_THROWS_AS(validate(tre), ValidationError);
    }
    SUBCASE("bad sign value") {
        tre.crossings[0].sign = 2;
        CHECK_THROWS_AS(validate(tre), ValidationError);
    }
    SUBCASE("sign inconsistent with over-strand direction") {
        tre.crossings[0].sign = -1;
        CHECK_THROWS_AS(validate(tre), ValidationError);
    }
    SUBCASE("duplicated edge use") {
        tre.crossings[0].arcs[1] = 3;
        tre.crossings[0].arcs[3] = 4;
        CHECK_THROWS_AS(validate(tre), ValidationError);
    }
}

TEST_CASE("validate rejects a non-planar code (virtual trefoil)") {
    // Locally consistent but embeds only on the torus: 2 faces, not 4.
    KnotDiagram v;
    v.crossings = {Crossing{{1, 3, 2, 4}, 1}, Crossing{{2, 4, 3, 1}, 1}};
    CHECK_THROWS_AS(validate(v), ValidationError);
}

TEST_CASE("seifert circles and genus") {
    CHECK(seifert_circles(catalog_knot("unknot")).empty());
    CHECK(seifert_genus(catalog_knot("unknot")) == 0);
    CHECK(seifert_circles(catalog_knot("trefoil_right")).size() == 2);
    CHECK(seifert_genus(catalog_knot("trefoil_right")) == 1);
    CHECK(seifert_circles(catalog_knot("figure_eight")).size() == 3);
    CHECK(seifert_genus(catalog_knot("figure_eight")) == 1);
    CHECK(seifert_genus(catalog_knot("granny")) == 2);
    CHECK(seifert_genus(catalog_knot("square")) == 2);
}

TEST_CASE("seifert matrices match the pinned catalog values") {
    Mat v_tre = seifert_matrix(catalog_knot("trefoil_right"));
    CHECK(v_tre == mat({{-1, 1}, {0, -1}}));

    Mat v_f8 = seifert_matrix(catalog_knot("figure_eight"));
    REQUIRE(v_f8.rows() == 2);
    CHECK(congruent_2x2(v_f8, mat({{1, 1}, {0, -1}})));

    // det(V - V^T) = +-1 for every catalog knot (checked internally too).
    for (const auto& name : catalog_names()) {
        Mat v = seifert_matrix(catalog_knot(name));
        Int u = determinant(v - v.transpose());
        CHECK((u == 1 || u == -1));
    }
}

TEST_CASE("alexander polynomials by both routes on the catalog") {
    auto both = [](const std::string& name) {
        KnotDiagram d = catalog_knot(name);
        LaurentPoly a = alexander(d), b = alexander_fox(d);
        CHECK(a == b);
        CHECK(a.is_symmetric());
        CHECK(a.substitute("t", LaurentPoly::constant(1)) == LaurentPoly::constant(1));
        return a;
    };
    CHECK(both("unknot") == P("1"));
    CHECK(both("trefoil") == P("t - 1 + t^-1"));
    CHECK(both("trefoil_left") == P("t - 1 + t^-1"));
    CHECK(both("trefoil_right") == P("t - 1 + t^-1"));
    CHECK(both("figure_eight") == P("-t + 3 - t^-1"));
    CHECK(both("granny") == P("t^2 - 2*t + 3 - 2*t^-1 + t^-2"));
    CHECK(both("square") == P("t^2 - 2*t + 3 - 2*t^-1 + t^-2"));
    CHECK(both("granny") == P("t - 1 + t^-1") * P("t - 1 + t^-1"));
    CHECK(both("figure_eight").to_string() == "-t + 3 - t^-1");
}

TEST_CASE("knot signatures") {
    CHECK(knot_signature(catalog_knot("unknot")) == 0);
    CHECK(knot_signature(catalog_knot("trefoil_right")) == -2);
    CHECK(knot_signature(catalog_knot("trefoil")) == 2);
    CHECK(knot_signature(catalog_knot("figure_eight")) == 0);
    CHECK(knot_signature(catalog_knot("granny")) == 4);
    CHECK(knot_signature(catalog_knot("square")) == 0);
}

TEST_CASE("torus-knot extras: T(2,5) and the braided trefoil (sigma1 sigma2)^2") {
    KnotDiagram t25 = braid(2, {{1, 1}, {1, 1}, {1, 1}, {1, 1}, {1, 1}});
    CHECK(alexander(t25) == P("t^2 - t + 1 - t^-1 + t^-2"));
    CHECK(alexander_fox(t25) == P("t^2 - t + 1 - t^-1 + t^-2"));
    CHECK(knot_signature(t25) == -4);
    CHECK(seifert_genus(t25) == 2);

    // Interleaved-gap braid form of the right trefoil: exercises the
    // circle-order merge in the recognizer.
    KnotDiagram t = braid(3, {{1, 1}, {2, 1}, {1, 1}, {2, 1}});
    auto bf = recognize_braid_form(t);
    REQUIRE(bf.has_value());
    REQUIRE(bf->gaps.size() == 2);
    CHECK(bf->gaps[0].size() == 2);
    CHECK(bf->gaps[1].size() == 2);
    CHECK(alexander(t) == P("t - 1 + t^-1"));
    CHECK(alexander_fox(t) == P("t - 1 + t^-1"));
    CHECK(knot_signature(t) == -2);
}

TEST_CASE("one-crossing kink is the unknot") {
    KnotDiagram kink;
    kink.crossings = {Crossing{{1, 2, 2, 1}, 1}};
    CHECK_NOTHROW(validate(kink));
    CHECK(alexander(kink) == P("1"));
    CHECK(alexander_fox(kink) == P("1"));
    CHECK(knot_signature(kink) == 0);
}

TEST_CASE("mirror") {
    KnotDiagram r = catalog_knot("trefoil_right");
    KnotDiagram m = mirror(r);
    CHECK_NOTHROW(validate(m));
    CHECK(mirror(m) == r);
    CHECK(alexander(m) == alexander(r));
    CHECK(alexander_fox(m) == alexander_fox(r));
    CHECK(knot_signature(m) == 2);
    CHECK(mirror(catalog_knot("unknot")) == catalog_knot("unknot"));
    // mirror of the left trefoil has the right trefoil's signature
    CHECK(knot_signature(mirror(catalog_knot("trefoil"))) == -2);
}

TEST_CASE("edge-label rotation changes nothing") {
    for (const auto& name : {"trefoil_right", "figure_eight", "granny"}) {
        KnotDiagram d = catalog_knot(name);
        LaurentPoly expect = alexander(d);
        int sig = knot_signature(d);
        for (int r = 0; r < d.num_edges(); ++r) {
            KnotDiagram rd = rotate_edges(d, r);
            CHECK_NOTHROW(validate(rd));
            CHECK(alexander(rd) == expect);
            CHECK(alexander_fox(rd) == expect);
            CHECK(knot_signature(rd) == sig);
        }
    }
}

TEST_CASE("connected sums") {
    KnotDiagram tre = catalog_knot("trefoil");
    KnotDiagram unk = catalog_knot("unknot");

    CHECK(connected_sum(tre, unk) == tre);
    CHECK(connected_sum(unk, tre) == tre);

    KnotDiagram sq = connected_sum(catalog_knot("trefoil"), catalog_knot("trefoil_right"));
    CHECK_NOTHROW(validate(sq));
    // Braid-form is preserved, so BOTH routes work on the splice.
    CHECK(alexander(sq) == P("t^2 - 2*t + 3 - 2*t^-1 + t^-2"));
    CHECK(alexander_fox(sq) == P("t^2 - 2*t + 3 - 2*t^-1 + t^-2"));
    CHECK(knot_signature(sq) == 0);
    CHECK(seifert_genus(sq) == 2);

    KnotDiagram f8t = connected_sum(catalog_knot("figure_eight"), catalog_knot("trefoil"));
    CHECK(alexander(f8t) == P("-t^2 + 4*t - 5 + 4*t^-1 - t^-2"));
    CHECK(alexander_fox(f8t) == P("-t^2 + 4*t - 5 + 4*t^-1 - t^-2"));
    CHECK(knot_signature(f8t) == 2);

    // Multiplicativity on random catalog pairs.
    std::mt19937_64 rng(9090);
    auto names = catalog_names();
    std::uniform_int_distribution<std::size_t> pick(0, names.size() - 1);
    for (int trial = 0; trial < 12; ++trial) {
        KnotDiagram a = catalog_knot(names[pick(rng)]);
        KnotDiagram b = catalog_knot(names[pick(rng)]);
        KnotDiagram ab = connected_sum(a, b);
        CHECK(alexander_fox(ab) == alexander_fox(a) * alexander_fox(b));
        CHECK(alexander(ab) == alexander_fox(ab));
        CHECK(knot_signature(ab) == knot_signature(a) + knot_signature(b));
    }
}

TEST_CASE("non-braid-form splice: Seifert route refuses, Fox route works") {
    // Cut the granny at an edge on its MIDDLE Seifert circle: the spliced
    // Seifert graph becomes a star, which is not a braid form.
    KnotDiagram granny = catalog_knot("granny");
    auto circles = seifert_circles(granny);
    REQUIRE(circles.size() == 3);
    // Circle walk order puts the strand-2 (middle) circle second; rotate its
    // smallest edge to the top label.
    int middle_edge = circles[1][0];
    KnotDiagram rot = rotate_edges(granny, granny.num_edges() - middle_edge);
    KnotDiagram weird = splice_sum(rot, catalog_knot("trefoil"));
    CHECK_NOTHROW(validate(weird));
    CHECK(!recognize_braid_form(weird).has_value());
    CHECK_THROWS_AS(seifert_matrix(weird), UnsupportedError);
    CHECK(alexander_fox(weird) ==
          P("t - 1 + t^-1") * P("t - 1 + t^-1") * P("t - 1 + t^-1"));
}

TEST_CASE("both Alexander routes agree on random braid closures") {
    std::mt19937_64 rng(31415926);
    for (int trial = 0; trial < 60; ++trial) {
        BraidWord w = random_knot_braid(rng);
        KnotDiagram d = pd_from_braid(w);
        CAPTURE(trial);
        CAPTURE(d.num_crossings());
        auto bf = recognize_braid_form(d);
        REQUIRE(bf.has_value());
        CHECK(alexander(d) == alexander_fox(d));
    }
}

TEST_CASE("alexander normalization contract") {
    CHECK(normalize_alexander(P("t^2 - t + 1")) == P("t - 1 + t^-1"));
    CHECK(normalize_alexander(P("-t + 1 - t^-1")) == P("t - 1 + t^-1"));
    CHECK(normalize_alexander(P("-1")) == P("1"));
    CHECK_THROWS_AS(normalize_alexander(P("0")), ValidationError);
    CHECK_THROWS_AS(normalize_alexander(P("t - 1")), ValidationError);    // delta(1) = 0
    CHECK_THROWS_AS(normalize_alexander(P("t^2 + 1")), ValidationError);  // asymmetric
    CHECK_THROWS_AS(normalize_alexander(P("u - 1 + u^-1")), ValidationError);
}

TEST_CASE("catalog surface") {
    CHECK(catalog_has("trefoil"));
    CHECK(catalog_has("figure-eight"));
    CHECK(catalog_has("figure8"));
    CHECK(!catalog_has("cinquefoil"));
    CHECK(catalog_braid("trefoil") == catalog_braid("trefoil_left"));
    CHECK_THROWS_AS(catalog_braid("nope"), ParseError);
    CHECK(catalog_knot("unknot").num_crossings() == 0);
}

TEST_CASE("diagram JSON round-trip") {
    for (const auto& name : catalog_names()) {
        KnotDiagram d = catalog_knot(name);
        CHECK(knot_from_json_text(knot_to_json_text(d)) == d);
    }
    CHECK_THROWS_AS(knot_from_json_text("not json"), ParseError);
    CHECK_THROWS_AS(knot_from_json_text("{\"a\":1}"), ParseError);
    CHECK_THROWS_AS(knot_from_json_text("[{\"arcs\":[1,2,3],\"sign\":1}]"), ParseError);
    CHECK_THROWS_AS(knot_from_json_text("[{\"arcs\":[9,1,2,3],\"sign\":1}]"), ValidationError);
}
