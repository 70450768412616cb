#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <functional>
#include <numeric>
#include <random>
#include <vector>

#include "kirby/errors.hpp"
#include "kirby/zmatrix.hpp"
#include "test_util.hpp"

using namespace kirby;
using testutil::mat;

namespace {

// Independent oracle for Smith invariant factors: the k-th determinantal
// divisor D_k is the gcd of all k x k minors, and d_k = D_k / D_{k-1}.
// Exponential in matrix size, so only used on small matrices.
Int minors_gcd(const Mat& m, std::size_t k) {
    std::vector<std::size_t> ridx(k), cidx(k);
    Int g = 0;

    // Enumerate k-subsets of rows and columns.
    std::vector<std::size_t> rsel(k), csel(k);
    std::function<void(std::size_t, std::size_t)> pick_cols = [&](std::size_t pos, std::size_t start) {
        if (pos == k) {
            Mat sub(k, k);
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t j = 0; j < k; ++j) sub.at(i, j) = m.at(rsel[i], csel[j]);
            g = gcd(g, determinant(sub));
            return;
        }
        for (std::size_t c = start; c < m.cols(); ++c) {
            csel[pos] = c;
            pick_cols(pos + 1, c + 1);
        }
    };
    std::function<void(std::size_t, std::size_t)> pick_rows = [&](std::size_t pos, std::size_t start) {
        if (pos == k) {
            pick_cols(0, 0);
            return;
        }
        for (std::size_t r = start; r < m.rows(); ++r) {
            rsel[pos] = r;
            pick_rows(pos + 1, r + 1);
        }
    };
    pick_rows(0, 0);
    return abs(g);
}

// Naive cofactor-expansion determinant as an oracle for Bareiss.
Int cofactor_det(const Mat& m) {
    std::size_t n = m.rows();
    if (n == 0) return 1;
    if (n == 1) return m.at(0, 0);
    Int acc = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (m.at(0, j) == 0) continue;
        Mat sub(n - 1, n - 1);
        for (std::size_t i = 1; i < n; ++i) {
            std::size_t cc = 0;
            for (std::size_t c = 0; c < n; ++c) {
                if (c == j) continue;
                sub.at(i - 1, cc++) = m.at(i, c);
            }
        }
        Int term = m.at(0, j) * cofactor_det(sub);
        acc += (j % 2 == 0) ? term : -term;
    }
    return acc;
}

void check_snf_contract(const Mat& m) {
    SmithForm s = smith_normal_form(m);
    CAPTURE(m.to_string());

    // U * M * V == D
    CHECK(s.U * m * s.V == s.D);
    // U, V unimodular; Vinv is a genuine two-sided inverse of V.
    Int du = determinant(s.U);
    Int dv = determinant(s.V);
    CHECK((du == 1 || du == -1));
    CHECK((dv == 1 || dv == -1));
    CHECK(s.V * s.Vinv == Mat::identity(m.cols()));
    CHECK(s.Vinv * s.V == Mat::identity(m.cols()));

    // D diagonal, non-negative, divisibility chain.
    for (std::size_t i = 0; i < s.D.rows(); ++i)
        for (std::size_t j = 0; j < s.D.cols(); ++j)
            if (i != j) CHECK(s.D.at(i, j) == 0);
    std::vector<Int> d = s.diagonal();
    for (std::size_t i = 0; i < d.size(); ++i) {
        CHECK(d[i] >= 0);
        if (i + 1 < d.size()) {
            if (d[i] == 0)
                CHECK(d[i + 1] == 0);
            else
                CHECK(d[i + 1] % d[i] == 0);
        }
    }
}

} // namespace

TEST_CASE("smith normal form on pinned examples") {
    SUBCASE("identity") {
        auto s = smith_normal_form(Mat::identity(3));
        CHECK(s.diagonal() == std::vector<Int>{1, 1, 1});
    }
    SUBCASE("zero matrix") {
        auto s = smith_normal_form(Mat(2, 4));
        CHECK(s.diagonal() == std::vector<Int>{0, 0});
        CHECK(s.rank() == 0);
    }
    SUBCASE("classic 2x2") {
        auto s = smith_normal_form(mat({{2, 4}, {4, 2}}));
        CHECK(s.diagonal() == std::vector<Int>{2, 6});
    }
    SUBCASE("coprime diagonal merges") {
        auto s = smith_normal_form(mat({{2, 0}, {0, 3}}));
        CHECK(s.diagonal() == std::vector<Int>{1, 6});
    }
    SUBCASE("rectangular") {
        auto s = smith_normal_form(mat({{1, 2, 3}, {4, 5, 6}}));
        // minors: gcd entries 1; 2x2 minors: -3, -6, -3 -> D_2 = 3.
        CHECK(s.diagonal() == std::vector<Int>{1, 3});
    }
    SUBCASE("negative determinant normalizes to positive diagonal") {
        auto s = smith_normal_form(mat({{0, 1}, {1, 0}}));
        CHECK(s.diagonal() == std::vector<Int>{1, 1});
    }
}

TEST_CASE("smith normal form satisfies its contract on random matrices") {
    std::mt19937_64 rng(20260814);
    for (int trial = 0; trial < 200; ++trial) {
        std::uniform_int_distribution<std::size_t> dim(1, 6);
        Mat m = testutil::random_mat(rng, dim(rng), dim(rng));
        check_snf_contract(m);
    }
}

TEST_CASE("smith invariant factors match the determinantal-divisor oracle") {
    std::mt19937_64 rng(987654321);
    for (int trial = 0; trial < 60; ++trial) {
        std::uniform_int_distribution<std::size_t> dim(1, 4);
        std::size_t r = dim(rng), c = dim(rng);
        Mat m = testutil::random_mat(rng, r, c, -7, 7);
        auto d = smith_normal_form(m).diagonal();
        Int prod = 1;
        for (std::size_t k = 1; k <= std::min(r, c); ++k) {
            prod *= d[k - 1];
            CHECK(minors_gcd(m, k) == abs(prod));
        }
    }
}

TEST_CASE("determinant matches cofactor expansion") {
    std::mt19937_64 rng(13579);
    CHECK(determinant(Mat::identity(4)) == 1);
    CHECK(determinant(Mat(3, 3)) == 0);
    for (int trial = 0; trial < 100; ++trial) {
        std::uniform_int_distribution<std::size_t> dim(1, 5);
        Mat m = testutil::random_mat(rng, 0, 0); // placeholder to keep rng use uniform
        std::size_t n = dim(rng);
        m = testutil::random_mat(rng, n, n);
        CHECK(determinant(m) == cofactor_det(m));
    }
}

TEST_CASE("kernel basis spans the kernel") {
    SUBCASE("pinned example") {
        // x + y + z = 0 has kernel rank 2.
        Mat m = mat({{1, 1, 1}});
        auto basis = kernel_basis(m);
        REQUIRE(basis.size() == 2);
    }
    SUBCASE("random: Mv = 0 and count = cols - rank") {
        std::mt19937_64 rng(24680);
        for (int trial = 0; trial < 100; ++trial) {
            std::uniform_int_distribution<std::size_t> dim(1, 5);
            std::size_t r = dim(rng), c = dim(rng);
            Mat m = testutil::random_mat(rng, r, c, -4, 4);
            auto basis = kernel_basis(m);
            CHECK(basis.size() == c - smith_normal_form(m).rank());
            for (const auto& v : basis) {
                for (std::size_t i = 0; i < r; ++i) {
                    Int acc = 0;
                    for (std::size_t j = 0; j < c; ++j) acc += m.at(i, j) * v[j];
                    CHECK(acc == 0);
                }
            }
        }
    }
}

TEST_CASE("cokernel computes H = Z^rows / im") {
    CHECK(cokernel(mat({{2}})) == AbelianGroup{0, {2}});
    CHECK(cokernel(mat({{1}})) == AbelianGroup{0, {}});
    CHECK(cokernel(Mat(3, 0)) == AbelianGroup{3, {}});
    CHECK(cokernel(Mat(2, 5)) == AbelianGroup{2, {}});
    CHECK(cokernel(mat({{2, 0}, {0, 3}})) == AbelianGroup{0, {6}});
    CHECK(cokernel(mat({{2, 0}, {0, 4}})) == AbelianGroup{0, {2, 4}});
    // Z^3 / <(1,1,1)> = Z^2 (the vector is primitive).
    CHECK(cokernel(mat({{1}, {1}, {1}})) == AbelianGroup{2, {}});
    // Z^2 / <(2,4)> has torsion gcd 2.
    CHECK(cokernel(mat({{2}, {4}})) == AbelianGroup{1, {2}});
}

TEST_CASE("abelian group formatting and parsing") {
    CHECK(AbelianGroup{0, {}}.to_string() == "0");
    CHECK(AbelianGroup{1, {}}.to_string() == "Z");
    CHECK(AbelianGroup{2, {}}.to_string() == "Z^2");
    CHECK(AbelianGroup{0, {2}}.to_string() == "Z/2");
    CHECK(AbelianGroup{2, {2, 4}}.to_string() == "Z^2 + Z/2 + Z/4");

    CHECK(AbelianGroup::parse("0") == AbelianGroup{0, {}});
    CHECK(AbelianGroup::parse("Z") == AbelianGroup{1, {}});
    CHECK(AbelianGroup::parse("Z^3") == AbelianGroup{3, {}});
    CHECK(AbelianGroup::parse("Z + Z") == AbelianGroup{2, {}});
    CHECK(AbelianGroup::parse("Z/2 + Z/3") == AbelianGroup{0, {6}});
    CHECK(AbelianGroup::parse("Z/4 + Z/2") == AbelianGroup{0, {2, 4}});
    CHECK(AbelianGroup::parse(" Z^2 + Z/12 ") == AbelianGroup{2, {12}});
    CHECK(AbelianGroup::parse("Z/1") == AbelianGroup{0, {}});
    CHECK_THROWS_AS(AbelianGroup::parse("Z/0"), ParseError);
    CHECK_THROWS_AS(AbelianGroup::parse("Q"), ParseError);
    CHECK_THROWS_AS(AbelianGroup::parse("Z +"), ParseError);

    // Round trip: parse(to_string(g)) == g.
    std::mt19937_64 rng(4242);
    std::uniform_int_distribution<int> rank(0, 3), nt(0, 3), fac(2, 5);
    for (int trial = 0; trial < 50; ++trial) {
        AbelianGroup g;
        g.free_rank = rank(rng);
        Int cur = 1;
        int k = nt(rng);
        for (int i = 0; i < k; ++i) {
            cur *= fac(rng);
            g.torsion.push_back(cur);
        }
        CHECK(AbelianGroup::parse(g.to_string()) == g);
    }
}

TEST_CASE("signature on pinned forms") {
    CHECK(signature(Mat(0, 0)) == 0);
    CHECK(signature(mat({{1}})) == 1);
    CHECK(signature(mat({{-3}})) == -1);
    CHECK(signature(mat({{1, 0}, {0, -1}})) == 0);
    CHECK(signature(mat({{0, 1}, {1, 0}})) == 0);   // hyperbolic plane
    CHECK(signature(mat({{0, 1}, {1, 0}})) == 0);
    CHECK(signature(mat({{2, 1}, {1, 2}})) == 2);
    CHECK(signature(mat({{0, 2}, {2, -1}})) == 0);
    CHECK(signature(mat({{0, 0}, {0, 0}})) == 0);

    // E8 Cartan matrix: positive definite, determinant 1.
    Mat e8 = mat({
        {2, -1, 0, 0, 0, 0, 0, 0},
        {-1, 2, -1, 0, 0, 0, 0, 0},
        {0, -1, 2, -1, 0, 0, 0, 0},
        {0, 0, -1, 2, -1, 0, 0, 0},
        {0, 0, 0, -1, 2, -1, 0, -1},
        {0, 0, 0, 0, -1, 2, -1, 0},
        {0, 0, 0, 0, 0, -1, 2, 0},
        {0, 0, 0, 0, -1, 0, 0, 2},
    });
    CHECK(determinant(e8) == 1);
    CHECK(signature(e8) == 8);
}

TEST_CASE("signature is a congruence invariant") {
    std::mt19937_64 rng(1122334455);
    std::uniform_int_distribution<std::size_t> dim(1, 5);
    for (int trial = 0; trial < 80; ++trial) {
        std::size_t n = dim(rng);
        Mat s = testutil::random_symmetric(rng, n);
        Mat p = testutil::random_unimodular(rng, n);
        Mat congruent = p.transpose() * s * p;
        CHECK(signature(congruent) == signature(s));
    }
}

TEST_CASE("restrict_symmetric computes B^T Q B") {
    Mat q = mat({{1, 0, 0}, {0, -1, 0}, {0, 0, 7}});
    std::vector<std::vector<Int>> basis = {{1, 1, 0}};
    Mat r = restrict_symmetric(q, basis);
    REQUIRE(r.rows() == 1);
    CHECK(r.at(0, 0) == 0);
    CHECK(signature(r) == 0);
}
