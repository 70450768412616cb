#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "kirby/ints.hpp"

namespace kirby {

// Dense matrix over Z (row-major). Sized for handle diagrams, not HPC:
// everything is exact and deterministic.
class Mat {
public:
    Mat() : rows_(0), cols_(0) {}
    Mat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

    static Mat identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Int& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Int& at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    Mat transpose() const;
    Mat operator*(const Mat& rhs) const;
    Mat operator+(const Mat& rhs) const;
    Mat operator-(const Mat& rhs) const;
    bool operator==(const Mat& rhs) const = default;

    void swap_rows(std::size_t i, std::size_t j);
    void swap_cols(std::size_t i, std::size_t j);
    // row i += c * row j
    void add_row(std::size_t i, std::size_t j, const Int& c);
    // col i += c * col j
    void add_col(std::size_t i, std::size_t j, const Int& c);
    void negate_row(std::size_t i);
    void negate_col(std::size_t i);

    std::string to_string() const; // human-readable, for diagnostics

private:
    std::size_t rows_, cols_;
    std::vector<Int> a_;
};

// Smith normal form: U * M * V == D with U, V unimodular, D diagonal,
// diagonal entries non-negative and each dividing the next. Vinv is
// maintained alongside V so callers can move between coordinate systems
// without a separate inversion step.
struct SmithForm {
    Mat D;
    Mat U;
    Mat V;
    Mat Vinv;

    std::vector<Int> diagonal() const; // min(rows, cols) entries of D
    std::size_t rank() const;          // number of nonzero diagonal entries
};

SmithForm smith_normal_form(const Mat& M);

// Finitely generated abelian group in invariant-factor form:
// Z^free_rank + Z/t_1 + ... + Z/t_k with 1 < t_1 | t_2 | ... | t_k.
struct AbelianGroup {
    std::size_t free_rank = 0;
    std::vector<Int> torsion;

    bool operator==(const AbelianGroup&) const = default;

    bool is_trivial() const { return free_rank == 0 && torsion.empty(); }

    // "0", "Z", "Z^2", "Z/2", "Z^2 + Z/2 + Z/4", ...
    std::string to_string() const;

    // Accepts any sum of "Z", "Z^k", "Z/n" terms and normalizes to
    // invariant-factor form (so "Z/2 + Z/3" parses equal to "Z/6").
    static AbelianGroup parse(const std::string& text);
};

// coker(M : Z^cols -> Z^rows) = Z^rows / (column space of M).
AbelianGroup cokernel(const Mat& M);

// Basis of { v in Z^cols : M v = 0 }; each vector has length cols().
// The basis spans the kernel as a direct summand of Z^cols (it comes from
// the V matrix of the Smith form), so quotients by it are torsion-free.
std::vector<std::vector<Int>> kernel_basis(const Mat& M);

// Exact determinant (fraction-free Bareiss elimination). Square input only.
Int determinant(const Mat& M);

// Signature of a symmetric integer matrix: exact congruence
// diagonalization over Q, counting positive minus negative diagonal entries.
int signature(const Mat& symmetric);

// B^T * Q * B where basis holds the columns of B. Used to restrict an
// intersection form to a kernel subspace before taking its signature.
Mat restrict_symmetric(const Mat& Q, const std::vector<std::vector<Int>>& basis);

} // namespace kirby
