#include "kirby/zmatrix.hpp"

#include <algorithm>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "kirby/errors.hpp"

namespace kirby {

Mat Mat::identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

Mat Mat::transpose() const {
    Mat t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
    return t;
}

Mat Mat::operator*(const Mat& rhs) const {
    if (cols_ != rhs.rows_) throw std::logic_error("Mat::operator*: shape mismatch");
    Mat out(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const Int& a = at(i, k);
            if (a == 0) continue;
            for (std::size_t j = 0; j < rhs.cols_; ++j) out.at(i, j) += a * rhs.at(k, j);
        }
    return out;
}

Mat Mat::operator+(const Mat& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw std::logic_error("Mat::operator+: shape mismatch");
    Mat out(rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] = a_[i] + rhs.a_[i];
    return out;
}

Mat Mat::operator-(const Mat& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw std::logic_error("Mat::operator-: shape mismatch");
    Mat out(rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] = a_[i] - rhs.a_[i];
    return out;
}

void Mat::swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t k = 0; k < cols_; ++k) std::swap(at(i, k), at(j, k));
}

void Mat::swap_cols(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t k = 0; k < rows_; ++k) std::swap(at(k, i), at(k, j));
}

void Mat::add_row(std::size_t i, std::size_t j, const Int& c) {
    for (std::size_t k = 0; k < cols_; ++k) at(i, k) += c * at(j, k);
}

void Mat::add_col(std::size_t i, std::size_t j, const Int& c) {
    for (std::size_t k = 0; k < rows_; ++k) at(k, i) += c * at(k, j);
}

void Mat::negate_row(std::size_t i) {
    for (std::size_t k = 0; k < cols_; ++k) at(i, k) = -at(i, k);
}

void Mat::negate_col(std::size_t i) {
    for (std::size_t k = 0; k < rows_; ++k) at(k, i) = -at(k, i);
}

std::string Mat::to_string() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < rows_; ++i) {
        os << '[';
        for (std::size_t j = 0; j < cols_; ++j) {
            if (j) os << ' ';
            os << at(i, j);
        }
        os << "]\n";
    }
    return os.str();
}

std::vector<Int> SmithForm::diagonal() const {
    std::size_t n = std::min(D.rows(), D.cols());
    std::vector<Int> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = D.at(i, i);
    return d;
}

std::size_t SmithForm::rank() const {
    std::size_t r = 0;
    for (const Int& d : diagonal())
        if (d != 0) ++r;
    return r;
}

namespace {

// Bookkeeping wrapper: every elementary operation applied to the working
// matrix is mirrored into U (row ops) or V and Vinv (column ops) so that
// U * M * V == working holds throughout.
struct SnfState {
    Mat A, U, V, Vinv;

    explicit SnfState(const Mat& M)
        : A(M),
          U(Mat::identity(M.rows())),
          V(Mat::identity(M.cols())),
          Vinv(Mat::identity(M.cols())) {}

    void swap_rows(std::size_t i, std::size_t j) {
        A.swap_rows(i, j);
        U.swap_rows(i, j);
    }
    void swap_cols(std::size_t i, std::size_t j) {
        A.swap_cols(i, j);
        V.swap_cols(i, j);
        Vinv.swap_rows(i, j);
    }
    // row i += c * row j
    void add_row(std::size_t i, std::size_t j, const Int& c) {
        A.add_row(i, j, c);
        U.add_row(i, j, c);
    }
    // col i += c * col j ; inverse op on Vinv is row j -= c * row i
    void add_col(std::size_t i, std::size_t j, const Int& c) {
        A.add_col(i, j, c);
        V.add_col(i, j, c);
        Vinv.add_row(j, i, -c);
    }
    void negate_row(std::size_t i) {
        A.negate_row(i);
        U.negate_row(i);
    }
};

// Deterministic pivot choice: among nonzero entries of A[t.., t..] pick the
// smallest |value|, breaking ties by (row, col).
std::optional<std::pair<std::size_t, std::size_t>> pick_pivot(const Mat& A, std::size_t t) {
    std::optional<std::pair<std::size_t, std::size_t>> best;
    Int best_abs = 0;
    for (std::size_t i = t; i < A.rows(); ++i)
        for (std::size_t j = t; j < A.cols(); ++j) {
            const Int& v = A.at(i, j);
            if (v == 0) continue;
            Int av = abs(v);
            if (!best || av < best_abs) {
                best = {i, j};
                best_abs = av;
            }
        }
    return best;
}

} // namespace

SmithForm smith_normal_form(const Mat& M) {
    SnfState s(M);
    const std::size_t n = std::min(M.rows(), M.cols());

    for (std::size_t t = 0; t < n; ++t) {
        auto piv = pick_pivot(s.A, t);
        if (!piv) break;
        s.swap_rows(t, piv->first);
        s.swap_cols(t, piv->second);

        for (;;) {
            bool restarted = false;

            // Clear column t below (and above is already clear by induction).
            for (std::size_t i = t + 1; i < s.A.rows(); ++i) {
                if (s.A.at(i, t) == 0) continue;
                Int q = s.A.at(i, t) / s.A.at(t, t); // trunc division
                s.add_row(i, t, -q);
                if (s.A.at(i, t) != 0) {
                    // Remainder is strictly smaller than the pivot: promote it.
                    s.swap_rows(t, i);
                    restarted = true;
                    break;
                }
            }
            if (restarted) continue;

            // Clear row t to the right.
            for (std::size_t j = t + 1; j < s.A.cols(); ++j) {
                if (s.A.at(t, j) == 0) continue;
                Int q = s.A.at(t, j) / s.A.at(t, t);
                s.add_col(j, t, -q);
                if (s.A.at(t, j) != 0) {
                    s.swap_cols(t, j);
                    restarted = true;
                    break;
                }
            }
            if (restarted) continue;

            // Divisibility fix-up: the pivot must divide every remaining entry.
            bool fixed_up = false;
            for (std::size_t i = t + 1; i < s.A.rows() && !fixed_up; ++i)
                for (std::size_t j = t + 1; j < s.A.cols() && !fixed_up; ++j)
                    if (s.A.at(i, j) % s.A.at(t, t) != 0) {
                        s.add_row(t, i, 1); // pulls a non-multiple into row t
                        fixed_up = true;
                    }
            if (!fixed_up) break;
        }
    }

    for (std::size_t t = 0; t < n; ++t)
        if (s.A.at(t, t) < 0) s.negate_row(t);

    return SmithForm{std::move(s.A), std::move(s.U), std::move(s.V), std::move(s.Vinv)};
}

std::string AbelianGroup::to_string() const {
    if (is_trivial()) return "0";
    std::ostringstream os;
    bool first = true;
    auto sep = [&]() {
        if (!first) os << " + ";
        first = false;
    };
    if (free_rank == 1) {
        sep();
        os << "Z";
    } else if (free_rank > 1) {
        sep();
        os << "Z^" << free_rank;
    }
    for (const Int& t : torsion) {
        sep();
        os << "Z/" << t;
    }
    return os.str();
}

AbelianGroup AbelianGroup::parse(const std::string& text) {
    // Split on '+', trim, read each term.
    std::size_t free_rank = 0;
    std::vector<Int> torsion_raw;
    std::string term;
    auto flush = [&]() {
        // trim
        std::size_t b = term.find_first_not_of(" \t");
        std::size_t e = term.find_last_not_of(" \t");
        if (b == std::string::npos) throw ParseError("empty term in group expression");
        std::string tm = term.substr(b, e - b + 1);
        term.clear();
        if (tm == "0") return; // trivial summand
        if (tm == "Z") {
            ++free_rank;
            return;
        }
        if (tm.rfind("Z^", 0) == 0) {
            try {
                long k = std::stol(tm.substr(2));
                if (k < 0) throw ParseError("negative rank in group expression: " + tm);
                free_rank += static_cast<std::size_t>(k);
            } catch (const std::logic_error&) {
                throw ParseError("bad group term: " + tm);
            }
            return;
        }
        if (tm.rfind("Z/", 0) == 0) {
            std::string num = tm.substr(2);
            if (num.empty() || num.find_first_not_of("0123456789") != std::string::npos)
                throw ParseError("bad torsion order: " + tm);
            Int t(num);
            if (t == 0) throw ParseError("torsion order 0 in group expression");
            if (t > 1) torsion_raw.push_back(t);
            return;
        }
        throw ParseError("bad group term: " + tm);
    };
    for (char c : text) {
        if (c == '+')
            flush();
        else
            term += c;
    }
    flush();

    // Normalize arbitrary torsion summands to invariant factors via the
    // Smith form of the corresponding diagonal relation matrix.
    AbelianGroup g;
    g.free_rank = free_rank;
    if (!torsion_raw.empty()) {
        Mat d(torsion_raw.size(), torsion_raw.size());
        for (std::size_t i = 0; i < torsion_raw.size(); ++i) d.at(i, i) = torsion_raw[i];
        for (const Int& f : smith_normal_form(d).diagonal())
            if (f > 1) g.torsion.push_back(f);
    }
    return g;
}

AbelianGroup cokernel(const Mat& M) {
    SmithForm snf = smith_normal_form(M);
    AbelianGroup g;
    std::size_t rank = 0;
    for (const Int& d : snf.diagonal()) {
        if (d == 0) continue;
        ++rank;
        if (d > 1) g.torsion.push_back(d);
    }
    g.free_rank = M.rows() - rank;
    return g;
}

std::vector<std::vector<Int>> kernel_basis(const Mat& M) {
    SmithForm snf = smith_normal_form(M);
    std::vector<Int> diag = snf.diagonal();
    std::vector<std::vector<Int>> basis;
    for (std::size_t j = 0; j < M.cols(); ++j) {
        bool in_kernel = (j >= diag.size()) || (diag[j] == 0);
        if (!in_kernel) continue;
        std::vector<Int> v(M.cols());
        for (std::size_t i = 0; i < M.cols(); ++i) v[i] = snf.V.at(i, j);
        basis.push_back(std::move(v));
    }
    return basis;
}

Int determinant(const Mat& M) {
    if (M.rows() != M.cols()) throw std::logic_error("determinant: non-square matrix");
    const std::size_t n = M.rows();
    if (n == 0) return 1;
    Mat a = M;
    Int prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a.at(k, k) == 0) {
            std::size_t swap_row = k;
            for (std::size_t i = k + 1; i < n; ++i)
                if (a.at(i, k) != 0) {
                    swap_row = i;
                    break;
                }
            if (swap_row == k) return 0;
            a.swap_rows(k, swap_row);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                a.at(i, j) = (a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j)) / prev;
        prev = a.at(k, k);
    }
    return sign > 0 ? a.at(n - 1, n - 1) : -a.at(n - 1, n - 1);
}

int signature(const Mat& symmetric) {
    const std::size_t n = symmetric.rows();
    if (symmetric.cols() != n) throw std::logic_error("signature: non-square matrix");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (symmetric.at(i, j) != symmetric.at(j, i))
                throw std::logic_error("signature: matrix is not symmetric");

    // Exact symmetric congruence diagonalization over Q.
    std::vector<std::vector<Rat>> a(n, std::vector<Rat>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i][j] = Rat(symmetric.at(i, j));

    auto congr_swap = [&](std::size_t i, std::size_t j) {
        if (i == j) return;
        a[i].swap(a[j]);
        for (std::size_t k = 0; k < n; ++k) std::swap(a[k][i], a[k][j]);
    };
    // row i += c * row j, then col i += c * col j
    auto congr_add = [&](std::size_t i, std::size_t j, const Rat& c) {
        for (std::size_t k = 0; k < n; ++k) a[i][k] += c * a[j][k];
        for (std::size_t k = 0; k < n; ++k) a[k][i] += c * a[k][j];
    };

    int sig = 0;
    for (std::size_t t = 0; t < n; ++t) {
        if (a[t][t] == 0) {
            // Prefer a later nonzero diagonal entry.
            std::size_t dj = n;
            for (std::size_t j = t + 1; j < n; ++j)
                if (a[j][j] != 0) {
                    dj = j;
                    break;
                }
            if (dj < n) {
                congr_swap(t, dj);
            } else {
                // All later diagonal entries vanish; use an off-diagonal
                // entry to create one (row/col t += row/col j makes the
                // (t,t) entry 2*a[t][j]).
                std::size_t oj = n;
                for (std::size_t j = t + 1; j < n; ++j)
                    if (a[t][j] != 0) {
                        oj = j;
                        break;
                    }
                if (oj == n) continue; // row t is zero: null direction
                congr_add(t, oj, Rat(1));
            }
        }
        const Rat p = a[t][t];
        sig += sgn(p);
        for (std::size_t i = t + 1; i < n; ++i) {
            if (a[i][t] == 0) continue;
            congr_add(i, t, -a[i][t] / p);
        }
    }
    return sig;
}

Mat restrict_symmetric(const Mat& Q, const std::vector<std::vector<Int>>& basis) {
    const std::size_t n = Q.rows();
    if (Q.cols() != n) throw std::logic_error("restrict_symmetric: non-square matrix");
    Mat B(n, basis.size());
    for (std::size_t j = 0; j < basis.size(); ++j) {
        if (basis[j].size() != n) throw std::logic_error("restrict_symmetric: basis length mismatch");
        for (std::size_t i = 0; i < n; ++i) B.at(i, j) = basis[j][i];
    }
    return B.transpose() * Q * B;
}

} // namespace kirby
