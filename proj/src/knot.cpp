#include "kirby/knot.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"

#include "kirby/errors.hpp"

namespace kirby {

namespace {

int over_in(const Crossing& x) { return x.sign > 0 ? x.arcs[1] : x.arcs[3]; }
int over_out(const Crossing& x) { return x.sign > 0 ? x.arcs[3] : x.arcs[1]; }

std::string describe(const Crossing& x) {
    std::ostringstream os;
    os << "X(" << x.arcs[0] << "," << x.arcs[1] << "," << x.arcs[2] << "," << x.arcs[3]
       << "; sign " << (x.sign > 0 ? "+1" : "-1") << ")";
    return os.str();
}

} // namespace

void validate(const KnotDiagram& d) {
    const int c = d.num_crossings();
    if (c == 0) return; // unknot
    const int ne = d.num_edges();

    std::vector<int> in_count(ne + 1, 0), out_count(ne + 1, 0);
    for (const Crossing& x : d.crossings) {
        if (x.sign != 1 && x.sign != -1)
            throw ValidationError("crossing sign must be +1 or -1 in " + describe(x));
        for (int a : x.arcs)
            if (a < 1 || a > ne)
                throw ValidationError("arc id out of range 1..2c in " + describe(x));
        if (x.arcs[2] != d.next_edge(x.arcs[0]))
            throw ValidationError("under-strand must exit at the successor edge in " + describe(x));
        if (x.sign > 0 && x.arcs[3] != d.next_edge(x.arcs[1]))
            throw ValidationError(
                "positive crossing must have over-strand running arcs[1] -> arcs[3] in " +
                describe(x));
        if (x.sign < 0 && x.arcs[1] != d.next_edge(x.arcs[3]))
            throw ValidationError(
                "negative crossing must have over-strand running arcs[3] -> arcs[1] in " +
                describe(x));
        ++in_count[x.arcs[0]];
        ++in_count[over_in(x)];
        ++out_count[x.arcs[2]];
        ++out_count[over_out(x)];
    }
    for (int e = 1; e <= ne; ++e) {
        if (in_count[e] != 1 || out_count[e] != 1)
            throw ValidationError("edge " + std::to_string(e) +
                                  " must appear exactly once incoming and once outgoing");
    }
    // The successor rules above force the orientation walk 1 -> 2 -> ... -> 2c
    // -> 1, so the diagram closes into a single component by construction.

    // Planarity: faces of the rotation system must number c + 2. Endpoint
    // p = 4*crossing + slot; alpha swaps the two endpoints of an edge; sigma
    // rotates counterclockwise within a crossing. Faces = orbits of
    // sigma(alpha(p)).
    std::vector<std::array<int, 2>> ends(ne + 1, {-1, -1});
    for (int ci = 0; ci < c; ++ci)
        for (int s = 0; s < 4; ++s) {
            int e = d.crossings[ci].arcs[s];
            if (ends[e][0] < 0)
                ends[e][0] = 4 * ci + s;
            else
                ends[e][1] = 4 * ci + s;
        }
    auto alpha = [&](int p) {
        int e = d.crossings[p / 4].arcs[p % 4];
        return ends[e][0] == p ? ends[e][1] : ends[e][0];
    };
    auto sigma = [](int p) { return (p / 4) * 4 + (p % 4 + 1) % 4; };
    std::vector<bool> seen(4 * c, false);
    int faces = 0;
    for (int p0 = 0; p0 < 4 * c; ++p0) {
        if (seen[p0]) continue;
        ++faces;
        int p = p0;
        do {
            seen[p] = true;
            p = sigma(alpha(p));
        } while (p != p0);
    }
    if (faces != c + 2)
        throw ValidationError("diagram is not planar: rotation system yields " +
                              std::to_string(faces) + " faces, expected " + std::to_string(c + 2));
}

KnotDiagram pd_from_braid(const BraidWord& w) {
    if (w.strands < 1) throw ValidationError("braid must have at least one strand");
    for (const BraidLetter& l : w.letters) {
        if (l.generator < 1 || l.generator >= w.strands)
            throw ValidationError("braid generator index " + std::to_string(l.generator) +
                                  " out of range for " + std::to_string(w.strands) + " strands");
        if (l.sign != 1 && l.sign != -1) throw ValidationError("braid letter sign must be +1 or -1");
    }
    const int c = static_cast<int>(w.letters.size());
    if (c == 0) {
        if (w.strands != 1)
            throw ValidationError("closure of the empty braid on >1 strands is a link, not a knot");
        return KnotDiagram{};
    }

    // The closure is a knot iff the braid permutation is an n-cycle.
    {
        int pos = 1, steps = 0;
        do {
            for (const BraidLetter& l : w.letters) {
                if (pos == l.generator)
                    pos = l.generator + 1;
                else if (pos == l.generator + 1)
                    pos = l.generator;
            }
            ++steps;
        } while (pos != 1 && steps <= w.strands);
        if (steps != w.strands)
            throw ValidationError("braid closure has more than one component (permutation is not an n-cycle)");
    }

    // Walk the closure and number edges 1..2c in traversal order. At letter k
    // the strand at position generator (left) crosses to generator+1 and vice
    // versa; left-in exits bottom-right, right-in exits bottom-left.
    std::vector<int> in_left(c, 0), in_right(c, 0), out_left(c, 0), out_right(c, 0);
    int pos = 1, passages = 0;
    do {
        for (int k = 0; k < c; ++k) {
            int g = w.letters[k].generator;
            if (pos != g && pos != g + 1) continue;
            ++passages;
            int in_edge = passages;
            int out_edge = passages % (2 * c) + 1;
            if (pos == g) {
                in_left[k] = in_edge;
                out_right[k] = out_edge;
                pos = g + 1;
            } else {
                in_right[k] = in_edge;
                out_left[k] = out_edge;
                pos = g;
            }
        }
    } while (pos != 1);
    if (passages != 2 * c) throw std::logic_error("pd_from_braid: walk did not cover the diagram");

    KnotDiagram d;
    d.crossings.reserve(c);
    for (int k = 0; k < c; ++k) {
        const int sign = w.letters[k].sign;
        Crossing x{};
        x.sign = sign;
        if (sign > 0) {
            // Right-in goes under; corners (NE, NW, SW, SE) = slots 0..3.
            x.arcs = {in_right[k], in_left[k], out_left[k], out_right[k]};
        } else {
            // Left-in goes under; corners (NW, SW, SE, NE) = slots 0..3.
            x.arcs = {in_left[k], out_left[k], out_right[k], in_right[k]};
        }
        d.crossings.push_back(x);
    }
    validate(d);
    return d;
}

KnotDiagram mirror(const KnotDiagram& d) {
    KnotDiagram m = d;
    for (Crossing& x : m.crossings) {
        std::swap(x.arcs[1], x.arcs[3]);
        x.sign = -x.sign;
    }
    return m;
}

KnotDiagram rotate_edges(const KnotDiagram& d, int shift) {
    const int ne = d.num_edges();
    if (ne == 0) return d;
    KnotDiagram r = d;
    int s = ((shift % ne) + ne) % ne;
    for (Crossing& x : r.crossings)
        for (int& a : x.arcs) a = (a - 1 + s) % ne + 1;
    return r;
}

std::vector<std::vector<int>> seifert_circles(const KnotDiagram& d) {
    const int c = d.num_crossings();
    std::vector<std::vector<int>> circles;
    if (c == 0) return circles;
    const int ne = d.num_edges();
    // Oriented smoothing: the under-in edge continues into the over-out edge,
    // and the over-in edge continues into the under-out edge.
    std::vector<int> succ(ne + 1, 0);
    for (const Crossing& x : d.crossings) {
        succ[x.arcs[0]] = over_out(x);
        succ[over_in(x)] = x.arcs[2];
    }
    std::vector<bool> seen(ne + 1, false);
    for (int e0 = 1; e0 <= ne; ++e0) {
        if (seen[e0]) continue;
        std::vector<int> cyc;
        int e = e0;
        do {
            seen[e] = true;
            cyc.push_back(e);
            e = succ[e];
        } while (e != e0);
        circles.push_back(std::move(cyc));
    }
    return circles;
}

int seifert_genus(const KnotDiagram& d) {
    const int c = d.num_crossings();
    if (c == 0) return 0;
    const int s = static_cast<int>(seifert_circles(d).size());
    return (c - s + 1) / 2;
}

namespace {

// Path order of Seifert circles when the Seifert graph is a simple path;
// starts at the endpoint whose smallest edge label is smaller. nullopt when
// the graph is not a path (or a crossing joins a circle to itself).
std::optional<std::vector<int>> seifert_path_order(const KnotDiagram& d,
                                                   const std::vector<std::vector<int>>& circles,
                                                   const std::vector<int>& circle_of) {
    const int s = static_cast<int>(circles.size());
    std::vector<std::set<int>> adj(s);
    for (const Crossing& x : d.crossings) {
        int ca = circle_of[x.arcs[0]];
        int cb = circle_of[over_in(x)];
        if (ca == cb) return std::nullopt;
        adj[ca].insert(cb);
        adj[cb].insert(ca);
    }
    if (s == 1) return std::vector<int>{0}; // c == 0 callers only
    std::vector<int> endpoints;
    for (int i = 0; i < s; ++i) {
        if (adj[i].size() == 1)
            endpoints.push_back(i);
        else if (adj[i].size() != 2)
            return std::nullopt;
    }
    if (endpoints.size() != 2) return std::nullopt;
    // circles[i][0] is the smallest edge of circle i.
    int start = (circles[endpoints[0]][0] < circles[endpoints[1]][0]) ? endpoints[0] : endpoints[1];
    std::vector<int> order{start};
    int prev = -1, cur = start;
    while (static_cast<int>(order.size()) < s) {
        int nxt = -1;
        for (int nb : adj[cur])
            if (nb != prev) nxt = nb;
        if (nxt < 0) return std::nullopt;
        order.push_back(nxt);
        prev = cur;
        cur = nxt;
    }
    return order;
}

} // namespace

std::optional<BraidForm> recognize_braid_form(const KnotDiagram& d) {
    const int c = d.num_crossings();
    if (c == 0) return BraidForm{};
    const int ne = d.num_edges();

    auto circles = seifert_circles(d);
    const int s = static_cast<int>(circles.size());
    std::vector<int> circle_of(ne + 1, -1);
    for (int i = 0; i < s; ++i)
        for (int e : circles[i]) circle_of[e] = i;

    auto order = seifert_path_order(d, circles, circle_of);
    if (!order) return std::nullopt;
    std::vector<int> path_pos(s);
    for (int i = 0; i < s; ++i) path_pos[(*order)[i]] = i;

    // Gap (path index) of each crossing; both circles must be path-adjacent.
    std::vector<int> gap_of(c);
    for (int ci = 0; ci < c; ++ci) {
        int pa = path_pos[circle_of[d.crossings[ci].arcs[0]]];
        int pb = path_pos[circle_of[over_in(d.crossings[ci])]];
        if (pa > pb) std::swap(pa, pb);
        if (pb != pa + 1) return std::nullopt;
        gap_of[ci] = pa;
    }

    // Cyclic crossing sequence around each circle: the crossing where each
    // edge of the circle walk terminates. In a braid closure every circle
    // meets its incident crossings in global word order.
    std::vector<int> terminates_at(ne + 1, -1);
    for (int ci = 0; ci < c; ++ci) {
        terminates_at[d.crossings[ci].arcs[0]] = ci;
        terminates_at[over_in(d.crossings[ci])] = ci;
    }
    std::vector<std::vector<int>> seq(s);
    for (int i = 0; i < s; ++i) {
        for (int e : circles[i]) {
            int at = terminates_at[e];
            if (at >= 0) seq[i].push_back(at);
        }
        if (seq[i].size() != circles[i].size()) return std::nullopt;
    }

    // Merge the per-circle cyclic orders into one global word. L holds the
    // crossings of gaps 0..i-1 in word order; circle order[i] sees the gap
    // i-1 crossings (anchors) and interleaves the gap i crossings among them.
    std::vector<int> L = seq[(*order)[0]];
    for (int i = 1; i < s; ++i) {
        std::vector<int> T = seq[(*order)[i]];
        std::vector<int> anchors;
        for (int xid : L)
            if (gap_of[xid] == i - 1) anchors.push_back(xid);
        if (anchors.empty()) return std::nullopt;

        // Rotate T to start at the first anchor.
        auto it = std::find(T.begin(), T.end(), anchors[0]);
        if (it == T.end()) return std::nullopt;
        std::rotate(T.begin(), it, T.end());

        // The anchor subsequence of T must match L's restriction exactly.
        std::vector<int> extracted;
        for (int xid : T)
            if (gap_of[xid] == i - 1) extracted.push_back(xid);
        if (extracted != anchors) return std::nullopt;

        // Group the new (gap i) crossings after their preceding anchor.
        std::map<int, std::vector<int>> group;
        int cur_anchor = T[0];
        for (std::size_t k = 1; k < T.size(); ++k) {
            if (gap_of[T[k]] == i - 1)
                cur_anchor = T[k];
            else
                group[cur_anchor].push_back(T[k]);
        }
        std::vector<int> merged;
        merged.reserve(L.size() + T.size() - anchors.size());
        for (int xid : L) {
            merged.push_back(xid);
            auto g = group.find(xid);
            if (g != group.end())
                for (int nw : g->second) merged.push_back(nw);
        }
        L = std::move(merged);
    }
    if (static_cast<int>(L.size()) != c) return std::nullopt;

    std::vector<int> pos(c);
    for (int p = 0; p < c; ++p) pos[L[p]] = p;

    BraidForm bf;
    bf.gaps.resize(s - 1);
    for (int ci = 0; ci < c; ++ci)
        bf.gaps[gap_of[ci]].push_back({ci, d.crossings[ci].sign, pos[ci]});
    for (auto& g : bf.gaps) {
        std::sort(g.begin(), g.end(),
                  [](const BraidForm::GapCrossing& a, const BraidForm::GapCrossing& b) {
                      return a.pos < b.pos;
                  });
        if (g.empty()) return std::nullopt;
    }
    return bf;
}

namespace {

// Seifert matrix of a braid-closure surface: one generator per consecutive
// pair of crossings within a gap. The entry table (derived once from the
// band picture of the braided Seifert surface and pinned by the catalog
// examples):
//   V[x][x]          = -(eps1 + eps2)/2 for x = (c1, c2)
//   adjacent pairs sharing crossing m: V[earlier][later] = (eps(m)+1)/2,
//                                      V[later][earlier] = (eps(m)-1)/2
//   x=(a,b) in gap g, y=(A,B) in gap g+1 with word positions a<b, A<B:
//     a<A<b<B -> V[x][y] = -1 ; A<a<B<b -> V[x][y] = +1 ; else 0 ;
//     V[y][x] = 0 in all cross-gap cases.
Mat seifert_matrix_from(const BraidForm& bf) {
    struct Gen {
        int gap;
        int pa, pb; // word positions of the two crossings
        int sa, sb; // their signs
    };
    std::vector<Gen> gens;
    for (int g = 0; g < static_cast<int>(bf.gaps.size()); ++g) {
        const auto& list = bf.gaps[g];
        for (std::size_t j = 0; j + 1 < list.size(); ++j)
            gens.push_back({g, list[j].pos, list[j + 1].pos, list[j].sign, list[j + 1].sign});
    }
    const std::size_t n = gens.size();
    Mat V(n, n);
    for (std::size_t i = 0; i < n; ++i) V.at(i, i) = -(gens[i].sa + gens[i].sb) / 2;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const Gen& x = gens[i];
            const Gen& y = gens[j];
            if (x.gap == y.gap) {
                if (x.pb == y.pa) {
                    // x is the earlier pair, sharing its second crossing.
                    V.at(i, j) = (x.sb + 1) / 2;
                    V.at(j, i) = (x.sb - 1) / 2;
                }
            } else if (y.gap == x.gap + 1) {
                if (x.pa < y.pa && y.pa < x.pb && x.pb < y.pb)
                    V.at(i, j) = -1;
                else if (y.pa < x.pa && x.pa < y.pb && y.pb < x.pb)
                    V.at(i, j) = 1;
            }
        }
    return V;
}

LaurentPoly lp_det(std::vector<std::vector<LaurentPoly>>& m) {
    const std::size_t n = m.size();
    if (n == 0) return LaurentPoly::constant(1);
    if (n == 1) return m[0][0];
    LaurentPoly acc;
    for (std::size_t j = 0; j < n; ++j) {
        if (m[0][j].is_zero()) continue;
        std::vector<std::vector<LaurentPoly>> sub(n - 1, std::vector<LaurentPoly>(n - 1));
        for (std::size_t i = 1; i < n; ++i) {
            std::size_t cc = 0;
            for (std::size_t col = 0; col < n; ++col) {
                if (col == j) continue;
                sub[i - 1][cc++] = m[i][col];
            }
        }
        LaurentPoly term = m[0][j] * lp_det(sub);
        if (j % 2)
            acc -= term;
        else
            acc += term;
    }
    return acc;
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

} // namespace

Mat seifert_matrix(const KnotDiagram& d) {
    validate(d);
    auto bf = recognize_braid_form(d);
    if (!bf)
        throw UnsupportedError(
            "Seifert matrix supported only for braid-form diagrams (Seifert circles in a "
            "coherently ordered path); use the Fox-calculus route for this diagram");
    Mat V = seifert_matrix_from(*bf);
    const int c = d.num_crossings();
    const int s = c == 0 ? 0 : static_cast<int>(seifert_circles(d).size());
    if (static_cast<int>(V.rows()) != (c == 0 ? 0 : c - s + 1))
        throw std::logic_error("seifert_matrix: generator count mismatch");
    if (V.rows() % 2 != 0) throw std::logic_error("seifert_matrix: odd rank surface");
    Int u = determinant(V - V.transpose());
    if (u != 1 && u != -1)
        throw std::logic_error("seifert_matrix: V - V^T is not unimodular");
    return V;
}

int knot_signature(const KnotDiagram& d) {
    Mat V = seifert_matrix(d);
    return signature(V + V.transpose());
}

LaurentPoly normalize_alexander(const LaurentPoly& raw) {
    if (raw.is_zero()) throw ValidationError("Alexander normalization: zero polynomial");
    for (const auto& [m, coeff] : raw.terms())
        for (const auto& [var, e] : m)
            if (var != "t")
                throw ValidationError("Alexander normalization: unexpected variable '" + var + "'");
    LaurentPoly q = raw;
    if (auto range = q.exponent_range("t")) {
        auto [lo, hi] = *range;
        if ((lo + hi) % 2 != 0)
            throw ValidationError("Alexander normalization: no symmetric representative exists");
        q = q * LaurentPoly::variable("t", -(lo + hi) / 2);
    }
    if (!q.is_symmetric())
        throw ValidationError("Alexander normalization: polynomial is not symmetric");
    Int at_one;
    for (const auto& [m, coeff] : q.terms()) at_one += coeff;
    if (at_one != 1 && at_one != -1)
        throw ValidationError("Alexander normalization: |delta(1)| != 1 (not a knot polynomial)");
    return at_one < 0 ? -q : q;
}

LaurentPoly alexander(const KnotDiagram& d) {
    Mat V = seifert_matrix(d);
    const std::size_t n = V.rows();
    if (n == 0) return LaurentPoly::constant(1);
    LaurentPoly t = LaurentPoly::variable("t");
    std::vector<std::vector<LaurentPoly>> m(n, std::vector<LaurentPoly>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            m[i][j] = LaurentPoly::constant(V.at(i, j)) - t * LaurentPoly::constant(V.at(j, i));
    return normalize_alexander(lp_det(m));
}

LaurentPoly alexander_fox(const KnotDiagram& d) {
    validate(d);
    const int c = d.num_crossings();
    if (c == 0) return LaurentPoly::constant(1);
    const int ne = d.num_edges();

    // Wirtinger arcs: edges glued across over-passages.
    UnionFind uf(ne + 1);
    for (const Crossing& x : d.crossings) uf.unite(over_in(x), over_out(x));
    std::map<int, int> arc_index; // representative -> compact index, by smallest edge
    for (int e = 1; e <= ne; ++e) {
        int r = uf.find(e);
        if (!arc_index.count(r)) {
            int idx = static_cast<int>(arc_index.size());
            arc_index[r] = idx;
        }
    }
    const int arcs = static_cast<int>(arc_index.size());
    if (arcs != c) throw std::logic_error("alexander_fox: arc count != crossing count");

    // Fox derivative rows of the Wirtinger relations, abelianized at t.
    LaurentPoly t = LaurentPoly::variable("t");
    LaurentPoly tinv = LaurentPoly::variable("t", -1);
    LaurentPoly one = LaurentPoly::constant(1);
    std::vector<std::vector<LaurentPoly>> m(c, std::vector<LaurentPoly>(arcs));
    for (int ci = 0; ci < c; ++ci) {
        const Crossing& x = d.crossings[ci];
        int o = arc_index[uf.find(over_in(x))];
        int u_in = arc_index[uf.find(x.arcs[0])];
        int u_out = arc_index[uf.find(x.arcs[2])];
        if (x.sign > 0) {
            m[ci][o] += one - t;
            m[ci][u_in] += t;
            m[ci][u_out] -= one;
        } else {
            m[ci][o] += one - tinv;
            m[ci][u_in] += tinv;
            m[ci][u_out] -= one;
        }
    }

    // Delete the last row and column, take the determinant.
    std::vector<std::vector<LaurentPoly>> minor(c - 1, std::vector<LaurentPoly>(arcs - 1));
    for (int i = 0; i + 1 < c; ++i)
        for (int j = 0; j + 1 < arcs; ++j) minor[i][j] = m[i][j];
    return normalize_alexander(lp_det(minor));
}

namespace {

// Canonical cut edge for connected sums: an edge on an outermost Seifert
// circle when the diagram is braid-form (keeps the sum braid-form), the
// last edge otherwise.
int canonical_cut_edge(const KnotDiagram& d) {
    auto circles = seifert_circles(d);
    std::vector<int> circle_of(d.num_edges() + 1, -1);
    for (int i = 0; i < static_cast<int>(circles.size()); ++i)
        for (int e : circles[i]) circle_of[e] = i;
    if (circles.size() >= 2) {
        auto order = seifert_path_order(d, circles, circle_of);
        if (order) return circles[(*order)[0]][0];
    }
    return d.num_edges();
}

} // namespace

KnotDiagram splice_sum(const KnotDiagram& A, const KnotDiagram& B) {
    validate(A);
    validate(B);
    if (A.num_crossings() == 0) return B;
    if (B.num_crossings() == 0) return A;
    const int m2 = A.num_edges(), n2 = B.num_edges();

    // Cut edge m2 of A and n2 of B, cross-join the halves: A's outgoing half
    // of m2 continues into B (entering where B's n2 entered), and B's
    // outgoing half of n2 returns into A as the new final edge m2 + n2.
    // Slot roles: 0 = under-in, 2 = under-out; the over-in slot is 1 at a
    // positive crossing and 3 at a negative one.
    auto is_incoming_slot = [](const Crossing& x, int s) {
        return s == 0 || (x.sign > 0 ? s == 1 : s == 3);
    };
    KnotDiagram out;
    for (Crossing x : A.crossings) {
        for (int s = 0; s < 4; ++s) {
            int& e = x.arcs[s];
            if (e == m2 && is_incoming_slot(x, s)) e = m2 + n2;
        }
        out.crossings.push_back(x);
    }
    for (Crossing x : B.crossings) {
        for (int s = 0; s < 4; ++s) {
            int& e = x.arcs[s];
            if (e == n2)
                e = is_incoming_slot(x, s) ? m2 : m2 + n2;
            else
                e += m2;
        }
        out.crossings.push_back(x);
    }
    validate(out);
    return out;
}

KnotDiagram connected_sum(const KnotDiagram& a, const KnotDiagram& b) {
    validate(a);
    validate(b);
    if (a.num_crossings() == 0) return b;
    if (b.num_crossings() == 0) return a;
    // Rotate labels so the chosen cut edge carries the maximal label.
    KnotDiagram A = rotate_edges(a, a.num_edges() - canonical_cut_edge(a));
    KnotDiagram B = rotate_edges(b, b.num_edges() - canonical_cut_edge(b));
    return splice_sum(A, B);
}

std::vector<std::string> catalog_names() {
    return {"unknot", "trefoil", "trefoil_left", "trefoil_right", "figure_eight", "granny", "square"};
}

bool catalog_has(const std::string& name) {
    const auto names = catalog_names();
    if (std::find(names.begin(), names.end(), name) != names.end()) return true;
    return name == "figure-eight" || name == "figure8";
}

BraidWord catalog_braid(const std::string& name) {
    auto rep = [](int gen, int sign, int k) {
        std::vector<BraidLetter> v;
        for (int i = 0; i < k; ++i) v.push_back({gen, sign});
        return v;
    };
    auto cat = [&](std::vector<std::vector<BraidLetter>> parts, int strands) {
        BraidWord w;
        w.strands = strands;
        for (auto& p : parts) w.letters.insert(w.letters.end(), p.begin(), p.end());
        return w;
    };
    if (name == "unknot") return BraidWord{1, {}};
    if (name == "trefoil" || name == "trefoil_left") return cat({rep(1, -1, 3)}, 2);
    if (name == "trefoil_right") return cat({rep(1, +1, 3)}, 2);
    if (name == "figure_eight" || name == "figure-eight" || name == "figure8")
        return cat({{{1, +1}, {2, -1}, {1, +1}, {2, -1}}}, 3);
    if (name == "granny") return cat({rep(1, -1, 3), rep(2, -1, 3)}, 3);
    if (name == "square") return cat({rep(1, -1, 3), rep(2, +1, 3)}, 3);
    throw ParseError("unknown catalog knot '" + name + "'");
}

KnotDiagram catalog_knot(const std::string& name) { return pd_from_braid(catalog_braid(name)); }

KnotDiagram knot_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("knot file: invalid JSON: ") + e.what());
    }
    if (!j.is_array()) throw ParseError("knot file: expected a JSON array of crossing records");
    KnotDiagram d;
    for (const auto& rec : j) {
        if (!rec.is_object() || !rec.contains("arcs") || !rec.contains("sign"))
            throw ParseError("knot file: each crossing needs \"arcs\" and \"sign\"");
        const auto& arcs = rec["arcs"];
        if (!arcs.is_array() || arcs.size() != 4)
            throw ParseError("knot file: \"arcs\" must be a list of four arc ids");
        Crossing x{};
        for (int s = 0; s < 4; ++s) {
            if (!arcs[s].is_number_integer()) throw ParseError("knot file: arc ids must be integers");
            x.arcs[s] = arcs[s].get<int>();
        }
        if (!rec["sign"].is_number_integer()) throw ParseError("knot file: \"sign\" must be an integer");
        x.sign = rec["sign"].get<int>();
        d.crossings.push_back(x);
    }
    validate(d);
    return d;
}

std::string knot_to_json_text(const KnotDiagram& d) {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const Crossing& x : d.crossings) {
        nlohmann::ordered_json rec;
        rec["arcs"] = {x.arcs[0], x.arcs[1], x.arcs[2], x.arcs[3]};
        rec["sign"] = x.sign;
        j.push_back(rec);
    }
    return j.dump(2) + "\n";
}

} // namespace kirby
