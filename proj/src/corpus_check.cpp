#include "kirby/corpus_check.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "kirby/errors.hpp"
#include "kirby/handlebody.hpp"
#include "kirby/knot.hpp"
#include "kirby/laurent.hpp"
#include "kirby/moves.hpp"
#include "kirby/surgery.hpp"

namespace kirby {
namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

HandleStructure load_kby(const std::string& dir, const std::string& name) {
    return kby_from_json_text(read_file(dir + "/" + name));
}

struct CriterionResult {
    bool pass = true;
    std::vector<std::string> problems;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            problems.push_back(what);
        }
    }
};

// --- 1. Alexander polynomials, both algorithms --------------------------

void alexander_suite(const std::string&, CriterionResult& r) {
    const std::vector<std::pair<std::string, std::string>> expected = {
        {"unknot", "1"},
        {"trefoil", "t - 1 + t^-1"},
        {"figure_eight", "-t + 3 - t^-1"},
        {"granny", "t^2 - 2*t + 3 - 2*t^-1 + t^-2"},
    };
    for (const auto& [name, text] : expected) {
        const LaurentPoly want = LaurentPoly::parse(text);
        const KnotDiagram d = catalog_knot(name);
        r.require(alexander(d) == want, name + ": Seifert-matrix value != " + text);
        r.require(alexander_fox(d) == want, name + ": Fox-calculus value != " + text);
    }
}

// --- 2. Knot-surgery SW transform on the K3 entry -----------------------

void sw_suite(const std::string& dir, CriterionResult& r) {
    const SWCatalogEntry k3 = sw_entry_from_json_text(read_file(dir + "/k3.sw.json"));
    const std::map<std::string, Exp> torus_class = {{"T", 1}};

    const LaurentPoly trefoil = alexander(catalog_knot("trefoil"));
    const SWInvariant sw_k = sw_knot_surgery(k3.sw, trefoil, "t", torus_class);
    r.require(sw_k.poly == LaurentPoly::parse("T^2 - 1 + T^-2"),
              "SW(K3_trefoil) != T^2 - 1 + T^-2, got " + sw_k.poly.to_string());
    r.require(format_sw_exponential(sw_k.poly) == "exp(2T) - 1 + exp(-2T)",
              "exponential form != exp(2T) - 1 + exp(-2T)");

    std::vector<std::string> classes;
    for (const Monomial& m : basic_classes(sw_k)) classes.push_back(format_class(m));
    const std::vector<std::string> want_classes = {"2T", "0", "-2T"};
    r.require(classes == want_classes, "basic classes are not {2T, 0, -2T}");

    r.require(sw_k.epsilon == 2, "epsilon != 2");
    r.require(sw_symmetry_holds(sw_k), "charge-conjugation symmetry fails");

    const SWInvariant sw_u =
        sw_knot_surgery(k3.sw, alexander(catalog_knot("unknot")), "t", torus_class);
    r.require(is_fake_pair(k3.sw, sw_k), "K3 vs K3_trefoil should be a fake pair");
    r.require(!is_fake_pair(k3.sw, sw_u), "K3 vs K3_unknot should not be a fake pair");
}

// --- 3. Invariant table --------------------------------------------------

void invariant_table(const std::string& dir, CriterionResult& r) {
    const auto row = [&](const std::string& file, long long chi, int sigma,
                         const std::string& h1, const std::string& h2,
                         const std::string& bd) {
        const InvariantSummary s = invariants(load_kby(dir, file));
        InvariantSummary want;
        want.chi = chi;
        want.sigma = sigma;
        want.h1 = AbelianGroup::parse(h1);
        want.h2 = AbelianGroup::parse(h2);
        want.boundary = AbelianGroup::parse(bd);
        r.require(s == want, file + ": got " + s.to_string());
    };
    row("cusp.kby", 2, 0, "0", "Z", "Z");
    row("cusp_nbhd.kby", 2, 0, "0", "Z", "Z");
    row("fishtail.kby", 1, 0, "Z", "Z", "Z^2");
    row("fishtail_nbhd.kby", 1, 0, "Z", "Z", "Z^2");
    row("torus.kby", 0, 0, "Z^2", "Z", "Z^3");
}

// --- 4. Scripts, dual-handle undo, closed capping ledgers ----------------

void script_and_ledger_suite(const std::string& dir, CriterionResult& r) {
    const std::vector<std::string> scripts = {
        "figure7_to_T3.script",
        "figure9_to_figure7.script",
        "fig11_to_fig12.script",
        "fig12_to_fig11.script",
    };
    for (const std::string& name : scripts) {
        const MoveScript script = script_from_json_text(read_file(dir + "/" + name));
        const HandleStructure start = load_kby(dir, script.start);
        const Certificate cert = verify_script(start, script);
        std::string msg = name + ": " + cert.verdict(false);
        for (const std::string& f : cert.failures) msg += "; " + f;
        r.require(cert.passed(), msg);
    }

    // Undoing the second vanishing cycle turns a cusp neighborhood into a
    // fishtail neighborhood: chi 2 -> 1, H1 0 -> Z, boundary Z -> Z^2.
    for (const auto& [cusp_file, fishtail_file] :
         std::vector<std::pair<std::string, std::string>>{
             {"cusp_nbhd.kby", "fishtail_nbhd.kby"},
             {"cusp_star.kby", "fishtail_star.kby"}}) {
        const HandleStructure C = load_kby(dir, cusp_file);
        const MoveEffect eff = undo_dual_handle(C, "g2");
        r.require(eff.result == load_kby(dir, fishtail_file),
                  cusp_file + " minus g2 != " + fishtail_file);
        const InvariantSummary before = invariants(C);
        const InvariantSummary after = invariants(eff.result);
        r.require(after.chi == before.chi - 1, cusp_file + ": chi did not drop by 1");
        r.require(before.h1.is_trivial() && after.h1 == AbelianGroup{1, {}},
                  cusp_file + ": H1 did not go 0 -> Z");
        r.require(before.boundary == AbelianGroup{1, {}} &&
                      after.boundary == AbelianGroup{2, {}},
                  cusp_file + ": boundary H1 did not go Z -> Z^2");
    }

    // Capping ledgers: the closed doubles have the homology the gluings force.
    const InvariantSummary s4 = invariants(load_kby(dir, "s4_two_fishtails.kby"));
    r.require(s4.chi == 2 && s4.h1.is_trivial() && s4.h2.is_trivial() &&
                  !s4.boundary.has_value(),
              "s4_two_fishtails: expected chi=2, H1=0, H2=0, closed; got " +
                  s4.to_string());
    const InvariantSummary s2 = invariants(load_kby(dir, "s2xs2_two_cusps.kby"));
    r.require(s2.chi == 4 && s2.h1.is_trivial() && s2.h2 == AbelianGroup{2, {}} &&
                  !s2.boundary.has_value(),
              "s2xs2_two_cusps: expected chi=4, H1=0, H2=Z^2, closed; got " +
                  s2.to_string());
}

// --- 5. Surgery invariance at every valid marking ------------------------

void surgery_invariance(const std::string& dir, CriterionResult& r) {
    namespace fs = std::filesystem;
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.path().extension() == ".kby") files.push_back(entry.path().filename());
    std::sort(files.begin(), files.end());
    r.require(!files.empty(), "no .kby files found in '" + dir + "'");

    std::map<std::string, int> markings_per_file;
    for (const std::string& file : files) {
        const HandleStructure X = load_kby(dir, file);
        std::vector<std::string> dots, frames;
        for (const Handle& h : X.handles) {
            if (h.kind == HandleKind::Dotted) dots.push_back(h.id);
            if (h.kind == HandleKind::Framed) frames.push_back(h.id);
        }
        for (const std::string& a : dots)
            for (const std::string& b : dots) {
                if (a == b) continue;
                for (const std::string& t : frames) {
                    std::optional<TorusMarking> marking;
                    try {
                        marking = mark_torus(X, a, b, t);
                    } catch (const MarkingError&) {
                        continue;  // not a marked torus; nothing to check
                    }
                    ++markings_per_file[file];
                    try {
                        const MoveEffect eff = knot_surgery_diagram(X, *marking, "trefoil");
                        r.require(invariants(eff.result) == invariants(X),
                                  file + " (" + a + "," + b + "," + t +
                                      "): surgery changed the invariants");
                    } catch (const std::exception& ex) {
                        r.require(false, file + " (" + a + "," + b + "," + t +
                                             "): surgery failed: " + ex.what());
                    }
                }
            }
    }
    for (const std::string file :
         {"torus.kby", "cusp_nbhd.kby", "fishtail_nbhd.kby", "figure9.kby"})
        r.require(markings_per_file[file] > 0, file + ": no valid marking found");
}

// --- 6. Random legal move sequences --------------------------------------

HandleStructure random_structure(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> dots_dist(2, 3);
    std::uniform_int_distribution<long long> fr_dist(-4, 4);
    std::uniform_int_distribution<long long> link_dist(-3, 3);
    const int n_dotted = dots_dist(rng);
    const int n_framed = 8 - n_dotted;

    HandleStructure X;
    for (int i = 0; i < n_dotted; ++i) {
        Handle d;
        d.id = "d" + std::to_string(i + 1);
        d.kind = HandleKind::Dotted;
        X.handles.push_back(d);
    }
    for (int i = 0; i < n_framed; ++i) {
        Handle h;
        h.id = "f" + std::to_string(i + 1);
        h.kind = HandleKind::Framed;
        h.framing = Int(fr_dist(rng));
        X.handles.push_back(h);
    }
    // Links: framed-framed and framed-dotted only (dotted-dotted must vanish).
    for (std::size_t i = 0; i < X.handles.size(); ++i)
        for (std::size_t j = i + 1; j < X.handles.size(); ++j) {
            if (X.handles[i].is_dotted() && X.handles[j].is_dotted()) continue;
            X.set_link(X.handles[i].id, X.handles[j].id, Int(link_dist(rng)));
        }
    validate(X);
    return X;
}

// One random move drawn from the legal-move menu; uses the engine's own
// legality checks as the referee.  Returns the name of the op applied.
std::string random_legal_move(HandleStructure& X, std::mt19937_64& rng, int step,
                              CriterionResult& r) {
    std::uniform_int_distribution<int> op_dist(0, 7);
    std::uniform_int_distribution<int> sign_dist(0, 1);
    const auto pick = [&](const std::vector<std::string>& ids) -> std::string {
        std::uniform_int_distribution<std::size_t> d(0, ids.size() - 1);
        return ids[d(rng)];
    };

    for (int attempt = 0; attempt < 200; ++attempt) {
        std::vector<std::string> dots, frames;
        for (const Handle& h : X.handles) {
            if (h.kind == HandleKind::Dotted) dots.push_back(h.id);
            if (h.kind == HandleKind::Framed) frames.push_back(h.id);
        }
        const int op = op_dist(rng);
        const int s = sign_dist(rng) ? 1 : -1;
        try {
            switch (op) {
                case 0: {  // slide, checked exactly invertible
                    if (frames.size() < 2) break;
                    const std::string i = pick(frames);
                    const std::string j = pick(frames);
                    if (i == j) break;
                    // The inverse slide restores everything except the slid
                    // handle's geometric flags, which slides always drop.
                    HandleStructure want = X;
                    Handle* hi = want.find(i);
                    hi->unknot.reset();
                    hi->geometric_runs.clear();
                    const MoveEffect eff = slide(X, i, j, s);
                    HandleStructure back = slide(eff.result, i, j, -s).result;
                    r.require(back == want,
                              "slide(" + i + "," + j + ") not exactly invertible at step " +
                                  std::to_string(step));
                    X = eff.result;
                    return "slide";
                }
                case 1: {  // blow up, checked (chi, sigma) delta
                    const long long chi0 = euler_characteristic(X);
                    const int sig0 = signature(X);
                    X = blow_up(X, s).result;
                    r.require(euler_characteristic(X) == chi0 + 1 &&
                                  signature(X) == sig0 + s,
                              "blow_up delta != (+1, " + std::to_string(s) + ")");
                    return "blow_up";
                }
                case 2: {  // blow down
                    if (frames.empty()) break;
                    X = blow_down(X, pick(frames)).result;
                    return "blow_down";
                }
                case 3: {  // surger a dotted circle
                    if (dots.empty()) break;
                    X = surger_dot(X, pick(dots)).result;
                    return "surger_dot";
                }
                case 4: {  // dot a 0-framed unknot
                    if (frames.empty()) break;
                    X = add_dot(X, pick(frames), {}).result;
                    return "add_dot";
                }
                case 5: {
                    X = add_cancelling_pair_12(X).result;
                    return "add_cancelling_pair(1-2)";
                }
                case 6: {
                    X = add_cancelling_pair_23(X).result;
                    return "add_cancelling_pair(2-3)";
                }
                case 7: {  // cancel a 1-/2- or 2-/3-pair when one exists
                    if (!dots.empty() && !frames.empty() && sign_dist(rng)) {
                        const std::string d = pick(dots);
                        const std::string h = pick(frames);
                        X = cancel_12(X, d, h, {}).result;
                        return "cancel_12";
                    }
                    if (frames.empty()) break;
                    X = cancel_23(X, pick(frames)).result;
                    return "cancel_23";
                }
            }
        } catch (const IllegalMoveError&) {
            // Not legal on this structure; draw again.
        }
    }
    return "";  // menu exhausted (never expected with slide/blow_up available)
}

void random_move_suite(const std::string&, CriterionResult& r) {
    std::mt19937_64 rng(20260814u);
    const int kSequences = 1000;
    const int kMovesPerSequence = 8;
    long long moves_applied = 0;

    for (int seq = 0; seq < kSequences && r.pass; ++seq) {
        HandleStructure X = random_structure(rng);
        const AbelianGroup bd0 = boundary_h1(X);
        for (int step = 0; step < kMovesPerSequence; ++step) {
            const std::string op = random_legal_move(X, rng, step, r);
            r.require(!op.empty(), "no legal move found (sequence " +
                                       std::to_string(seq) + ")");
            if (op.empty()) break;
            ++moves_applied;
            if (boundary_h1(X) != bd0) {
                r.require(false, "H1(boundary) changed after " + op + " (sequence " +
                                     std::to_string(seq) + ", step " +
                                     std::to_string(step) + ")");
                break;
            }
        }
    }
    r.require(moves_applied >= kSequences * kMovesPerSequence || !r.pass,
              "applied only " + std::to_string(moves_applied) + " moves");
}

// --- 7. Laurent ring identities -------------------------------------------

LaurentPoly random_poly(std::mt19937_64& rng) {
    static const std::vector<std::string> vars = {"x", "y", "z"};
    std::uniform_int_distribution<int> terms_dist(0, 4);
    std::uniform_int_distribution<long long> exp_dist(-3, 3);
    std::uniform_int_distribution<long long> coeff_dist(-9, 9);
    LaurentPoly p;
    const int terms = terms_dist(rng);
    for (int t = 0; t < terms; ++t) {
        Monomial m;
        for (const std::string& v : vars) {
            const Exp e = exp_dist(rng);
            if (e != 0) m[v] = e;
        }
        p = p + LaurentPoly::monomial(m, Int(coeff_dist(rng)));
    }
    return p;
}

void laurent_ring_suite(const std::string&, CriterionResult& r) {
    std::mt19937_64 rng(0x6c617572u);
    const int kChecks = 10000;
    for (int i = 0; i < kChecks && r.pass; ++i) {
        const LaurentPoly p = random_poly(rng);
        const LaurentPoly q = random_poly(rng);
        const LaurentPoly w = random_poly(rng);
        r.require((p + q) + w == p + (q + w), "addition not associative");
        r.require(p * q == q * p, "multiplication not commutative");
        r.require((p * q) * w == p * (q * w), "multiplication not associative");
        r.require(p * (q + w) == p * q + p * w, "multiplication not distributive");
        r.require(p - p == LaurentPoly(), "p - p != 0");
    }
}

}  // namespace

bool run_corpus_acceptance(const std::string& corpus_dir, std::ostream& out) {
    struct Criterion {
        int number;
        std::string title;
        std::function<void(const std::string&, CriterionResult&)> run;
        std::optional<double> budget_seconds;
    };
    const std::vector<Criterion> criteria = {
        {1, "Alexander polynomials (Seifert matrix and Fox calculus) for "
            "unknot, trefoil, figure_eight, granny",
         alexander_suite, 1.0},
        {2, "knot-surgery SW transform on the K3 entry: value, classes, "
            "symmetry, fake pair",
         sw_suite, 1.0},
        {3, "invariant table: cusp, fishtail, T^2 x B^2", invariant_table, {}},
        {4, "corpus scripts verify; dual-handle undo; closed capping ledgers",
         script_and_ledger_suite, {}},
        {5, "knot surgery preserves all five invariants at every valid "
            "marking in the corpus",
         surgery_invariance, {}},
        {6, "1000 random legal move sequences preserve H1(boundary); blow-up "
            "deltas; slides invertible",
         random_move_suite, 30.0},
        {7, "10^4 random Laurent ring identity checks", laurent_ring_suite, 10.0},
    };

    bool all_pass = true;
    for (const Criterion& c : criteria) {
        CriterionResult r;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            c.run(corpus_dir, r);
        } catch (const std::exception& ex) {
            r.require(false, std::string("exception: ") + ex.what());
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.budget_seconds && elapsed >= *c.budget_seconds)
            r.require(false, "took " + std::to_string(elapsed) + "s, budget " +
                                 std::to_string(*c.budget_seconds) + "s");

        std::ostringstream line;
        line << (r.pass ? "PASS" : "FAIL") << " criterion " << c.number << ": "
             << c.title << " [" << static_cast<long long>(elapsed * 1000.0) << " ms]";
        if (!r.pass)
            for (const std::string& p : r.problems) line << "\n     - " << p;
        out << line.str() << "\n";
        all_pass = all_pass && r.pass;
    }
    out << (all_pass ? "ACCEPTANCE: all 7 criteria pass"
                     : "ACCEPTANCE: FAILURES PRESENT")
        << "\n";
    return all_pass;
}

}  // namespace kirby
