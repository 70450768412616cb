// kirbykit: command-line front end for the Kirby-calculus engine.
//
// Subcommands: invariants, check, surgery, alexander, sw, corpus-test.
// Reports are JSON by default (--format text for human summaries) and are
// byte-identical across runs for identical inputs.  Exit codes: 0 = all
// checks pass, 1 = a verification failed, 2 = input malformed.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "kirby/corpus_check.hpp"
#include "kirby/errors.hpp"
#include "kirby/handlebody.hpp"
#include "kirby/knot.hpp"
#include "kirby/laurent.hpp"
#include "kirby/moves.hpp"
#include "kirby/surgery.hpp"

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw kirby::ParseError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw kirby::ParseError("cannot write '" + path + "'");
}

ordered_json summary_json(const kirby::InvariantSummary& s) {
    ordered_json j;
    j["chi"] = s.chi;
    j["sigma"] = s.sigma;
    j["h1"] = s.h1.to_string();
    j["h2"] = s.h2.to_string();
    j["boundary_h1"] =
        s.boundary ? ordered_json(s.boundary->to_string()) : ordered_json(nullptr);
    return j;
}

void emit(const ordered_json& report) { std::cout << report.dump(2) << "\n"; }

// --- invariants ------------------------------------------------------------

int cmd_invariants(const std::string& path, const std::string& format) {
    const kirby::HandleStructure X = kirby::kby_from_json_text(read_file(path));
    const kirby::InvariantSummary s = kirby::invariants(X);
    if (format == "text") {
        std::cout << path << ": " << s.to_string() << "\n";
    } else {
        ordered_json report;
        report["command"] = "invariants";
        report["subject"] = path;
        report["verdict"] = "pass";
        report["invariants"] = summary_json(s);
        emit(report);
    }
    return 0;
}

// --- check -----------------------------------------------------------------

int cmd_check(const std::string& path, bool strict, bool allow_assertions,
              const std::string& format) {
    const kirby::MoveScript script = kirby::script_from_json_text(read_file(path));
    const fs::path start_rel(script.start);
    const fs::path start_path =
        start_rel.is_absolute() ? start_rel : fs::path(path).parent_path() / start_rel;
    const kirby::HandleStructure start =
        kirby::kby_from_json_text(read_file(start_path.string()));

    const kirby::Certificate cert = kirby::verify_script(start, script);
    std::string verdict = cert.verdict(strict);
    std::vector<std::string> report_failures;
    if (!allow_assertions && cert.has_assertions() && cert.passed()) {
        verdict = "fail";
        report_failures.push_back(
            "asserted geometric conditions present and --no-allow-assertions given");
    }

    if (format == "text") {
        std::cout << path << ": " << verdict << "\n";
        for (const kirby::CertStep& step : cert.steps)
            for (const std::string& a : step.asserted)
                std::cout << "  asserted (step " << step.index << "): " << a << "\n";
        for (const std::string& a : cert.script_assertions)
            std::cout << "  asserted (script): " << a << "\n";
        for (const std::string& c : cert.caveats) std::cout << "  caveat: " << c << "\n";
        for (const std::string& f : cert.failures) std::cout << "  failure: " << f << "\n";
        for (const std::string& f : report_failures) std::cout << "  failure: " << f << "\n";
        std::cout << "  final: " << cert.final_invariants.to_string() << "\n";
    } else {
        ordered_json report;
        report["command"] = "check";
        report["subject"] = path;
        report["verdict"] = verdict;
        if (!report_failures.empty()) report["report_failures"] = report_failures;
        report["certificate"] =
            ordered_json::parse(kirby::certificate_to_json_text(cert, strict));
        emit(report);
    }
    return verdict == "fail" ? 1 : 0;
}

// --- surgery ---------------------------------------------------------------

int cmd_surgery(const std::string& path, const std::string& dotted_a,
                const std::string& dotted_b, const std::string& framed_t,
                const std::string& cusp_spec, const std::string& knot,
                const std::string& out_path, const std::string& format) {
    const kirby::HandleStructure X = kirby::kby_from_json_text(read_file(path));

    std::optional<std::pair<std::string, std::string>> cusp;
    if (!cusp_spec.empty()) {
        const auto comma = cusp_spec.find(',');
        if (comma == std::string::npos)
            throw kirby::ParseError("--cusp wants 'id1,id2', got '" + cusp_spec + "'");
        cusp = std::make_pair(cusp_spec.substr(0, comma), cusp_spec.substr(comma + 1));
    }

    const kirby::TorusMarking marking =
        kirby::mark_torus(X, dotted_a, dotted_b, framed_t, cusp);
    const kirby::MoveEffect eff = kirby::knot_surgery_diagram(X, marking, knot);
    write_file(out_path, kirby::kby_to_json_text(eff.result));

    const kirby::InvariantSummary before = kirby::invariants(X);
    const kirby::InvariantSummary after = kirby::invariants(eff.result);
    const bool preserved = before == after;

    if (format == "text") {
        std::cout << path << " + " << knot << " -> " << out_path << "\n";
        std::cout << "  before: " << before.to_string() << "\n";
        std::cout << "  after:  " << after.to_string() << "\n";
        std::cout << "  invariants preserved: " << (preserved ? "true" : "false") << "\n";
        for (const std::string& v : eff.verified) std::cout << "  verified: " << v << "\n";
        for (const std::string& a : eff.asserted) std::cout << "  asserted: " << a << "\n";
    } else {
        ordered_json report;
        report["command"] = "surgery";
        report["subject"] = path;
        report["knot"] = knot;
        ordered_json mj;
        mj["dotted_a"] = marking.dotted_a;
        mj["dotted_b"] = marking.dotted_b;
        mj["framed_t"] = marking.framed_t;
        mj["cusp_handles"] =
            marking.cusp_handles
                ? ordered_json::array(
                      {marking.cusp_handles->first, marking.cusp_handles->second})
                : ordered_json(nullptr);
        report["marking"] = mj;
        report["output"] = out_path;
        report["verdict"] = preserved ? "pass" : "fail";
        report["invariants_before"] = summary_json(before);
        report["invariants_after"] = summary_json(after);
        report["verified"] = eff.verified;
        report["asserted"] = eff.asserted;
        emit(report);
    }
    return preserved ? 0 : 1;
}

// --- alexander ---------------------------------------------------------------

kirby::KnotDiagram resolve_knot(const std::string& arg) {
    if (kirby::catalog_has(arg)) return kirby::catalog_knot(arg);
    if (fs::exists(arg)) return kirby::knot_from_json_text(read_file(arg));
    throw kirby::ParseError("'" + arg + "' is neither a catalog knot (" +
                            [] {
                                std::string names;
                                for (const std::string& n : kirby::catalog_names())
                                    names += (names.empty() ? "" : ", ") + n;
                                return names;
                            }() +
                            ") nor a readable file");
}

int cmd_alexander(const std::string& arg, const std::string& format) {
    const kirby::KnotDiagram d = resolve_knot(arg);
    const kirby::LaurentPoly via_seifert = kirby::alexander(d);
    const kirby::LaurentPoly via_fox = kirby::alexander_fox(d);
    const bool agree = via_seifert == via_fox;

    if (format == "text") {
        std::cout << via_seifert.to_string() << "\n";
        std::cout << "agreement (Seifert matrix vs Fox calculus): "
                  << (agree ? "true" : "false") << "\n";
    } else {
        ordered_json report;
        report["command"] = "alexander";
        report["subject"] = arg;
        report["verdict"] = agree ? "pass" : "fail";
        report["alexander"] = via_seifert.to_string();
        report["algorithms_agree"] = agree;
        emit(report);
    }
    return agree ? 0 : 1;
}

// --- sw ----------------------------------------------------------------------

std::map<std::string, kirby::Exp> parse_class_spec(const std::string& spec,
                                                   const std::vector<std::string>& basis) {
    std::map<std::string, kirby::Exp> cls;
    if (spec.empty()) {
        if (basis.empty())
            throw kirby::ParseError("catalog entry has an empty basis; give --class");
        cls[basis.front()] = 1;
        return cls;
    }
    std::istringstream in(spec);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        const auto eq = item.find('=');
        const std::string var = item.substr(0, eq == std::string::npos ? item.size() : eq);
        if (var.empty())
            throw kirby::ParseError("--class wants 'var[=exp],...', got '" + spec + "'");
        kirby::Exp exp = 1;
        if (eq != std::string::npos) {
            try {
                exp = std::stoll(item.substr(eq + 1));
            } catch (const std::exception&) {
                throw kirby::ParseError("--class exponent in '" + item +
                                        "' is not an integer");
            }
        }
        cls[var] = exp;
    }
    return cls;
}

int cmd_sw(const std::string& path, const std::string& knot, const std::string& class_spec,
           const std::string& format) {
    const kirby::SWCatalogEntry entry = kirby::sw_entry_from_json_text(read_file(path));
    const std::map<std::string, kirby::Exp> torus_class =
        parse_class_spec(class_spec, entry.sw.basis);
    const kirby::LaurentPoly delta = kirby::alexander(resolve_knot(knot));

    const kirby::SWInvariant sw_k =
        kirby::sw_knot_surgery(entry.sw, delta, "t", torus_class);
    const bool symmetric = kirby::sw_symmetry_holds(sw_k);
    const bool fake = kirby::is_fake_pair(entry.sw, sw_k);

    std::vector<std::string> classes;
    for (const kirby::Monomial& m : kirby::basic_classes(sw_k))
        classes.push_back(kirby::format_class(m));

    if (format == "text") {
        std::cout << entry.manifold << " + " << knot << ":\n";
        std::cout << "  SW = " << kirby::format_sw_exponential(sw_k.poly) << "\n";
        std::cout << "  basic classes:";
        for (const std::string& c : classes) std::cout << " " << c;
        std::cout << "\n  epsilon = " << sw_k.epsilon
                  << ", symmetry: " << (symmetric ? "true" : "false") << "\n";
        std::cout << "  fake pair vs " << entry.manifold << ": "
                  << (fake ? "true" : "false") << "\n";
    } else {
        ordered_json report;
        report["command"] = "sw";
        report["subject"] = path;
        report["manifold"] = entry.manifold;
        report["knot"] = knot;
        report["verdict"] = symmetric ? "pass" : "fail";
        report["sw"] = kirby::format_sw_exponential(sw_k.poly);
        report["sw_poly"] = sw_k.poly.to_string();
        report["basic_classes"] = classes;
        report["epsilon"] = sw_k.epsilon;
        report["symmetry"] = symmetric;
        report["fake_pair"] = fake;
        emit(report);
    }
    return symmetric ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"kirbykit: Kirby-calculus engine for 4-manifold handlebodies"};
    app.require_subcommand(1);

    std::string format = "json";
    bool strict = false;
    bool allow_assertions = true;
    app.add_option("--format", format, "Report format (json or text)")
        ->check(CLI::IsMember({"json", "text"}));
    app.add_flag("--strict", strict,
                 "Scripts with asserted geometric conditions get verdict "
                 "'pass-with-assertions' instead of 'pass'");
    app.add_flag("--allow-assertions,!--no-allow-assertions", allow_assertions,
                 "Allow scripts whose legality relies on user-asserted "
                 "geometric conditions to pass (default: on)");

    CLI::App* c_inv = app.add_subcommand("invariants",
                                         "Invariants of a handle structure (.kby)");
    std::string inv_path;
    c_inv->add_option("path", inv_path, "Handle structure file")->required();

    CLI::App* c_check = app.add_subcommand("check", "Verify a move script (.script)");
    std::string check_path;
    c_check->add_option("path", check_path, "Move script file")->required();

    CLI::App* c_surgery =
        app.add_subcommand("surgery", "Knot surgery on a marked torus");
    std::string s_path, s_a, s_b, s_t, s_cusp, s_knot = "trefoil", s_out;
    c_surgery->add_option("path", s_path, "Handle structure file")->required();
    c_surgery->add_option("-a,--dotted-a", s_a, "First marked dotted handle")->required();
    c_surgery->add_option("-b,--dotted-b", s_b, "Second marked dotted handle")->required();
    c_surgery->add_option("-t,--torus", s_t, "0-framed 2-handle over both dots")
        ->required();
    c_surgery->add_option("--cusp", s_cusp,
                          "Vanishing-cycle pair 'id1,id2' (default: auto-detect)");
    c_surgery->add_option("-k,--knot", s_knot, "Knot to surger by (default: trefoil)");
    c_surgery->add_option("-o,--out", s_out, "Output .kby path")->required();

    CLI::App* c_alex =
        app.add_subcommand("alexander", "Alexander polynomial by both algorithms");
    std::string alex_arg;
    c_alex->add_option("knot", alex_arg, "Catalog knot name or diagram file")->required();

    CLI::App* c_sw = app.add_subcommand(
        "sw", "Seiberg-Witten transform of a catalog entry under knot surgery");
    std::string sw_path, sw_knot = "trefoil", sw_class;
    c_sw->add_option("catalog", sw_path, "Catalog entry (.sw.json)")->required();
    c_sw->add_option("-k,--knot", sw_knot, "Knot to surger by (default: trefoil)");
    c_sw->add_option("--class", sw_class,
                     "Torus class as 'var[=exp],...' (default: first basis variable)");

    CLI::App* c_corpus = app.add_subcommand("corpus-test", "Run the acceptance suite");
    std::string corpus_dir;
    c_corpus->add_option("dir", corpus_dir,
                         "Corpus directory (default: $KIRBYKIT_CORPUS or ./corpus)");

    // Let global flags (--format, --strict, ...) appear after the subcommand.
    for (CLI::App* sub : app.get_subcommands(nullptr)) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(c_inv)) return cmd_invariants(inv_path, format);
        if (app.got_subcommand(c_check))
            return cmd_check(check_path, strict, allow_assertions, format);
        if (app.got_subcommand(c_surgery))
            return cmd_surgery(s_path, s_a, s_b, s_t, s_cusp, s_knot, s_out, format);
        if (app.got_subcommand(c_alex)) return cmd_alexander(alex_arg, format);
        if (app.got_subcommand(c_sw)) return cmd_sw(sw_path, sw_knot, sw_class, format);
        if (app.got_subcommand(c_corpus)) {
            std::string dir = corpus_dir;
            if (dir.empty()) {
                if (const char* env = std::getenv("KIRBYKIT_CORPUS")) dir = env;
                if (dir.empty()) dir = "corpus";
            }
            return kirby::run_corpus_acceptance(dir, std::cout) ? 0 : 1;
        }
    } catch (const kirby::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const kirby::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const kirby::MarkingError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const kirby::IllegalMoveError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const kirby::UnsupportedError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
