#include "kirby/moves.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "json.hpp"

#include "kirby/errors.hpp"

namespace kirby {

using ordered_json = nlohmann::ordered_json;

namespace {

[[noreturn]] void illegal(const std::string& msg) { throw IllegalMoveError(msg); }

const Handle& need(const HandleStructure& X, const std::string& id) {
    const Handle* h = X.find(id);
    if (h == nullptr) illegal("no handle with id '" + id + "'");
    return *h;
}

const Handle& need_framed(const HandleStructure& X, const std::string& id) {
    const Handle& h = need(X, id);
    if (h.is_dotted()) illegal("'" + id + "' is not a framed 2-handle");
    return h;
}

void drop_flags(Handle& h) {
    h.unknot.reset();
    h.geometric_runs.clear();
}

// The attaching circle of `h` must be an unknot for the move to be honest;
// the linking model cannot check that, so the condition is asserted either
// from the structure flag or outright.  A present-but-false flag is a hard
// contradiction.
void assert_unknot(const Handle& h, const char* op, MoveEffect& eff) {
    if (h.unknot.has_value() && !*h.unknot)
        illegal(std::string(op) + ": '" + h.id + "' is flagged as knotted");
    if (h.unknot.has_value())
        eff.asserted.push_back("attaching circle of '" + h.id +
                               "' is an unknot (structure flag)");
    else
        eff.asserted.push_back("attaching circle of '" + h.id +
                               "' is an unknot (not flagged; assumed for " + op + ")");
}

bool d3_column_is_zero(const HandleStructure& X, const std::string& id) {
    if (!X.d3) return true;
    for (const auto& row : *X.d3) {
        auto it = row.find(id);
        if (it != row.end() && it->second != 0) return false;
    }
    return true;
}

void erase_d3_column(HandleStructure& X, const std::string& id) {
    if (!X.d3) return;
    for (auto& row : *X.d3) row.erase(id);
}

std::string fresh_id(const HandleStructure& X, const std::string& stem) {
    for (int k = 1;; ++k) {
        std::string id = stem + std::to_string(k);
        if (!X.has(id)) return id;
    }
}

// Core slide arithmetic shared by the public move and the spectator slides
// inside cancel_12.  Updates links, framing, flags and d3; no legality
// messages (callers narrate).
void slide_in_place(HandleStructure& X, const std::string& i, const std::string& j,
                    int sign) {
    const Int s(sign);
    const Handle over = *X.find(j);  // snapshot
    const Int l_ij = X.link(i, j);

    std::set<std::string> partners;
    for (const auto& [k, v] : X.find(i)->links) partners.insert(k);
    for (const auto& [k, v] : over.links) partners.insert(k);
    partners.erase(i);
    partners.erase(j);
    for (const std::string& k : partners)
        X.set_link(i, k, X.link(i, k) + s * X.link(j, k));
    X.set_link(i, j, l_ij + s * over.framing);

    Handle& hi = *X.find(i);
    hi.framing += over.framing + 2 * s * l_ij;
    drop_flags(hi);

    // change of 2-chain basis e_i -> e_i + s e_j: 3-handle rows transform by
    // col_j -= s * col_i
    if (X.d3)
        for (auto& row : *X.d3) {
            auto it = row.find(i);
            if (it == row.end()) continue;
            Int v = row.count(j) ? row[j] : Int(0);
            v -= s * it->second;
            if (v == 0)
                row.erase(j);
            else
                row[j] = v;
        }
}

std::string int_str(const Int& v) { return v.str(); }

}  // namespace

MoveEffect slide(const HandleStructure& X, const std::string& handle,
                 const std::string& over, int sign) {
    if (sign != 1 && sign != -1) illegal("slide: sign must be +1 or -1");
    if (handle == over) illegal("slide: cannot slide a handle over itself");
    need_framed(X, handle);
    need_framed(X, over);

    MoveEffect eff;
    eff.result = X;
    slide_in_place(eff.result, handle, over, sign);
    eff.verified.push_back("'" + handle + "' and '" + over +
                           "' are distinct framed 2-handles");
    eff.verified.push_back("linking row, framing and d3 updated for the basis change '" +
                           handle + "' -> '" + handle + "' " + (sign > 0 ? "+" : "-") +
                           " '" + over + "'");
    eff.verified.push_back("geometric flags of '" + handle + "' dropped");
    validate(eff.result);
    return eff;
}

MoveEffect blow_up(const HandleStructure& X, int sign,
                   const std::optional<std::string>& id) {
    if (sign != 1 && sign != -1) illegal("blow_up: sign must be +1 or -1");
    std::string new_id = id ? *id : fresh_id(X, "e");
    if (X.has(new_id)) illegal("blow_up: id '" + new_id + "' already in use");

    MoveEffect eff;
    eff.result = X;
    Handle h;
    h.id = new_id;
    h.kind = HandleKind::Framed;
    h.framing = sign;
    h.unknot = true;
    eff.result.handles.push_back(std::move(h));
    eff.verified.push_back("introduced disjoint " + std::string(sign > 0 ? "+1" : "-1") +
                           "-framed unknot '" + new_id + "' (unknotted by construction)");
    validate(eff.result);
    return eff;
}

MoveEffect blow_down(const HandleStructure& X, const std::string& target) {
    const Handle& h = need_framed(X, target);
    if (h.framing != 1 && h.framing != -1)
        illegal("blow_down: framing of '" + target + "' is " + int_str(h.framing) +
                ", need +1 or -1");
    if (!h.links.empty())
        illegal("blow_down: '" + target + "' links other handles");
    if (!d3_column_is_zero(X, target))
        illegal("blow_down: a 3-handle runs over '" + target + "'");

    MoveEffect eff;
    eff.verified.push_back("framing of '" + target + "' is " +
                           std::string(h.framing > 0 ? "+1" : "-1"));
    eff.verified.push_back("'" + target + "' links no other handle");
    eff.verified.push_back("no 3-handle runs over '" + target + "'");
    assert_unknot(h, "blow_down", eff);
    eff.result = X;
    erase_d3_column(eff.result, target);
    eff.result.erase(target);
    validate(eff.result);
    return eff;
}

MoveEffect cancel_12(const HandleStructure& X, const std::string& dotted,
                     const std::string& framed,
                     const std::optional<SliceRestore>& restore) {
    const Handle& d = need(X, dotted);
    if (d.kind != HandleKind::Dotted)
        illegal("cancel_12: '" + dotted + "' is not a plain dotted handle");
    const Handle& h = need_framed(X, framed);
    Int l_dh = X.link(dotted, framed);
    if (l_dh != 1 && l_dh != -1)
        illegal("cancel_12: '" + framed + "' links '" + dotted + "' " + int_str(l_dh) +
                " times algebraically, need +1 or -1");

    MoveEffect eff;
    eff.verified.push_back("'" + framed + "' links '" + dotted + "' algebraically " +
                           (l_dh > 0 ? "+1" : "-1") + " time");
    auto runs_it = h.geometric_runs.find(dotted);
    if (runs_it != h.geometric_runs.end()) {
        if (runs_it->second != 1)
            illegal("cancel_12: '" + framed + "' runs over '" + dotted + "' " +
                    int_str(runs_it->second) + " times geometrically, need exactly 1");
        eff.verified.push_back("'" + framed + "' runs over '" + dotted +
                               "' exactly once (structure flag)");
    } else {
        eff.asserted.push_back("'" + framed + "' runs over '" + dotted +
                               "' exactly once (not flagged; assumed for cancel_12)");
    }

    eff.result = X;
    HandleStructure& Y = eff.result;

    // Slide every other framed handle across `framed` until it no longer
    // links `dotted`; drop geometric passes that survive with zero algebraic
    // linking (they slide off across the cancelling handle as well).
    for (const Handle& other : X.handles) {
        if (other.is_dotted() || other.id == framed) continue;
        const std::string k = other.id;
        int slides = 0;
        while (Y.link(k, dotted) != 0) {
            Int lk = Y.link(k, dotted);
            int s = (sgn(lk) == sgn(l_dh)) ? -1 : 1;
            slide_in_place(Y, k, framed, s);
            ++slides;
            if (slides > 1000000) throw std::logic_error("cancel_12: runaway slide loop");
        }
        if (slides > 0)
            eff.verified.push_back("slid '" + k + "' over '" + framed + "' " +
                                   std::to_string(slides) +
                                   " time(s) to clear its linking with '" + dotted + "'");
        Handle* kk = Y.find(k);
        auto rit = kk->geometric_runs.find(dotted);
        if (rit != kk->geometric_runs.end() && rit->second != 0) {
            drop_flags(*kk);
            eff.verified.push_back("geometric passes of '" + k + "' through '" + dotted +
                                   "' slid off across '" + framed + "' (flags of '" + k +
                                   "' dropped)");
        }
    }
    if (!d3_column_is_zero(Y, framed))
        illegal("cancel_12: a 3-handle runs over '" + framed + "'");

    erase_d3_column(Y, framed);
    Y.erase(framed);
    Y.erase(dotted);
    eff.verified.push_back("cancelling pair ('" + dotted + "', '" + framed +
                           "') removed");

    if (restore) {
        Handle* t = Y.find(restore->target);
        if (t == nullptr || t->kind != HandleKind::Dotted)
            illegal("cancel_12: slice restore target '" + restore->target +
                    "' is not a remaining plain dotted handle");
        if (restore->knot.empty()) illegal("cancel_12: slice restore needs a knot label");
        t->kind = HandleKind::SliceDotted;
        t->knot = restore->knot;
        eff.asserted.push_back("'" + restore->target +
                               "' re-identified as the slice 1-handle on '" +
                               restore->knot + "' after the cancellation");
    }
    validate(eff.result);
    return eff;
}

MoveEffect cancel_23(const HandleStructure& X, const std::string& target) {
    const Handle& h = need_framed(X, target);
    if (h.framing != 0)
        illegal("cancel_23: framing of '" + target + "' is " + int_str(h.framing) +
                ", need 0");
    if (!h.links.empty()) illegal("cancel_23: '" + target + "' links other handles");
    if (X.three_handles < 1) illegal("cancel_23: no 3-handle available");

    MoveEffect eff;
    eff.verified.push_back("framing of '" + target + "' is 0");
    eff.verified.push_back("'" + target + "' links no other handle");
    assert_unknot(h, "cancel_23", eff);

    eff.result = X;
    HandleStructure& Y = eff.result;
    if (Y.d3) {
        // exactly one 3-handle may run over the target: the cancelling one,
        // attached along its belt sphere
        std::size_t cancelling = Y.d3->size();
        for (std::size_t r = 0; r < Y.d3->size(); ++r) {
            const auto& row = (*Y.d3)[r];
            auto it = row.find(target);
            if (it == row.end() || it->second == 0) continue;
            if (row.size() == 1 && (it->second == 1 || it->second == -1) &&
                cancelling == Y.d3->size()) {
                cancelling = r;
            } else {
                illegal("cancel_23: 3-handle attachments over '" + target +
                        "' are not a single belt sphere row");
            }
        }
        if (cancelling == Y.d3->size())
            illegal("cancel_23: no 3-handle is attached along the belt sphere of '" +
                    target + "' (d3 row +-e_" + target + " required)");
        eff.verified.push_back("3-handle " + std::to_string(cancelling + 1) +
                               " attaches along the belt sphere of '" + target + "'");
        Y.d3->erase(Y.d3->begin() + static_cast<std::ptrdiff_t>(cancelling));
    } else {
        eff.asserted.push_back(
            "a 3-handle is attached along the belt sphere of '" + target +
            "' (d3 unspecified; assumed for cancel_23)");
    }
    Y.three_handles -= 1;
    if (Y.d3 && Y.d3->empty()) Y.d3.reset();  // keep round-trips exact
    Y.erase(target);
    validate(eff.result);
    return eff;
}

MoveEffect surger_dot(const HandleStructure& X, const std::string& target) {
    const Handle& d = need(X, target);
    if (!d.is_dotted()) illegal("surger_dot: '" + target + "' is not a dotted handle");

    MoveEffect eff;
    eff.result = X;
    Handle& h = *eff.result.find(target);
    bool was_slice = h.kind == HandleKind::SliceDotted;
    h.kind = HandleKind::Framed;
    h.framing = 0;
    if (was_slice) {
        eff.verified.push_back("dot removed from slice 1-handle '" + target +
                               "': now a 0-framed 2-handle on '" + *h.knot + "'");
    } else {
        h.unknot = true;
        eff.verified.push_back("dot removed from '" + target +
                               "': now a 0-framed 2-handle on an unknot (dotted circles "
                               "are unknotted by definition)");
    }
    // run counts through the vanished 1-handle are no longer meaningful
    for (Handle& other : eff.result.handles)
        if (other.geometric_runs.erase(target) > 0)
            eff.verified.push_back("retired geometric run count of '" + other.id +
                                   "' through '" + target + "'");
    validate(eff.result);
    return eff;
}

MoveEffect add_dot(const HandleStructure& X, const std::string& target,
                   const std::optional<std::string>& knot) {
    const Handle& h = need_framed(X, target);
    if (h.framing != 0)
        illegal("add_dot: framing of '" + target + "' is " + int_str(h.framing) +
                ", need 0");
    for (const auto& [other, v] : h.links)
        if (X.find(other)->is_dotted())
            illegal("add_dot: '" + target + "' links dotted handle '" + other +
                    "' " + int_str(v) + " times; dotting it would create a "
                    "dotted-dotted link");
    if (!d3_column_is_zero(X, target))
        illegal("add_dot: a 3-handle runs over '" + target + "'");

    MoveEffect eff;
    eff.verified.push_back("framing of '" + target + "' is 0");
    eff.verified.push_back("'" + target + "' links no dotted handle");
    eff.verified.push_back("no 3-handle runs over '" + target + "'");

    std::optional<std::string> label = knot ? knot : h.knot;
    eff.result = X;
    Handle& t = *eff.result.find(target);
    if (label && *label != "unknot") {
        t.kind = HandleKind::SliceDotted;
        t.knot = label;
        eff.asserted.push_back("attaching circle of '" + target +
                               "' asserted to be the slice knot '" + *label + "'");
    } else {
        assert_unknot(h, "add_dot", eff);
        t.kind = HandleKind::Dotted;
        t.knot.reset();
    }
    t.framing = 0;
    drop_flags(t);
    validate(eff.result);
    return eff;
}

MoveEffect expand_slice(const HandleStructure& X, const std::string& target) {
    const Handle& s = need(X, target);
    if (s.kind != HandleKind::SliceDotted)
        illegal("expand_slice: '" + target + "' is not a slice 1-handle");
    if (*s.knot != "square")
        throw UnsupportedError("expand_slice: no expansion template for slice knot '" +
                               *s.knot + "'");
    std::string d2_id = target + "_2";
    std::string m_id = target + "_m";
    if (X.has(d2_id) || X.has(m_id))
        illegal("expand_slice: template ids '" + d2_id + "'/'" + m_id +
                "' already in use");

    MoveEffect eff;
    eff.result = X;
    HandleStructure& Y = eff.result;
    Handle& first = *Y.find(target);
    first.kind = HandleKind::Dotted;
    first.knot.reset();

    Handle d2;
    d2.id = d2_id;
    d2.kind = HandleKind::Dotted;
    Y.handles.push_back(std::move(d2));

    Handle m;
    m.id = m_id;
    m.kind = HandleKind::Framed;
    m.framing = 0;
    m.geometric_runs[d2_id] = 1;
    Y.handles.push_back(std::move(m));
    Y.set_link(m_id, d2_id, Int(1));

    eff.asserted.push_back("slice 1-handle '" + target +
                           "' redrawn per the stored 'square' template (two 1-handles "
                           "joined by a 0-framed 2-handle)");
    validate(eff.result);

    // the template must be invisible to every invariant; anything else means
    // the stored data is wrong, so fail loudly rather than record it
    if (invariants(X) != invariants(eff.result))
        throw std::logic_error("expand_slice template failed the invariant "
                               "preservation check");
    eff.verified.push_back("expansion preserved chi, sigma, H1, H2 and H1(boundary)");
    return eff;
}

MoveEffect add_cancelling_pair_12(const HandleStructure& X,
                                  const std::optional<std::string>& dotted_id,
                                  const std::optional<std::string>& framed_id) {
    std::string did = dotted_id ? *dotted_id : fresh_id(X, "u");
    if (X.has(did)) illegal("add_cancelling_pair: id '" + did + "' already in use");
    std::string fid = framed_id ? *framed_id : fresh_id(X, "m");
    if (fid == did || X.has(fid))
        illegal("add_cancelling_pair: id '" + fid + "' already in use");

    MoveEffect eff;
    eff.result = X;
    Handle d;
    d.id = did;
    d.kind = HandleKind::Dotted;
    eff.result.handles.push_back(std::move(d));
    Handle h;
    h.id = fid;
    h.kind = HandleKind::Framed;
    h.framing = 0;
    h.unknot = true;
    h.geometric_runs[did] = 1;
    eff.result.handles.push_back(std::move(h));
    eff.result.set_link(did, fid, Int(1));
    eff.verified.push_back("introduced cancelling 1-2 pair ('" + did + "', '" + fid +
                           "'): meridian 2-handle runs over the new 1-handle once by "
                           "construction");
    validate(eff.result);
    return eff;
}

MoveEffect add_cancelling_pair_23(const HandleStructure& X,
                                  const std::optional<std::string>& id) {
    std::string cid = id ? *id : fresh_id(X, "c");
    if (X.has(cid)) illegal("add_cancelling_pair: id '" + cid + "' already in use");

    MoveEffect eff;
    eff.result = X;
    HandleStructure& Y = eff.result;
    Handle h;
    h.id = cid;
    h.kind = HandleKind::Framed;
    h.framing = 0;
    h.unknot = true;
    Y.handles.push_back(std::move(h));
    if (!Y.d3) {
        // materialize the documented zero-matrix default for any pre-existing
        // 3-handles so the new row has somewhere to live
        Y.d3 = std::vector<std::map<std::string, Int>>(
            static_cast<std::size_t>(Y.three_handles));
        if (Y.three_handles > 0)
            eff.verified.push_back(
                "d3 materialized: pre-existing 3-handles recorded as zero rows (the "
                "documented default)");
    }
    Y.d3->push_back({{cid, Int(1)}});
    Y.three_handles += 1;
    eff.verified.push_back("introduced cancelling 2-3 pair: 0-framed unknot '" + cid +
                           "' (unknotted by construction) capped by a 3-handle along "
                           "its belt sphere");
    validate(eff.result);
    return eff;
}

// ---------------------------------------------------------------------------
// Script layer

namespace {

const std::string& need_arg(const ParsedMove& m, const std::string& key) {
    auto it = m.args.find(key);
    if (it == m.args.end())
        throw ParseError("move '" + m.op + "' is missing its '" + key + "' field");
    return it->second;
}

std::optional<std::string> opt_arg(const ParsedMove& m, const std::string& key) {
    auto it = m.args.find(key);
    if (it == m.args.end()) return std::nullopt;
    return it->second;
}

}  // namespace

MoveEffect apply_move(const HandleStructure& X, const ParsedMove& move) {
    const std::string& op = move.op;
    if (op == "slide") {
        if (!move.sign) throw ParseError("slide is missing its 'sign' field");
        MoveEffect eff = slide(X, need_arg(move, "handle"), need_arg(move, "over"),
                               *move.sign);
        if (move.half_twists)
            eff.asserted.push_back("band placement: " + std::to_string(*move.half_twists) +
                                   " half-twist(s) on the slide band (cosmetic "
                                   "annotation)");
        return eff;
    }
    if (op == "blow_up") {
        if (!move.sign) throw ParseError("blow_up is missing its 'sign' field");
        return blow_up(X, *move.sign, opt_arg(move, "id"));
    }
    if (op == "blow_down") return blow_down(X, need_arg(move, "target"));
    if (op == "cancel_12")
        return cancel_12(X, need_arg(move, "dotted"), need_arg(move, "framed"),
                         move.slice);
    if (op == "cancel_23") return cancel_23(X, need_arg(move, "target"));
    if (op == "surger_dot") return surger_dot(X, need_arg(move, "target"));
    if (op == "add_dot")
        return add_dot(X, need_arg(move, "target"), opt_arg(move, "knot"));
    if (op == "expand_slice") return expand_slice(X, need_arg(move, "target"));
    if (op == "add_cancelling_pair") {
        const std::string& kind = need_arg(move, "kind");
        if (kind == "1-2")
            return add_cancelling_pair_12(X, opt_arg(move, "dotted"),
                                          opt_arg(move, "framed"));
        if (kind == "2-3") return add_cancelling_pair_23(X, opt_arg(move, "id"));
        throw ParseError("add_cancelling_pair kind must be '1-2' or '2-3'");
    }
    throw ParseError("unknown move op '" + op + "'");
}

namespace {

Int script_int(const ordered_json& j, const std::string& what) {
    if (j.is_number_integer()) return Int(j.get<long long>());
    if (j.is_string()) {
        try {
            return Int(j.get<std::string>());
        } catch (const std::exception&) {
            throw ParseError("invalid integer for " + what);
        }
    }
    throw ParseError("expected an integer for " + what);
}

AbelianGroup group_from_json(const ordered_json& j, const std::string& what) {
    if (j.is_string()) {
        try {
            return AbelianGroup::parse(j.get<std::string>());
        } catch (const ParseError& e) {
            throw ParseError("invalid group for " + what + ": " + e.what());
        }
    }
    if (j.is_object()) {
        AbelianGroup g;
        if (j.contains("free_rank")) {
            Int fr = script_int(j["free_rank"], what + ".free_rank");
            if (fr < 0) throw ParseError("negative free rank for " + what);
            g.free_rank = static_cast<std::size_t>(fr);
        }
        if (j.contains("torsion")) {
            if (!j["torsion"].is_array())
                throw ParseError(what + ".torsion must be an array");
            std::string text = "Z^" + std::to_string(g.free_rank);
            for (const auto& t : j["torsion"])
                text += " + Z/" + script_int(t, what + ".torsion").str();
            return AbelianGroup::parse(text);  // normalizes to invariant factors
        }
        return g;
    }
    throw ParseError(what + " must be a string like \"Z^2 + Z/2\" or an object");
}

const std::set<std::string> kKnownOps = {
    "slide",      "blow_up",     "blow_down",    "cancel_12",           "cancel_23",
    "surger_dot", "add_dot",     "expand_slice", "add_cancelling_pair",
};

const std::set<std::string> kStringFields = {"handle", "over", "target", "dotted",
                                             "framed", "id",   "knot",   "kind"};

}  // namespace

MoveScript script_from_json_text(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("start") || !j["start"].is_string())
        throw ParseError("move script must be an object with a 'start' path");

    MoveScript script;
    script.start = j["start"].get<std::string>();

    if (j.contains("assert")) {
        if (!j["assert"].is_array()) throw ParseError("'assert' must be an array");
        for (const auto& aj : j["assert"]) {
            if (!aj.is_object() || !aj.contains("handle") || !aj["handle"].is_string())
                throw ParseError("each assert entry needs a 'handle' id");
            ScriptAssert a;
            a.handle = aj["handle"].get<std::string>();
            if (aj.contains("unknot")) {
                if (!aj["unknot"].is_boolean())
                    throw ParseError("assert 'unknot' must be boolean");
                a.unknot = aj["unknot"].get<bool>();
            }
            if (aj.contains("geometric_runs")) {
                if (!aj["geometric_runs"].is_object())
                    throw ParseError("assert 'geometric_runs' must be an object");
                for (const auto& [key, val] : aj["geometric_runs"].items())
                    a.geometric_runs[key] = script_int(val, "assert run count");
            }
            script.asserts.push_back(std::move(a));
        }
    }

    if (!j.contains("moves") || !j["moves"].is_array())
        throw ParseError("move script needs a 'moves' array");
    for (const auto& mj : j["moves"]) {
        if (!mj.is_object() || !mj.contains("op") || !mj["op"].is_string())
            throw ParseError("each move needs an 'op' string");
        ParsedMove m;
        m.op = mj["op"].get<std::string>();
        if (!kKnownOps.count(m.op)) throw ParseError("unknown move op '" + m.op + "'");
        static const std::map<std::string, std::vector<std::string>> kRequired = {
            {"slide", {"handle", "over", "sign"}},
            {"blow_up", {"sign"}},
            {"blow_down", {"target"}},
            {"cancel_12", {"dotted", "framed"}},
            {"cancel_23", {"target"}},
            {"surger_dot", {"target"}},
            {"add_dot", {"target"}},
            {"expand_slice", {"target"}},
            {"add_cancelling_pair", {"kind"}},
        };
        for (const std::string& f : kRequired.at(m.op))
            if (!mj.contains(f))
                throw ParseError("move '" + m.op + "' is missing its '" + f + "' field");
        for (const std::string& f : kStringFields)
            if (mj.contains(f)) {
                if (!mj[f].is_string())
                    throw ParseError("move field '" + f + "' must be a string");
                m.args[f] = mj[f].get<std::string>();
            }
        if (mj.contains("sign")) {
            Int s = script_int(mj["sign"], "move sign");
            if (s != 1 && s != -1) throw ParseError("move sign must be +1 or -1");
            m.sign = static_cast<int>(s);
        }
        if (mj.contains("half_twists"))
            m.half_twists =
                static_cast<long long>(script_int(mj["half_twists"], "half_twists"));
        if (mj.contains("slice")) {
            const auto& sj = mj["slice"];
            if (!sj.is_object() || !sj.contains("target") || !sj.contains("knot") ||
                !sj["target"].is_string() || !sj["knot"].is_string())
                throw ParseError("move 'slice' must be {\"target\": id, \"knot\": label}");
            m.slice = SliceRestore{sj["target"].get<std::string>(),
                                   sj["knot"].get<std::string>()};
        }
        script.moves.push_back(std::move(m));
    }

    if (j.contains("expect")) {
        const auto& ej = j["expect"];
        if (!ej.is_object()) throw ParseError("'expect' must be an object");
        if (ej.contains("chi"))
            script.expect.chi = static_cast<long long>(script_int(ej["chi"], "chi"));
        if (ej.contains("sigma"))
            script.expect.sigma = static_cast<int>(script_int(ej["sigma"], "sigma"));
        if (ej.contains("h1")) script.expect.h1 = group_from_json(ej["h1"], "h1");
        if (ej.contains("h2")) script.expect.h2 = group_from_json(ej["h2"], "h2");
        if (ej.contains("boundary_h1"))
            script.expect.boundary_h1 = group_from_json(ej["boundary_h1"], "boundary_h1");
    }
    return script;
}

bool Certificate::has_assertions() const {
    if (!script_assertions.empty()) return true;
    for (const CertStep& s : steps)
        if (!s.asserted.empty()) return true;
    return false;
}

std::string Certificate::verdict(bool strict) const {
    if (!passed()) return "fail";
    if (strict && has_assertions()) return "pass-with-assertions";
    return "pass";
}

Certificate verify_script(const HandleStructure& start, const MoveScript& script) {
    Certificate cert;
    cert.expected = script.expect;
    cert.initial = invariants(start);

    HandleStructure X = start;
    for (const ScriptAssert& a : script.asserts) {
        Handle* h = X.find(a.handle);
        if (h == nullptr)
            throw ValidationError("script asserts on unknown handle '" + a.handle + "'");
        if (a.unknot) {
            h->unknot = *a.unknot;
            cert.script_assertions.push_back("script asserts '" + a.handle + "' is " +
                                             (*a.unknot ? "an unknot" : "knotted"));
        }
        for (const auto& [dot, runs] : a.geometric_runs) {
            h->geometric_runs[dot] = runs;
            cert.script_assertions.push_back("script asserts '" + a.handle +
                                             "' runs over '" + dot + "' " + runs.str() +
                                             " time(s)");
        }
    }
    validate(X);

    if (X.three_handles > 0 && !X.d3)
        cert.caveats.push_back(
            "start structure counts 3-handles without a d3 matrix; d3 defaults to the "
            "zero matrix");

    bool aborted = false;
    for (std::size_t i = 0; i < script.moves.size(); ++i) {
        CertStep step;
        step.index = i + 1;
        step.move = script.moves[i];
        try {
            MoveEffect eff = apply_move(X, script.moves[i]);
            step.verified = std::move(eff.verified);
            step.asserted = std::move(eff.asserted);
            X = std::move(eff.result);
            cert.steps.push_back(std::move(step));
        } catch (const IllegalMoveError& e) {
            cert.steps.push_back(std::move(step));
            cert.failures.push_back("step " + std::to_string(i + 1) + " (" +
                                    script.moves[i].op + "): " + e.what());
            aborted = true;
            break;
        } catch (const UnsupportedError& e) {
            cert.steps.push_back(std::move(step));
            cert.failures.push_back("step " + std::to_string(i + 1) + " (" +
                                    script.moves[i].op + "): " + e.what());
            aborted = true;
            break;
        }
    }

    cert.final_invariants = invariants(X);
    if (!aborted) {
        const InvariantSummary& got = cert.final_invariants;
        const ExpectedInvariants& want = script.expect;
        if (want.chi && *want.chi != got.chi)
            cert.failures.push_back("expected chi=" + std::to_string(*want.chi) +
                                    ", got " + std::to_string(got.chi));
        if (want.sigma && *want.sigma != got.sigma)
            cert.failures.push_back("expected sigma=" + std::to_string(*want.sigma) +
                                    ", got " + std::to_string(got.sigma));
        if (want.h1 && !(*want.h1 == got.h1))
            cert.failures.push_back("expected H1=" + want.h1->to_string() + ", got " +
                                    got.h1.to_string());
        if (want.h2 && !(*want.h2 == got.h2))
            cert.failures.push_back("expected H2=" + want.h2->to_string() + ", got " +
                                    got.h2.to_string());
        if (want.boundary_h1) {
            if (!got.boundary)
                cert.failures.push_back("expected H1(boundary)=" +
                                        want.boundary_h1->to_string() +
                                        ", but the final structure is closed");
            else if (!(*want.boundary_h1 == *got.boundary))
                cert.failures.push_back("expected H1(boundary)=" +
                                        want.boundary_h1->to_string() + ", got " +
                                        got.boundary->to_string());
        }
    }
    return cert;
}

namespace {

ordered_json summary_to_json(const InvariantSummary& s) {
    ordered_json j;
    j["chi"] = s.chi;
    j["sigma"] = s.sigma;
    j["h1"] = s.h1.to_string();
    j["h2"] = s.h2.to_string();
    j["boundary_h1"] = s.boundary ? ordered_json(s.boundary->to_string())
                                  : ordered_json(nullptr);
    return j;
}

ordered_json move_to_json(const ParsedMove& m) {
    ordered_json j;
    j["op"] = m.op;
    for (const char* f : {"handle", "over", "target", "dotted", "framed", "id", "knot",
                          "kind"}) {
        auto it = m.args.find(f);
        if (it != m.args.end()) j[f] = it->second;
    }
    if (m.sign) j["sign"] = *m.sign;
    if (m.half_twists) j["half_twists"] = *m.half_twists;
    if (m.slice) j["slice"] = {{"target", m.slice->target}, {"knot", m.slice->knot}};
    return j;
}

ordered_json expected_to_json(const ExpectedInvariants& e) {
    ordered_json j = ordered_json::object();
    if (e.chi) j["chi"] = *e.chi;
    if (e.sigma) j["sigma"] = *e.sigma;
    if (e.h1) j["h1"] = e.h1->to_string();
    if (e.h2) j["h2"] = e.h2->to_string();
    if (e.boundary_h1) j["boundary_h1"] = e.boundary_h1->to_string();
    return j;
}

}  // namespace

std::string certificate_to_json_text(const Certificate& cert, bool strict) {
    ordered_json j;
    j["verdict"] = cert.verdict(strict);
    j["initial"] = summary_to_json(cert.initial);
    j["final"] = summary_to_json(cert.final_invariants);
    j["expected"] = expected_to_json(cert.expected);
    j["steps"] = ordered_json::array();
    for (const CertStep& s : cert.steps) {
        ordered_json sj;
        sj["index"] = s.index;
        sj["move"] = move_to_json(s.move);
        sj["verified"] = s.verified;
        sj["asserted"] = s.asserted;
        j["steps"].push_back(sj);
    }
    j["script_assertions"] = cert.script_assertions;
    j["caveats"] = cert.caveats;
    j["failures"] = cert.failures;
    return j.dump(2) + "\n";
}

}  // namespace kirby
