#include "kirby/handlebody.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "kirby/errors.hpp"

namespace kirby {

using ordered_json = nlohmann::ordered_json;

std::string to_string(HandleKind kind) {
    switch (kind) {
        case HandleKind::Dotted: return "dotted";
        case HandleKind::SliceDotted: return "slice-dotted";
        case HandleKind::Framed: return "framed";
    }
    throw std::logic_error("unreachable handle kind");
}

const Handle* HandleStructure::find(const std::string& id) const {
    for (const Handle& h : handles)
        if (h.id == id) return &h;
    return nullptr;
}

Handle* HandleStructure::find(const std::string& id) {
    for (Handle& h : handles)
        if (h.id == id) return &h;
    return nullptr;
}

Int HandleStructure::link(const std::string& a, const std::string& b) const {
    const Handle* ha = find(a);
    if (ha == nullptr) throw std::out_of_range("no handle with id '" + a + "'");
    auto it = ha->links.find(b);
    return it == ha->links.end() ? Int(0) : it->second;
}

void HandleStructure::set_link(const std::string& a, const std::string& b, const Int& v) {
    Handle* ha = find(a);
    Handle* hb = find(b);
    if (ha == nullptr || hb == nullptr)
        throw std::out_of_range("set_link on missing handle id");
    if (a == b) throw std::logic_error("set_link on a single handle");
    if (v == 0) {
        ha->links.erase(b);
        hb->links.erase(a);
    } else {
        ha->links[b] = v;
        hb->links[a] = v;
    }
}

std::vector<std::size_t> HandleStructure::dotted_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < handles.size(); ++i)
        if (handles[i].is_dotted()) out.push_back(i);
    return out;
}

std::vector<std::size_t> HandleStructure::framed_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < handles.size(); ++i)
        if (!handles[i].is_dotted()) out.push_back(i);
    return out;
}

void HandleStructure::erase(const std::string& id) {
    auto it = std::find_if(handles.begin(), handles.end(),
                           [&](const Handle& h) { return h.id == id; });
    if (it == handles.end()) throw std::out_of_range("erase on missing handle id");
    handles.erase(it);
    for (Handle& h : handles) {
        h.links.erase(id);
        h.geometric_runs.erase(id);
    }
}

void validate(const HandleStructure& X) {
    std::set<std::string> ids;
    for (const Handle& h : X.handles) {
        if (h.id.empty()) throw ValidationError("handle with empty id");
        if (!ids.insert(h.id).second)
            throw ValidationError("duplicate handle id '" + h.id + "'");
    }
    for (const Handle& h : X.handles) {
        if (h.is_dotted() && h.framing != 0)
            throw ValidationError("dotted handle '" + h.id + "' carries a framing");
        if (h.kind == HandleKind::SliceDotted && (!h.knot || h.knot->empty()))
            throw ValidationError("slice-dotted handle '" + h.id + "' has no knot label");
        if (h.kind == HandleKind::Dotted && h.knot)
            throw ValidationError("plain dotted handle '" + h.id +
                                  "' carries a knot label (use slice-dotted)");
        if (h.unknot && h.is_dotted())
            throw ValidationError("unknot flag on dotted handle '" + h.id +
                                  "' (dotted circles are unknotted by definition)");
        for (const auto& [other, v] : h.links) {
            if (other == h.id)
                throw ValidationError("handle '" + h.id + "' links itself (use framing)");
            const Handle* o = X.find(other);
            if (o == nullptr)
                throw ValidationError("handle '" + h.id + "' links unknown id '" + other + "'");
            auto back = o->links.find(h.id);
            if (back == o->links.end() || back->second != v)
                throw ValidationError("asymmetric linking between '" + h.id + "' and '" +
                                      other + "'");
            if (v == 0)
                throw ValidationError("stored zero linking entry on '" + h.id +
                                      "' (zero links are implicit)");
            if (h.is_dotted() && o->is_dotted())
                throw ValidationError("dotted handles '" + h.id + "' and '" + other +
                                      "' have nonzero linking");
        }
        if (!h.geometric_runs.empty() && h.is_dotted())
            throw ValidationError("geometric_runs on dotted handle '" + h.id + "'");
        for (const auto& [dot, runs] : h.geometric_runs) {
            const Handle* d = X.find(dot);
            if (d == nullptr || !d->is_dotted())
                throw ValidationError("geometric_runs of '" + h.id +
                                      "' references non-dotted id '" + dot + "'");
            Int lk = X.link(h.id, dot);
            if (runs < 0) throw ValidationError("negative run count on '" + h.id + "'");
            if (runs < abs(lk) || (runs - abs(lk)) % 2 != 0)
                throw ValidationError("run count of '" + h.id + "' over '" + dot +
                                      "' is smaller than or differs in parity from the "
                                      "linking number");
        }
    }
    if (X.three_handles < 0 || X.four_handles < 0)
        throw ValidationError("negative 3-/4-handle count");
    if (X.closed && X.four_handles < 1)
        throw ValidationError("closed structure without a 4-handle");
    if (X.d3) {
        if (static_cast<long long>(X.d3->size()) != X.three_handles)
            throw ValidationError("d3 row count does not match three_handles");
        for (const auto& row : *X.d3)
            for (const auto& [id, v] : row) {
                const Handle* h = X.find(id);
                if (h == nullptr || h->is_dotted())
                    throw ValidationError("d3 row references non-framed id '" + id + "'");
                (void)v;
            }
        // Chain condition: every 3-handle class must be a 2-cycle.
        Mat b2 = boundary2(X);
        Mat d3m = d3_matrix(X);
        Mat prod = b2 * d3m.transpose();
        for (std::size_t i = 0; i < prod.rows(); ++i)
            for (std::size_t j = 0; j < prod.cols(); ++j)
                if (prod.at(i, j) != 0)
                    throw ValidationError(
                        "d3 violates the chain condition (boundary2 . d3^T != 0)");
    }
}

long long euler_characteristic(const HandleStructure& X) {
    long long n1 = 0, n2 = 0;
    for (const Handle& h : X.handles) (h.is_dotted() ? n1 : n2) += 1;
    return 1 - n1 + n2 - X.three_handles + X.four_handles;
}

Mat boundary2(const HandleStructure& X) {
    auto dot = X.dotted_indices();
    auto fr = X.framed_indices();
    Mat m(dot.size(), fr.size());
    for (std::size_t i = 0; i < dot.size(); ++i)
        for (std::size_t j = 0; j < fr.size(); ++j)
            m.at(i, j) = X.link(X.handles[dot[i]].id, X.handles[fr[j]].id);
    return m;
}

Mat linking_form(const HandleStructure& X) {
    auto fr = X.framed_indices();
    Mat m(fr.size(), fr.size());
    for (std::size_t i = 0; i < fr.size(); ++i) {
        m.at(i, i) = X.handles[fr[i]].framing;
        for (std::size_t j = i + 1; j < fr.size(); ++j) {
            Int v = X.link(X.handles[fr[i]].id, X.handles[fr[j]].id);
            m.at(i, j) = v;
            m.at(j, i) = v;
        }
    }
    return m;
}

Mat full_linking_matrix(const HandleStructure& X) {
    std::size_t n = X.handles.size();
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m.at(i, i) = X.handles[i].is_dotted() ? Int(0) : X.handles[i].framing;
        for (std::size_t j = i + 1; j < n; ++j) {
            Int v = X.link(X.handles[i].id, X.handles[j].id);
            m.at(i, j) = v;
            m.at(j, i) = v;
        }
    }
    return m;
}

Mat d3_matrix(const HandleStructure& X) {
    auto fr = X.framed_indices();
    Mat m(static_cast<std::size_t>(X.three_handles), fr.size());
    if (!X.d3) return m;
    for (std::size_t r = 0; r < X.d3->size(); ++r)
        for (std::size_t j = 0; j < fr.size(); ++j) {
            auto it = (*X.d3)[r].find(X.handles[fr[j]].id);
            if (it != (*X.d3)[r].end()) m.at(r, j) = it->second;
        }
    return m;
}

std::pair<AbelianGroup, AbelianGroup> homology(const HandleStructure& X) {
    Mat b2 = boundary2(X);
    AbelianGroup h1 = cokernel(b2);

    SmithForm s = smith_normal_form(b2);
    std::vector<Int> diag = s.diagonal();
    std::vector<std::size_t> kernel_cols;
    for (std::size_t j = 0; j < b2.cols(); ++j)
        if (j >= diag.size() || diag[j] == 0) kernel_cols.push_back(j);

    // Express each 3-handle class in kernel coordinates: y = Vinv * r lies in
    // the kernel columns exactly when r is a 2-cycle (guaranteed by the chain
    // condition, re-checked here).
    Mat d3m = d3_matrix(X);
    Mat rel(kernel_cols.size(), d3m.rows());
    for (std::size_t r = 0; r < d3m.rows(); ++r) {
        std::vector<Int> y(b2.cols(), Int(0));
        for (std::size_t j = 0; j < b2.cols(); ++j)
            for (std::size_t k = 0; k < b2.cols(); ++k)
                y[j] += s.Vinv.at(j, k) * d3m.at(r, k);
        std::size_t a = 0;
        for (std::size_t j = 0; j < b2.cols(); ++j) {
            bool in_kernel = a < kernel_cols.size() && kernel_cols[a] == j;
            if (in_kernel)
                rel.at(a++, r) = y[j];
            else if (y[j] != 0)
                throw ValidationError("d3 row is not a 2-cycle");
        }
    }
    AbelianGroup h2 = cokernel(rel);
    return {h1, h2};
}

AbelianGroup boundary_h1(const HandleStructure& X) {
    if (X.closed)
        throw std::logic_error("boundary_h1 on a closed structure");
    AbelianGroup surgered = cokernel(full_linking_matrix(X));
    // Each 3-handle is attached along a separating sphere cutting off an
    // S^1 x S^2 summand of the surgered boundary; capping it removes one free
    // Z factor.
    if (surgered.free_rank < static_cast<std::size_t>(X.three_handles))
        throw ValidationError(
            "three_handles exceeds the free rank of the surgered boundary H1");
    surgered.free_rank -= static_cast<std::size_t>(X.three_handles);
    return surgered;
}

int signature(const HandleStructure& X) {
    Mat q = linking_form(X);
    auto basis = kernel_basis(boundary2(X));
    return signature(restrict_symmetric(q, basis));
}

std::string InvariantSummary::to_string() const {
    std::ostringstream os;
    os << "chi=" << chi << " sigma=" << sigma << " H1=" << h1.to_string()
       << " H2=" << h2.to_string();
    if (boundary)
        os << " H1(boundary)=" << boundary->to_string();
    else
        os << " H1(boundary)=n/a (closed)";
    return os.str();
}

InvariantSummary invariants(const HandleStructure& X) {
    InvariantSummary s;
    s.chi = euler_characteristic(X);
    s.sigma = signature(X);
    auto [h1, h2] = homology(X);
    s.h1 = h1;
    s.h2 = h2;
    if (!X.closed) s.boundary = boundary_h1(X);
    return s;
}

namespace {

Int int_from_json(const ordered_json& j, const std::string& what) {
    if (j.is_number_integer()) return Int(j.get<long long>());
    if (j.is_string()) {
        try {
            return Int(j.get<std::string>());
        } catch (const std::exception&) {
            throw ParseError("invalid integer string for " + what);
        }
    }
    throw ParseError("expected an integer for " + what);
}

ordered_json int_to_json(const Int& v) {
    static const Int lo = std::numeric_limits<long long>::min();
    static const Int hi = std::numeric_limits<long long>::max();
    if (v >= lo && v <= hi) return static_cast<long long>(v);
    return v.str();  // huge values round-trip as strings
}

HandleKind kind_from_string(const std::string& s) {
    if (s == "dotted") return HandleKind::Dotted;
    if (s == "slice-dotted") return HandleKind::SliceDotted;
    if (s == "framed") return HandleKind::Framed;
    throw ParseError("unknown handle kind '" + s + "'");
}

}  // namespace

HandleStructure kby_from_json_text(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("handles") || !j["handles"].is_array())
        throw ParseError("handle structure must be an object with a 'handles' array");

    HandleStructure X;
    for (const auto& hj : j["handles"]) {
        if (!hj.is_object() || !hj.contains("id") || !hj["id"].is_string())
            throw ParseError("every handle needs a string 'id'");
        Handle h;
        h.id = hj["id"].get<std::string>();
        if (hj.contains("kind")) {
            if (!hj["kind"].is_string()) throw ParseError("handle 'kind' must be a string");
            h.kind = kind_from_string(hj["kind"].get<std::string>());
        }
        if (hj.contains("knot")) {
            if (!hj["knot"].is_string()) throw ParseError("handle 'knot' must be a string");
            h.knot = hj["knot"].get<std::string>();
        }
        if (hj.contains("framing")) h.framing = int_from_json(hj["framing"], "framing");
        if (hj.contains("links")) {
            if (!hj["links"].is_object()) throw ParseError("handle 'links' must be an object");
            for (const auto& [key, val] : hj["links"].items()) {
                Int v = int_from_json(val, "linking number");
                if (v != 0) h.links[key] = v;
            }
        }
        if (hj.contains("flags")) {
            const auto& f = hj["flags"];
            if (!f.is_object()) throw ParseError("handle 'flags' must be an object");
            if (f.contains("unknot")) {
                if (!f["unknot"].is_boolean()) throw ParseError("'unknot' flag must be boolean");
                h.unknot = f["unknot"].get<bool>();
            }
            if (f.contains("geometric_runs")) {
                if (!f["geometric_runs"].is_object())
                    throw ParseError("'geometric_runs' must be an object");
                for (const auto& [key, val] : f["geometric_runs"].items())
                    h.geometric_runs[key] = int_from_json(val, "run count");
            }
        }
        X.handles.push_back(std::move(h));
    }

    // Symmetrize linking maps: each pair may be named on either side or both;
    // when both, the values must agree.
    for (Handle& a : X.handles)
        for (const auto& [bid, v] : a.links) {
            Handle* b = X.find(bid);
            if (b == nullptr)
                throw ParseError("handle '" + a.id + "' links unknown id '" + bid + "'");
            auto back = b->links.find(a.id);
            if (back == b->links.end())
                b->links[a.id] = v;
            else if (back->second != v)
                throw ParseError("contradictory linking numbers between '" + a.id +
                                 "' and '" + bid + "'");
        }

    if (j.contains("three_handles"))
        X.three_handles =
            static_cast<long long>(int_from_json(j["three_handles"], "three_handles"));
    if (j.contains("four_handles"))
        X.four_handles =
            static_cast<long long>(int_from_json(j["four_handles"], "four_handles"));
    if (j.contains("closed")) {
        if (!j["closed"].is_boolean()) throw ParseError("'closed' must be boolean");
        X.closed = j["closed"].get<bool>();
    }
    if (j.contains("d3")) {
        if (!j["d3"].is_array()) throw ParseError("'d3' must be an array of rows");
        std::vector<std::map<std::string, Int>> rows;
        for (const auto& rj : j["d3"]) {
            if (!rj.is_object()) throw ParseError("each d3 row must be an object");
            std::map<std::string, Int> row;
            for (const auto& [key, val] : rj.items()) {
                Int v = int_from_json(val, "d3 entry");
                if (v != 0) row[key] = v;
            }
            rows.push_back(std::move(row));
        }
        X.d3 = std::move(rows);
    }

    try {
        validate(X);
    } catch (const ValidationError& e) {
        throw ParseError(std::string("invalid handle structure: ") + e.what());
    }
    return X;
}

std::string kby_to_json_text(const HandleStructure& X) {
    ordered_json j;
    j["handles"] = ordered_json::array();
    for (const Handle& h : X.handles) {
        ordered_json hj;
        hj["id"] = h.id;
        hj["kind"] = to_string(h.kind);
        if (h.knot) hj["knot"] = *h.knot;
        if (!h.is_dotted()) hj["framing"] = int_to_json(h.framing);
        if (!h.links.empty()) {
            ordered_json lj = ordered_json::object();
            for (const auto& [id, v] : h.links) lj[id] = int_to_json(v);
            hj["links"] = lj;
        }
        if (h.unknot || !h.geometric_runs.empty()) {
            ordered_json fj = ordered_json::object();
            if (h.unknot) fj["unknot"] = *h.unknot;
            if (!h.geometric_runs.empty()) {
                ordered_json rj = ordered_json::object();
                for (const auto& [id, v] : h.geometric_runs) rj[id] = int_to_json(v);
                fj["geometric_runs"] = rj;
            }
            hj["flags"] = fj;
        }
        j["handles"].push_back(hj);
    }
    j["three_handles"] = X.three_handles;
    j["four_handles"] = X.four_handles;
    if (X.d3) {
        ordered_json rows = ordered_json::array();
        for (const auto& row : *X.d3) {
            ordered_json rj = ordered_json::object();
            for (const auto& [id, v] : row) rj[id] = int_to_json(v);
            rows.push_back(rj);
        }
        j["d3"] = rows;
    }
    if (X.closed) j["closed"] = true;
    return j.dump(2) + "\n";
}

}  // namespace kirby
