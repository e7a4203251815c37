#include "hld/io.hpp"

#include "hld/errors.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <set>

namespace hld {

using nlohmann::json;

namespace {

const json& field(const json& j, const char* key, const std::string& where) {
    if (!j.is_object()) throw ParseError(where, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw ParseError(where, std::string("missing field '") + key + "'");
    return *it;
}

std::string at(const std::string& where, const char* key) { return where.empty() ? key : where + "." + key; }
std::string at(const std::string& where, std::size_t i) { return where + "[" + std::to_string(i) + "]"; }

long long integer_field(const json& j, const char* key, const std::string& where) {
    const json& v = field(j, key, where);
    if (!v.is_number_integer()) throw ParseError(at(where, key), "expected an integer");
    return v.get<long long>();
}

std::size_t count_field(const json& j, const char* key, const std::string& where) {
    long long v = integer_field(j, key, where);
    if (v < 0) throw ParseError(at(where, key), "expected a nonnegative count");
    return static_cast<std::size_t>(v);
}

const json& array_field(const json& j, const char* key, const std::string& where) {
    const json& v = field(j, key, where);
    if (!v.is_array()) throw ParseError(at(where, key), "expected an array");
    return v;
}

std::string string_field(const json& j, const char* key, const std::string& where) {
    const json& v = field(j, key, where);
    if (!v.is_string()) throw ParseError(at(where, key), "expected a string");
    return v.get<std::string>();
}

json parse_json(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("byte " + std::to_string(e.byte), e.what());
    }
}

void check_header(const json& j, const char* kind) {
    if (integer_field(j, "format_version", "") != kFormatVersion)
        throw ParseError("format_version", "unsupported version");
    if (string_field(j, "kind", "") != kind) throw ParseError("kind", std::string("expected '") + kind + "'");
}

json graded_to_json(const GradedMatrices& g) {
    json out = json::array();
    for (int k = g.lo(); k <= g.hi(); ++k)
        if (!g(k).empty()) out.push_back({{"degree", k}, {"matrix", matrix_to_json(g(k))}});
    return out;
}

GradedMatrices graded_from_json(const json& arr, const Ring& ring, const std::string& where) {
    if (!arr.is_array()) throw ParseError(where, "expected an array");
    std::map<int, ExactMatrix> items;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string w = at(where, i);
        int k = static_cast<int>(integer_field(arr[i], "degree", w));
        if (items.count(k)) throw ParseError(w, "degree " + std::to_string(k) + " given twice");
        items.emplace(k, matrix_from_json(field(arr[i], "matrix", w), ring, at(w, "matrix")));
    }
    if (items.empty()) return GradedMatrices(ring, 0, {});
    const int lo = items.begin()->first;
    const int hi = items.rbegin()->first;
    std::vector<ExactMatrix> v;
    for (int k = lo; k <= hi; ++k) {
        auto it = items.find(k);
        v.push_back(it == items.end() ? ExactMatrix(ring, 0, 0) : it->second);
    }
    return GradedMatrices(ring, lo, std::move(v));
}

// Graded family checked against the expected shape in each degree.
std::function<ExactMatrix(int)> shaped(const GradedMatrices& g, const std::string& where,
                                       std::function<std::pair<std::size_t, std::size_t>(int)> shape) {
    for (int k = g.lo(); k <= g.hi() && !g.items().empty(); ++k) {
        const ExactMatrix& m = g(k);
        if (m.rows() == 0 && m.cols() == 0) continue;
        auto [r, c] = shape(k);
        if (m.rows() != r || m.cols() != c)
            throw ParseError(where, "component in degree " + std::to_string(k) + " has shape " +
                                        std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + ", expected " +
                                        std::to_string(r) + "x" + std::to_string(c));
    }
    return [g](int k) { return g(k); };
}

} // namespace

std::string dump_canonical(const json& j) { return j.dump(2) + "\n"; }

// -- primitives ---------------------------------------------------------------

json ring_to_json(const Ring& ring) {
    switch (ring.kind()) {
    case RingKind::integers:
        return {{"kind", "integers"}};
    case RingKind::rationals:
        return {{"kind", "rationals"}};
    case RingKind::prime_field:
        return {{"kind", "prime-field"}, {"characteristic", ring.characteristic()}};
    }
    return {};
}

Ring ring_from_json(const json& j, const std::string& where) {
    std::string kind = string_field(j, "kind", where);
    if (kind == "integers") return Ring::integers();
    if (kind == "rationals") return Ring::rationals();
    if (kind == "prime-field") {
        long long p = integer_field(j, "characteristic", where);
        try {
            if (p < 2) throw std::invalid_argument("characteristic must be a prime");
            return Ring::prime_field(static_cast<unsigned long>(p));
        } catch (const std::invalid_argument& e) {
            throw ParseError(at(where, "characteristic"), e.what());
        }
    }
    throw ParseError(at(where, "kind"), "unknown ring '" + kind + "'");
}

json matrix_to_json(const ExactMatrix& m) {
    json entries = json::array();
    for (const auto& x : m.entries()) entries.push_back(m.ring().format(x));
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

ExactMatrix matrix_from_json(const json& j, const Ring& ring, const std::string& where) {
    std::size_t rows = count_field(j, "rows", where);
    std::size_t cols = count_field(j, "cols", where);
    const json& entries = array_field(j, "entries", where);
    if (entries.size() != rows * cols)
        throw ParseError(at(where, "entries"), std::to_string(entries.size()) + " entries for a " +
                                                   std::to_string(rows) + "x" + std::to_string(cols) + " matrix");
    ExactMatrix m(ring, rows, cols);
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const json& e = entries[i];
        std::string text;
        if (e.is_string())
            text = e.get<std::string>();
        else if (e.is_number_integer())
            text = std::to_string(e.get<long long>());
        else
            throw ParseError(at(at(where, "entries"), i), "expected a decimal string");
        try {
            m.set(i / cols, i % cols, ring.parse(text));
        } catch (const std::invalid_argument& ex) {
            throw ParseError(at(at(where, "entries"), i), ex.what());
        }
    }
    return m;
}

json complex_to_json(const ChainComplex& a) {
    json diffs = json::array();
    for (int k = a.min_degree(); k < a.max_degree(); ++k) diffs.push_back(matrix_to_json(a.differential(k)));
    return {{"min_degree", a.min_degree()},
            {"ranks", a.ranks()},
            {"differentials", diffs},
            {"twist_weight", a.twist_weight()}};
}

ChainComplex complex_from_json(const json& j, const Ring& ring, const std::string& where) {
    int lo = static_cast<int>(integer_field(j, "min_degree", where));
    const json& ranks_j = array_field(j, "ranks", where);
    std::vector<std::size_t> ranks;
    for (std::size_t i = 0; i < ranks_j.size(); ++i) {
        if (!ranks_j[i].is_number_integer() || ranks_j[i].get<long long>() < 0)
            throw ParseError(at(at(where, "ranks"), i), "expected a nonnegative count");
        ranks.push_back(ranks_j[i].get<std::size_t>());
    }
    const json& diffs_j = array_field(j, "differentials", where);
    if (ranks.size() > 0 && diffs_j.size() + 1 != ranks.size())
        throw ParseError(at(where, "differentials"), std::to_string(ranks.size()) + " ranks need " +
                                                         std::to_string(ranks.size() - 1) + " differentials");
    if (ranks.empty() && !diffs_j.empty()) throw ParseError(at(where, "differentials"), "complex has no terms");
    std::vector<ExactMatrix> diffs;
    for (std::size_t i = 0; i < diffs_j.size(); ++i) {
        const std::string w = at(at(where, "differentials"), i);
        int k = lo + static_cast<int>(i);
        ExactMatrix d;
        try {
            d = matrix_from_json(diffs_j[i], ring, w);
        } catch (const ParseError& e) {
            throw ParseError(e.where(), "differential in degree " + std::to_string(k) + ": " +
                                            std::string(e.what()).substr(e.where().size() + 2));
        }
        if (d.rows() != ranks[i + 1] || d.cols() != ranks[i])
            throw ParseError(w, "differential in degree " + std::to_string(k) + " has shape " +
                                    std::to_string(d.rows()) + "x" + std::to_string(d.cols()) + ", expected " +
                                    std::to_string(ranks[i + 1]) + "x" + std::to_string(ranks[i]));
        diffs.push_back(std::move(d));
    }
    int twist = 0;
    if (j.contains("twist_weight")) twist = static_cast<int>(integer_field(j, "twist_weight", where));
    ChainComplex a(ring, lo, std::move(ranks), std::move(diffs), twist);
    if (Check c = validate(a); !c) throw ParseError(where, c.message);
    return a;
}

json module_to_json(const ModulePresentation& m) {
    json torsion = json::array();
    for (const auto& d : m.invariant_factors) torsion.push_back(m.ring.format(d));
    return {{"free_rank", m.free_rank}, {"invariant_factors", torsion}};
}

// -- instances --------------------------------------------------------------------

std::string serialize_instance(const Instance& inst) {
    const ChainComplex& a = inst.complex();
    json lef;
    if (const auto* m = std::get_if<LefschetzMap>(&inst.data)) {
        lef = {{"mode", "power"}, {"components", graded_to_json(m->phi.components())}};
    } else {
        const auto& fam = std::get<LefschetzFamily>(inst.data);
        json members = json::array();
        for (std::size_t i = 0; i < fam.maps.size(); ++i)
            members.push_back({{"n", i + 1}, {"components", graded_to_json(fam.maps[i].components())}});
        lef = {{"mode", "family"}, {"members", members}};
    }
    json j = {{"format_version", kFormatVersion},
              {"kind", "instance"},
              {"ring", ring_to_json(a.ring())},
              {"complex", complex_to_json(a)},
              {"lefschetz", lef},
              {"metadata", inst.metadata}};
    return dump_canonical(j);
}

Instance parse_instance(std::string_view text) {
    json j = parse_json(text);
    check_header(j, "instance");
    Ring ring = ring_from_json(field(j, "ring", ""), "ring");
    auto pa = share(complex_from_json(field(j, "complex", ""), ring, "complex"));
    const json& lef = field(j, "lefschetz", "");
    std::string mode = string_field(lef, "mode", "lefschetz");
    Instance inst{LefschetzMap{pa, zero_map(pa, pa)}, json::object()};
    auto member = [&](const json& comps, int n, const std::string& where) {
        GradedMatrices g = graded_from_json(comps, ring, where);
        auto fn = shaped(g, where, [&](int k) { return std::make_pair(pa->rank(k + n), pa->rank(k - n)); });
        return make_family_member(pa, n, fn);
    };
    if (mode == "power") {
        inst.data = LefschetzMap{pa, member(field(lef, "components", "lefschetz"), 1, "lefschetz.components")};
    } else if (mode == "family") {
        const json& members = array_field(lef, "members", "lefschetz");
        LefschetzFamily fam{pa, {}};
        for (std::size_t i = 0; i < members.size(); ++i) {
            const std::string w = at("lefschetz.members", i);
            if (integer_field(members[i], "n", w) != static_cast<long long>(i + 1))
                throw ParseError(at(w, "n"), "members must be listed for n = 1, 2, ... in order");
            fam.maps.push_back(member(field(members[i], "components", w), static_cast<int>(i + 1), at(w, "components")));
        }
        inst.data = std::move(fam);
    } else {
        throw ParseError("lefschetz.mode", "expected 'power' or 'family'");
    }
    if (Check c = validate_lefschetz(inst.data); !c)
        throw ParseError("lefschetz", "chain condition fails in degree " + std::to_string(c.degree) + ": " + c.message);
    if (j.contains("metadata")) inst.metadata = j["metadata"];
    return inst;
}

std::string instance_hash(const Instance& inst) {
    std::string bytes = serialize_instance(inst);
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
    std::string hex;
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", digest[i]);
        hex += buf;
    }
    return hex;
}

// -- certificates -----------------------------------------------------------------------

std::string serialize_certificate(const DecompositionCertificate& cert, const Ring& ring, const std::string& hash) {
    json summands = json::array();
    for (const auto& s : cert.summands)
        summands.push_back({{"k", s.k},
                            {"twist_weight", s.twist_weight},
                            {"complex", complex_to_json(s.complex)},
                            {"ins", graded_to_json(s.ins)},
                            {"prj", graded_to_json(s.prj)}});
    json pairs = json::array();
    for (const auto& p : cert.pairs)
        pairs.push_back({{"identity", p.j == p.k ? "prj_j ins_k ~ id" : "prj_j ins_k ~ 0"},
                         {"j", cert.summands[p.j].k},
                         {"k", cert.summands[p.k].k},
                         {"components", graded_to_json(p.homotopy)}});
    json j = {{"format_version", kFormatVersion},
              {"kind", "certificate"},
              {"instance_hash", hash},
              {"ring", ring_to_json(ring)},
              {"summands", summands},
              {"witnesses",
               {{"global", {{"identity", "sum_k ins_k prj_k ~ id"}, {"components", graded_to_json(cert.global)}}},
                {"pairs", pairs}}}};
    return dump_canonical(j);
}

CertificateFile parse_certificate(std::string_view text) {
    json j = parse_json(text);
    check_header(j, "certificate");
    CertificateFile out;
    out.instance_hash = string_field(j, "instance_hash", "");
    out.ring = ring_from_json(field(j, "ring", ""), "ring");
    const Ring& ring = out.ring;
    const json& summands = array_field(j, "summands", "");
    std::map<long long, std::size_t> position;
    for (std::size_t i = 0; i < summands.size(); ++i) {
        const std::string w = at("summands", i);
        const json& s = summands[i];
        int k = static_cast<int>(integer_field(s, "k", w));
        if (position.count(k)) throw ParseError(at(w, "k"), "summand k=" + std::to_string(k) + " given twice");
        position[k] = i;
        int tw = static_cast<int>(integer_field(s, "twist_weight", w));
        ChainComplex r = complex_from_json(field(s, "complex", w), ring, at(w, "complex"));
        out.certificate.summands.push_back({k, tw, std::move(r), graded_from_json(field(s, "ins", w), ring, at(w, "ins")),
                                            graded_from_json(field(s, "prj", w), ring, at(w, "prj"))});
    }
    const json& wit = field(j, "witnesses", "");
    out.certificate.global =
        graded_from_json(field(field(wit, "global", "witnesses"), "components", "witnesses.global"), ring,
                         "witnesses.global.components");
    const json& pairs = array_field(wit, "pairs", "witnesses");
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const std::string w = at("witnesses.pairs", i);
        auto lookup = [&](const char* key) {
            long long k = integer_field(pairs[i], key, w);
            auto it = position.find(k);
            if (it == position.end()) throw ParseError(at(w, key), "no summand with k=" + std::to_string(k));
            return it->second;
        };
        std::size_t pj = lookup("j"), pk = lookup("k");
        out.certificate.pairs.push_back(
            {pj, pk, graded_from_json(field(pairs[i], "components", w), ring, at(w, "components"))});
    }
    return out;
}

std::string serialize_complex(const ChainComplex& a) {
    json j = {{"format_version", kFormatVersion},
              {"kind", "complex"},
              {"ring", ring_to_json(a.ring())},
              {"complex", complex_to_json(a)}};
    return dump_canonical(j);
}

ChainComplex parse_complex_file(std::string_view text) {
    json j = parse_json(text);
    if (j.is_object() && j.contains("kind") && j["kind"] == "instance") return parse_instance(text).complex();
    check_header(j, "complex");
    Ring ring = ring_from_json(field(j, "ring", ""), "ring");
    return complex_from_json(field(j, "complex", ""), ring, "complex");
}

} // namespace hld
