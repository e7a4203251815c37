#include "hld/io.hpp"

#include "hld/errors.hpp"

#include <algorithm>
#include <random>

namespace hld {

using nlohmann::json;

// -- profiles ------------------------------------------------------------------

json profile_to_json(const GeneratorProfile& p) {
    json shapes = json::array();
    for (const auto& [k, s] : p.shapes)
        shapes.push_back({{"degree", k}, {"free_rank", s.free_rank}, {"torsion", s.torsion}});
    return {{"ring", ring_to_json(p.ring)},
            {"n0", p.n0},
            {"shapes", shapes},
            {"scramble_ops", p.scramble_ops},
            {"max_rank", p.max_rank},
            {"seed", p.seed},
            {"mode", p.mode == LefschetzMode::power ? "power" : "family"},
            {"lefschetz", p.zero_lefschetz ? "zero" : "standard"}};
}

GeneratorProfile profile_from_json(const json& j) {
    auto fail = [](const std::string& where, const std::string& what) { throw ParseError(where, what); };
    if (!j.is_object()) fail("profile", "expected an object");
    GeneratorProfile p;
    if (j.contains("ring")) p.ring = ring_from_json(j["ring"], "ring");
    if (!j.contains("n0") || !j["n0"].is_number_integer() || j["n0"].get<int>() < 0)
        fail("n0", "expected a nonnegative integer");
    p.n0 = j["n0"].get<int>();
    if (j.contains("shapes")) {
        if (!j["shapes"].is_array()) fail("shapes", "expected an array");
        for (std::size_t i = 0; i < j["shapes"].size(); ++i) {
            const json& s = j["shapes"][i];
            const std::string w = "shapes[" + std::to_string(i) + "]";
            if (!s.is_object() || !s.contains("degree") || !s["degree"].is_number_integer())
                fail(w, "expected an object with an integer 'degree'");
            int k = s["degree"].get<int>();
            ModuleShape shape;
            if (s.contains("free_rank")) {
                if (!s["free_rank"].is_number_integer() || s["free_rank"].get<long long>() < 0)
                    fail(w + ".free_rank", "expected a nonnegative integer");
                shape.free_rank = s["free_rank"].get<std::size_t>();
            }
            if (s.contains("torsion")) {
                if (!s["torsion"].is_array()) fail(w + ".torsion", "expected an array");
                for (const auto& t : s["torsion"]) {
                    if (!t.is_number_integer() || t.get<long long>() < 2)
                        fail(w + ".torsion", "torsion orders must be integers >= 2");
                    shape.torsion.push_back(t.get<long>());
                }
            }
            if (p.shapes.count(k)) fail(w, "degree " + std::to_string(k) + " given twice");
            p.shapes[k] = shape;
        }
    }
    if (j.contains("scramble_ops")) {
        if (!j["scramble_ops"].is_number_integer() || j["scramble_ops"].get<int>() < 0)
            fail("scramble_ops", "expected a nonnegative integer");
        p.scramble_ops = j["scramble_ops"].get<int>();
    }
    if (j.contains("max_rank")) {
        if (!j["max_rank"].is_number_unsigned()) fail("max_rank", "expected a nonnegative integer");
        p.max_rank = j["max_rank"].get<std::size_t>();
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) fail("seed", "expected a nonnegative integer");
        p.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("mode")) {
        if (j["mode"] == "power")
            p.mode = LefschetzMode::power;
        else if (j["mode"] == "family")
            p.mode = LefschetzMode::family;
        else
            fail("mode", "expected 'power' or 'family'");
    }
    if (j.contains("lefschetz")) {
        if (j["lefschetz"] == "zero")
            p.zero_lefschetz = true;
        else if (j["lefschetz"] != "standard")
            fail("lefschetz", "expected 'standard' or 'zero'");
    }
    return p;
}

GeneratorProfile parse_profile(std::string_view text) {
    try {
        return profile_from_json(json::parse(text));
    } catch (const json::parse_error& e) {
        throw ParseError("byte " + std::to_string(e.byte), e.what());
    }
}

namespace {

ModuleShape shape_at(const GeneratorProfile& p, int k) {
    auto it = p.shapes.find(k);
    return it == p.shapes.end() ? ModuleShape{} : it->second;
}

// a - b as multisets; nullopt when b is not contained in a.
std::optional<ModuleShape> difference(const ModuleShape& a, const ModuleShape& b) {
    if (b.free_rank > a.free_rank) return std::nullopt;
    ModuleShape d{a.free_rank - b.free_rank, a.torsion};
    for (long t : b.torsion) {
        auto it = std::find(d.torsion.begin(), d.torsion.end(), t);
        if (it == d.torsion.end()) return std::nullopt;
        d.torsion.erase(it);
    }
    std::sort(d.torsion.begin(), d.torsion.end());
    return d;
}

// Primitive pieces by string weight m: shape(m) = ⊕_{m' >= m, m' ≡ m} P_{m'}.
std::vector<ModuleShape> string_primitives(const GeneratorProfile& p) {
    if (p.n0 < 0) throw std::invalid_argument("profile: n0 must be nonnegative");
    for (const auto& [k, s] : p.shapes) {
        if (std::abs(k) > p.n0)
            throw std::invalid_argument("profile: degree " + std::to_string(k) + " lies outside [-n0, n0]");
        if (!(shape_at(p, -k) == s))
            throw std::invalid_argument("profile: shape(" + std::to_string(-k) + ") != shape(" + std::to_string(k) + ")");
        if (p.ring.is_field() && !s.torsion.empty())
            throw std::invalid_argument("profile: torsion requested over a field");
    }
    std::vector<ModuleShape> prim(static_cast<std::size_t>(p.n0) + 1);
    for (int m = p.n0; m >= 0; --m) {
        auto d = difference(shape_at(p, m), shape_at(p, m + 2));
        if (!d)
            throw std::invalid_argument("profile: shape(" + std::to_string(m + 2) + ") is not a summand of shape(" +
                                        std::to_string(m) + "), so no Lefschetz operator induces isomorphisms");
        prim[static_cast<std::size_t>(m)] = *d;
    }
    return prim;
}

// Working split model over degrees [lo, hi]; phi[k - lo] : A^{k-1} -> A^{k+1}.
struct Model {
    Ring ring;
    int lo, hi;
    std::vector<std::size_t> ranks;
    std::vector<ExactMatrix> d;    // d[i] : A^{lo+i} -> A^{lo+i+1}, i < size-1
    std::vector<ExactMatrix> phi;  // phi[i] : A^{lo+i-1} -> A^{lo+i+1}

    std::size_t idx(int k) const { return static_cast<std::size_t>(k - lo); }
    bool in(int k) const { return lo <= k && k <= hi; }
    std::size_t rank(int k) const { return in(k) ? ranks[idx(k)] : 0; }

    void allocate() {
        for (int k = lo; k < hi; ++k) d.emplace_back(ring, rank(k + 1), rank(k));
        for (int k = lo; k <= hi; ++k) phi.emplace_back(ring, rank(k + 1), rank(k - 1));
    }
    ExactMatrix* diff(int k) { return lo <= k && k < hi ? &d[idx(k)] : nullptr; }
    ExactMatrix* lef(int k) { return in(k) ? &phi[idx(k)] : nullptr; }
};

ExactMatrix with_row(const ExactMatrix& m, std::size_t at) {
    return vstack(vstack(m.row_range(0, at), ExactMatrix(m.ring(), 1, m.cols())), m.row_range(at, m.rows() - at));
}

ExactMatrix with_col(const ExactMatrix& m, std::size_t at) {
    return hstack(hstack(m.columns(0, at), ExactMatrix(m.ring(), m.rows(), 1)), m.columns(at, m.cols() - at));
}

// New coordinates x' = (I + c E_ab) x on A^j.
void elementary(Model& m, int j, std::size_t a, std::size_t b, const Scalar& c) {
    if (ExactMatrix* out = m.diff(j)) out->add_col_multiple(b, a, -c);
    if (ExactMatrix* in = m.diff(j - 1)) in->add_row_multiple(a, b, c);
    if (ExactMatrix* out = m.lef(j + 1)) out->add_col_multiple(b, a, -c);
    if (ExactMatrix* in = m.lef(j - 1)) in->add_row_multiple(a, b, c);
}

// Inserts Z ->(1) Z in degrees (j, j+1) at the given positions.
void insert_contractible(Model& m, int j, std::size_t p0, std::size_t p1) {
    if (ExactMatrix* x = m.diff(j - 1)) *x = with_row(*x, p0);
    if (ExactMatrix* x = m.diff(j)) *x = with_col(with_row(*x, p1), p0);
    if (ExactMatrix* x = m.diff(j + 1)) *x = with_col(*x, p1);
    if (ExactMatrix* x = m.lef(j + 1)) *x = with_col(*x, p0);
    if (ExactMatrix* x = m.lef(j - 1)) *x = with_row(*x, p0);
    if (ExactMatrix* x = m.lef(j + 2)) *x = with_col(*x, p1);
    if (ExactMatrix* x = m.lef(j)) *x = with_row(*x, p1);
    m.ranks[m.idx(j)]++;
    m.ranks[m.idx(j + 1)]++;
    m.diff(j)->set(p1, p0, Scalar(1));
}

Scalar random_unit_multiple(std::mt19937_64& rng, const Ring& ring) {
    std::uniform_int_distribution<int> dist(1, 3);
    std::bernoulli_distribution negative(0.5);
    Scalar c(dist(rng));
    if (negative(rng)) c = -c;
    ring.normalize(c);
    if (sgn(c) == 0) c = 1;
    return c;
}

} // namespace

Instance generate_instance(const GeneratorProfile& profile) {
    const Ring ring = profile.ring;
    std::vector<ModuleShape> prim = string_primitives(profile);
    const int n0 = profile.n0;

    // Cohomology of piece c at degree q sits on terms q-1 (torsion only) and q.
    struct Cell {
        int q;
        long c;  // 0: free
        std::size_t bottom, top;
    };
    struct Chain {
        std::vector<Cell> cells;  // degrees -m, -m+2, ..., m
    };
    Model m{ring, -n0 - 1, n0, std::vector<std::size_t>(static_cast<std::size_t>(2 * n0 + 2), 0), {}, {}};
    std::vector<Chain> chains;
    for (int w = 0; w <= n0; ++w) {
        const ModuleShape& p = prim[static_cast<std::size_t>(w)];
        std::vector<long> orders(p.free_rank, 0);
        orders.insert(orders.end(), p.torsion.begin(), p.torsion.end());
        for (long c : orders) {
            Chain chain;
            for (int q = -w; q <= w; q += 2) {
                Cell cell{q, c, 0, 0};
                if (c != 0) cell.bottom = m.ranks[m.idx(q - 1)]++;
                cell.top = m.ranks[m.idx(q)]++;
                chain.cells.push_back(cell);
            }
            chains.push_back(chain);
        }
    }
    if (profile.max_rank != 0 && *std::max_element(m.ranks.begin(), m.ranks.end()) > profile.max_rank)
        throw std::invalid_argument("profile: the split model already exceeds max_rank");
    m.allocate();
    for (const auto& chain : chains) {
        for (std::size_t i = 0; i < chain.cells.size(); ++i) {
            const Cell& cell = chain.cells[i];
            if (cell.c != 0) m.diff(cell.q - 1)->set(cell.top, cell.bottom, Scalar(cell.c));
            if (i + 1 == chain.cells.size() || profile.zero_lefschetz) continue;
            const Cell& next = chain.cells[i + 1];
            m.lef(cell.q + 1)->set(next.top, cell.top, Scalar(1));
            if (cell.c != 0) m.lef(cell.q)->set(next.bottom, cell.bottom, Scalar(1));
        }
    }

    std::mt19937_64 rng(profile.seed);
    std::uniform_int_distribution<int> op_kind(0, 2);
    for (int op = 0; op < profile.scramble_ops; ++op) {
        if (op_kind(rng) == 0) {
            std::uniform_int_distribution<int> deg(m.lo, m.hi - 1);
            int j = deg(rng);
            if (profile.max_rank != 0 && std::max(m.rank(j), m.rank(j + 1)) >= profile.max_rank) continue;
            std::size_t p0 = std::uniform_int_distribution<std::size_t>(0, m.rank(j))(rng);
            std::size_t p1 = std::uniform_int_distribution<std::size_t>(0, m.rank(j + 1))(rng);
            insert_contractible(m, j, p0, p1);
            continue;
        }
        std::vector<int> candidates;
        for (int k = m.lo; k <= m.hi; ++k)
            if (m.rank(k) >= 2) candidates.push_back(k);
        if (candidates.empty()) continue;
        int j = candidates[std::uniform_int_distribution<std::size_t>(0, candidates.size() - 1)(rng)];
        std::uniform_int_distribution<std::size_t> index(0, m.rank(j) - 1);
        std::size_t a = index(rng), b = index(rng);
        if (a == b) b = (b + 1) % m.rank(j);
        elementary(m, j, a, b, random_unit_multiple(rng, ring));
    }

    auto pa = share(ChainComplex(ring, m.lo, m.ranks, m.d));
    const ChainComplex& a = *pa;
    const int shift_lo = m.lo;  // trimming may move min_degree; Φ is looked up by absolute degree
    auto phi_at = [&](int k) {
        if (k < shift_lo || k > m.hi) return ExactMatrix(ring, a.rank(k + 1), a.rank(k - 1));
        return m.phi[static_cast<std::size_t>(k - shift_lo)];
    };
    LefschetzMap power = make_lefschetz_map(a, phi_at);

    Instance inst{power, json::object()};
    if (profile.mode == LefschetzMode::family) {
        LefschetzFamily fam{pa, {}};
        std::uniform_int_distribution<int> entry(-2, 2);
        std::bernoulli_distribution nonzero(0.3);
        for (int n = 1; n <= n0; ++n) {
            ChainMap psi = iterate_lefschetz(power, n);
            const ChainComplex& s = psi.source();
            const ChainComplex& t = psi.target();
            DegreeRange r = range_union(s.support(), t.support());
            // Redraw a few times when d h + h d happens to vanish; complexes
            // with zero differential admit no nonzero perturbation at all.
            ChainMap member = psi;
            for (int attempt = 0; attempt < 16 && maps_equal(member, psi); ++attempt) {
                std::map<int, ExactMatrix> h;
                for (int k = r.lo; k <= r.hi + 1; ++k) {
                    ExactMatrix x(ring, t.rank(k - 1), s.rank(k));
                    for (std::size_t i = 0; i < x.rows(); ++i)
                        for (std::size_t jj = 0; jj < x.cols(); ++jj)
                            if (nonzero(rng)) x.set(i, jj, Scalar(entry(rng)));
                    h.emplace(k, std::move(x));
                }
                auto hk = [&](int k) {
                    auto it = h.find(k);
                    return it == h.end() ? ExactMatrix(ring, t.rank(k - 1), s.rank(k)) : it->second;
                };
                member = make_family_member(pa, n, [&](int k) {
                    return psi(k) + t.differential(k - 1) * hk(k) + hk(k + 1) * s.differential(k);
                });
            }
            fam.maps.push_back(member);
        }
        inst.data = std::move(fam);
    }
    inst.metadata = {{"generator", profile_to_json(profile)}};
    if (Check c = validate(a); !c) throw InternalWitnessFailure("generator produced an invalid complex");
    if (Check c = validate_lefschetz(inst.data); !c)
        throw InternalWitnessFailure("generator produced an invalid Lefschetz operator: " + c.message);
    return inst;
}

GeneratorProfile random_profile(std::uint64_t seed, const Ring& ring, int max_n0, std::size_t max_rank,
                                int scramble_ops) {
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    static const long orders[] = {2, 3, 4, 9};
    for (;;) {
        GeneratorProfile p;
        p.ring = ring;
        p.seed = seed;
        p.scramble_ops = scramble_ops;
        p.max_rank = max_rank;
        p.n0 = std::uniform_int_distribution<int>(1, std::max(1, max_n0))(rng);
        std::vector<ModuleShape> prim(static_cast<std::size_t>(p.n0) + 1);
        for (int w = 0; w <= p.n0; ++w) {
            ModuleShape& s = prim[static_cast<std::size_t>(w)];
            s.free_rank = std::uniform_int_distribution<std::size_t>(0, 2)(rng);
            if (!ring.is_field()) {
                std::size_t t = std::uniform_int_distribution<std::size_t>(0, 2)(rng);
                for (std::size_t i = 0; i < t; ++i) s.torsion.push_back(orders[std::uniform_int_distribution<int>(0, 3)(rng)]);
            }
        }
        ModuleShape& top = prim[static_cast<std::size_t>(p.n0)];
        if (top.free_rank == 0 && top.torsion.empty()) top.free_rank = 1;
        std::vector<std::size_t> ranks(static_cast<std::size_t>(2 * p.n0 + 2), 0);
        for (int w = 0; w <= p.n0; ++w) {
            for (int q = -w; q <= w; q += 2) {
                ModuleShape& s = p.shapes[q];
                const ModuleShape& pr = prim[static_cast<std::size_t>(w)];
                s.free_rank += pr.free_rank;
                s.torsion.insert(s.torsion.end(), pr.torsion.begin(), pr.torsion.end());
                ranks[static_cast<std::size_t>(q + p.n0 + 1)] += pr.free_rank + pr.torsion.size();
                ranks[static_cast<std::size_t>(q + p.n0)] += pr.torsion.size();
            }
        }
        for (auto& [k, s] : p.shapes) std::sort(s.torsion.begin(), s.torsion.end());
        for (auto it = p.shapes.begin(); it != p.shapes.end();)
            it = (it->second.free_rank == 0 && it->second.torsion.empty()) ? p.shapes.erase(it) : std::next(it);
        if (*std::max_element(ranks.begin(), ranks.end()) <= max_rank) return p;
    }
}

} // namespace hld
