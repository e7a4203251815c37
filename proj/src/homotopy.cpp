#include "hld/homotopy.hpp"

#include "hld/errors.hpp"

#include <map>
#include <numeric>

namespace hld {

// -- LinearSystem ------------------------------------------------------------

std::size_t LinearSystem::add_unknown(std::size_t rows, std::size_t cols) {
    std::size_t offset = unknowns_.empty() ? 0 : unknowns_.back().offset + unknowns_.back().rows * unknowns_.back().cols;
    unknowns_.push_back({rows, cols, offset});
    return unknowns_.size() - 1;
}

std::size_t LinearSystem::add_equation(ExactMatrix rhs) {
    require_same_ring(ring_, rhs.ring(), "add_equation");
    std::size_t offset =
        equations_.empty() ? 0 : equations_.back().offset + equations_.back().rows * equations_.back().cols;
    equations_.push_back({rhs.rows(), rhs.cols(), offset});
    rhs_.push_back(std::move(rhs));
    terms_.emplace_back();
    return equations_.size() - 1;
}

void LinearSystem::add_term(std::size_t equation, std::size_t unknown, const ExactMatrix* left,
                            const ExactMatrix* right, const Scalar& coeff) {
    const Shape& e = equations_.at(equation);
    const Shape& u = unknowns_.at(unknown);
    std::size_t lrows = left ? left->rows() : u.rows;
    std::size_t lcols = left ? left->cols() : u.rows;
    std::size_t rrows = right ? right->rows() : u.cols;
    std::size_t rcols = right ? right->cols() : u.cols;
    if (lrows != e.rows || lcols != u.rows || rrows != u.cols || rcols != e.cols)
        throw DimensionError("linear system term does not fit its equation");
    Term t{unknown, std::nullopt, std::nullopt, coeff};
    if (left) t.left = *left;
    if (right) t.right = *right;
    terms_[equation].push_back(std::move(t));
}

std::size_t LinearSystem::unknown_count() const {
    return unknowns_.empty() ? 0 : unknowns_.back().offset + unknowns_.back().rows * unknowns_.back().cols;
}

std::size_t LinearSystem::equation_count() const {
    return equations_.empty() ? 0 : equations_.back().offset + equations_.back().rows * equations_.back().cols;
}

ExactMatrix LinearSystem::coefficients() const {
    ExactMatrix m(ring_, equation_count(), unknown_count());
    const auto count = static_cast<long>(equations_.size());
    // Equations own disjoint row blocks, so the loop is race-free.
#pragma omp parallel for schedule(dynamic)
    for (long ei = 0; ei < count; ++ei) {
        const Shape& e = equations_[static_cast<std::size_t>(ei)];
        for (const Term& t : terms_[static_cast<std::size_t>(ei)]) {
            const Shape& u = unknowns_[t.unknown];
            struct Entry {
                std::size_t outer, inner;
                Scalar value;
            };
            std::vector<Entry> lefts;  // (i, a, L(i, a))
            if (t.left) {
                for (std::size_t i = 0; i < e.rows; ++i)
                    for (std::size_t a = 0; a < u.rows; ++a)
                        if (sgn((*t.left)(i, a)) != 0) lefts.push_back({i, a, (*t.left)(i, a)});
            } else {
                for (std::size_t i = 0; i < e.rows; ++i) lefts.push_back({i, i, Scalar(1)});
            }
            std::vector<Entry> rights;  // (j, b, R(b, j))
            if (t.right) {
                for (std::size_t b = 0; b < u.cols; ++b)
                    for (std::size_t j = 0; j < e.cols; ++j)
                        if (sgn((*t.right)(b, j)) != 0) rights.push_back({j, b, (*t.right)(b, j)});
            } else {
                for (std::size_t j = 0; j < e.cols; ++j) rights.push_back({j, j, Scalar(1)});
            }
            for (const auto& l : lefts)
                for (const auto& r : rights)
                    m(e.offset + l.outer * e.cols + r.outer, u.offset + l.inner * u.cols + r.inner) +=
                        t.coeff * l.value * r.value;
        }
    }
    if (ring_.needs_reduction())
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) ring_.normalize(m(i, j));
    return m;
}

ExactMatrix LinearSystem::right_side() const {
    ExactMatrix b(ring_, equation_count(), 1);
    for (std::size_t q = 0; q < equations_.size(); ++q) {
        const Shape& e = equations_[q];
        for (std::size_t i = 0; i < e.rows; ++i)
            for (std::size_t j = 0; j < e.cols; ++j) b(e.offset + i * e.cols + j, 0) = rhs_[q](i, j);
    }
    return b;
}

ExactMatrix LinearSystem::unpack(std::size_t unknown, const ExactMatrix& column, std::size_t col) const {
    const Shape& u = unknowns_.at(unknown);
    ExactMatrix x(ring_, u.rows, u.cols);
    for (std::size_t i = 0; i < u.rows; ++i)
        for (std::size_t j = 0; j < u.cols; ++j) x(i, j) = column(u.offset + i * u.cols + j, col);
    return x;
}

std::optional<std::vector<ExactMatrix>> LinearSystem::solve() const {
    auto sol = solve_linear(coefficients(), right_side());
    if (!sol) return std::nullopt;
    std::vector<ExactMatrix> out;
    out.reserve(unknowns_.size());
    for (std::size_t u = 0; u < unknowns_.size(); ++u) out.push_back(unpack(u, sol->particular));
    return out;
}

namespace {

// Degree-indexed unknown handles; absent when the block has no entries.
using Slots = std::map<int, std::size_t>;

const ExactMatrix* slot_matrix(const std::vector<ExactMatrix>& sol, const Slots& slots, int k) {
    auto it = slots.find(k);
    return it == slots.end() ? nullptr : &sol[it->second];
}

ExactMatrix from_slots(const std::vector<ExactMatrix>& sol, const Slots& slots, int k, const Ring& ring,
                       std::size_t rows, std::size_t cols) {
    if (const ExactMatrix* m = slot_matrix(sol, slots, k)) return *m;
    return ExactMatrix(ring, rows, cols);
}

void require(const Check& c, const char* what) {
    if (!c) throw InternalWitnessFailure(std::string(what) + ": " + c.message);
}

DegreeRange shifted(DegreeRange r, int by) { return r.empty() ? r : DegreeRange{r.lo + by, r.hi + by}; }

// Adds unknowns h^k : S^k -> T^{k-1} for every nonempty block.
Slots add_degree_minus_one_unknowns(LinearSystem& sys, const ChainComplex& s, const ChainComplex& t) {
    Slots slots;
    DegreeRange r = range_union(s.support(), shifted(t.support(), 1));
    for (int k = r.lo; k <= r.hi && !r.empty(); ++k)
        if (t.rank(k - 1) * s.rank(k) > 0) slots[k] = sys.add_unknown(t.rank(k - 1), s.rank(k));
    return slots;
}

// Adds the terms d_T^{k-1} h^k + h^{k+1} d_S^k to equation eq.
void add_boundary_terms(LinearSystem& sys, std::size_t eq, const Slots& h, const ChainComplex& s,
                        const ChainComplex& t, int k, const Scalar& coeff = Scalar(1)) {
    if (auto it = h.find(k); it != h.end()) sys.add_term(eq, it->second, &t.differential(k - 1), nullptr, coeff);
    if (auto it = h.find(k + 1); it != h.end()) sys.add_term(eq, it->second, nullptr, &s.differential(k), coeff);
}

} // namespace

// -- null homotopies and inverses ----------------------------------------------

std::optional<Homotopy> null_homotopy(const ChainMap& u) {
    const ChainComplex& s = u.source();
    const ChainComplex& t = u.target();
    const Ring ring = s.ring();
    LinearSystem sys(ring);
    Slots h = add_degree_minus_one_unknowns(sys, s, t);
    DegreeRange r = range_union(s.support(), t.support());
    for (int k = r.lo; k <= r.hi && !r.empty(); ++k) {
        if (t.rank(k) * s.rank(k) == 0) continue;
        std::size_t eq = sys.add_equation(u(k));
        add_boundary_terms(sys, eq, h, s, t, k);
    }
    auto sol = sys.solve();
    if (!sol) return std::nullopt;
    Homotopy w(u, zero_map(u.source_ptr(), u.target_ptr()),
               [&](int k) { return from_slots(*sol, h, k, ring, t.rank(k - 1), s.rank(k)); });
    require(check_homotopy(w), "null_homotopy");
    return w;
}

std::optional<HomotopyInverse> homotopy_inverse(const ChainMap& f) {
    const ChainComplex& x = f.source();
    const ChainComplex& y = f.target();
    const Ring ring = x.ring();
    LinearSystem sys(ring);
    DegreeRange r = range_union(x.support(), y.support());
    Slots g;
    for (int k = r.lo; k <= r.hi && !r.empty(); ++k)
        if (x.rank(k) * y.rank(k) > 0) g[k] = sys.add_unknown(x.rank(k), y.rank(k));
    Slots hs = add_degree_minus_one_unknowns(sys, x, x);
    Slots ht = add_degree_minus_one_unknowns(sys, y, y);
    const Scalar minus_one(-1);
    for (int k = r.lo; k <= r.hi && !r.empty(); ++k) {
        // d_X g - g d_Y = 0
        if (x.rank(k + 1) * y.rank(k) > 0) {
            std::size_t eq = sys.add_equation(ExactMatrix(ring, x.rank(k + 1), y.rank(k)));
            if (auto it = g.find(k); it != g.end()) sys.add_term(eq, it->second, &x.differential(k), nullptr);
            if (auto it = g.find(k + 1); it != g.end())
                sys.add_term(eq, it->second, nullptr, &y.differential(k), minus_one);
        }
        // d s + s d - g f = -id_X
        if (x.rank(k) > 0) {
            std::size_t eq = sys.add_equation(-ExactMatrix::identity(ring, x.rank(k)));
            add_boundary_terms(sys, eq, hs, x, x, k);
            if (auto it = g.find(k); it != g.end()) sys.add_term(eq, it->second, nullptr, &f(k), minus_one);
        }
        // d t + t d - f g = -id_Y
        if (y.rank(k) > 0) {
            std::size_t eq = sys.add_equation(-ExactMatrix::identity(ring, y.rank(k)));
            add_boundary_terms(sys, eq, ht, y, y, k);
            if (auto it = g.find(k); it != g.end()) sys.add_term(eq, it->second, &f(k), nullptr, minus_one);
        }
    }
    auto sol = sys.solve();
    if (!sol) return std::nullopt;
    ChainMap inv(f.target_ptr(), f.source_ptr(),
                 [&](int k) { return from_slots(*sol, g, k, ring, x.rank(k), y.rank(k)); });
    Homotopy src(compose(inv, f), identity_map(f.source_ptr()),
                 [&](int k) { return from_slots(*sol, hs, k, ring, x.rank(k - 1), x.rank(k)); });
    Homotopy tgt(compose(f, inv), identity_map(f.target_ptr()),
                 [&](int k) { return from_slots(*sol, ht, k, ring, y.rank(k - 1), y.rank(k)); });
    require(check_chain_map(inv), "homotopy_inverse map");
    require(check_homotopy(src), "homotopy_inverse source witness");
    require(check_homotopy(tgt), "homotopy_inverse target witness");
    return HomotopyInverse{std::move(inv), std::move(src), std::move(tgt)};
}

ModulePresentation hom_k_presentation(const ChainComplex& a, const ChainComplex& b) {
    require_same_ring(a.ring(), b.ring(), "hom_k_presentation");
    const Ring ring = a.ring();
    DegreeRange r = range_union(a.support(), b.support());

    // Chain condition f |-> d_B f - f d_A on degree-0 families.
    LinearSystem cond(ring);
    Slots f;
    for (int k = r.lo; k <= r.hi && !r.empty(); ++k)
        if (b.rank(k) * a.rank(k) > 0) f[k] = cond.add_unknown(b.rank(k), a.rank(k));
    for (int k = r.lo - 1; k <= r.hi && !r.empty(); ++k) {
        if (b.rank(k + 1) * a.rank(k) == 0) continue;
        std::size_t eq = cond.add_equation(ExactMatrix(ring, b.rank(k + 1), a.rank(k)));
        if (auto it = f.find(k); it != f.end()) cond.add_term(eq, it->second, &b.differential(k), nullptr);
        if (auto it = f.find(k + 1); it != f.end())
            cond.add_term(eq, it->second, nullptr, &a.differential(k), Scalar(-1));
    }

    // Null-homotopic families h |-> d h + h d, laid out like the unknowns above.
    LinearSystem bound(ring);
    Slots h = add_degree_minus_one_unknowns(bound, a, b);
    for (const auto& [k, slot] : f) {
        std::size_t eq = bound.add_equation(ExactMatrix(ring, b.rank(k), a.rank(k)));
        add_boundary_terms(bound, eq, h, a, b, k);
    }

    KernelData chain_maps = kernel_data(cond.coefficients());
    return module_from_cokernel(chain_maps.coordinates * bound.coefficients());
}

// -- minimization -----------------------------------------------------------------

namespace {

ExactMatrix without_row(const ExactMatrix& m, std::size_t r) {
    return vstack(m.row_range(0, r), m.row_range(r + 1, m.rows() - r - 1));
}

ExactMatrix without_col(const ExactMatrix& m, std::size_t c) {
    return hstack(m.columns(0, c), m.columns(c + 1, m.cols() - c - 1));
}

// Working state of the reduction, indexed by i = k - lo.
struct Reducer {
    Ring ring;
    int lo;
    std::vector<std::size_t> ranks;
    std::vector<ExactMatrix> d;  // d[i] : cur^{lo+i} -> cur^{lo+i+1}
    std::vector<ExactMatrix> f;  // A -> cur
    std::vector<ExactMatrix> g;  // cur -> A
    std::vector<ExactMatrix> h;  // h[i] : A^{lo+i} -> A^{lo+i-1}, g f - id = d h + h d

    std::size_t size() const { return ranks.size(); }

    // Cancels the unit d[i](row, col) (Gaussian elimination on complexes).
    void eliminate(std::size_t i, std::size_t row, std::size_t col) {
        const ExactMatrix& di = d[i];
        Scalar u_inv = ring.inverse(di(row, col));
        ExactMatrix delta = di.row_range(row, 1);
        ExactMatrix gamma = di.columns(col, 1);
        ExactMatrix g_col = g[i].columns(col, 1);
        ExactMatrix f_row = f[i + 1].row_range(row, 1);

        ExactMatrix reduced = di - gamma.scaled(u_inv) * delta;
        d[i] = without_col(without_row(reduced, row), col);
        if (i > 0) d[i - 1] = without_row(d[i - 1], col);
        d[i + 1] = without_col(d[i + 1], row);

        f[i] = without_row(f[i], col);
        ExactMatrix fi1 = f[i + 1] - gamma.scaled(u_inv) * f_row;
        f[i + 1] = without_row(fi1, row);

        ExactMatrix gi = g[i] - g_col * delta.scaled(u_inv);
        g[i] = without_col(gi, col);
        g[i + 1] = without_col(g[i + 1], row);

        h[i + 1] = h[i + 1] - (g_col * f_row).scaled(u_inv);
        --ranks[i];
        --ranks[i + 1];
    }

    // Changes bases around d[i] so that it becomes its Smith form.
    void diagonalize(std::size_t i) {
        SmithForm s = smith_normal_form(d[i]);
        d[i] = s.diagonal;
        if (i > 0) d[i - 1] = s.right_inverse * d[i - 1];
        d[i + 1] = d[i + 1] * s.left_inverse;
        f[i] = s.right_inverse * f[i];
        f[i + 1] = s.left * f[i + 1];
        g[i] = g[i] * s.right;
        g[i + 1] = g[i + 1] * s.left_inverse;
    }

    bool find_unit(std::size_t& i, std::size_t& row, std::size_t& col) const {
        for (i = 0; i + 1 < size(); ++i)
            for (row = 0; row < d[i].rows(); ++row)
                for (col = 0; col < d[i].cols(); ++col)
                    if (ring.is_unit(d[i](row, col))) return true;
        return false;
    }

    // Over the integers: a differential whose entries have gcd 1 has a unit
    // elementary divisor hidden behind a change of basis.
    bool find_hidden_unit(std::size_t& i) const {
        if (ring.is_field()) return false;
        for (i = 0; i + 1 < size(); ++i) {
            mpz_class gcd = 0;
            for (const auto& x : d[i].entries()) {
                mpz_gcd(gcd.get_mpz_t(), gcd.get_mpz_t(), x.get_num_mpz_t());
                if (gcd == 1) return true;
            }
        }
        return false;
    }
};

} // namespace

Minimization minimize(const ChainComplex& a) {
    const Ring ring = a.ring();
    auto pa = share(a);
    if (a.is_zero()) {
        ChainMap id = identity_map(pa);
        return {a, id, id, Homotopy::zero(id), Homotopy::zero(id)};
    }
    Reducer red{ring, a.min_degree(), a.ranks(), {}, {}, {}, {}};
    const std::size_t n = red.size();
    for (std::size_t i = 0; i < n; ++i) {
        int k = a.min_degree() + static_cast<int>(i);
        red.d.push_back(a.differential(k));
        red.f.push_back(ExactMatrix::identity(ring, a.rank(k)));
        red.g.push_back(ExactMatrix::identity(ring, a.rank(k)));
        red.h.emplace_back(ring, a.rank(k - 1), a.rank(k));
    }
    for (;;) {
        std::size_t i = 0, row = 0, col = 0;
        if (red.find_unit(i, row, col)) {
            red.eliminate(i, row, col);
            continue;
        }
        if (red.find_hidden_unit(i)) {
            red.diagonalize(i);
            continue;
        }
        break;
    }
    const int lo = a.min_degree();
    std::vector<ExactMatrix> diffs(red.d.begin(), red.d.end() - 1);
    ChainComplex m(ring, lo, red.ranks, std::move(diffs), a.twist_weight());
    auto pm = share(m);
    auto at = [&](const std::vector<ExactMatrix>& v, int k, std::size_t rows, std::size_t cols) {
        if (k < lo || k >= lo + static_cast<int>(n)) return ExactMatrix(ring, rows, cols);
        return v[static_cast<std::size_t>(k - lo)];
    };
    ChainMap to(pa, pm, [&](int k) { return at(red.f, k, m.rank(k), a.rank(k)); });
    ChainMap from(pm, pa, [&](int k) { return at(red.g, k, a.rank(k), m.rank(k)); });
    Homotopy witness(compose(from, to), identity_map(pa),
                     [&](int k) { return at(red.h, k, a.rank(k - 1), a.rank(k)); });
    ChainMap back_map = compose(to, from);
    ChainMap id_m = identity_map(pm);
    if (!maps_equal(back_map, id_m)) throw InternalWitnessFailure("minimize: to_min ∘ from_min != id");
    require(check_chain_map(to), "minimize to_min");
    require(check_chain_map(from), "minimize from_min");
    require(check_homotopy(witness), "minimize witness");
    Homotopy back(back_map, id_m, [&](int k) { return ExactMatrix(ring, m.rank(k - 1), m.rank(k)); });
    return {std::move(m), std::move(to), std::move(from), std::move(witness), std::move(back)};
}

// -- splitting ------------------------------------------------------------------------

SplitData split_with_retraction(const ChainMap& f, const ChainMap& g, const Homotopy& w) {
    if (!maps_equal(w.from(), compose(g, f)) || !maps_equal(w.to(), identity_map(f.source_ptr())))
        throw std::invalid_argument("split_with_retraction: witness is not a homotopy g∘f ~ id");
    if (Check c = check_homotopy(w); !c) throw std::invalid_argument("split_with_retraction: " + c.message);

    const ChainComplex& x = f.source();
    const ChainComplex& y = f.target();
    const Ring ring = x.ring();
    Cone c = cone(f);
    auto pc = c.incl.target_ptr();
    const ChainComplex& cc = *pc;

    // ι_C(a, b) = -f w a + (1 - f g) b
    ChainMap iota_c(pc, f.target_ptr(), [&](int k) {
        ExactMatrix m(ring, y.rank(k), x.rank(k + 1) + y.rank(k));
        m.paste(0, 0, -(f(k) * w(k + 1)));
        m.paste(0, x.rank(k + 1), ExactMatrix::identity(ring, y.rank(k)) - f(k) * g(k));
        return m;
    });
    const ChainMap& pi_c = c.incl;

    // π_C ι_C ~ id_C via L(a, b) = (w a + g b, 0), recorded from id to π_C ι_C.
    Homotopy l(identity_map(pc), compose(pi_c, iota_c), [&](int k) {
        ExactMatrix m(ring, cc.rank(k - 1), cc.rank(k));
        m.paste(0, 0, w(k + 1));
        m.paste(0, x.rank(k + 1), g(k));
        return m;
    });
    // π ι_C ~ 0 via K(a, b) = -w w a - w g b.
    Homotopy kk(compose(g, iota_c), zero_map(pc, f.source_ptr()), [&](int k) {
        ExactMatrix m(ring, x.rank(k - 1), cc.rank(k));
        m.paste(0, 0, -(w(k) * w(k + 1)));
        m.paste(0, x.rank(k + 1), -(w(k) * g(k)));
        return m;
    });
    // π_C ι ~ 0 via a -> (a, 0).
    Homotopy h1(compose(pi_c, f), zero_map(f.source_ptr(), pc), [&](int k) {
        return vstack(ExactMatrix::identity(ring, x.rank(k)), ExactMatrix(ring, y.rank(k - 1), x.rank(k)));
    });
    ChainMap total = add(compose(f, g), compose(iota_c, pi_c));
    ChainMap id_y = identity_map(f.target_ptr());
    if (!maps_equal(total, id_y)) throw InternalWitnessFailure("split: ι π + ι_C π_C != id");

    // Replace the cone by its minimal model.
    Minimization mc = minimize(cc);
    const ChainMap& t = mc.to_min;
    const ChainMap& s = mc.from_min;
    ChainMap iota_c_min = compose(iota_c, s);
    ChainMap pi_c_min = compose(t, pi_c);
    auto pm = t.target_ptr();

    Homotopy w2 = relabel(reverse(whisker(t, l, s)), compose(pi_c_min, iota_c_min), identity_map(pm));
    Homotopy w3 = whisker_right(kk, s);
    Homotopy w4 = whisker_left(t, h1);
    ChainMap fg = compose(f, g);
    Homotopy w5 = add_constant(whisker(iota_c, mc.witness, pi_c), fg);
    w5 = relabel(w5, add(fg, compose(iota_c_min, pi_c_min)), id_y);

    SplitData out{y, x, mc.complex, f, g, std::move(iota_c_min), std::move(pi_c_min), w,
                  std::move(w2), std::move(w3), std::move(w4), std::move(w5)};
    require(check_split(out), "split_with_retraction");
    return out;
}

Check check_split(const SplitData& s) {
    for (const ChainMap* m : {&s.iota, &s.pi, &s.iota_c, &s.pi_c})
        if (Check c = check_chain_map(*m); !c) return c;
    auto id_x = identity_map(s.iota.source_ptr());
    auto id_c = identity_map(s.iota_c.source_ptr());
    auto id_y = identity_map(s.iota.target_ptr());
    struct Item {
        const Homotopy* h;
        ChainMap from, to;
        const char* name;
    };
    const Item items[] = {
        {&s.pi_iota, compose(s.pi, s.iota), id_x, "pi iota ~ id"},
        {&s.pic_iotac, compose(s.pi_c, s.iota_c), id_c, "piC iotaC ~ id"},
        {&s.pi_iotac, compose(s.pi, s.iota_c), zero_map(s.iota_c.source_ptr(), s.iota.source_ptr()), "pi iotaC ~ 0"},
        {&s.pic_iota, compose(s.pi_c, s.iota), zero_map(s.iota.source_ptr(), s.iota_c.source_ptr()), "piC iota ~ 0"},
        {&s.sum, add(compose(s.iota, s.pi), compose(s.iota_c, s.pi_c)), id_y, "sum ~ id"},
    };
    for (const auto& it : items) {
        if (Check c = check_homotopy_between(it.from, it.to, it.h->components()); !c)
            return Check::fail(c.degree, std::string(it.name) + ": " + c.message);
    }
    return Check::pass();
}

} // namespace hld
