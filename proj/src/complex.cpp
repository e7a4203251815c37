#include "hld/complex.hpp"

#include "hld/errors.hpp"

#include <sstream>

namespace hld {

DegreeRange range_union(DegreeRange a, DegreeRange b) {
    if (a.empty()) return b;
    if (b.empty()) return a;
    return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

namespace {

std::string shape(const ExactMatrix& m) { return std::to_string(m.rows()) + "x" + std::to_string(m.cols()); }

ExactMatrix fitted(ExactMatrix m, const Ring& ring, std::size_t rows, std::size_t cols, const char* what, int k) {
    if (m.rows() == rows && m.cols() == cols) {
        require_same_ring(m.ring(), ring, what);
        return m;
    }
    if (m.rows() * m.cols() == 0 && rows * cols == 0) return ExactMatrix(ring, rows, cols);
    throw DimensionError(std::string(what) + " in degree " + std::to_string(k) + " has shape " + shape(m) +
                         ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
}

bool same_endpoint(const ComplexPtr& a, const ComplexPtr& b) { return a == b || same_terms(*a, *b); }

Scalar sign_of_shift(int m) { return (m % 2 == 0) ? Scalar(1) : Scalar(-1); }

} // namespace

// -- ChainComplex --------------------------------------------------------------

ChainComplex::ChainComplex(Ring ring) : ring_(ring), empty_(ring, 0, 0) {}

ChainComplex::ChainComplex(Ring ring, int min_degree, std::vector<std::size_t> ranks,
                           std::vector<ExactMatrix> differentials, int twist_weight)
    : ring_(ring), min_degree_(min_degree), empty_(ring, 0, 0), twist_weight_(twist_weight) {
    if (ranks.empty()) {
        if (!differentials.empty()) throw DimensionError("differentials given for a complex without terms");
        min_degree_ = 0;
        return;
    }
    if (differentials.size() + 1 != ranks.size())
        throw DimensionError("complex with " + std::to_string(ranks.size()) + " terms needs " +
                             std::to_string(ranks.size() - 1) + " differentials, got " +
                             std::to_string(differentials.size()));
    for (std::size_t i = 0; i < differentials.size(); ++i)
        differentials[i] = fitted(std::move(differentials[i]), ring, ranks[i + 1], ranks[i], "differential",
                                  min_degree + static_cast<int>(i));
    while (!ranks.empty() && ranks.front() == 0) {
        ranks.erase(ranks.begin());
        if (!differentials.empty()) differentials.erase(differentials.begin());
        ++min_degree_;
    }
    while (!ranks.empty() && ranks.back() == 0) {
        ranks.pop_back();
        if (!differentials.empty()) differentials.pop_back();
    }
    if (ranks.empty()) {
        min_degree_ = 0;
        return;
    }
    ranks_ = std::move(ranks);
    diffs_.reserve(ranks_.size() + 1);
    diffs_.emplace_back(ring, ranks_.front(), 0);
    for (auto& d : differentials) diffs_.push_back(std::move(d));
    diffs_.emplace_back(ring, 0, ranks_.back());
}

ChainComplex ChainComplex::from_differentials(Ring ring, int min_degree, std::vector<ExactMatrix> differentials,
                                              std::size_t single_rank) {
    std::vector<std::size_t> ranks;
    if (differentials.empty()) {
        ranks.push_back(single_rank);
    } else {
        ranks.push_back(differentials.front().cols());
        for (const auto& d : differentials) ranks.push_back(d.rows());
    }
    return {ring, min_degree, std::move(ranks), std::move(differentials)};
}

ChainComplex ChainComplex::concentrated(Ring ring, int degree, std::size_t rank) {
    return {ring, degree, {rank}, {}};
}

std::size_t ChainComplex::rank(int k) const {
    if (is_zero() || k < min_degree() || k > max_degree()) return 0;
    return ranks_[static_cast<std::size_t>(k - min_degree_)];
}

std::size_t ChainComplex::total_rank() const {
    std::size_t t = 0;
    for (auto r : ranks_) t += r;
    return t;
}

const ExactMatrix& ChainComplex::differential(int k) const {
    if (is_zero() || k < min_degree_ - 1 || k > max_degree()) return empty_;
    return diffs_[static_cast<std::size_t>(k - min_degree_ + 1)];
}

ChainComplex ChainComplex::with_twist_weight(int w) const {
    ChainComplex c = *this;
    c.twist_weight_ = w;
    return c;
}

std::string ChainComplex::describe() const {
    if (is_zero()) return "0";
    std::ostringstream out;
    out << "degrees [" << min_degree() << "," << max_degree() << "] ranks";
    for (auto r : ranks_) out << " " << r;
    return out.str();
}

bool same_terms(const ChainComplex& a, const ChainComplex& b) {
    if (!(a.ring_ == b.ring_) || a.ranks_ != b.ranks_) return false;
    if (a.is_zero()) return true;
    return a.min_degree_ == b.min_degree_ && a.diffs_ == b.diffs_;
}

// -- ChainMap / Homotopy ---------------------------------------------------------

ChainMap::ChainMap(ComplexPtr source, ComplexPtr target, const std::function<ExactMatrix(int)>& component)
    : source_(std::move(source)), target_(std::move(target)) {
    require_same_ring(source_->ring(), target_->ring(), "chain map");
    const Ring& ring = source_->ring();
    DegreeRange r = range_union(source_->support(), target_->support());
    std::vector<ExactMatrix> items;
    if (!r.empty()) {
        items.reserve(static_cast<std::size_t>(r.hi - r.lo + 1));
        for (int k = r.lo; k <= r.hi; ++k)
            items.push_back(fitted(component(k), ring, target_->rank(k), source_->rank(k), "map component", k));
    }
    components_ = GradedMatrices(ring, r.empty() ? 0 : r.lo, std::move(items));
}

bool ChainMap::is_zero() const {
    for (const auto& m : components_.items())
        if (!m.is_zero()) return false;
    return true;
}

namespace {

DegreeRange homotopy_range(const ChainComplex& s, const ChainComplex& t) {
    DegreeRange tr = t.support();
    if (!tr.empty()) tr = {tr.lo + 1, tr.hi + 1};
    return range_union(s.support(), tr);
}

GradedMatrices build_homotopy_components(const ChainComplex& s, const ChainComplex& t,
                                         const std::function<ExactMatrix(int)>& component) {
    DegreeRange r = homotopy_range(s, t);
    std::vector<ExactMatrix> items;
    if (!r.empty())
        for (int k = r.lo; k <= r.hi; ++k)
            items.push_back(fitted(component(k), s.ring(), t.rank(k - 1), s.rank(k), "homotopy component", k));
    return GradedMatrices(s.ring(), r.empty() ? 0 : r.lo, std::move(items));
}

} // namespace

Homotopy::Homotopy(ChainMap from, ChainMap to, const std::function<ExactMatrix(int)>& component)
    : from_(std::move(from)), to_(std::move(to)) {
    if (!same_endpoint(from_.source_ptr(), to_.source_ptr()) || !same_endpoint(from_.target_ptr(), to_.target_ptr()))
        throw DimensionError("homotopy between maps with different endpoints");
    components_ = build_homotopy_components(from_.source(), from_.target(), component);
}

Homotopy Homotopy::zero(const ChainMap& f) {
    const Ring ring = f.source().ring();
    const ChainComplex& s = f.source();
    const ChainComplex& t = f.target();
    return Homotopy(f, f, [&](int k) { return ExactMatrix(ring, t.rank(k - 1), s.rank(k)); });
}

// -- validation ------------------------------------------------------------------

Check validate(const ChainComplex& a) {
    if (a.is_zero()) return Check::pass();
    for (int k = a.min_degree(); k + 1 < a.max_degree(); ++k) {
        if (!(a.differential(k + 1) * a.differential(k)).is_zero())
            return Check::fail(k, "d^" + std::to_string(k + 1) + " * d^" + std::to_string(k) + " != 0");
    }
    return Check::pass();
}

Check check_chain_map(const ChainMap& f) {
    const ChainComplex& s = f.source();
    const ChainComplex& t = f.target();
    DegreeRange r = range_union(s.support(), t.support());
    if (r.empty()) return Check::pass();
    for (int k = r.lo - 1; k <= r.hi; ++k) {
        if (!(t.differential(k) * f(k) == f(k + 1) * s.differential(k)))
            return Check::fail(k, "chain map square fails between degrees " + std::to_string(k) + " and " +
                                      std::to_string(k + 1));
    }
    return Check::pass();
}

Check check_homotopy_between(const ChainMap& from, const ChainMap& to, const GradedMatrices& given) {
    const ChainComplex& s = from.source();
    const ChainComplex& t = from.target();
    if (!same_terms(s, to.source()) || !same_terms(t, to.target()))
        return Check::fail(0, "homotopy endpoints differ");
    DegreeRange r = homotopy_range(s, t);
    // Serialized homotopies omit entry-free components; restore their shapes.
    GradedMatrices h = given;
    if (!r.empty()) {
        std::vector<ExactMatrix> items;
        for (int k = r.lo; k <= r.hi; ++k) {
            const ExactMatrix& hk = given(k);
            if (hk.rows() * hk.cols() == 0 && t.rank(k - 1) * s.rank(k) == 0)
                items.emplace_back(s.ring(), t.rank(k - 1), s.rank(k));
            else
                items.push_back(hk);
        }
        if (!given.items().empty())
            for (int k = given.lo(); k <= given.hi(); ++k)
                if (!r.contains(k) && given(k).rows() * given(k).cols() != 0)
                    return Check::fail(k, "homotopy component outside the support");
        h = GradedMatrices(s.ring(), r.lo, std::move(items));
    }
    if (!h.items().empty())
        for (int k = h.lo(); k <= h.hi(); ++k)
            if (!r.contains(k) && h(k).rows() * h(k).cols() != 0)
                return Check::fail(k, "homotopy component outside the support");
    for (int k = r.lo; k <= r.hi; ++k) {
        const ExactMatrix& hk = h(k);
        if (hk.rows() != t.rank(k - 1) || hk.cols() != s.rank(k))
            return Check::fail(k, "homotopy component has shape " + shape(hk) + ", expected " +
                                      std::to_string(t.rank(k - 1)) + "x" + std::to_string(s.rank(k)));
    }
    DegreeRange all = range_union(s.support(), t.support());
    if (all.empty()) return Check::pass();
    for (int k = all.lo; k <= all.hi; ++k) {
        ExactMatrix lhs = t.differential(k - 1) * h(k) + h(k + 1) * s.differential(k);
        if (lhs.rows() == 0 || lhs.cols() == 0) continue;
        if (!(lhs == from(k) - to(k)))
            return Check::fail(k, "d h + h d != from - to in degree " + std::to_string(k));
    }
    return Check::pass();
}

// -- functors ----------------------------------------------------------------------

ChainComplex shift(const ChainComplex& a, int m) {
    if (a.is_zero()) return a;
    Scalar sign = sign_of_shift(m);
    std::vector<ExactMatrix> diffs;
    for (int k = a.min_degree(); k < a.max_degree(); ++k)
        diffs.push_back(sign == 1 ? a.differential(k) : -a.differential(k));
    return {a.ring(), a.min_degree() - m, a.ranks(), std::move(diffs), a.twist_weight()};
}

ChainMap shift_map(const ChainMap& f, int m) {
    if (m == 0) return f;
    return ChainMap(share(shift(f.source(), m)), share(shift(f.target(), m)), [&](int k) { return f(k + m); });
}

Homotopy shift_homotopy(const Homotopy& h, int m) {
    if (m == 0) return h;
    ChainMap from = shift_map(h.from(), m);
    ChainMap to = retarget(shift_map(h.to(), m), from.source_ptr(), from.target_ptr());
    bool odd = m % 2 != 0;
    return Homotopy(from, to, [&](int k) { return odd ? -h(k + m) : h(k + m); });
}

ChainComplex twist(const ChainComplex& a, int w) { return a.with_twist_weight(a.twist_weight() + w); }

DirectSum direct_sum(const ChainComplex& a, const ChainComplex& b) {
    require_same_ring(a.ring(), b.ring(), "direct_sum");
    const Ring ring = a.ring();
    DegreeRange r = range_union(a.support(), b.support());
    ChainComplex sum(ring);
    if (!r.empty()) {
        std::vector<std::size_t> ranks;
        std::vector<ExactMatrix> diffs;
        for (int k = r.lo; k <= r.hi; ++k) {
            ranks.push_back(a.rank(k) + b.rank(k));
            if (k < r.hi) diffs.push_back(block_diagonal(a.differential(k), b.differential(k)));
        }
        sum = ChainComplex(ring, r.lo, std::move(ranks), std::move(diffs), a.twist_weight());
    }
    auto ps = share(sum), pa = share(a), pb = share(b);
    auto inj_a = ChainMap(pa, ps, [&](int k) {
        return vstack(ExactMatrix::identity(ring, a.rank(k)), ExactMatrix(ring, b.rank(k), a.rank(k)));
    });
    auto inj_b = ChainMap(pb, ps, [&](int k) {
        return vstack(ExactMatrix(ring, a.rank(k), b.rank(k)), ExactMatrix::identity(ring, b.rank(k)));
    });
    auto proj_a = ChainMap(ps, pa, [&](int k) {
        return hstack(ExactMatrix::identity(ring, a.rank(k)), ExactMatrix(ring, a.rank(k), b.rank(k)));
    });
    auto proj_b = ChainMap(ps, pb, [&](int k) {
        return hstack(ExactMatrix(ring, b.rank(k), a.rank(k)), ExactMatrix::identity(ring, b.rank(k)));
    });
    return {std::move(sum), std::move(inj_a), std::move(inj_b), std::move(proj_a), std::move(proj_b)};
}

Cone cone(const ChainMap& f) {
    const ChainComplex& s = f.source();
    const ChainComplex& t = f.target();
    const Ring ring = s.ring();
    DegreeRange sr = s.support();
    if (!sr.empty()) sr = {sr.lo - 1, sr.hi - 1};
    DegreeRange r = range_union(sr, t.support());
    ChainComplex c(ring);
    if (!r.empty()) {
        std::vector<std::size_t> ranks;
        std::vector<ExactMatrix> diffs;
        for (int k = r.lo; k <= r.hi; ++k) {
            ranks.push_back(s.rank(k + 1) + t.rank(k));
            if (k == r.hi) break;
            ExactMatrix d(ring, s.rank(k + 2) + t.rank(k + 1), s.rank(k + 1) + t.rank(k));
            d.paste(0, 0, -s.differential(k + 1));
            d.paste(s.rank(k + 2), 0, f(k + 1));
            d.paste(s.rank(k + 2), s.rank(k + 1), t.differential(k));
            diffs.push_back(std::move(d));
        }
        c = ChainComplex(ring, r.lo, std::move(ranks), std::move(diffs), t.twist_weight());
    }
    auto pc = share(c);
    auto incl = ChainMap(f.target_ptr(), pc, [&](int k) {
        return vstack(ExactMatrix(ring, s.rank(k + 1), t.rank(k)), ExactMatrix::identity(ring, t.rank(k)));
    });
    auto proj = ChainMap(pc, share(shift(s, 1)), [&](int k) {
        return hstack(ExactMatrix::identity(ring, s.rank(k + 1)), ExactMatrix(ring, s.rank(k + 1), t.rank(k)));
    });
    return {std::move(c), std::move(incl), std::move(proj)};
}

// -- map algebra ---------------------------------------------------------------------

ChainMap identity_map(const ComplexPtr& a) {
    const Ring ring = a->ring();
    return ChainMap(a, a, [&](int k) { return ExactMatrix::identity(ring, a->rank(k)); });
}

ChainMap identity_map(const ChainComplex& a) { return identity_map(share(a)); }

ChainMap zero_map(const ComplexPtr& source, const ComplexPtr& target) {
    const Ring ring = source->ring();
    return ChainMap(source, target, [&](int k) { return ExactMatrix(ring, target->rank(k), source->rank(k)); });
}

ChainMap compose(const ChainMap& g, const ChainMap& f) {
    if (!same_endpoint(f.target_ptr(), g.source_ptr()))
        throw DimensionError("compose: target " + f.target().describe() + " != source " + g.source().describe());
    return ChainMap(f.source_ptr(), g.target_ptr(), [&](int k) { return g(k) * f(k); });
}

namespace {

void require_parallel(const ChainMap& f, const ChainMap& g, const char* what) {
    if (!same_endpoint(f.source_ptr(), g.source_ptr()) || !same_endpoint(f.target_ptr(), g.target_ptr()))
        throw DimensionError(std::string(what) + ": maps have different endpoints");
}

} // namespace

ChainMap add(const ChainMap& f, const ChainMap& g) {
    require_parallel(f, g, "add");
    return ChainMap(f.source_ptr(), f.target_ptr(), [&](int k) { return f(k) + g(k); });
}

ChainMap subtract(const ChainMap& f, const ChainMap& g) {
    require_parallel(f, g, "subtract");
    return ChainMap(f.source_ptr(), f.target_ptr(), [&](int k) { return f(k) - g(k); });
}

ChainMap negate(const ChainMap& f) {
    return ChainMap(f.source_ptr(), f.target_ptr(), [&](int k) { return -f(k); });
}

ChainMap retarget(const ChainMap& f, ComplexPtr source, ComplexPtr target) {
    if (!same_terms(f.source(), *source) || !same_terms(f.target(), *target))
        throw DimensionError("retarget: endpoints have different terms");
    return ChainMap(std::move(source), std::move(target), [&](int k) { return f(k); });
}

bool maps_equal(const ChainMap& f, const ChainMap& g) {
    if (!same_endpoint(f.source_ptr(), g.source_ptr()) || !same_endpoint(f.target_ptr(), g.target_ptr()))
        return false;
    DegreeRange r = range_union(f.range(), g.range());
    for (int k = r.lo; k <= r.hi; ++k)
        if (!(f(k) == g(k))) return false;
    return true;
}

// -- homotopy algebra ------------------------------------------------------------------

Homotopy concat(const Homotopy& h1, const Homotopy& h2) {
    if (!maps_equal(h1.to(), h2.from())) throw DimensionError("concat: homotopies do not chain");
    return Homotopy(h1.from(), h2.to(), [&](int k) { return h1(k) + h2(k); });
}

Homotopy reverse(const Homotopy& h) {
    return Homotopy(h.to(), h.from(), [&](int k) { return -h(k); });
}

Homotopy whisker(const ChainMap& a, const Homotopy& h, const ChainMap& b) {
    ChainMap from = compose(a, compose(h.from(), b));
    ChainMap to = compose(a, compose(h.to(), b));
    return Homotopy(from, to, [&](int k) { return a(k - 1) * h(k) * b(k); });
}

Homotopy whisker_left(const ChainMap& a, const Homotopy& h) {
    return whisker(a, h, identity_map(h.from().source_ptr()));
}

Homotopy whisker_right(const Homotopy& h, const ChainMap& b) {
    return whisker(identity_map(h.from().target_ptr()), h, b);
}

Homotopy add(const Homotopy& h1, const Homotopy& h2) {
    return Homotopy(add(h1.from(), h2.from()), add(h1.to(), h2.to()), [&](int k) { return h1(k) + h2(k); });
}

Homotopy add_constant(const Homotopy& h, const ChainMap& m) {
    return Homotopy(add(h.from(), m), add(h.to(), m), [&](int k) { return h(k); });
}

Homotopy relabel(const Homotopy& h, ChainMap from, ChainMap to) {
    if (!maps_equal(h.from(), from) || !maps_equal(h.to(), to))
        throw DimensionError("relabel: endpoint maps differ");
    return Homotopy(std::move(from), std::move(to), [&](int k) { return h(k); });
}

namespace {

// Entry (a, b) of h^k is inert when column a of d_T^{k-1} and row b of
// d_S^{k-1} both vanish.
bool inert(const ChainComplex& s, const ChainComplex& t, int k, std::size_t a, std::size_t b) {
    const ExactMatrix& dt = t.differential(k - 1);
    for (std::size_t i = 0; i < dt.rows(); ++i)
        if (sgn(dt(i, a)) != 0) return false;
    const ExactMatrix& ds = s.differential(k - 1);
    for (std::size_t j = 0; j < ds.cols(); ++j)
        if (sgn(ds(b, j)) != 0) return false;
    return true;
}

} // namespace

Homotopy canonicalize(const Homotopy& h) {
    const ChainComplex& s = h.source();
    const ChainComplex& t = h.target();
    return Homotopy(h.from(), h.to(), [&](int k) {
        ExactMatrix m = h(k);
        for (std::size_t a = 0; a < m.rows(); ++a)
            for (std::size_t b = 0; b < m.cols(); ++b)
                if (sgn(m(a, b)) != 0 && inert(s, t, k, a, b)) m(a, b) = 0;
        return m;
    });
}

Check check_canonical(const ChainComplex& source, const ChainComplex& target, const GradedMatrices& h) {
    if (h.items().empty()) return Check::pass();
    for (int k = h.lo(); k <= h.hi(); ++k) {
        const ExactMatrix& m = h(k);
        if (m.rows() != target.rank(k - 1) || m.cols() != source.rank(k)) continue;
        for (std::size_t a = 0; a < m.rows(); ++a)
            for (std::size_t b = 0; b < m.cols(); ++b)
                if (sgn(m(a, b)) != 0 && inert(source, target, k, a, b))
                    return Check::fail(k, "homotopy entry (" + std::to_string(a) + "," + std::to_string(b) +
                                              ") in degree " + std::to_string(k) + " is inert but nonzero");
    }
    return Check::pass();
}

// -- cohomology ----------------------------------------------------------------------

CohomologyGroup cohomology_group(const ChainComplex& a, int k) {
    KernelData kd = kernel_data(a.differential(k));
    const ExactMatrix& incoming = a.differential(k - 1);
    CohomologyGroup g;
    g.module = module_from_cokernel(kd.coordinates * incoming);
    g.cycles = std::move(kd.basis);
    g.coordinates = std::move(kd.coordinates);
    return g;
}

ModulePresentation cohomology(const ChainComplex& a, int k) { return cohomology_group(a, k).module; }

ExactMatrix induced_map(const ChainMap& f, int k, const CohomologyGroup& src, const CohomologyGroup& dst) {
    return dst.coordinates * f(k) * src.cycles;
}

ExactMatrix induced_map(const ChainMap& f, int k) {
    return induced_map(f, k, cohomology_group(f.source(), k), cohomology_group(f.target(), k));
}

DegreeRange amplitude(const ChainComplex& a) {
    DegreeRange amp;
    if (a.is_zero()) return amp;
    for (int k = a.min_degree(); k <= a.max_degree(); ++k) {
        if (cohomology(a, k).is_zero()) continue;
        if (amp.empty())
            amp = {k, k};
        else
            amp.hi = k;
    }
    return amp;
}

bool within(const DegreeRange& amp, int lo, int hi) { return amp.empty() || (lo <= amp.lo && amp.hi <= hi); }

// -- truncation models ------------------------------------------------------------------

BottomTruncation bottom_truncation_model(const ChainComplex& a, int n) {
    DegreeRange amp = amplitude(a);
    if (!amp.empty() && amp.lo < -n)
        throw AmplitudeViolation("bottom truncation at " + std::to_string(-n) + " of a complex with cohomology in degree " +
                                 std::to_string(amp.lo));
    const Ring ring = a.ring();
    const int top = -n;
    KernelData kd = kernel_data(a.differential(top));
    const int lo = a.is_zero() ? top : std::min(a.min_degree(), top);
    std::vector<std::size_t> ranks;
    std::vector<ExactMatrix> diffs;
    for (int k = lo; k <= top; ++k) {
        ranks.push_back(k < top ? a.rank(k) : kd.basis.cols());
        if (k + 1 < top) diffs.push_back(a.differential(k));
        else if (k + 1 == top) diffs.push_back(kd.coordinates * a.differential(k));
    }
    ChainComplex t(ring, lo, std::move(ranks), std::move(diffs), a.twist_weight());
    auto pt = share(t);
    ChainMap u(pt, share(a), [&](int k) {
        if (k < top) return ExactMatrix::identity(ring, a.rank(k));
        if (k == top) return kd.basis;
        return ExactMatrix(ring, a.rank(k), 0);
    });
    return {std::move(t), std::move(u)};
}

TopTruncation top_truncation_model(const ChainComplex& a, int n) {
    DegreeRange amp = amplitude(a);
    if (!amp.empty() && amp.hi > n)
        throw AmplitudeViolation("top truncation at " + std::to_string(n) + " of a complex with cohomology in degree " +
                                 std::to_string(amp.hi));
    const Ring ring = a.ring();
    const int bottom = n - 1;
    ImageData img = image_data(a.differential(bottom));
    const int hi = a.is_zero() ? n : std::max(a.max_degree(), n);
    std::vector<std::size_t> ranks;
    std::vector<ExactMatrix> diffs;
    for (int k = bottom; k <= hi; ++k) {
        ranks.push_back(k == bottom ? img.basis.cols() : a.rank(k));
        if (k == hi) break;
        if (k == bottom) diffs.push_back(img.basis);
        else diffs.push_back(a.differential(k));
    }
    ChainComplex e(ring, bottom, std::move(ranks), std::move(diffs), a.twist_weight());
    auto pe = share(e);
    ChainMap v(share(a), pe, [&](int k) {
        if (k >= n) return ExactMatrix::identity(ring, a.rank(k));
        if (k == bottom) return img.corestriction;
        return ExactMatrix(ring, 0, a.rank(k));
    });
    return {std::move(e), std::move(v)};
}

} // namespace hld
