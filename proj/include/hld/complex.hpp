#pragma once

#include "hld/linalg.hpp"
#include "hld/matrix.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace hld {

/// Integer-indexed family of matrices; the empty 0x0 matrix outside [lo, hi].
class GradedMatrices {
public:
    GradedMatrices() = default;
    GradedMatrices(Ring ring, int lo, std::vector<ExactMatrix> items)
        : lo_(lo), items_(std::move(items)), empty_(ring, 0, 0) {}

    const ExactMatrix& operator()(int k) const {
        if (k < lo_ || k >= lo_ + static_cast<int>(items_.size())) return empty_;
        return items_[static_cast<std::size_t>(k - lo_)];
    }
    int lo() const noexcept { return lo_; }
    int hi() const noexcept { return lo_ + static_cast<int>(items_.size()) - 1; }
    const std::vector<ExactMatrix>& items() const noexcept { return items_; }
    std::vector<ExactMatrix>& items() noexcept { return items_; }

private:
    int lo_ = 0;
    std::vector<ExactMatrix> items_;
    ExactMatrix empty_;
};

/// Closed degree interval; `empty` when no degree qualifies.
struct DegreeRange {
    int lo = 0;
    int hi = -1;
    bool empty() const noexcept { return hi < lo; }
    bool contains(int k) const noexcept { return lo <= k && k <= hi; }
    friend bool operator==(const DegreeRange&, const DegreeRange&) = default;
};

DegreeRange range_union(DegreeRange a, DegreeRange b);

/// Bounded cochain complex of finitely generated free modules,
/// d^k : A^k -> A^{k+1}. Leading and trailing zero terms are trimmed, so the
/// zero complex has no terms and min_degree 0.
class ChainComplex {
public:
    /// Zero complex over the integers.
    ChainComplex() : ChainComplex(Ring::integers()) {}
    explicit ChainComplex(Ring ring);
    /// differentials[i] is d^{min_degree+i}, of shape ranks[i+1] x ranks[i];
    /// one fewer differential than ranks. Shapes are checked, d∘d = 0 is not
    /// (see validate()).
    ChainComplex(Ring ring, int min_degree, std::vector<std::size_t> ranks, std::vector<ExactMatrix> differentials,
                 int twist_weight = 0);
    /// Shorthand: ranks are read off the differentials. With no
    /// differentials this yields the complex with a single term of rank
    /// `single_rank` in degree min_degree.
    static ChainComplex from_differentials(Ring ring, int min_degree, std::vector<ExactMatrix> differentials,
                                           std::size_t single_rank = 0);
    /// Free module of the given rank concentrated in one degree.
    static ChainComplex concentrated(Ring ring, int degree, std::size_t rank);

    const Ring& ring() const noexcept { return ring_; }
    bool is_zero() const noexcept { return ranks_.empty(); }
    int min_degree() const noexcept { return min_degree_; }
    int max_degree() const noexcept { return min_degree_ + static_cast<int>(ranks_.size()) - 1; }
    DegreeRange support() const noexcept { return {min_degree(), max_degree()}; }
    std::size_t rank(int k) const;
    const std::vector<std::size_t>& ranks() const noexcept { return ranks_; }
    std::size_t total_rank() const;
    /// d^k, shape rank(k+1) x rank(k); an entry-free matrix outside the support.
    const ExactMatrix& differential(int k) const;
    int twist_weight() const noexcept { return twist_weight_; }
    ChainComplex with_twist_weight(int w) const;

    std::string describe() const;

    /// Same terms and differentials; twist weight is ignored.
    friend bool same_terms(const ChainComplex& a, const ChainComplex& b);
    friend bool operator==(const ChainComplex& a, const ChainComplex& b) {
        return same_terms(a, b) && a.twist_weight_ == b.twist_weight_;
    }

private:
    Ring ring_;
    int min_degree_ = 0;
    std::vector<std::size_t> ranks_;
    std::vector<ExactMatrix> diffs_;  // d^{min-1} .. d^{max}
    ExactMatrix empty_;
    int twist_weight_ = 0;
};

using ComplexPtr = std::shared_ptr<const ChainComplex>;

inline ComplexPtr share(ChainComplex c) { return std::make_shared<const ChainComplex>(std::move(c)); }

/// Degree-0 map of complexes, f^k : source^k -> target^k.
class ChainMap {
public:
    ChainMap(ComplexPtr source, ComplexPtr target, const std::function<ExactMatrix(int)>& component);
    ChainMap(const ChainComplex& source, const ChainComplex& target,
             const std::function<ExactMatrix(int)>& component)
        : ChainMap(share(source), share(target), component) {}

    const ChainComplex& source() const noexcept { return *source_; }
    const ChainComplex& target() const noexcept { return *target_; }
    const ComplexPtr& source_ptr() const noexcept { return source_; }
    const ComplexPtr& target_ptr() const noexcept { return target_; }
    const ExactMatrix& operator()(int k) const { return components_(k); }
    const GradedMatrices& components() const noexcept { return components_; }
    /// Degrees where a component may be nonzero-shaped.
    DegreeRange range() const noexcept { return {components_.lo(), components_.hi()}; }

    bool is_zero() const;

private:
    ComplexPtr source_;
    ComplexPtr target_;
    GradedMatrices components_;
};

/// h^k : source^k -> target^{k-1} with d h + h d = from - to.
class Homotopy {
public:
    Homotopy(ChainMap from, ChainMap to, const std::function<ExactMatrix(int)>& component);
    /// The zero homotopy from f to itself.
    static Homotopy zero(const ChainMap& f);

    const ChainMap& from() const noexcept { return from_; }
    const ChainMap& to() const noexcept { return to_; }
    const ChainComplex& source() const noexcept { return from_.source(); }
    const ChainComplex& target() const noexcept { return from_.target(); }
    const ExactMatrix& operator()(int k) const { return components_(k); }
    const GradedMatrices& components() const noexcept { return components_; }
    DegreeRange range() const noexcept { return {components_.lo(), components_.hi()}; }

private:
    ChainMap from_;
    ChainMap to_;
    GradedMatrices components_;
};

/// Diagnostic result; `degree` names the first failing degree.
struct Check {
    bool ok = true;
    int degree = 0;
    std::string message;
    static Check pass() { return {}; }
    static Check fail(int degree, std::string message) { return {false, degree, std::move(message)}; }
    explicit operator bool() const noexcept { return ok; }
};

// -- validation --------------------------------------------------------------

Check validate(const ChainComplex& a);
Check check_chain_map(const ChainMap& f);
/// Checks d h + h d = from - to degreewise for explicitly given from/to maps.
Check check_homotopy_between(const ChainMap& from, const ChainMap& to, const GradedMatrices& h);
inline Check check_homotopy(const Homotopy& h) { return check_homotopy_between(h.from(), h.to(), h.components()); }

// -- structural functors -----------------------------------------------------

/// (A[m])^k = A^{k+m}, d_{A[m]} = (-1)^m d_A.
ChainComplex shift(const ChainComplex& a, int m);
/// (f[m])^k = f^{k+m}, no sign.
ChainMap shift_map(const ChainMap& f, int m);
/// (h[m])^k = (-1)^m h^{k+m}, so that it witnesses f[m] ~ g[m].
Homotopy shift_homotopy(const Homotopy& h, int m);
/// Twist is the identity functor; only the weight tag changes.
ChainComplex twist(const ChainComplex& a, int w);

struct DirectSum {
    ChainComplex sum;
    ChainMap inj_a, inj_b, proj_a, proj_b;
};
DirectSum direct_sum(const ChainComplex& a, const ChainComplex& b);

/// Cone(f)^k = source^{k+1} + target^k, d(a, b) = (-d a, f a + d b).
struct Cone {
    ChainComplex cone;
    ChainMap incl;  // target -> cone, b -> (0, b)
    ChainMap proj;  // cone -> source[1], (a, b) -> a
};
Cone cone(const ChainMap& f);

// -- map algebra -------------------------------------------------------------

ChainMap identity_map(const ChainComplex& a);
ChainMap identity_map(const ComplexPtr& a);
ChainMap zero_map(const ComplexPtr& source, const ComplexPtr& target);
/// g ∘ f. Throws DimensionError on mismatched endpoints.
ChainMap compose(const ChainMap& g, const ChainMap& f);
ChainMap add(const ChainMap& f, const ChainMap& g);
ChainMap subtract(const ChainMap& f, const ChainMap& g);
ChainMap negate(const ChainMap& f);
/// Same components, read between differently tagged endpoints with equal terms.
ChainMap retarget(const ChainMap& f, ComplexPtr source, ComplexPtr target);
bool maps_equal(const ChainMap& f, const ChainMap& g);

// -- homotopy algebra --------------------------------------------------------

/// h1 : f ~ g, h2 : g ~ k  gives  f ~ k.
Homotopy concat(const Homotopy& h1, const Homotopy& h2);
/// h : f ~ g gives g ~ f.
Homotopy reverse(const Homotopy& h);
/// a ∘ h ∘ b : a f b ~ a g b.
Homotopy whisker(const ChainMap& a, const Homotopy& h, const ChainMap& b);
Homotopy whisker_left(const ChainMap& a, const Homotopy& h);
Homotopy whisker_right(const Homotopy& h, const ChainMap& b);
/// h1 + h2 : f1 + f2 ~ g1 + g2.
Homotopy add(const Homotopy& h1, const Homotopy& h2);
/// Same components, from + m ~ to + m.
Homotopy add_constant(const Homotopy& h, const ChainMap& m);
/// Replaces the recorded endpoints by maps with identical components.
Homotopy relabel(const Homotopy& h, ChainMap from, ChainMap to);
/// Zeroes entries that cannot influence d h + h d (the canonical form stored
/// in certificates).
Homotopy canonicalize(const Homotopy& h);
/// Positions whose entries cannot influence d h + h d must be zero.
Check check_canonical(const ChainComplex& source, const ChainComplex& target, const GradedMatrices& h);

// -- cohomology --------------------------------------------------------------

/// H^k together with the cocycles representing its generators.
struct CohomologyGroup {
    ModulePresentation module;
    ExactMatrix cycles;       // rank(k) x generators
    ExactMatrix coordinates;  // generators x rank(k), left inverse of `cycles` on cocycles
};

CohomologyGroup cohomology_group(const ChainComplex& a, int k);
ModulePresentation cohomology(const ChainComplex& a, int k);
/// Matrix of H^k(f) in the generator bases of the given groups.
ExactMatrix induced_map(const ChainMap& f, int k, const CohomologyGroup& src, const CohomologyGroup& dst);
ExactMatrix induced_map(const ChainMap& f, int k);
/// Smallest interval containing every k with H^k != 0; empty when acyclic.
DegreeRange amplitude(const ChainComplex& a);
bool within(const DegreeRange& amp, int lo, int hi);

// -- truncation models -------------------------------------------------------

/// T = (... -> A^{-n-1} -> ker d^{-n}), u : T -> A the inclusion.
/// Requires amplitude(A) ⊆ [-n, ∞).
struct BottomTruncation {
    ChainComplex complex;
    ChainMap inclusion;
};
BottomTruncation bottom_truncation_model(const ChainComplex& a, int n);

/// E = (im d^{n-1} -> A^n -> A^{n+1} -> ...), v : A -> E the corestriction.
/// Requires amplitude(A) ⊆ (-∞, n].
struct TopTruncation {
    ChainComplex complex;
    ChainMap projection;
};
TopTruncation top_truncation_model(const ChainComplex& a, int n);

} // namespace hld
