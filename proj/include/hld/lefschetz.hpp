#pragma once

#include "hld/homotopy.hpp"

#include <variant>
#include <vector>

namespace hld {

/// φ : A[-1] -> A[1](1), stored as the chain map whose degree-k component is
/// Φ^k : A^{k-1} -> A^{k+1}.
struct LefschetzMap {
    ComplexPtr base;
    ChainMap phi;
};

/// Independent maps φ_n : A[-n] -> A[n](n); maps[n-1] is φ_n. Missing
/// members are read as zero maps.
struct LefschetzFamily {
    ComplexPtr base;
    std::vector<ChainMap> maps;
};

using LefschetzData = std::variant<LefschetzMap, LefschetzFamily>;

/// Builds Φ from per-degree components (k -> Φ^k); absent degrees are zero.
LefschetzMap make_lefschetz_map(const ChainComplex& a, const std::function<ExactMatrix(int)>& component);
/// Builds φ_n from per-degree components A^{k-n} -> A^{k+n}.
ChainMap make_family_member(const ComplexPtr& a, int n, const std::function<ExactMatrix(int)>& component);

const ChainComplex& lefschetz_base(const LefschetzData& data);

/// Chain condition of every member; the failing degree is reported.
Check validate_lefschetz(const LefschetzData& data);

/// Ψ_n = Φ[n-1] ∘ Φ[n-3] ∘ ... ∘ Φ[-n+1] : A[-n] -> A[n], twist weight n on
/// the target.
ChainMap iterate_lefschetz(const LefschetzMap& phi, int n);
/// Ψ_n in power mode, φ_n in family mode.
ChainMap lefschetz_power(const LefschetzData& data, int n);

/// Largest |k| with H^k(A) != 0; 0 for acyclic A.
int amplitude_bound(const ChainComplex& a);

struct HardLefschetzReport {
    struct Entry {
        int n;
        ModulePresentation negative;  // H^{-n}(A)
        ModulePresentation positive;  // H^{n}(A)
        bool iso;
    };
    std::vector<Entry> entries;
    bool ok() const;
    /// Smallest failing n, or 0.
    int first_failure() const;
};

HardLefschetzReport hard_lefschetz_check(const LefschetzData& data);

struct FinishedSummand {
    int k;  // the summand models H^{-k}(A)[k]
    ChainComplex complex;
    ChainMap ins;  // R_k -> A
    ChainMap prj;  // A -> R_k
};

/// A ≅ A_n ⊕ (finished summands) with amplitude(A_n) ⊆ [-n, n], witnessed by
///   p_n ∘ i_n ~ id_{A_n}   and   Σ ins ∘ prj + i_n ∘ p_n ~ id_A.
struct InductionState {
    int n;
    ComplexPtr base;
    ChainComplex a_n;
    ChainMap i_n;
    ChainMap p_n;
    Homotopy witness;
    std::vector<FinishedSummand> finished;
    ChainMap finished_sum;
    Homotopy global;
};

InductionState initial_state(const LefschetzData& data);

/// α = v' ∘ p_n[n] ∘ Ψ_n ∘ i_n[-n] ∘ u' : T[-n] -> E[n](n).
struct Alpha {
    ChainComplex t;  // bottom model of A_n at -n
    ChainComplex e;  // top model of A_n at n
    ChainMap u;      // u' : T[-n] -> A_n[-n]
    ChainMap v;      // v' : A_n[n] -> E[n]
    ChainMap f1;     // p_n[n] ∘ Ψ_n ∘ i_n[-n] ∘ u'
    ChainMap r1;     // v' ∘ p_n[n] ∘ Ψ_n ∘ i_n[-n]
    ChainMap alpha;
    bool check;      // H^0(α) equals the composite of induced maps
};

Alpha build_alpha(const InductionState& state, const LefschetzData& data, int n);

struct StepReport {
    int n;
    bool alpha_check;
    DegreeRange amplitude_c;
    DegreeRange amplitude_d;
    std::size_t rank_a_n;   // total rank of A_n on entry
    std::size_t rank_next;  // total rank of A_{n-1}
};

InductionState induction_step(const InductionState& state, const LefschetzData& data, StepReport* report = nullptr);

struct CertificateSummand {
    int k;
    int twist_weight;
    ChainComplex complex;
    GradedMatrices ins;
    GradedMatrices prj;
};

/// prj_j ∘ ins_k ~ δ_jk id, indexed by positions in `summands`.
struct PairWitness {
    std::size_t j;
    std::size_t k;
    GradedMatrices homotopy;
};

/// A ≅ ⊕_k R_k with R_k ≃ H^{-k}(A)[k]. Homotopies are stored in canonical
/// form and run from the composite to the identity (or zero).
struct DecompositionCertificate {
    std::vector<CertificateSummand> summands;
    GradedMatrices global;  // Σ ins_k prj_k ~ id_A
    std::vector<PairWitness> pairs;
};

struct DecompositionTrace {
    int n0 = 0;
    std::vector<StepReport> steps;
};

/// Throws HardLefschetzViolation(n) with the smallest failing n,
/// InvalidComplex / InvalidLefschetzData on bad input.
DecompositionCertificate lefschetz_decompose(const LefschetzData& data, DecompositionTrace* trace = nullptr);

/// Recomputes every identity of the certificate against A by matrix
/// arithmetic alone. Independent checks run concurrently; the reported
/// failure is the first in a fixed order.
Check verify_certificate(const ChainComplex& a, const DecompositionCertificate& cert, bool parallel = true);

} // namespace hld
