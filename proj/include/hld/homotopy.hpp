#pragma once

#include "hld/complex.hpp"

#include <optional>
#include <vector>

namespace hld {

/// Linear system whose unknowns are matrices X_u and whose equations are
/// matrix identities  sum  c * L * X_u * R = rhs.
class LinearSystem {
public:
    explicit LinearSystem(Ring ring) : ring_(ring) {}

    std::size_t add_unknown(std::size_t rows, std::size_t cols);
    std::size_t add_equation(ExactMatrix rhs);
    /// Adds coeff * left * X * right to the equation; a null factor is the identity.
    void add_term(std::size_t equation, std::size_t unknown, const ExactMatrix* left, const ExactMatrix* right,
                  const Scalar& coeff = Scalar(1));

    std::size_t unknown_count() const;
    std::size_t equation_count() const;
    /// Coefficient matrix (equation entries x unknown entries, row-major vec).
    ExactMatrix coefficients() const;
    ExactMatrix right_side() const;
    /// One solution over the ring, or nullopt.
    std::optional<std::vector<ExactMatrix>> solve() const;
    /// Inverse of the row-major vectorization for unknown u.
    ExactMatrix unpack(std::size_t unknown, const ExactMatrix& column, std::size_t col = 0) const;

private:
    struct Shape {
        std::size_t rows, cols, offset;
    };
    struct Term {
        std::size_t unknown;
        std::optional<ExactMatrix> left, right;
        Scalar coeff;
    };
    Ring ring_;
    std::vector<Shape> unknowns_;
    std::vector<Shape> equations_;
    std::vector<ExactMatrix> rhs_;
    std::vector<std::vector<Term>> terms_;
};

/// h with d h + h d = u, found by one exact linear solve; nullopt when u is
/// not null-homotopic.
std::optional<Homotopy> null_homotopy(const ChainMap& u);

struct HomotopyInverse {
    ChainMap inverse;       // g : Y -> X
    Homotopy source_side;   // g ∘ f ~ id_X
    Homotopy target_side;   // f ∘ g ~ id_Y
};

/// Joint solve for (g, both homotopies); nullopt when f is not a homotopy
/// equivalence.
std::optional<HomotopyInverse> homotopy_inverse(const ChainMap& f);

/// {chain maps A -> B} / {null-homotopic maps} as a presented module.
ModulePresentation hom_k_presentation(const ChainComplex& a, const ChainComplex& b);

/// Homotopy equivalence A ≃ A_min where no differential of A_min can be
/// reduced further: no unit entry, and (over the integers) no unit
/// elementary divisor. Over a field the differentials of A_min vanish.
struct Minimization {
    ChainComplex complex;
    ChainMap to_min;      // A -> A_min
    ChainMap from_min;    // A_min -> A
    Homotopy witness;     // from_min ∘ to_min ~ id_A
    Homotopy back;        // to_min ∘ from_min ~ id (zero; the identity holds strictly)
};

Minimization minimize(const ChainComplex& a);

/// Y ≅ X ⊕ C in the homotopy category, all five identities witnessed.
/// Each witness runs from the composite to the identity or zero map.
struct SplitData {
    ChainComplex ambient;     // Y
    ChainComplex summand;     // X
    ChainComplex complement;  // C
    ChainMap iota, pi;        // X -> Y, Y -> X
    ChainMap iota_c, pi_c;    // C -> Y, Y -> C
    Homotopy pi_iota;         // π ι ~ id_X
    Homotopy pic_iotac;       // π_C ι_C ~ id_C
    Homotopy pi_iotac;        // π ι_C ~ 0
    Homotopy pic_iota;        // π_C ι ~ 0
    Homotopy sum;             // ι π + ι_C π_C ~ id_Y
};

/// Splits f : X -> Y given a retraction g and a witness w : g ∘ f ~ id_X.
/// The complement is the minimized cone of f. Throws std::invalid_argument
/// when w does not verify.
SplitData split_with_retraction(const ChainMap& f, const ChainMap& g, const Homotopy& w);

Check check_split(const SplitData& s);

} // namespace hld
