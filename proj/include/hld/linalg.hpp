#pragma once

#include "hld/matrix.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace hld {

/// U * M * V = D with U, V invertible over the ring and D diagonal with
/// d_1 | d_2 | ... (nonnegative over the integers, 0/1 over a field).
struct SmithForm {
    ExactMatrix left;       // U
    ExactMatrix diagonal;   // D
    ExactMatrix right;      // V
    ExactMatrix left_inverse;   // U^{-1}
    ExactMatrix right_inverse;  // V^{-1}
    std::size_t rank = 0;
};

/// Pivot strategy: smallest Euclidean norm in the active submatrix, ties
/// broken by lowest (row, column) in row-major order.
SmithForm smith_normal_form(const ExactMatrix& m);

/// Nonzero diagonal entries of the Smith form, without transform tracking.
std::vector<Scalar> smith_diagonal(const ExactMatrix& m);

/// M * V = H with V invertible and H in column echelon form: column t has its
/// leading nonzero (the pivot) in row pivot_rows[t], pivot rows strictly
/// increase, columns past `rank` vanish. Over the integers pivots are positive
/// and the other entries of each pivot row lie in [0, pivot) (column Hermite
/// form); over a field pivots are 1 and the rest of each pivot row is zero.
struct ColumnEchelon {
    ExactMatrix form;       // H
    ExactMatrix transform;  // V
    ExactMatrix inverse;    // V^{-1}
    std::size_t rank = 0;
    std::vector<std::size_t> pivot_rows;
};

ColumnEchelon column_echelon(const ExactMatrix& m);

struct LinearSolution {
    ExactMatrix particular;  // cols(M) x rhs-count
    ExactMatrix kernel;      // basis of ker M, one column per generator
};

/// Solves M x = b over the ring (integrality included over the integers).
/// b may have several columns. Returns nullopt when no solution exists;
/// throws DimensionError on incompatible shapes.
std::optional<LinearSolution> solve_linear(const ExactMatrix& m, const ExactMatrix& b);

/// Columns form a basis of ker M as a free module (saturated).
ExactMatrix kernel_basis(const ExactMatrix& m);

/// Kernel basis K together with a matrix L such that L * z are the
/// coordinates of any z in ker M with respect to K (L * K = I).
struct KernelData {
    ExactMatrix basis;
    ExactMatrix coordinates;
};
KernelData kernel_data(const ExactMatrix& m);

/// Columns form a basis of the column span of M (column Hermite form).
ExactMatrix image_basis(const ExactMatrix& m);

/// Image basis B with M = B * C; C is the corestriction of M onto its image.
struct ImageData {
    ExactMatrix basis;
    ExactMatrix corestriction;
};
ImageData image_data(const ExactMatrix& m);

std::size_t matrix_rank(const ExactMatrix& m);

/// Inverse of a square matrix invertible over the ring; nullopt otherwise.
std::optional<ExactMatrix> inverse(const ExactMatrix& m);

/// Finitely generated module presented as the cokernel of `relations`
/// (generators x relation-count).
struct ModulePresentation {
    Ring ring = Ring::integers();
    std::size_t generators = 0;
    ExactMatrix relations;
    /// Non-unit invariant factors d_1 | d_2 | ..., positive over the integers.
    std::vector<Scalar> invariant_factors;
    std::size_t free_rank = 0;

    bool is_zero() const { return free_rank == 0 && invariant_factors.empty(); }
    bool isomorphic_to(const ModulePresentation& other) const {
        return free_rank == other.free_rank && invariant_factors == other.invariant_factors;
    }
    std::string describe() const;
};

ModulePresentation module_from_cokernel(const ExactMatrix& relations);

/// Decides whether f (dst.generators x src.generators) induces a bijection
/// coker(src.relations) -> coker(dst.relations). Throws NotAModuleMap when f
/// does not carry relations into relations.
bool module_map_is_iso(const ExactMatrix& f, const ModulePresentation& src, const ModulePresentation& dst);

/// True when f and g induce the same map between the presented modules,
/// i.e. every column of f - g lies in the relation span of dst.
bool module_maps_equal(const ExactMatrix& f, const ExactMatrix& g, const ModulePresentation& dst);

} // namespace hld
