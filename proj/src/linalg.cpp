#include "hld/linalg.hpp"

#include "hld/errors.hpp"

#include <sstream>

namespace hld {

namespace {

// Transform bookkeeping for the two-sided reduction. Any pointer may be null.
struct Trackers {
    ExactMatrix* u = nullptr;
    ExactMatrix* u_inv = nullptr;
    ExactMatrix* v = nullptr;
    ExactMatrix* v_inv = nullptr;
};

// row[dst] += c * row[src] on a, mirrored on the trackers.
void row_add(ExactMatrix& a, Trackers& t, std::size_t dst, std::size_t src, const Scalar& c) {
    a.add_row_multiple(dst, src, c);
    if (t.u) t.u->add_row_multiple(dst, src, c);
    if (t.u_inv) t.u_inv->add_col_multiple(src, dst, a.ring().neg(c));
}

void row_swap(ExactMatrix& a, Trackers& t, std::size_t x, std::size_t y) {
    a.swap_rows(x, y);
    if (t.u) t.u->swap_rows(x, y);
    if (t.u_inv) t.u_inv->swap_cols(x, y);
}

void row_scale(ExactMatrix& a, Trackers& t, std::size_t r, const Scalar& unit) {
    a.scale_row(r, unit);
    if (t.u) t.u->scale_row(r, unit);
    if (t.u_inv) t.u_inv->scale_col(r, a.ring().inverse(unit));
}

// col[dst] += c * col[src] on a, mirrored on the trackers.
void col_add(ExactMatrix& a, Trackers& t, std::size_t dst, std::size_t src, const Scalar& c) {
    a.add_col_multiple(dst, src, c);
    if (t.v) t.v->add_col_multiple(dst, src, c);
    if (t.v_inv) t.v_inv->add_row_multiple(src, dst, a.ring().neg(c));
}

void col_swap(ExactMatrix& a, Trackers& t, std::size_t x, std::size_t y) {
    a.swap_cols(x, y);
    if (t.v) t.v->swap_cols(x, y);
    if (t.v_inv) t.v_inv->swap_rows(x, y);
}

void col_scale(ExactMatrix& a, Trackers& t, std::size_t c, const Scalar& unit) {
    a.scale_col(c, unit);
    if (t.v) t.v->scale_col(c, unit);
    if (t.v_inv) t.v_inv->scale_row(c, a.ring().inverse(unit));
}

struct Position {
    std::size_t row;
    std::size_t col;
};

// Smallest-norm nonzero entry in a[r0.., c0..], first in row-major order.
std::optional<Position> min_norm_entry(const ExactMatrix& a, std::size_t r0, std::size_t c0) {
    std::optional<Position> best;
    mpz_class best_norm;
    const Ring& ring = a.ring();
    for (std::size_t i = r0; i < a.rows(); ++i)
        for (std::size_t j = c0; j < a.cols(); ++j) {
            if (sgn(a(i, j)) == 0) continue;
            mpz_class n = ring.norm(a(i, j));
            if (!best || n < best_norm) {
                best = Position{i, j};
                best_norm = n;
                if (best_norm == 1) return best;
            }
        }
    return best;
}

std::size_t smith_reduce(ExactMatrix& a, Trackers& t) {
    const Ring& ring = a.ring();
    const std::size_t limit = std::min(a.rows(), a.cols());
    std::size_t pos = 0;
    while (pos < limit) {
        auto pivot = min_norm_entry(a, pos, pos);
        if (!pivot) break;
        row_swap(a, t, pos, pivot->row);
        col_swap(a, t, pos, pivot->col);
        for (;;) {
            bool clean = true;
            for (std::size_t i = pos + 1; i < a.rows(); ++i) {
                if (sgn(a(i, pos)) == 0) continue;
                row_add(a, t, i, pos, ring.neg(ring.quotient(a(i, pos), a(pos, pos))));
                if (sgn(a(i, pos)) != 0) clean = false;
            }
            for (std::size_t j = pos + 1; j < a.cols(); ++j) {
                if (sgn(a(pos, j)) == 0) continue;
                col_add(a, t, j, pos, ring.neg(ring.quotient(a(pos, j), a(pos, pos))));
                if (sgn(a(pos, j)) != 0) clean = false;
            }
            if (!clean) {
                // A remainder is now smaller than the pivot; bring the
                // smallest one in the pivot row or column forward.
                std::size_t best_i = pos, best_j = pos;
                mpz_class best = ring.norm(a(pos, pos));
                for (std::size_t i = pos + 1; i < a.rows(); ++i)
                    if (sgn(a(i, pos)) != 0 && ring.norm(a(i, pos)) < best) {
                        best = ring.norm(a(i, pos));
                        best_i = i;
                        best_j = pos;
                    }
                for (std::size_t j = pos + 1; j < a.cols(); ++j)
                    if (sgn(a(pos, j)) != 0 && ring.norm(a(pos, j)) < best) {
                        best = ring.norm(a(pos, j));
                        best_i = pos;
                        best_j = j;
                    }
                row_swap(a, t, pos, best_i);
                col_swap(a, t, pos, best_j);
                continue;
            }
            // Pivot row and column are clear; enforce divisibility.
            bool divisible = true;
            for (std::size_t i = pos + 1; i < a.rows() && divisible; ++i)
                for (std::size_t j = pos + 1; j < a.cols(); ++j)
                    if (!ring.divides(a(pos, pos), a(i, j))) {
                        row_add(a, t, pos, i, Scalar(1));
                        divisible = false;
                        break;
                    }
            if (divisible) break;
        }
        Scalar unit = ring.canonical_unit(a(pos, pos));
        if (unit != 1) row_scale(a, t, pos, unit);
        ++pos;
    }
    return pos;
}

} // namespace

SmithForm smith_normal_form(const ExactMatrix& m) {
    const Ring& ring = m.ring();
    SmithForm s;
    s.diagonal = m;
    s.left = ExactMatrix::identity(ring, m.rows());
    s.left_inverse = s.left;
    s.right = ExactMatrix::identity(ring, m.cols());
    s.right_inverse = s.right;
    Trackers t{&s.left, &s.left_inverse, &s.right, &s.right_inverse};
    s.rank = smith_reduce(s.diagonal, t);
    return s;
}

std::vector<Scalar> smith_diagonal(const ExactMatrix& m) {
    ExactMatrix a = m;
    Trackers t;
    std::size_t r = smith_reduce(a, t);
    std::vector<Scalar> d;
    d.reserve(r);
    for (std::size_t i = 0; i < r; ++i) d.push_back(a(i, i));
    return d;
}

ColumnEchelon column_echelon(const ExactMatrix& m) {
    const Ring& ring = m.ring();
    ColumnEchelon e;
    e.form = m;
    e.transform = ExactMatrix::identity(ring, m.cols());
    e.inverse = e.transform;
    Trackers t{nullptr, nullptr, &e.transform, &e.inverse};
    ExactMatrix& h = e.form;
    std::size_t pc = 0;
    for (std::size_t i = 0; i < h.rows() && pc < h.cols(); ++i) {
        for (;;) {
            std::optional<std::size_t> best;
            mpz_class best_norm;
            for (std::size_t j = pc; j < h.cols(); ++j) {
                if (sgn(h(i, j)) == 0) continue;
                mpz_class n = ring.norm(h(i, j));
                if (!best || n < best_norm) {
                    best = j;
                    best_norm = n;
                }
            }
            if (!best) break;
            col_swap(h, t, pc, *best);
            bool clean = true;
            for (std::size_t j = pc + 1; j < h.cols(); ++j) {
                if (sgn(h(i, j)) == 0) continue;
                col_add(h, t, j, pc, ring.neg(ring.quotient(h(i, j), h(i, pc))));
                if (sgn(h(i, j)) != 0) clean = false;
            }
            if (!clean) continue;
            Scalar unit = ring.canonical_unit(h(i, pc));
            if (unit != 1) col_scale(h, t, pc, unit);
            for (std::size_t j = 0; j < pc; ++j) {
                if (sgn(h(i, j)) == 0) continue;
                col_add(h, t, j, pc, ring.neg(ring.quotient(h(i, j), h(i, pc))));
            }
            e.pivot_rows.push_back(i);
            ++pc;
            break;
        }
    }
    e.rank = pc;
    return e;
}

std::optional<LinearSolution> solve_linear(const ExactMatrix& m, const ExactMatrix& b) {
    require_same_ring(m.ring(), b.ring(), "solve_linear");
    if (m.rows() != b.rows())
        throw DimensionError("solve_linear: matrix has " + std::to_string(m.rows()) + " rows, right side " +
                             std::to_string(b.rows()));
    const Ring& ring = m.ring();
    ColumnEchelon e = column_echelon(m);
    const ExactMatrix& h = e.form;
    ExactMatrix y(ring, m.cols(), b.cols());
    for (std::size_t c = 0; c < b.cols(); ++c) {
        for (std::size_t t = 0; t < e.rank; ++t) {
            std::size_t p = e.pivot_rows[t];
            Scalar residual = b(p, c);
            for (std::size_t s = 0; s < t; ++s)
                if (sgn(h(p, s)) != 0) residual -= h(p, s) * y(s, c);
            ring.normalize(residual);
            if (!ring.divides(h(p, t), residual)) return std::nullopt;
            y(t, c) = ring.quotient(residual, h(p, t));
        }
    }
    if (!(h * y == b)) return std::nullopt;
    LinearSolution sol;
    sol.particular = e.transform * y;
    sol.kernel = e.transform.columns(e.rank, m.cols() - e.rank);
    return sol;
}

ExactMatrix kernel_basis(const ExactMatrix& m) {
    ColumnEchelon e = column_echelon(m);
    return e.transform.columns(e.rank, m.cols() - e.rank);
}

KernelData kernel_data(const ExactMatrix& m) {
    ColumnEchelon e = column_echelon(m);
    return {e.transform.columns(e.rank, m.cols() - e.rank), e.inverse.row_range(e.rank, m.cols() - e.rank)};
}

ExactMatrix image_basis(const ExactMatrix& m) {
    ColumnEchelon e = column_echelon(m);
    return e.form.columns(0, e.rank);
}

ImageData image_data(const ExactMatrix& m) {
    ColumnEchelon e = column_echelon(m);
    return {e.form.columns(0, e.rank), e.inverse.row_range(0, e.rank)};
}

std::size_t matrix_rank(const ExactMatrix& m) { return column_echelon(m).rank; }

std::optional<ExactMatrix> inverse(const ExactMatrix& m) {
    if (m.rows() != m.cols()) return std::nullopt;
    ColumnEchelon e = column_echelon(m);
    if (!e.form.is_identity()) return std::nullopt;
    return e.transform;
}

std::string ModulePresentation::describe() const {
    if (is_zero()) return "0";
    std::string base = ring.kind() == RingKind::integers ? "Z" : ring.kind() == RingKind::rationals ? "Q" : ring.name();
    std::ostringstream out;
    bool first = true;
    if (free_rank > 0) {
        out << base;
        if (free_rank > 1) out << "^" << free_rank;
        first = false;
    }
    for (const auto& d : invariant_factors) {
        out << (first ? "" : " + ") << base << "/" << ring.format(d);
        first = false;
    }
    return out.str();
}

ModulePresentation module_from_cokernel(const ExactMatrix& relations) {
    const Ring& ring = relations.ring();
    ModulePresentation mp;
    mp.ring = ring;
    mp.generators = relations.rows();
    mp.relations = relations;
    auto diag = smith_diagonal(relations);
    mp.free_rank = relations.rows() - diag.size();
    for (auto& d : diag)
        if (!ring.is_unit(d)) mp.invariant_factors.push_back(d);
    return mp;
}

bool module_map_is_iso(const ExactMatrix& f, const ModulePresentation& src, const ModulePresentation& dst) {
    if (f.rows() != dst.generators || f.cols() != src.generators)
        throw DimensionError("module map of shape " + std::to_string(f.rows()) + "x" + std::to_string(f.cols()) +
                             " between modules on " + std::to_string(src.generators) + " and " +
                             std::to_string(dst.generators) + " generators");
    if (src.relations.cols() > 0 && !solve_linear(dst.relations, f * src.relations))
        throw NotAModuleMap("relations of the source are not carried into relations of the target");
    if (!src.isomorphic_to(dst)) return false;
    // A surjection between isomorphic finitely generated modules is an isomorphism.
    auto diag = smith_diagonal(hstack(f, dst.relations));
    if (diag.size() != dst.generators) return false;
    for (const auto& d : diag)
        if (!f.ring().is_unit(d)) return false;
    return true;
}

bool module_maps_equal(const ExactMatrix& f, const ExactMatrix& g, const ModulePresentation& dst) {
    ExactMatrix diff = f - g;
    if (diff.is_zero()) return true;
    return solve_linear(dst.relations, diff).has_value();
}

} // namespace hld
