#pragma once

#include "hld/complex.hpp"

#include <random>
#include <vector>

namespace hld::testing {

inline ExactMatrix random_matrix(std::mt19937_64& rng, const Ring& ring, std::size_t rows, std::size_t cols,
                                 long bound = 9) {
    std::uniform_int_distribution<long> dist(-bound, bound);
    ExactMatrix m(ring, rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m.set(i, j, Scalar(dist(rng)));
    return m;
}

// Product of random elementary matrices; determinant 1.
inline ExactMatrix random_unimodular(std::mt19937_64& rng, const Ring& ring, std::size_t n, int steps = 6) {
    ExactMatrix m = ExactMatrix::identity(ring, n);
    if (n < 2) return m;
    std::uniform_int_distribution<std::size_t> idx(0, n - 1);
    std::uniform_int_distribution<long> coeff(-2, 2);
    for (int s = 0; s < steps; ++s) {
        std::size_t a = idx(rng), b = idx(rng);
        if (a == b) continue;
        m.add_row_multiple(a, b, Scalar(coeff(rng)));
    }
    return m;
}

// Direct sum of two-term pieces Z ->(c) Z and single terms, then a random
// change of basis in every degree.
inline ChainComplex random_complex(std::mt19937_64& rng, const Ring& ring, int lo, int hi, int pieces = 4) {
    const std::size_t n = static_cast<std::size_t>(hi - lo + 1);
    std::vector<std::size_t> ranks(n, 0);
    struct Piece {
        std::size_t degree;
        long coeff;  // 0 means a single term
    };
    std::vector<Piece> ps;
    std::uniform_int_distribution<std::size_t> deg(0, n - 1);
    std::uniform_int_distribution<long> coeff(0, 4);
    for (int p = 0; p < pieces; ++p) {
        Piece piece{deg(rng), coeff(rng)};
        if (piece.degree + 1 >= n) piece.coeff = 0;
        ps.push_back(piece);
    }
    std::vector<std::vector<std::pair<std::size_t, long>>> arrows(n);  // source index, coeff
    std::vector<std::vector<std::size_t>> targets(n);
    for (const auto& p : ps) {
        std::size_t src = ranks[p.degree]++;
        if (p.coeff != 0) {
            std::size_t tgt = ranks[p.degree + 1]++;
            arrows[p.degree].push_back({src, p.coeff});
            targets[p.degree].push_back(tgt);
        }
    }
    std::vector<ExactMatrix> d;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        ExactMatrix m(ring, ranks[i + 1], ranks[i]);
        for (std::size_t a = 0; a < arrows[i].size(); ++a)
            m.set(targets[i][a], arrows[i][a].first, Scalar(arrows[i][a].second));
        d.push_back(m);
    }
    std::vector<ExactMatrix> p, p_inv;
    for (std::size_t i = 0; i < n; ++i) {
        ExactMatrix u = random_unimodular(rng, ring, ranks[i]);
        p.push_back(u);
        p_inv.push_back(*inverse(u));
    }
    for (std::size_t i = 0; i + 1 < n; ++i) d[i] = p[i + 1] * d[i] * p_inv[i];
    return ChainComplex(ring, lo, ranks, d);
}

} // namespace hld::testing
