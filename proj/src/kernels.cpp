#include "hld/kernels.hpp"

#include "hld/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hld::kernels {

namespace {

void check_product(const ExactMatrix& a, const ExactMatrix& b) {
    require_same_ring(a.ring(), b.ring(), "matrix product");
    if (a.cols() != b.rows())
        throw DimensionError("product of " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                             " and " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
}

void multiply_row(const ExactMatrix& a, const ExactMatrix& b, ExactMatrix& c, std::size_t i) {
    const Ring& ring = a.ring();
    Scalar acc;
    for (std::size_t j = 0; j < b.cols(); ++j) {
        acc = 0;
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Scalar& x = a(i, k);
            if (sgn(x) == 0) continue;
            const Scalar& y = b(k, j);
            if (sgn(y) == 0) continue;
            acc += x * y;
        }
        ring.normalize(acc);
        c(i, j) = acc;
    }
}

} // namespace

ExactMatrix multiply_serial(const ExactMatrix& a, const ExactMatrix& b) {
    check_product(a, b);
    ExactMatrix c(a.ring(), a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) multiply_row(a, b, c, i);
    return c;
}

ExactMatrix multiply_parallel(const ExactMatrix& a, const ExactMatrix& b) {
    check_product(a, b);
    ExactMatrix c(a.ring(), a.rows(), b.cols());
    const auto rows = static_cast<long>(a.rows());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < rows; ++i) multiply_row(a, b, c, static_cast<std::size_t>(i));
    return c;
}

int thread_count() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace hld::kernels
