#pragma once

#include "hld/matrix.hpp"

#include <cstddef>

namespace hld::kernels {

/// Reference product. Kept for testing and benchmarking the parallel kernel.
ExactMatrix multiply_serial(const ExactMatrix& a, const ExactMatrix& b);

/// OpenMP product, one task per output row. Bit-identical to multiply_serial.
ExactMatrix multiply_parallel(const ExactMatrix& a, const ExactMatrix& b);

/// Products with at least this many scalar multiply-adds use the parallel kernel.
inline constexpr std::size_t parallel_threshold = 4096;

/// Number of OpenMP threads available (1 when built without OpenMP).
int thread_count();

} // namespace hld::kernels
