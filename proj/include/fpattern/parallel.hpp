#pragma once

#include <cstddef>
#include <functional>

namespace fpattern {

/// Number of worker threads used by row-parallel loops. 0 means all cores.
void set_thread_count(unsigned n);
unsigned thread_count();

/// Calls body(row) for row in [0, rows). Rows are split into contiguous
/// blocks; body must only write state owned by its row.
void parallel_rows(std::size_t rows, const std::function<void(std::size_t)>& body);

}  // namespace fpattern
