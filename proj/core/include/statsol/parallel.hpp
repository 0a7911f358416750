#pragma once

#include <cstddef>
#include <functional>

namespace statsol {

/// Number of worker threads: STATSOL_THREADS if set (>= 1), otherwise the
/// hardware concurrency.
std::size_t worker_count();

/// Runs body(i) for i in [0, count) on contiguous index blocks, one block per
/// worker. Results must be written to per-index slots; reductions happen on
/// the caller's side in index order so that scheduling cannot change sums.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace statsol
