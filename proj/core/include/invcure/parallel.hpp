#pragma once

#include <cstddef>
#include <functional>

namespace invcure {

/// Runs body(0), ..., body(count - 1) on up to `threads` worker threads
/// (0 means hardware concurrency). Each index runs exactly once; callers write
/// results into per-index slots so the outcome does not depend on scheduling.
/// The first exception thrown by a task is rethrown after all workers join.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

} // namespace invcure
