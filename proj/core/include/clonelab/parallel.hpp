#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace clonelab {

/// Worker count: CLONELAB_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
std::size_t thread_count();

/// Splits [0, total) into contiguous chunks and runs `body(begin, end)` on a
/// pool of thread_count() workers. Chunks are claimed in ascending order.
/// Returns once every chunk has been processed or `body` returned false for
/// some chunk (remaining unclaimed chunks are then skipped).
void parallel_chunks(std::uint64_t total, std::uint64_t chunk,
                     const std::function<bool(std::uint64_t, std::uint64_t)>& body);

}  // namespace clonelab
