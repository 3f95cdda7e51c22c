#pragma once

#include <cstddef>
#include <functional>

namespace lyap {

/// Splits [0, count) into at most `threads` contiguous chunks and runs
/// `body(begin, end)` for each, on worker threads when threads > 1.
/// Results that depend only on the index are identical for any thread
/// count. The first exception thrown by any chunk is rethrown.
void parallel_chunks(std::size_t count, unsigned threads,
                     const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace lyap
