#pragma once

#include <cstddef>
#include <functional>

namespace patnet {

/// 0 means "use hardware_concurrency", clamped to at least 1.
unsigned effective_threads(unsigned requested);

/// Splits [0, n) into fixed-size chunks and runs fn(chunk_index, begin, end)
/// across `threads` workers. Chunk boundaries depend only on (n, chunk_size),
/// never on the thread count, so callers can produce per-chunk partial results
/// and reduce them in chunk order to get thread-count-independent output.
void for_each_chunk(std::size_t n, std::size_t chunk_size, unsigned threads,
                    const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

std::size_t chunk_count(std::size_t n, std::size_t chunk_size);

}  // namespace patnet
