#include "patnet/parallel.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace patnet {

unsigned effective_threads(unsigned requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

std::size_t chunk_count(std::size_t n, std::size_t chunk_size) {
    if (chunk_size == 0) chunk_size = 1;
    return (n + chunk_size - 1) / chunk_size;
}

void for_each_chunk(std::size_t n, std::size_t chunk_size, unsigned threads,
                    const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
    if (n == 0) return;
    if (chunk_size == 0) chunk_size = 1;
    const std::size_t n_chunks = chunk_count(n, chunk_size);
    threads = effective_threads(threads);
    if (threads > n_chunks) threads = static_cast<unsigned>(n_chunks);

    if (threads <= 1) {
        for (std::size_t c = 0; c < n_chunks; ++c) {
            const std::size_t begin = c * chunk_size;
            const std::size_t end = std::min(n, begin + chunk_size);
            fn(c, begin, end);
        }
        return;
    }

    std::atomic<std::size_t> next_chunk{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker = [&] {
        for (;;) {
            const std::size_t c = next_chunk.fetch_add(1);
            if (c >= n_chunks) return;
            const std::size_t begin = c * chunk_size;
            const std::size_t end = std::min(n, begin + chunk_size);
            try {
                fn(c, begin, end);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace patnet
