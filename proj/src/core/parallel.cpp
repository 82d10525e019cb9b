#include "core/parallel.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace colhel {

unsigned resolve_workers(unsigned requested) {
    if (requested > 0)
        return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

void parallel_chunks(std::size_t n_chunks, unsigned workers, const std::function<void(std::size_t)>& fn) {
    workers = resolve_workers(workers);
    if (n_chunks == 0)
        return;
    if (workers == 1 || n_chunks == 1) {
        for (std::size_t i = 0; i < n_chunks; ++i)
            fn(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto body = [&]() {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= n_chunks)
                return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error)
                    error = std::current_exception();
                next.store(n_chunks); // drain remaining work
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t)
        pool.emplace_back(body);
    for (auto& th : pool)
        th.join();
    if (error)
        std::rethrow_exception(error);
}

} // namespace colhel
