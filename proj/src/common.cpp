#include "limo/common.hpp"

#include <algorithm>
#include <cstdlib>

namespace limo {

size_t worker_threads() {
    size_t hw = std::max<size_t>(1, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("LIMO_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) hw = std::min<size_t>(hw, (size_t)v);
    }
    return hw;
}

void parallel_for(size_t n, const std::function<void(size_t, size_t)>& fn) {
    size_t nthreads = std::min(worker_threads(), n);
    if (n == 0) return;
    if (nthreads <= 1 || n < 2) {
        fn(0, n);
        return;
    }
    std::vector<std::thread> threads;
    threads.reserve(nthreads);
    size_t chunk = (n + nthreads - 1) / nthreads;
    for (size_t t = 0; t < nthreads; t++) {
        size_t begin = t * chunk;
        size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        threads.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
    for (auto& th : threads) th.join();
}

}  // namespace limo
