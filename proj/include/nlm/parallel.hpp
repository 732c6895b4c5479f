#pragma once

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace nlm {

/// Worker count: NLM_THREADS caps it, hardware concurrency is the default.
inline unsigned thread_count() {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("NLM_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1 && v < 1024) return static_cast<unsigned>(v);
    }
    return hw;
}

/// Splits [0, n) into contiguous chunks, runs `fn(begin, end)` on each, and
/// returns the per-chunk results in index order so downstream merges are
/// deterministic regardless of the worker count.
template <typename R, typename Fn>
std::vector<R> parallel_chunked(uint64_t n, Fn&& fn) {
    unsigned workers = thread_count();
    if (n < 1024 || workers <= 1) {
        std::vector<R> out;
        if (n > 0) out.push_back(fn(0, n));
        return out;
    }
    uint64_t chunk = (n + workers - 1) / workers;
    std::vector<R> results(workers);
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        uint64_t begin = w * chunk;
        uint64_t end = begin + chunk < n ? begin + chunk : n;
        if (begin >= end) break;
        threads.emplace_back([&results, &fn, w, begin, end] { results[w] = fn(begin, end); });
    }
    for (auto& t : threads) t.join();
    results.resize(threads.size());
    return results;
}

/// Orders-preserving parallel map over [0, n).
template <typename R, typename Fn>
std::vector<R> parallel_map(uint64_t n, Fn&& fn) {
    auto shards = parallel_chunked<std::vector<R>>(n, [&fn](uint64_t begin, uint64_t end) {
        std::vector<R> out;
        out.reserve(end - begin);
        for (uint64_t k = begin; k < end; ++k) out.push_back(fn(k));
        return out;
    });
    std::vector<R> flat;
    flat.reserve(n);
    for (auto& s : shards)
        for (auto& v : s) flat.push_back(std::move(v));
    return flat;
}

}  // namespace nlm
