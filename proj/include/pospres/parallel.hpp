#pragma once

// Index-preserving parallel map over independent tasks. POSPRES_THREADS caps
// the worker count; results are aggregated by index, so output is identical
// to the serial schedule.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace pospres {

inline unsigned thread_cap() {
    if (const char* env = std::getenv("POSPRES_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v >= 1) return static_cast<unsigned>(v);
        } catch (const std::exception&) {
        }
        return 1;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

template <class In, class Fn>
auto parallel_map(const std::vector<In>& inputs, Fn fn)
    -> std::vector<decltype(fn(inputs.front()))> {
    using Out = decltype(fn(inputs.front()));
    std::vector<Out> results(inputs.size());
    if (inputs.empty()) return results;
    const unsigned workers =
        std::min<unsigned>(thread_cap(), static_cast<unsigned>(inputs.size()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < inputs.size(); ++i) results[i] = fn(inputs[i]);
        return results;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= inputs.size() || failed.load()) return;
            try {
                results[i] = fn(inputs[i]);
            } catch (...) {
                if (!failed.exchange(true)) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (failed.load()) std::rethrow_exception(error);
    return results;
}

}  // namespace pospres
