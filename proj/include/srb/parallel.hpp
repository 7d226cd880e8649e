#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace srb {

// Worker count: SRB_GRAD_THREADS when set, otherwise the hardware concurrency.
inline int default_workers() {
    if (const char* env = std::getenv("SRB_GRAD_THREADS")) {
        const int w = std::atoi(env);
        if (w >= 1) return w;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

// Runs fn(task_index) for task_index in [0, n_tasks) on up to `workers`
// threads and returns the results ordered by task index, so any reduction
// over them is deterministic regardless of scheduling.
template <typename R, typename Fn>
std::vector<R> parallel_tasks(int workers, int n_tasks, Fn&& fn) {
    std::vector<R> results(n_tasks);
    if (workers <= 1 || n_tasks <= 1) {
        for (int t = 0; t < n_tasks; ++t) results[t] = fn(t);
        return results;
    }
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    const int nthreads = std::min(workers, n_tasks);
    std::vector<std::exception_ptr> errors(nthreads);
    for (int w = 0; w < nthreads; ++w)
        pool.emplace_back([&, w] {
            try {
                for (int t = next.fetch_add(1); t < n_tasks; t = next.fetch_add(1))
                    results[t] = fn(t);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return results;
}

} // namespace srb
