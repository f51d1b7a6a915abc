#ifndef FEIGEN_PARALLEL_HPP
#define FEIGEN_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace feigen
{

// Worker count from FEIGEN_WORKERS, else the hardware concurrency.
inline unsigned default_workers()
{
    if (const char *env = std::getenv("FEIGEN_WORKERS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) {
            return static_cast<unsigned>(v);
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/**
 * results[i] = fn(i) for i in [0, count), spread over `workers` threads.
 * Tasks are pure; results land in index order, so the outcome does not depend
 * on scheduling. MPFR takes the rounding mode per call (and keeps its caches
 * thread-local), so workers never share rounding state. If tasks throw, the
 * exception of the lowest failing index is rethrown.
 */
template <typename T, typename Fn>
std::vector<T> parallel_map(std::size_t count, unsigned workers, Fn &&fn)
{
    std::vector<std::optional<T>> slots(count);
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto run = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                slots[i].emplace(fn(i));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned n = workers == 0 ? 1 : std::min<unsigned>(workers, static_cast<unsigned>(count == 0 ? 1 : count));
    if (n <= 1) {
        run();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n);
        for (unsigned w = 0; w < n; ++w) {
            pool.emplace_back(run);
        }
        for (auto &t : pool) {
            t.join();
        }
    }
    std::vector<T> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        if (errors[i]) {
            std::rethrow_exception(errors[i]);
        }
        out.push_back(std::move(*slots[i]));
    }
    return out;
}

} // namespace feigen

#endif // FEIGEN_PARALLEL_HPP
