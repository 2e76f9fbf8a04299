#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace scelab {

/// Execution policy for replicate loops. `serial` is the reference path the
/// tests compare against; `parallel` distributes indices over OpenMP threads.
/// Both produce bitwise-identical results because each index owns its own
/// random substream and reductions happen afterwards in index order.
enum class Execution { serial, parallel };

inline int available_threads()
{
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

/// Calls fn(i) for i in [0, n). If any call throws, the exception from the
/// lowest failing index is rethrown after the loop completes.
template <class Fn>
void for_each_index(std::size_t n, Execution exec, Fn&& fn)
{
    if (exec == Execution::serial || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::exception_ptr> errors(n);
    const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 8)
    for (std::int64_t i = 0; i < count; ++i) {
        try {
            fn(static_cast<std::size_t>(i));
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

/// Evaluates fn(i) for every index and returns the results in index order.
template <class T, class Fn>
std::vector<T> map_indices(std::size_t n, Execution exec, Fn&& fn)
{
    std::vector<T> out(n);
    for_each_index(n, exec, [&](std::size_t i) { out[i] = fn(i); });
    return out;
}

}  // namespace scelab
