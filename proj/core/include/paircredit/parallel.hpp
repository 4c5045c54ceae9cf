#pragma once

#include <cstddef>
#include <functional>

namespace paircredit::parallel {

/// Name of the environment variable that sets the default worker count.
inline constexpr const char* kThreadsEnv = "PAIRCREDIT_THREADS";

/// requested > 0 is returned as is; 0 means PAIRCREDIT_THREADS if set,
/// otherwise the available hardware parallelism.
[[nodiscard]] int resolve_threads(int requested);

/// Calls fn(i) for every i in [0, n) on up to `threads` workers. Each index
/// must write only to its own output slot; the first exception is rethrown.
void for_each_index(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace paircredit::parallel
