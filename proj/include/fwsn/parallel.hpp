#pragma once

#include <cstddef>
#include <functional>

namespace fwsn {

// Name of the environment variable that sets the worker count (0 = auto).
inline constexpr const char* kWorkersEnv = "FWSN_WORKERS";

// Worker count from FWSN_WORKERS, falling back to hardware concurrency.
unsigned default_workers();

// Resolves 0 to default_workers().
unsigned resolve_workers(unsigned requested);

// Runs body(i) for i in [0, count) on up to `workers` threads with dynamic
// scheduling. Callers must make body(i) depend only on i.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& body);

}  // namespace fwsn
