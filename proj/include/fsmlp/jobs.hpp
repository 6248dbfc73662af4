#pragma once

#include <cstddef>
#include <functional>

namespace fsmlp {

/// Worker count from FSMLP_WORKERS (default 1).
std::size_t worker_count_from_env();

/// Runs fn(0) .. fn(count - 1) on up to `workers` threads. Each index runs exactly once;
/// the first exception thrown by any job is rethrown after all workers have joined.
void run_jobs(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& fn);

}  // namespace fsmlp
