#pragma once

#include <cstddef>
#include <span>

namespace mz {

/// Sum in a fixed binary-tree order. The result depends only on the input
/// sequence, never on how callers split the work.
double pairwise_sum(std::span<const double> values);

/// Number of worker threads: MZ_THREADS if set and positive, otherwise the
/// hardware concurrency (at least 1).
int worker_count();

/// Takes precedence over MZ_THREADS when positive; 0 clears it.
void set_worker_override(int n);

}  // namespace mz
