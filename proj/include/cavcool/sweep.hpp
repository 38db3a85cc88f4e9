#pragma once

#include <vector>

#include "cavcool/config.hpp"
#include "cavcool/result_table.hpp"

namespace cavcool {

struct SweepOutcome {
    std::vector<ResultRow> rows;  // sorted by (n_atoms, step)
    int failures = 0;
};

// Evaluates one grid point; any numerical failure is captured in the row
// rather than thrown.
ResultRow evaluate_point(const RunConfig& config, int n_atoms, int step);

// Runs the whole (N, l) grid on a worker pool.  Output is deterministic and
// independent of the worker count.
SweepOutcome run_sweep(const RunConfig& config);

} // namespace cavcool
