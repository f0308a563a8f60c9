// Executes a parsed run configuration: trajectory simulation with CSV output
// and positivity/trace monitors, convergence studies, operator-sum
// verification, and Choi-spectrum probes.
#pragma once

#include "lk/config.hpp"

namespace lk {

// Returns the process exit code: 0 on success, 2 when an enabled invariant
// monitor trips mid-run. Configuration and numerical failures throw.
int run(const RunConfig& cfg);

}  // namespace lk
