#pragma once

#include "options.hpp"

namespace invcure::cli {

/// Each command returns the process exit status (0 ok, 2 non-convergence);
/// input problems surface as invcure::Error exceptions.
int cmd_fit(const FitFlags& flags);
int cmd_curves(const CurveFlags& flags);
int cmd_quantiles(const QuantileFlags& flags);
int cmd_bootstrap(const BootstrapFlags& flags);
int cmd_simulate(const SimulateFlags& flags);
int cmd_mc_table(const McFlags& flags);

} // namespace invcure::cli
