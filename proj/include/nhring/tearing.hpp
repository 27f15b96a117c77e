#pragma once
// End-to-end closure gap of the analytical spectrum and the critical
// dissipation at which the ring tears into two open chains.

#include <optional>
#include <vector>

#include "nhring/gbz.hpp"
#include "nhring/model.hpp"

namespace nhring {

struct DeltaOptions {
    int theta_steps = 512;  // delta theta = 2 pi / theta_steps
    double zero_threshold = 1e-6;
    GbzTolerances tol{};
};

/// Closure gap of the Re E > 0, Im E > 0 quadrant between theta -> 0+ and
/// theta -> 2 pi-. Each quadrant point is carried to its theta = 0 limit (the
/// nearest same-family solution at theta = 0); the result is the Hausdorff
/// distance between the two limit sets. Empty optional when either side has
/// no quadrant point.
std::optional<double> delta_gap(const ModelParams& p, const DeltaOptions& opt = {});

struct TearingScan {
    ModelParams params_base;
    std::vector<double> epsilon_grid;
    std::vector<double> delta_values;  // NaN where not applicable
    std::vector<bool> applicable;
    std::optional<double> epsilon_star;
};

/// Evaluates delta_gap over a strictly increasing epsilon grid. epsilon* is
/// the smallest grid value from which Delta stays below threshold.
TearingScan critical_epsilon(const ModelParams& base, const std::vector<double>& epsilon_grid,
                             const DeltaOptions& opt = {}, int threads = 1);

/// lo, lo + step, ... up to hi inclusive (within step/2).
std::vector<double> make_grid(double lo, double hi, double step);

} // namespace nhring
