// Pieces shared by the OpenMP kernel and the serial reference.

#pragma once

#include "dlambda/dynamics.hpp"

#include <cmath>
#include <cstddef>
#include <vector>

namespace dlambda::detail {

struct StepPlan {
    std::size_t n_steps = 0;
    std::size_t record_every = 1;
    double h = 0.0; // node spacing in zeta
};

StepPlan plan_steps(const SystemParams& params, const SimGrid& grid);

/// Allocates the record and fills in depths, node indices and input specs.
PulseRecord make_record(const PulseSpec& probe_in, const PulseSpec& signal_in, const SimGrid& grid,
                        const StepPlan& plan);

inline bool finite(const complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

} // namespace dlambda::detail
