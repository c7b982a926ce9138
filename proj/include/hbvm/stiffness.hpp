#pragma once

#include "hbvm/driver.hpp"

namespace hbvm {

// Conditioning parameters of a solution segment: kappa is the sup of the
// solution magnitude, gamma its time-averaged L1 magnitude, and sigma their
// ratio.  sigma near 1 means the solution is "uniformly large" over the
// window; sigma >> 1 flags a fast transient inside a long window, the
// conditioning signature of stiffness.
struct ConditioningParams {
    double kappa = 0.0;
    double gamma = 0.0;
    double sigma = 0.0;
};

// How a vector-valued trajectory is reduced to the scalar series the
// parameters are computed from.
enum class TrajectoryNorm {
    component_max,  // parameters per component, report the largest sigma
    euclidean,      // |y_n|_2 series
    max_abs,        // |y_n|_inf series
};

// Closed form for y' = lambda*y, y(0) = y0, on [0, T] with lambda < 0:
// kappa = |y0|, gamma = (1 - e^{lambda T}) / (T |lambda|) * |y0|.
ConditioningParams continuous_params_linear(double lambda, double y0_abs, double T);

// Discrete analogue on a trajectory's own (possibly non-uniform) mesh:
// kappa = max_n |y_n|, gamma = trapezoidal integral of |y_n| divided by the
// total duration.
ConditioningParams discrete_params(const Trajectory& traj,
                                   TrajectoryNorm norm = TrajectoryNorm::component_max);

// True iff kappa and gamma each agree within the relative tolerance, i.e. the
// discrete mesh reproduces the continuous conditioning of the problem.
bool well_represented(const ConditioningParams& cont, const ConditioningParams& disc,
                      double rtol = 0.1);

}  // namespace hbvm
