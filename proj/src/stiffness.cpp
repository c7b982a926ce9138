#include "hbvm/stiffness.hpp"

#include <cmath>
#include <stdexcept>

namespace hbvm {

namespace {

// kappa/gamma/sigma of one scalar series sampled on the trajectory mesh.
ConditioningParams params_of_series(const std::vector<double>& t, const std::vector<double>& s) {
    ConditioningParams p;
    for (double v : s) p.kappa = std::max(p.kappa, v);
    double integral = 0.0;
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        integral += 0.5 * (t[i + 1] - t[i]) * (s[i] + s[i + 1]);
    }
    p.gamma = integral / (t.back() - t.front());
    p.sigma = (p.gamma > 0.0) ? p.kappa / p.gamma : 0.0;
    return p;
}

}  // namespace

ConditioningParams continuous_params_linear(double lambda, double y0_abs, double T) {
    if (!(lambda < 0.0)) {
        throw std::invalid_argument(
            "continuous_params_linear: lambda must be negative (decaying solution)");
    }
    if (!(y0_abs > 0.0)) {
        throw std::invalid_argument("continuous_params_linear: |y0| must be positive");
    }
    if (!(T > 0.0)) throw std::invalid_argument("continuous_params_linear: T must be positive");

    ConditioningParams p;
    p.kappa = y0_abs;
    // (1 - e^{lambda T}) / (T |lambda|) * |y0|, with expm1 keeping the
    // lambda -> 0 limit accurate.
    p.gamma = -std::expm1(lambda * T) / (T * std::abs(lambda)) * y0_abs;
    p.sigma = p.kappa / p.gamma;
    return p;
}

ConditioningParams discrete_params(const Trajectory& traj, TrajectoryNorm norm) {
    const std::size_t n = traj.times.size();
    if (n < 2) throw std::invalid_argument("discrete_params: need at least two mesh points");
    const double duration = traj.times.back() - traj.times.front();
    if (!(duration > 0.0)) {
        throw std::invalid_argument("discrete_params: trajectory spans zero duration");
    }

    const std::size_t dim = traj.states.front().size();
    std::vector<double> series(n);

    if (norm == TrajectoryNorm::component_max) {
        // Parameters component by component; report the largest sigma.
        ConditioningParams best;
        bool any = false;
        for (std::size_t c = 0; c < dim; ++c) {
            for (std::size_t i = 0; i < n; ++i) series[i] = std::abs(traj.states[i][c]);
            ConditioningParams p = params_of_series(traj.times, series);
            if (p.kappa == 0.0) continue;  // identically zero component
            if (!any || p.sigma > best.sigma) {
                best = p;
                any = true;
            }
        }
        if (!any) {
            throw std::invalid_argument("discrete_params: trajectory is identically zero");
        }
        return best;
    }

    for (std::size_t i = 0; i < n; ++i) {
        const State& y = traj.states[i];
        double v = 0.0;
        if (norm == TrajectoryNorm::euclidean) {
            for (double x : y) v += x * x;
            v = std::sqrt(v);
        } else {
            for (double x : y) v = std::max(v, std::abs(x));
        }
        series[i] = v;
    }
    ConditioningParams p = params_of_series(traj.times, series);
    if (p.kappa == 0.0) {
        throw std::invalid_argument("discrete_params: trajectory is identically zero");
    }
    return p;
}

bool well_represented(const ConditioningParams& cont, const ConditioningParams& disc,
                      double rtol) {
    if (!(rtol > 0.0)) throw std::invalid_argument("well_represented: rtol must be positive");
    return std::abs(cont.kappa - disc.kappa) <= rtol * cont.kappa &&
           std::abs(cont.gamma - disc.gamma) <= rtol * cont.gamma;
}

}  // namespace hbvm
