#include "hbvm/driver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace hbvm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double norm2(const State& a, const State& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

double energy_of(const VectorField& field, const State& y) {
    return field.has_energy() ? field.energy(y) : kNaN;
}

void push_point(Trajectory& traj, const VectorField& field, double t, const State& y) {
    traj.times.push_back(t);
    traj.states.push_back(y);
    traj.energies.push_back(energy_of(field, y));
}

}  // namespace

Trajectory integrate_fixed(const VectorField& field, const State& y0, double h, long n_steps,
                           const HbvmTableau& tableau, const StageSolveOptions& opts) {
    if (!(h > 0.0)) throw std::invalid_argument("integrate_fixed: step size must be positive");
    if (n_steps < 1) throw std::invalid_argument("integrate_fixed: need at least one step");

    Trajectory traj;
    push_point(traj, field, 0.0, y0);
    State y = y0;
    for (long i = 1; i <= n_steps; ++i) {
        StepOutcome step = hbvm_step(field, y, h, tableau, opts);
        traj.stage_iterations_total += step.iterations;
        if (!step.converged) {
            traj.failure_reason = "stage iteration did not converge at step " +
                                  std::to_string(i) + " (h = " + std::to_string(h) + ")";
            return traj;
        }
        y = step.y1;
        traj.steps_accepted += 1;
        push_point(traj, field, static_cast<double>(i) * h, y);
    }
    traj.completed = true;
    return traj;
}

Trajectory integrate_fixed(const HamiltonianSystem& system, const State& y0, double h,
                           long n_steps, const HbvmTableau& tableau,
                           const StageSolveOptions& opts) {
    return integrate_fixed(system.field(), y0, h, n_steps, tableau, opts);
}

LocalErrorEstimate estimate_local_error(const VectorField& field, const State& y, double h,
                                        const HbvmTableau& tableau,
                                        const StageSolveOptions& opts) {
    LocalErrorEstimate est;
    StepOutcome coarse = hbvm_step(field, y, h, tableau, opts);
    est.iterations = coarse.iterations;
    if (!coarse.converged) return est;

    StepOutcome half1 = hbvm_step(field, y, 0.5 * h, tableau, opts);
    est.iterations += half1.iterations;
    if (!half1.converged) return est;

    StepOutcome half2 = hbvm_step(field, half1.y1, 0.5 * h, tableau, opts);
    est.iterations += half2.iterations;
    if (!half2.converged) return est;

    est.y_fine = half2.y1;
    const double denom = std::pow(2.0, 2.0 * tableau.r) - 1.0;
    est.err = norm2(coarse.y1, est.y_fine) / denom;
    est.converged = true;
    return est;
}

Trajectory integrate_adaptive(const VectorField& field, const State& y0, double t_end,
                              const HbvmTableau& tableau, const SolveOptions& opts,
                              const std::vector<double>& checkpoints) {
    if (!(t_end > 0.0)) throw std::invalid_argument("integrate_adaptive: t_end must be positive");
    if (!(opts.h_min > 0.0) || !(opts.h_min <= opts.initial_step) ||
        !(opts.initial_step <= opts.h_max)) {
        throw std::invalid_argument(
            "integrate_adaptive: need 0 < h_min <= initial_step <= h_max");
    }
    if (!(opts.tol > 0.0)) throw std::invalid_argument("integrate_adaptive: tol must be positive");

    // Interior checkpoints, sorted and deduplicated; t_end always terminates.
    std::vector<double> cps;
    for (double c : checkpoints) {
        if (c > 1e-12 && c < t_end - 1e-12) cps.push_back(c);
    }
    std::sort(cps.begin(), cps.end());
    cps.erase(std::unique(cps.begin(), cps.end(),
                          [](double a, double b) { return std::abs(a - b) <= 1e-12; }),
              cps.end());
    cps.push_back(t_end);

    StageSolveOptions stage_opts{opts.stage_tol, opts.stage_max_iter};
    const double order_exp = 1.0 / (2.0 * tableau.r + 1.0);

    Trajectory traj;
    push_point(traj, field, 0.0, y0);
    State y = y0;
    double t = 0.0;
    double h = opts.initial_step;
    std::size_t cp = 0;

    while (cp < cps.size()) {
        if (traj.steps_accepted + traj.steps_rejected >= opts.max_steps) {
            traj.failure_reason = "max_steps (" + std::to_string(opts.max_steps) +
                                  ") exceeded at t = " + std::to_string(t);
            return traj;
        }
        const double hs = std::min(h, cps[cp] - t);
        const bool clipped = hs < h;

        LocalErrorEstimate est;
        bool singular = false;
        try {
            est = estimate_local_error(field, y, hs, tableau, stage_opts);
        } catch (const std::domain_error&) {
            singular = true;  // trial curve left the field's domain: treat as too-large h
        }
        traj.stage_iterations_total += est.iterations;

        if (singular || !est.converged) {
            traj.steps_rejected += 1;
            const double hn = 0.5 * hs;
            if (hn < opts.h_min) {
                traj.failure_reason = "stage iteration failed at the minimum step size (t = " +
                                      std::to_string(t) + ")";
                return traj;
            }
            h = hn;
            continue;
        }

        const double err = est.err;
        const double fac = (err == 0.0)
                               ? opts.grow_max
                               : std::min(opts.grow_max,
                                          std::max(opts.shrink_min,
                                                   opts.safety * std::pow(opts.tol / err,
                                                                          order_exp)));
        if (err <= opts.tol) {
            y = est.y_fine;
            t += hs;
            traj.steps_accepted += 1;
            if (t >= cps[cp] - 1e-12) {  // landed on the active checkpoint
                t = cps[cp];
                ++cp;
            }
            push_point(traj, field, t, y);
            // A clipped step says nothing about the error at the working step
            // size, so keep the larger of the pre-clip h and the controller
            // proposal for the clipped size.
            h = clipped ? std::max(h, hs * fac) : hs * fac;
            h = std::min(h, opts.h_max);
        } else {
            traj.steps_rejected += 1;
            const double hn = hs * fac;
            if (hn < opts.h_min) {
                if (hs <= opts.h_min * (1.0 + 1e-9)) {
                    traj.failure_reason =
                        "local error exceeds tol at the minimum step size (t = " +
                        std::to_string(t) + ")";
                    return traj;
                }
                h = opts.h_min;
            } else {
                h = hn;
            }
        }
    }
    traj.completed = true;
    return traj;
}

Trajectory integrate_adaptive(const HamiltonianSystem& system, const State& y0, double t_end,
                              const HbvmTableau& tableau, const SolveOptions& opts,
                              const std::vector<double>& checkpoints) {
    return integrate_adaptive(system.field(), y0, t_end, tableau, opts, checkpoints);
}

std::vector<std::pair<int, double>> periodic_error(const Trajectory& traj, const State& y0,
                                                   double period) {
    if (!(period > 0.0)) throw std::invalid_argument("periodic_error: period must be positive");
    if (traj.times.empty()) throw std::invalid_argument("periodic_error: empty trajectory");

    std::vector<std::pair<int, double>> out;
    const double t_last = traj.times.back();
    for (int n = 1;; ++n) {
        const double target = static_cast<double>(n) * period;
        const double tol = 1e-9 * std::max(1.0, std::abs(target));
        if (target > t_last + tol) break;
        auto it = std::lower_bound(traj.times.begin(), traj.times.end(), target - tol);
        if (it == traj.times.end() || std::abs(*it - target) > tol) {
            throw std::invalid_argument("periodic_error: trajectory mesh does not contain t = " +
                                        std::to_string(target) +
                                        " (period multiple " + std::to_string(n) + ")");
        }
        const std::size_t idx = static_cast<std::size_t>(it - traj.times.begin());
        out.emplace_back(n, norm2(traj.states[idx], y0));
    }
    return out;
}

}  // namespace hbvm
