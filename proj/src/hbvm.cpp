#include "hbvm/hbvm.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace hbvm {

namespace {

double max_abs(const State& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double max_abs(const std::vector<State>& vs) {
    double m = 0.0;
    for (const auto& v : vs) m = std::max(m, max_abs(v));
    return m;
}

}  // namespace

HbvmTableau build_tableau(int k, int r) {
    if (r < 1 || r > k || k > 64) {
        throw std::invalid_argument("build_tableau: need 1 <= r <= k <= 64, got k = " +
                                    std::to_string(k) + ", r = " + std::to_string(r));
    }
    HbvmTableau tab;
    tab.r = r;
    tab.k = k;
    tab.rule = gauss_rule(k);
    tab.P_vals.assign(r, std::vector<double>(k));
    tab.I_vals.assign(r, std::vector<double>(k));
    tab.eta.resize(r);
    for (int j = 0; j < r; ++j) {
        tab.eta[j] = 2.0 * j + 1.0;
        for (int l = 0; l < k; ++l) {
            tab.P_vals[j][l] = legendre_eval(j, tab.rule.nodes[l]);
            tab.I_vals[j][l] = legendre_integral_eval(j, tab.rule.nodes[l]);
        }
    }
    return tab;
}

State curve_eval(const StageCoefficients& stages, const State& y0, double h, double c,
                 const HbvmTableau& tableau) {
    if (c < -1e-12 || c > 1.0 + 1e-12) {
        throw std::invalid_argument("curve_eval: abscissa outside [0,1]");
    }
    if (static_cast<int>(stages.gamma.size()) != tableau.r) {
        throw std::invalid_argument("curve_eval: stage count does not match tableau");
    }
    State y = y0;
    for (int j = 0; j < tableau.r; ++j) {
        const double w = h * legendre_integral_eval(j, c);
        for (std::size_t i = 0; i < y.size(); ++i) y[i] += w * stages.gamma[j][i];
    }
    return y;
}

std::vector<State> stage_residual(const StageCoefficients& stages, const State& y0, double h,
                                  const VectorField& field, const HbvmTableau& tableau) {
    const int r = tableau.r;
    const int k = tableau.k;
    const std::size_t n = y0.size();
    std::vector<State> res(r, State(n, 0.0));
    for (int j = 0; j < r; ++j) res[j] = stages.gamma[j];
    for (int l = 0; l < k; ++l) {
        State yl = y0;
        for (int j = 0; j < r; ++j) {
            const double w = h * tableau.I_vals[j][l];
            for (std::size_t i = 0; i < n; ++i) yl[i] += w * stages.gamma[j][i];
        }
        const State fl = field.f(yl);
        const double b = tableau.rule.weights[l];
        for (int j = 0; j < r; ++j) {
            const double w = tableau.eta[j] * b * tableau.P_vals[j][l];
            for (std::size_t i = 0; i < n; ++i) res[j][i] -= w * fl[i];
        }
    }
    return res;
}

std::vector<State> stage_residual(const StageCoefficients& stages, const State& y0, double h,
                                  const HamiltonianSystem& system, const HbvmTableau& tableau) {
    return stage_residual(stages, y0, h, system.field(), tableau);
}

StageSolveResult solve_stages(const VectorField& field, const State& y0, double h,
                              const HbvmTableau& tableau, const StageSolveOptions& opts) {
    if (!(h > 0.0)) throw std::invalid_argument("solve_stages: step size must be positive");
    if (y0.size() != field.dim) {
        throw std::invalid_argument("solve_stages: state dimension does not match field");
    }
    const int r = tableau.r;
    const int k = tableau.k;
    const std::size_t n = y0.size();
    constexpr double eps = std::numeric_limits<double>::epsilon();

    StageSolveResult out;
    out.stages.gamma.assign(r, State(n, 0.0));
    out.stages.gamma[0] = field.f(y0);

    const double threshold = opts.tol * (1.0 + max_abs(y0));
    std::vector<State> next(r, State(n, 0.0));
    double prev_diff = -1.0;

    for (int it = 1; it <= opts.max_iter; ++it) {
        for (int j = 0; j < r; ++j) next[j].assign(n, 0.0);
        for (int l = 0; l < k; ++l) {
            State yl = y0;
            for (int j = 0; j < r; ++j) {
                const double w = h * tableau.I_vals[j][l];
                for (std::size_t i = 0; i < n; ++i) yl[i] += w * out.stages.gamma[j][i];
            }
            const State fl = field.f(yl);
            const double b = tableau.rule.weights[l];
            for (int j = 0; j < r; ++j) {
                const double w = tableau.eta[j] * b * tableau.P_vals[j][l];
                for (std::size_t i = 0; i < n; ++i) next[j][i] += w * fl[i];
            }
        }
        double diff = 0.0;
        for (int j = 0; j < r; ++j) {
            for (std::size_t i = 0; i < n; ++i) {
                diff = std::max(diff, std::abs(next[j][i] - out.stages.gamma[j][i]));
            }
        }
        out.stages.gamma = next;
        out.iterations = it;
        out.last_diff = diff;
        if (!std::isfinite(diff) || diff > 1e8) {
            out.converged = false;  // diverging iteration: h too large for contraction
            return out;
        }
        if (diff <= threshold) {
            out.converged = true;
            return out;
        }
        // Updates that stopped shrinking while sitting at the roundoff floor of
        // the stage values count as converged: the threshold may be below what
        // double precision can resolve for large-magnitude stages.
        if (prev_diff >= 0.0 && diff >= 0.5 * prev_diff &&
            diff <= 32.0 * eps * (1.0 + max_abs(out.stages.gamma))) {
            out.converged = true;
            return out;
        }
        prev_diff = diff;
    }
    out.converged = false;
    return out;
}

StageSolveResult solve_stages(const HamiltonianSystem& system, const State& y0, double h,
                              const HbvmTableau& tableau, const StageSolveOptions& opts) {
    return solve_stages(system.field(), y0, h, tableau, opts);
}

StepOutcome hbvm_step(const VectorField& field, const State& y0, double h,
                      const HbvmTableau& tableau, const StageSolveOptions& opts) {
    StageSolveResult solved = solve_stages(field, y0, h, tableau, opts);
    StepOutcome out;
    out.stages = std::move(solved.stages);
    out.iterations = solved.iterations;
    out.converged = solved.converged;
    out.y1 = curve_eval(out.stages, y0, h, 1.0, tableau);
    out.energy = field.has_energy() ? field.energy(out.y1)
                                    : std::numeric_limits<double>::quiet_NaN();
    return out;
}

StepOutcome hbvm_step(const HamiltonianSystem& system, const State& y0, double h,
                      const HbvmTableau& tableau, const StageSolveOptions& opts) {
    return hbvm_step(system.field(), y0, h, tableau, opts);
}

}  // namespace hbvm
