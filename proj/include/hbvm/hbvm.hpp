#pragma once

#include <vector>

#include "hbvm/hamiltonian.hpp"
#include "hbvm/legendre.hpp"

namespace hbvm {

// Precomputed data defining one HBVM(k,r) step: the k-node Gauss rule and the
// shifted-Legendre values needed to evaluate and project the stage curve.
struct HbvmTableau {
    int r = 0;                                // number of stage coefficients
    int k = 0;                                // quadrature node count, k >= r
    QuadratureRule rule;                      // k-node Gauss rule on [0,1]
    std::vector<std::vector<double>> P_vals;  // P_vals[j][l] = P_j(c_l), j < r
    std::vector<std::vector<double>> I_vals;  // I_vals[j][l] = int_0^{c_l} P_j
    std::vector<double> eta;                  // eta[j] = 2j+1
};

// The r coefficient vectors gamma_0..gamma_{r-1} of the degree-r stage curve
// omega(c) = y0 + h * sum_j gamma[j] * int_0^c P_j.
struct StageCoefficients {
    std::vector<State> gamma;
};

struct StageSolveOptions {
    double tol = 1e-14;  // scaled by 1 + max|y0| internally
    int max_iter = 100;
};

struct StageSolveResult {
    StageCoefficients stages;
    int iterations = 0;
    bool converged = false;
    double last_diff = 0.0;  // max-norm of the final fixed-point update
};

struct StepOutcome {
    State y1;
    StageCoefficients stages;
    int iterations = 0;
    bool converged = false;
    double energy = 0.0;  // NaN when the field carries no energy function
};

// Build the tableau for HBVM(k,r).  Requires 1 <= r <= k <= 64.
HbvmTableau build_tableau(int k, int r);

// Evaluate the stage curve at abscissa c in [0,1].
State curve_eval(const StageCoefficients& stages, const State& y0, double h, double c,
                 const HbvmTableau& tableau);

// Residual of the discretized stage equations: component j is
// gamma[j] - (2j+1) * sum_l b_l P_j(c_l) f(omega(c_l)).  All components vanish
// at an exact solution.
std::vector<State> stage_residual(const StageCoefficients& stages, const State& y0, double h,
                                  const VectorField& field, const HbvmTableau& tableau);
std::vector<State> stage_residual(const StageCoefficients& stages, const State& y0, double h,
                                  const HamiltonianSystem& system, const HbvmTableau& tableau);

// Solve the stage equations by fixed-point iteration, starting from the
// explicit-Euler-consistent guess gamma[0] = f(y0), gamma[j>0] = 0.
StageSolveResult solve_stages(const VectorField& field, const State& y0, double h,
                              const HbvmTableau& tableau, const StageSolveOptions& opts = {});
StageSolveResult solve_stages(const HamiltonianSystem& system, const State& y0, double h,
                              const HbvmTableau& tableau, const StageSolveOptions& opts = {});

// One HBVM(k,r) step from y0 with step size h: y1 = omega(1) = y0 + h*gamma[0].
StepOutcome hbvm_step(const VectorField& field, const State& y0, double h,
                      const HbvmTableau& tableau, const StageSolveOptions& opts = {});
StepOutcome hbvm_step(const HamiltonianSystem& system, const State& y0, double h,
                      const HbvmTableau& tableau, const StageSolveOptions& opts = {});

}  // namespace hbvm
