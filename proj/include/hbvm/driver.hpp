#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hbvm/hbvm.hpp"

namespace hbvm {

struct SolveOptions {
    double initial_step = 1e-2;
    double tol = 1e-8;       // local error tolerance per step
    double h_min = 1e-12;
    double h_max = 1.0;
    double safety = 0.9;     // controller safety factor
    double shrink_min = 0.2; // lower clamp on the step-size ratio
    double grow_max = 5.0;   // upper clamp on the step-size ratio
    long max_steps = 2000000;  // accepted + rejected attempts
    double stage_tol = 1e-14;
    int stage_max_iter = 100;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<State> states;
    std::vector<double> energies;  // NaN-filled when the field has no energy
    long steps_accepted = 0;
    long steps_rejected = 0;
    long stage_iterations_total = 0;
    bool completed = false;
    std::string failure_reason;  // empty on success
};

struct LocalErrorEstimate {
    State y_fine;          // result of the two half steps
    double err = 0.0;      // |y_h - y_fine|_2 / (2^{2r} - 1)
    bool converged = false;
    int iterations = 0;    // stage iterations across all three solves
};

// March n_steps steps of fixed size h.  On stage non-convergence the partial
// trajectory is returned with completed = false and a failure diagnostic.
Trajectory integrate_fixed(const VectorField& field, const State& y0, double h, long n_steps,
                           const HbvmTableau& tableau, const StageSolveOptions& opts = {});
Trajectory integrate_fixed(const HamiltonianSystem& system, const State& y0, double h,
                           long n_steps, const HbvmTableau& tableau,
                           const StageSolveOptions& opts = {});

// Step doubling: one step of size h and two of size h/2 from the same state.
// err carries the Richardson-scaled difference; y_fine is the two-half-steps
// result (no local extrapolation, so the advancing method stays HBVM(k,r)).
LocalErrorEstimate estimate_local_error(const VectorField& field, const State& y, double h,
                                        const HbvmTableau& tableau,
                                        const StageSolveOptions& opts = {});

// Adaptive integration from t = 0 to t_end.  Steps are clipped so the mesh
// lands exactly on each checkpoint time (all must lie in (0, t_end]; t_end
// itself is always a checkpoint).  Acceptance: err <= tol; the next step size
// is h * min(grow_max, max(shrink_min, safety * (tol/err)^{1/(2r+1)})).
// On stage non-convergence the attempt is rejected and h halved.  Runs that
// underflow h_min or exceed max_steps return completed = false with a
// diagnostic.
Trajectory integrate_adaptive(const VectorField& field, const State& y0, double t_end,
                              const HbvmTableau& tableau, const SolveOptions& opts,
                              const std::vector<double>& checkpoints = {});
Trajectory integrate_adaptive(const HamiltonianSystem& system, const State& y0, double t_end,
                              const HbvmTableau& tableau, const SolveOptions& opts,
                              const std::vector<double>& checkpoints = {});

// Deviation from y0 at each whole period contained in the trajectory mesh:
// returns (n, |y(n*period) - y0|_2) for n = 1, 2, ...  Throws if a required
// multiple of the period is missing from the mesh.
std::vector<std::pair<int, double>> periodic_error(const Trajectory& traj, const State& y0,
                                                   double period);

}  // namespace hbvm
