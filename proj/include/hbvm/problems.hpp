#pragma once

#include <array>
#include <functional>
#include <optional>

#include "hbvm/hamiltonian.hpp"

namespace hbvm {

// A test problem: the system, a canonical initial state, and, when available,
// the period and a closed-form reference flow (t, y0) -> y(t).
struct ProblemInstance {
    HamiltonianSystem system;
    State initial_state;
    std::optional<double> period;
    std::function<State(double, const State&)> reference;  // may be empty

    bool has_reference() const { return static_cast<bool>(reference); }
};

// H = (q^2 + p^2)/2; the flow is rigid rotation with period 2*pi.
ProblemInstance harmonic_oscillator();

// Planar two-body problem, H = |p|^2/2 - 1/|q|, started at perihelion of an
// elliptic orbit with eccentricity e in [0,1); period 2*pi, energy -1/2.
// The reference flow propagates any elliptic state via orbital elements and
// the eccentric-anomaly equation.
ProblemInstance kepler(double e);

// H = p^2/2 + q^4/4: the minimal non-quadratic polynomial Hamiltonian
// (degree 4), used to exercise exact energy conservation with k > r.
ProblemInstance quartic_oscillator();

// Scalar linear test problem y' = lambda * y (not Hamiltonian; no energy).
VectorField linear_decay_field(double lambda);

using Vec2 = std::array<double, 2>;
using Mat2 = std::array<std::array<double, 2>, 2>;

// One step of the linear demo map [[1-h^2, h], [-h, 1]]: symplectic for every
// h, yet it changes the oscillator energy |y|^2/2 at every step.
Mat2 symplectic_demo_matrix(double h);
Vec2 symplectic_demo_step(const Vec2& y, double h);

// True iff M^T J M = J entrywise within 1e-15.
bool check_symplectic(const Mat2& M);

// Solve E - e*sin(E) = M for the eccentric anomaly E (safeguarded Newton with
// bisection fallback; |residual| <= 1e-14).  Exposed for tests.
double solve_kepler_equation(double mean_anomaly, double e);

}  // namespace hbvm
