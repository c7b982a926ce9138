#include "hbvm/problems.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hbvm {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Propagate an elliptic two-body state by time t using orbital elements:
// energy fixes the semi-major axis, the eccentricity vector fixes the
// perihelion direction, and the eccentric anomaly advances through the
// mean-anomaly equation.
State kepler_reference_flow(double t, const State& y0) {
    if (y0.size() != 4) {
        throw std::invalid_argument("kepler reference: state must have dimension 4");
    }
    const double qx = y0[0], qy = y0[1], px = y0[2], py = y0[3];
    const double r0 = std::hypot(qx, qy);
    if (r0 < 1e-14) throw std::domain_error("kepler reference: initial state at singularity");
    const double p2 = px * px + py * py;
    const double etot = 0.5 * p2 - 1.0 / r0;
    if (etot >= -1e-14) {
        throw std::domain_error("kepler reference: orbit is not elliptic");
    }
    const double a = -0.5 / etot;
    const double n = 1.0 / (a * std::sqrt(a));  // mean motion a^{-3/2}
    const double lz = qx * py - qy * px;
    const double qdotp = qx * px + qy * py;

    // Eccentricity vector e = (|p|^2 - 1/r) q - (q.p) p.
    double ex = (p2 - 1.0 / r0) * qx - qdotp * px;
    double ey = (p2 - 1.0 / r0) * qy - qdotp * py;
    const double e = std::hypot(ex, ey);
    double phx, phy;  // unit perihelion direction
    if (e < 1e-12) {
        phx = qx / r0;  // circular orbit: measure the anomaly from q(0)
        phy = qy / r0;
    } else {
        phx = ex / e;
        phy = ey / e;
    }
    // In-plane normal oriented along the motion (sign of angular momentum).
    const double s = (lz >= 0.0) ? 1.0 : -1.0;
    const double nhx = -s * phy;
    const double nhy = s * phx;

    // Initial eccentric anomaly from r = a(1 - e cos E), q.p = e sqrt(a) sin E.
    double e0;
    if (e < 1e-12) {
        e0 = 0.0;
    } else {
        const double ce = (1.0 - r0 / a) / e;
        const double se = qdotp / (e * std::sqrt(a));  // r*rdot = e*sqrt(a)*sin(E)
        e0 = std::atan2(se, std::min(1.0, std::max(-1.0, ce)));
    }
    const double m0 = e0 - e * std::sin(e0);
    const double mt = m0 + n * t;
    const double et = solve_kepler_equation(mt, e);

    const double b_over_a = std::sqrt(std::max(0.0, 1.0 - e * e));
    const double xi = a * (std::cos(et) - e);
    const double eta = a * b_over_a * std::sin(et);
    const double edot = n / (1.0 - e * std::cos(et));
    const double xid = -a * std::sin(et) * edot;
    const double etad = a * b_over_a * std::cos(et) * edot;

    return State{xi * phx + eta * nhx, xi * phy + eta * nhy,
                 xid * phx + etad * nhx, xid * phy + etad * nhy};
}

}  // namespace

double solve_kepler_equation(double mean_anomaly, double e) {
    if (e < 0.0 || e >= 1.0) {
        throw std::invalid_argument("solve_kepler_equation: eccentricity must lie in [0,1)");
    }
    // Reduce to [0, 2*pi) and remember the removed whole turns.
    const double turns = std::floor(mean_anomaly / kTwoPi);
    const double m = mean_anomaly - turns * kTwoPi;

    double lo = 0.0, hi = kTwoPi;
    double x = m + e * std::sin(m);  // decent starting guess for all e
    for (int it = 0; it < 100; ++it) {
        const double g = x - e * std::sin(x) - m;
        if (std::abs(g) <= 1e-14) break;
        if (g > 0.0) hi = x; else lo = x;
        const double dg = 1.0 - e * std::cos(x);
        double xn = x - g / dg;
        if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);  // bisection safeguard
        if (std::abs(xn - x) < 1e-16) { x = xn; break; }
        x = xn;
    }
    return x + turns * kTwoPi;
}

ProblemInstance harmonic_oscillator() {
    ProblemInstance prob;
    prob.system.m = 1;
    prob.system.name = "harmonic";
    prob.system.polynomial_degree = 2;
    prob.system.hamiltonian = [](const State& y) { return 0.5 * (y[0] * y[0] + y[1] * y[1]); };
    prob.system.gradient = [](const State& y) { return State{y[0], y[1]}; };
    prob.initial_state = {1.0, 0.0};
    prob.period = kTwoPi;
    prob.reference = [](double t, const State& y0) {
        const double c = std::cos(t), s = std::sin(t);
        return State{c * y0[0] + s * y0[1], -s * y0[0] + c * y0[1]};
    };
    return prob;
}

ProblemInstance kepler(double e) {
    if (!(e >= 0.0 && e < 1.0)) {
        throw std::invalid_argument("kepler: eccentricity must lie in [0,1), got " +
                                    std::to_string(e));
    }
    ProblemInstance prob;
    prob.system.m = 2;
    prob.system.name = "kepler";
    prob.system.hamiltonian = [](const State& y) {
        const double r2 = y[0] * y[0] + y[1] * y[1];
        if (r2 < 1e-28) throw std::domain_error("kepler: state at gravitational singularity");
        return 0.5 * (y[2] * y[2] + y[3] * y[3]) - 1.0 / std::sqrt(r2);
    };
    prob.system.gradient = [](const State& y) {
        const double r2 = y[0] * y[0] + y[1] * y[1];
        if (r2 < 1e-28) throw std::domain_error("kepler: state at gravitational singularity");
        const double inv_r3 = 1.0 / (r2 * std::sqrt(r2));
        return State{y[0] * inv_r3, y[1] * inv_r3, y[2], y[3]};
    };
    prob.initial_state = {1.0 - e, 0.0, 0.0, std::sqrt((1.0 + e) / (1.0 - e))};
    prob.period = kTwoPi;
    prob.reference = kepler_reference_flow;
    return prob;
}

ProblemInstance quartic_oscillator() {
    ProblemInstance prob;
    prob.system.m = 1;
    prob.system.name = "quartic";
    prob.system.polynomial_degree = 4;
    prob.system.hamiltonian = [](const State& y) {
        return 0.5 * y[1] * y[1] + 0.25 * y[0] * y[0] * y[0] * y[0];
    };
    prob.system.gradient = [](const State& y) { return State{y[0] * y[0] * y[0], y[1]}; };
    prob.initial_state = {1.0, 0.0};
    return prob;
}

VectorField linear_decay_field(double lambda) {
    VectorField vf;
    vf.dim = 1;
    vf.name = "linear-decay";
    vf.f = [lambda](const State& y) { return State{lambda * y[0]}; };
    return vf;
}

Mat2 symplectic_demo_matrix(double h) {
    return Mat2{{{1.0 - h * h, h}, {-h, 1.0}}};
}

Vec2 symplectic_demo_step(const Vec2& y, double h) {
    const Mat2 m = symplectic_demo_matrix(h);
    return Vec2{m[0][0] * y[0] + m[0][1] * y[1], m[1][0] * y[0] + m[1][1] * y[1]};
}

bool check_symplectic(const Mat2& M) {
    // J = [[0, 1], [-1, 0]]; form M^T J M - J entrywise.  The diagonal of
    // M^T J M vanishes identically; the off-diagonal entries are +-det(M).
    const double a = M[0][0], b = M[0][1], c = M[1][0], d = M[1][1];
    const double e01 = (a * d - c * b) - 1.0;
    const double e10 = (b * c - d * a) + 1.0;
    return std::max(std::abs(e01), std::abs(e10)) <= 1e-15;
}

}  // namespace hbvm
