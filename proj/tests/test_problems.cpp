#include "doctest.h"

#include <cmath>
#include <random>
#include <stdexcept>

#include "hbvm/problems.hpp"

using namespace hbvm;

namespace {

double max_abs_diff(const State& a, const State& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// Central finite differences of the Hamiltonian as a gradient oracle.
State fd_gradient(const HamiltonianSystem& sys, const State& y, double step = 1e-6) {
    State g(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        State hi = y, lo = y;
        hi[i] += step;
        lo[i] -= step;
        g[i] = (sys.hamiltonian(hi) - sys.hamiltonian(lo)) / (2 * step);
    }
    return g;
}

void check_gradient_consistency(const HamiltonianSystem& sys, const State& y) {
    const State g = sys.gradient(y);
    const State fd = fd_gradient(sys, y);
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(std::abs(g[i] - fd[i]) <= 1e-6 * (1.0 + std::abs(g[i])));
    }
}

// The field must be energy-orthogonal to the gradient (skew symmetry of J).
void check_field_orthogonality(const HamiltonianSystem& sys, const State& y) {
    const State g = sys.gradient(y);
    const State f = sys.field_eval(y);
    double dot = 0.0, gnorm2 = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        dot += g[i] * f[i];
        gnorm2 += g[i] * g[i];
    }
    CHECK(std::abs(dot) <= 1e-12 * (1.0 + gnorm2));
}

}  // namespace

TEST_SUITE("problems") {

TEST_CASE("harmonic oscillator: rotation reference") {
    const ProblemInstance prob = harmonic_oscillator();
    REQUIRE(prob.has_reference());
    REQUIRE(prob.period.has_value());

    const State y0{0.3, -0.7};
    CHECK(max_abs_diff(prob.reference(0.0, y0), y0) == 0.0);

    // Quarter turn: (q, p) -> (p, -q).
    const State quarter = prob.reference(M_PI_2, y0);
    CHECK(std::abs(quarter[0] - y0[1]) <= 1e-15);
    CHECK(std::abs(quarter[1] + y0[0]) <= 1e-15);

    const State full = prob.reference(*prob.period, prob.initial_state);
    CHECK(max_abs_diff(full, prob.initial_state) <= 1e-12);

    const double h0 = prob.system.hamiltonian(y0);
    for (double t : {0.1, 1.7, 4.4, 12.0}) {
        CHECK(std::abs(prob.system.hamiltonian(prob.reference(t, y0)) - h0) <= 1e-12);
    }
}

TEST_CASE("kepler: initial data, energy, and singularity guard") {
    for (double e : {0.0, 0.5, 0.6, 0.99}) {
        const ProblemInstance prob = kepler(e);
        CHECK(prob.initial_state[0] == doctest::Approx(1.0 - e).epsilon(1e-15));
        // The Hamiltonian at the perihelion start is -1/2 for every eccentricity.
        CHECK(std::abs(prob.system.hamiltonian(prob.initial_state) + 0.5) <= 1e-13);
        check_gradient_consistency(prob.system, prob.initial_state);
    }
    CHECK_THROWS_AS(kepler(1.0), std::invalid_argument);
    CHECK_THROWS_AS(kepler(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(kepler(0.5).system.hamiltonian(State{0.0, 0.0, 1.0, 1.0}),
                    std::domain_error);
    CHECK_THROWS_AS(kepler(0.5).system.gradient(State{1e-15, 0.0, 1.0, 1.0}),
                    std::domain_error);
}

TEST_CASE("kepler: reference flow is periodic and conservative") {
    for (double e : {0.0, 0.6, 0.99}) {
        const ProblemInstance prob = kepler(e);
        const State& y0 = prob.initial_state;
        const double h0 = prob.system.hamiltonian(y0);

        // Returning to periapsis is ill-conditioned: roundoff in the stored
        // momentum perturbs the orbital energy, and the (1-e)^-2 sensitivity
        // of the near-periapsis velocity to the mean anomaly amplifies it.
        const State back = prob.reference(*prob.period, y0);
        CHECK(max_abs_diff(back, y0) <= 2e-12 / ((1.0 - e) * (1.0 - e)));

        for (double t : {0.3, 1.9, 3.14, 5.0}) {
            const State yt = prob.reference(t, y0);
            CHECK(std::abs(prob.system.hamiltonian(yt) - h0) <= 1e-12);
        }
    }
}

TEST_CASE("kepler: circular orbit keeps unit radius") {
    const ProblemInstance prob = kepler(0.0);
    for (double t : {0.0, 0.7, 2.1, 4.9}) {
        const State yt = prob.reference(t, prob.initial_state);
        CHECK(std::abs(std::hypot(yt[0], yt[1]) - 1.0) <= 1e-13);
    }
}

TEST_CASE("kepler: reference flow propagates generic elliptic states") {
    // Start from a state away from perihelion and check flow composition:
    // reference(s+t, y0) = reference(t, reference(s, y0)).
    const ProblemInstance prob = kepler(0.6);
    const State mid = prob.reference(1.3, prob.initial_state);
    const State a = prob.reference(1.3 + 0.9, prob.initial_state);
    const State b = prob.reference(0.9, mid);
    CHECK(max_abs_diff(a, b) <= 1e-11);
}

TEST_CASE("quartic oscillator basics") {
    const ProblemInstance prob = quartic_oscillator();
    CHECK(prob.system.polynomial_degree.value() == 4);
    CHECK(prob.system.hamiltonian(State{1.0, 0.0}) == doctest::Approx(0.25).epsilon(1e-15));

    const State f = prob.system.field_eval(State{0.7, -0.3});
    CHECK(f[0] == doctest::Approx(-0.3).epsilon(1e-15));
    CHECK(f[1] == doctest::Approx(-0.343).epsilon(1e-12));  // -q^3

    check_gradient_consistency(prob.system, State{0.7, -0.3});
}

TEST_CASE("gradient is orthogonal to the field at random states") {
    std::mt19937 rng(20240817);
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    const ProblemInstance problems[] = {harmonic_oscillator(), quartic_oscillator(),
                                        kepler(0.5)};
    for (const auto& prob : problems) {
        for (int trial = 0; trial < 100; ++trial) {
            State y(prob.system.dim());
            for (double& v : y) v = unif(rng);
            if (prob.system.name == "kepler") {
                // keep away from the singularity
                y[0] += (y[0] >= 0 ? 1.0 : -1.0);
            }
            check_field_orthogonality(prob.system, y);
        }
    }
}

TEST_CASE("eccentric anomaly solver") {
    for (double e : {0.0, 0.3, 0.9, 0.99}) {
        for (double m : {-7.3, -1.0, 0.0, 0.4, 3.1, 6.2, 25.0}) {
            const double ea = solve_kepler_equation(m, e);
            CHECK(std::abs(ea - e * std::sin(ea) - m) <= 1e-12);
        }
    }
    CHECK_THROWS_AS(solve_kepler_equation(1.0, 1.0), std::invalid_argument);
}

TEST_CASE("demo map is symplectic but not conservative") {
    for (double h : {0.01, 0.1, 1.0}) {
        CHECK(check_symplectic(symplectic_demo_matrix(h)));
    }
    // A clearly non-symplectic matrix fails.
    CHECK_FALSE(check_symplectic(Mat2{{{2.0, 0.0}, {0.0, 1.0}}}));

    // h = 0 is the identity.
    const Vec2 y0{0.42, -1.7};
    const Vec2 still = symplectic_demo_step(y0, 0.0);
    CHECK(still[0] == y0[0]);
    CHECK(still[1] == y0[1]);

    // One step from (1,0) at h = 0.1: |y1|^2 = (1-h^2)^2 + h^2 = 0.9901.
    const Vec2 y1 = symplectic_demo_step(Vec2{1.0, 0.0}, 0.1);
    CHECK(std::abs(y1[0] * y1[0] + y1[1] * y1[1] - 0.9901) <= 1e-12);

    // The oscillator energy changes at every application.
    Vec2 y{1.0, 0.0};
    double prev = 0.5;
    for (int n = 0; n < 300; ++n) {
        y = symplectic_demo_step(y, 0.1);
        const double energy = 0.5 * (y[0] * y[0] + y[1] * y[1]);
        CHECK(std::abs(energy - prev) > 1e-8);
        prev = energy;
    }
}

TEST_CASE("demo map is first order: deviation from the rotation is O(h^2)") {
    // Entrywise distance between the exact rotation matrix and the demo map
    // shrinks quadratically.
    auto dist = [](double h) {
        const Mat2 m = symplectic_demo_matrix(h);
        const double c = std::cos(h), s = std::sin(h);
        const Mat2 rot{{{c, s}, {-s, c}}};
        double d = 0.0;
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) d = std::max(d, std::abs(m[i][j] - rot[i][j]));
        }
        return d;
    };
    std::vector<double> hs{0.2, 0.1, 0.05, 0.025};
    for (std::size_t i = 0; i + 1 < hs.size(); ++i) {
        const double ratio = dist(hs[i]) / dist(hs[i + 1]);
        CHECK(ratio >= 4.0 * 0.8);  // h^2 scaling: halving h quarters the gap
        CHECK(ratio <= 4.0 * 1.2);
    }
}

}  // TEST_SUITE
