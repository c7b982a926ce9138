#pragma once

// Shared helpers for the test suite: independent small-scale numerics used as
// oracles against the library implementation.

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace testsupport {

// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("loglog_slope: need two or more points");
    }
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Dense Gaussian elimination with partial pivoting; solves A x = b in place.
inline std::vector<double> dense_solve(std::vector<std::vector<double>> a,
                                       std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r) {
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        }
        if (a[piv][c] == 0.0) throw std::runtime_error("dense_solve: singular matrix");
        std::swap(a[piv], a[c]);
        std::swap(b[piv], b[c]);
        for (std::size_t r = c + 1; r < n; ++r) {
            const double m = a[r][c] / a[c][c];
            if (m == 0.0) continue;
            for (std::size_t j = c; j < n; ++j) a[r][j] -= m * a[c][j];
            b[r] -= m * b[c];
        }
    }
    std::vector<double> x(n);
    for (std::size_t c = n; c-- > 0;) {
        double s = b[c];
        for (std::size_t j = c + 1; j < n; ++j) s -= a[c][j] * x[j];
        x[c] = s / a[c][c];
    }
    return x;
}

// Classical Gauss collocation Butcher tableaus on [0,1] for s = 1, 2, 3
// stages, taken from the standard tables (independent of the library's
// quadrature construction).
struct ButcherTableau {
    std::vector<std::vector<double>> a;
    std::vector<double> b;
    std::vector<double> c;
};

inline ButcherTableau gauss_butcher(int s) {
    const double r3 = std::sqrt(3.0);
    const double r15 = std::sqrt(15.0);
    switch (s) {
        case 1:
            return {{{0.5}}, {1.0}, {0.5}};
        case 2:
            return {{{0.25, 0.25 - r3 / 6.0}, {0.25 + r3 / 6.0, 0.25}},
                    {0.5, 0.5},
                    {0.5 - r3 / 6.0, 0.5 + r3 / 6.0}};
        case 3:
            return {{{5.0 / 36.0, 2.0 / 9.0 - r15 / 15.0, 5.0 / 36.0 - r15 / 30.0},
                     {5.0 / 36.0 + r15 / 24.0, 2.0 / 9.0, 5.0 / 36.0 - r15 / 24.0},
                     {5.0 / 36.0 + r15 / 30.0, 2.0 / 9.0 + r15 / 15.0, 5.0 / 36.0}},
                    {5.0 / 18.0, 4.0 / 9.0, 5.0 / 18.0},
                    {0.5 - r15 / 10.0, 0.5, 0.5 + r15 / 10.0}};
        default:
            throw std::invalid_argument("gauss_butcher: only s = 1, 2, 3 are tabulated");
    }
}

// One step of s-stage Gauss collocation on the harmonic oscillator
// y' = J y (J = [[0,1],[-1,0]]), solved exactly as the linear stage system
// (I - h A (x) J) K = (1 (x) J y0), then y1 = y0 + h sum b_i K_i.
inline std::array<double, 2> gauss_collocation_step_harmonic(const std::array<double, 2>& y0,
                                                             double h, int s) {
    const ButcherTableau bt = gauss_butcher(s);
    const std::size_t n = 2 * static_cast<std::size_t>(s);
    std::vector<std::vector<double>> mat(n, std::vector<double>(n, 0.0));
    std::vector<double> rhs(n, 0.0);
    // Unknowns K_i = (k_i^q, k_i^p).  J y = (y_p, -y_q).
    for (int i = 0; i < s; ++i) {
        mat[2 * i][2 * i] = 1.0;
        mat[2 * i + 1][2 * i + 1] = 1.0;
        for (int j = 0; j < s; ++j) {
            // K_i - h sum_j a_ij J K_j = J y0, and J K_j = (k_j^p, -k_j^q).
            mat[2 * i][2 * j + 1] -= h * bt.a[i][j];
            mat[2 * i + 1][2 * j] += h * bt.a[i][j];
        }
        rhs[2 * i] = y0[1];
        rhs[2 * i + 1] = -y0[0];
    }
    const std::vector<double> k = dense_solve(mat, rhs);
    std::array<double, 2> y1 = y0;
    for (int i = 0; i < s; ++i) {
        y1[0] += h * bt.b[i] * k[2 * i];
        y1[1] += h * bt.b[i] * k[2 * i + 1];
    }
    return y1;
}

}  // namespace testsupport
