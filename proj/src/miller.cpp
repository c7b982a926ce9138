#include "hbvm/miller.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hbvm {

namespace {

void validate_eq(const LinearDifferenceEq& eq) {
    if (eq.order < 1 || eq.coeffs.size() != static_cast<std::size_t>(eq.order) + 1) {
        throw std::invalid_argument("difference equation: order/coefficient mismatch");
    }
    if (std::abs(eq.coeffs.back()) == 0.0) {
        throw std::invalid_argument("difference equation: leading coefficient must be nonzero");
    }
}

// Banded Gaussian elimination with partial pivoting.  Row i of the band
// stores columns [i - kl, i + kl + ku]; the extra kl super-diagonals hold the
// fill produced by pivoting.  Solves in place and returns the solution.
std::vector<Complex> solve_banded(int n, int kl, int ku,
                                  std::vector<std::vector<Complex>>& band,
                                  std::vector<Complex>& rhs) {
    const int width = 2 * kl + ku + 1;
    double scale = 0.0;
    for (const auto& row : band) {
        for (const auto& v : row) scale = std::max(scale, std::abs(v));
    }

    for (int c = 0; c < n; ++c) {
        const int rmax = std::min(n - 1, c + kl);
        // Partial pivot among the rows that can hold column c.
        int rp = c;
        double best = std::abs(band[c][kl]);
        for (int r = c + 1; r <= rmax; ++r) {
            const double v = std::abs(band[r][c - r + kl]);
            if (v > best) {
                best = v;
                rp = r;
            }
        }
        if (!(best > scale * 1e-14)) {
            throw std::runtime_error(
                "solve_bvp: singular system (pivot " + std::to_string(best) +
                " vs matrix scale " + std::to_string(scale) +
                " at column " + std::to_string(c) + "); check the boundary placement");
        }
        if (rp != c) {
            // Swap rows c and rp, re-anchoring the band windows.  Both rows
            // are zero left of column c, and neither extends past c+kl+ku.
            for (int j = c; j <= std::min(n - 1, c + kl + ku); ++j) {
                const int dc = j - c + kl;
                const int dr = j - rp + kl;
                Complex vc = (dc >= 0 && dc < width) ? band[c][dc] : Complex(0.0);
                Complex vr = (dr >= 0 && dr < width) ? band[rp][dr] : Complex(0.0);
                if (dc >= 0 && dc < width) band[c][dc] = vr;
                if (dr >= 0 && dr < width) band[rp][dr] = vc;
            }
            std::swap(rhs[c], rhs[rp]);
        }
        const Complex pivot = band[c][kl];
        for (int r = c + 1; r <= rmax; ++r) {
            Complex& lead = band[r][c - r + kl];
            if (lead == Complex(0.0)) continue;
            const Complex m = lead / pivot;
            lead = Complex(0.0);
            for (int j = c + 1; j <= std::min(n - 1, c + kl + ku); ++j) {
                band[r][j - r + kl] -= m * band[c][j - c + kl];
            }
            rhs[r] -= m * rhs[c];
        }
    }

    std::vector<Complex> x(n);
    for (int c = n - 1; c >= 0; --c) {
        Complex s = rhs[c];
        for (int j = c + 1; j <= std::min(n - 1, c + kl + ku); ++j) {
            s -= band[c][j - c + kl] * x[j];
        }
        x[c] = s / band[c][kl];
    }
    return x;
}

}  // namespace

LinearDifferenceEq make_difference_eq(const std::vector<double>& coeffs,
                                      const std::string& label) {
    std::vector<Complex> c(coeffs.begin(), coeffs.end());
    return make_difference_eq(c, label);
}

LinearDifferenceEq make_difference_eq(const std::vector<Complex>& coeffs,
                                      const std::string& label) {
    LinearDifferenceEq eq;
    if (coeffs.size() < 2) {
        throw std::invalid_argument("difference equation: need order at least 1");
    }
    eq.order = static_cast<int>(coeffs.size()) - 1;
    eq.coeffs = coeffs;
    eq.label = label;
    validate_eq(eq);
    return eq;
}

LinearDifferenceEq miller_example_equation() {
    return make_difference_eq(std::vector<double>{50.0, -100.5, 1.0},
                              "y[n+2] = 100.5 y[n+1] - 50 y[n]");
}

std::vector<Complex> solve_forward(const LinearDifferenceEq& eq,
                                   const std::vector<Complex>& initial, int n_max) {
    validate_eq(eq);
    const int k = eq.order;
    if (initial.size() != static_cast<std::size_t>(k)) {
        throw std::invalid_argument("solve_forward: need exactly " + std::to_string(k) +
                                    " initial values");
    }
    if (n_max < 0) throw std::invalid_argument("solve_forward: n_max must be nonnegative");
    std::vector<Complex> y(initial.begin(), initial.end());
    y.resize(std::max(n_max + 1, k));
    for (int n = 0; n + k <= n_max; ++n) {
        Complex s = 0.0;
        for (int i = 0; i < k; ++i) s += eq.coeffs[i] * y[n + i];
        y[n + k] = -s / eq.coeffs[k];
    }
    y.resize(n_max + 1);
    return y;
}

std::vector<Complex> solve_bvp(const LinearDifferenceEq& eq, const std::vector<Complex>& initial,
                               const std::vector<Complex>& final_values, int n_final) {
    validate_eq(eq);
    const int k = eq.order;
    const int k1 = static_cast<int>(initial.size());
    const int k2 = static_cast<int>(final_values.size());
    if (k1 + k2 != k) {
        throw std::invalid_argument("solve_bvp: boundary split must satisfy k1 + k2 = order");
    }
    if (n_final < k) {
        throw std::invalid_argument("solve_bvp: n_final must be at least the order");
    }

    // Unknowns y_0..y_N.  Row m is: the m-th initial condition for m < k1,
    // the recurrence at n = m - k1 for k1 <= m <= N - k2, and a final
    // condition at the tail.  This ordering gives lower bandwidth k1 and
    // upper bandwidth k2.
    const int n = n_final + 1;
    const int kl = k1;
    const int ku = k2;
    const int width = 2 * kl + ku + 1;
    std::vector<std::vector<Complex>> band(n, std::vector<Complex>(width, Complex(0.0)));
    std::vector<Complex> rhs(n, Complex(0.0));
    auto entry = [&](int i, int j) -> Complex& { return band[i][j - i + kl]; };

    for (int m = 0; m < k1; ++m) {
        entry(m, m) = 1.0;
        rhs[m] = initial[m];
    }
    for (int m = k1; m <= n_final - k2; ++m) {
        const int base = m - k1;
        for (int i = 0; i <= k; ++i) entry(m, base + i) = eq.coeffs[i];
    }
    for (int m = 0; m < k2; ++m) {
        const int row = n_final - k2 + 1 + m;
        entry(row, row) = 1.0;
        rhs[row] = final_values[m];
    }

    return solve_banded(n, kl, ku, band, rhs);
}

std::vector<Complex> characteristic_roots(const LinearDifferenceEq& eq) {
    validate_eq(eq);
    const int k = eq.order;
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(k, k);
    for (int i = 0; i < k; ++i) {
        companion(i, k - 1) = -eq.coeffs[i] / eq.coeffs[k];
        if (i + 1 < k) companion(i + 1, i) = 1.0;
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("characteristic_roots: eigenvalue iteration failed");
    }
    std::vector<Complex> roots(k);
    for (int i = 0; i < k; ++i) roots[i] = solver.eigenvalues()(i);
    std::sort(roots.begin(), roots.end(), [](const Complex& a, const Complex& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return roots;
}

RootClassification classify_roots(const std::vector<Complex>& roots, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("classify_roots: tolerance must be positive");
    RootClassification cls;
    cls.roots = roots;
    cls.tol = tol;
    for (const Complex& z : roots) {
        const double r = std::abs(z);
        if (r < 1.0 - tol) {
            ++cls.n_inside;
        } else if (r > 1.0 + tol) {
            ++cls.n_outside;
        } else {
            ++cls.n_on;
        }
    }
    return cls;
}

bool is_absolutely_stable(const RootClassification& cls, int k1, int k2) {
    return cls.n_inside == k1 && cls.n_outside == k2 && cls.n_on == 0;
}

LinearDifferenceEq lmm_characteristic(const std::vector<double>& rho,
                                      const std::vector<double>& sigma, Complex q) {
    if (rho.size() != sigma.size() || rho.size() < 2) {
        throw std::invalid_argument("lmm_characteristic: rho and sigma must have equal length");
    }
    std::vector<Complex> coeffs(rho.size());
    double max_mag = 0.0;
    for (std::size_t i = 0; i < rho.size(); ++i) {
        coeffs[i] = Complex(rho[i]) - q * sigma[i];
        max_mag = std::max(max_mag, std::abs(coeffs[i]));
    }
    if (std::abs(coeffs.back()) < 1e-14 * max_mag) {
        throw std::invalid_argument("lmm_characteristic: degenerate leading coefficient");
    }
    return make_difference_eq(coeffs, "rho(z) - q*sigma(z)");
}

LinearMultistepMethod trapezoidal_lmm() {
    return LinearMultistepMethod{{-1.0, 1.0}, {0.5, 0.5}, 1, 0, "trapezoidal"};
}

LinearMultistepMethod two_step_midpoint_lmm() {
    return LinearMultistepMethod{{-1.0, 0.0, 1.0}, {0.0, 2.0, 0.0}, 1, 1, "two-step midpoint"};
}

}  // namespace hbvm
