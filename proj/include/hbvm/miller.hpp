#pragma once

#include <complex>
#include <string>
#include <vector>

namespace hbvm {

using Complex = std::complex<double>;

// Homogeneous linear difference equation sum_{i=0}^{k} a_i y_{n+i} = 0 with
// constant coefficients and a_k != 0.  Coefficients are stored complex so the
// same machinery serves real recurrences and characteristic polynomials of
// multistep methods at complex q = h*lambda.
struct LinearDifferenceEq {
    int order = 0;                // k
    std::vector<Complex> coeffs;  // a_0 .. a_k
    std::string label;
};

struct RootClassification {
    std::vector<Complex> roots;
    int n_inside = 0;   // |z| < 1 - tol
    int n_on = 0;       // within tol of the unit circle
    int n_outside = 0;  // |z| > 1 + tol
    double tol = 1e-9;
};

// A linear multistep method given by its rho/sigma polynomials, together with
// the boundary split (k1, k2) under which it is used as a boundary value
// method.
struct LinearMultistepMethod {
    std::vector<double> rho;
    std::vector<double> sigma;
    int k1 = 0;
    int k2 = 0;
    std::string name;
};

LinearDifferenceEq make_difference_eq(const std::vector<double>& coeffs,
                                      const std::string& label = "");
LinearDifferenceEq make_difference_eq(const std::vector<Complex>& coeffs,
                                      const std::string& label = "");

// The classic ill-conditioned pair: y[n+2] = 100.5 y[n+1] - 50 y[n], whose
// characteristic roots are 0.5 and 100.
LinearDifferenceEq miller_example_equation();

// Plain forward recursion from k initial values; returns y_0..y_{n_max}.
// Intentionally exposed to error amplification by any root outside the unit
// circle (overflow propagates as inf, not trapped).
std::vector<Complex> solve_forward(const LinearDifferenceEq& eq,
                                   const std::vector<Complex>& initial, int n_max);

// Miller's boundary-value formulation: impose k1 leading values and k2
// trailing values (k1 + k2 = k) and solve the banded linear system made of
// the recurrence rows in between.  Returns y_0..y_{n_final}.
std::vector<Complex> solve_bvp(const LinearDifferenceEq& eq, const std::vector<Complex>& initial,
                               const std::vector<Complex>& final_values, int n_final);

// Roots of sum a_i z^i via companion-matrix eigenvalues, sorted by real part
// then imaginary part.
std::vector<Complex> characteristic_roots(const LinearDifferenceEq& eq);

RootClassification classify_roots(const std::vector<Complex>& roots, double tol = 1e-9);

// A boundary value method with split (k1, k2) is absolutely stable iff the
// characteristic polynomial has exactly k1 roots inside and k2 outside the
// unit circle, none on it.
bool is_absolutely_stable(const RootClassification& cls, int k1, int k2);

// Characteristic equation of an LMM applied to y' = lambda*y at q = h*lambda:
// coefficients a_i = rho_i - q * sigma_i.  Throws when the leading
// coefficient degenerates (|a_k| < 1e-14 * max_i |a_i|).
LinearDifferenceEq lmm_characteristic(const std::vector<double>& rho,
                                      const std::vector<double>& sigma, Complex q);

LinearMultistepMethod trapezoidal_lmm();       // rho {-1,1}, sigma {1/2,1/2}, split (1,0)
LinearMultistepMethod two_step_midpoint_lmm(); // rho {-1,0,1}, sigma {0,2,0}, split (1,1)

}  // namespace hbvm
