#pragma once

#include <vector>

namespace hbvm {

// Gauss-Legendre quadrature rule on [0,1]: sum_l weights[l]*g(nodes[l])
// approximates the integral of g over [0,1] exactly for polynomials of
// degree <= precision.
struct QuadratureRule {
    int k = 0;                    // node count
    std::vector<double> nodes;    // strictly increasing, in (0,1)
    std::vector<double> weights;  // positive, summing to 1
    int precision = 0;            // degree of exactness, 2k-1
};

// Shifted Legendre polynomial P_j on [0,1], normalized so P_j(1) = 1.
// The family is orthogonal with int_0^1 P_i P_j = delta_ij / (2i+1).
double legendre_eval(int j, double t);

// Running integral int_0^t P_j(x) dx, evaluated in closed form from the
// neighbouring polynomials.
double legendre_integral_eval(int j, double t);

// Build the k-node Gauss-Legendre rule on [0,1]. Supported range: 1 <= k <= 64.
QuadratureRule gauss_rule(int k);

}  // namespace hbvm
