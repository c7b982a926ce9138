#include "hbvm/legendre.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hbvm {

namespace {

// Legendre polynomial on the standard interval [-1,1] together with its
// derivative, by the three-term recurrence.  Node finding works on the
// symmetric interval so that mirrored roots behave identically.
void legendre_standard(int k, double x, double& p, double& dp) {
    if (k == 0) {
        p = 1.0;
        dp = 0.0;
        return;
    }
    double pm = 1.0, pc = x;
    double dm = 0.0, dc = 1.0;
    for (int m = 1; m < k; ++m) {
        const double pn = ((2 * m + 1) * x * pc - m * pm) / (m + 1);
        const double dn = ((2 * m + 1) * (pc + x * dc) - m * dm) / (m + 1);
        pm = pc;
        pc = pn;
        dm = dc;
        dc = dn;
    }
    p = pc;
    dp = dc;
}

}  // namespace

double legendre_eval(int j, double t) {
    if (j < 0) {
        throw std::invalid_argument("legendre_eval: negative degree " + std::to_string(j));
    }
    const double x = 2.0 * t - 1.0;
    if (j == 0) return 1.0;
    double pm = 1.0, pc = x;
    for (int m = 1; m < j; ++m) {
        const double pn = ((2 * m + 1) * x * pc - m * pm) / (m + 1);
        pm = pc;
        pc = pn;
    }
    return pc;
}

double legendre_integral_eval(int j, double t) {
    if (j < 0) {
        throw std::invalid_argument("legendre_integral_eval: negative degree " +
                                    std::to_string(j));
    }
    // int_0^t P_j = (P_{j+1}(t) - P_{j-1}(t) + delta_{j0}) / (2(2j+1)); the
    // j = 0 constant resolves the missing P_{-1} term at the lower limit.
    if (j == 0) return (legendre_eval(1, t) + 1.0) / 2.0;
    return (legendre_eval(j + 1, t) - legendre_eval(j - 1, t)) / (2.0 * (2 * j + 1));
}

QuadratureRule gauss_rule(int k) {
    if (k < 1 || k > 64) {
        throw std::invalid_argument("gauss_rule: node count " + std::to_string(k) +
                                    " outside supported range [1, 64]");
    }
    QuadratureRule rule;
    rule.k = k;
    rule.precision = 2 * k - 1;
    rule.nodes.resize(k);
    rule.weights.resize(k);

    // Locate the roots of the standard-interval polynomial in one half and
    // mirror them, which keeps the rule symmetric to the last bit.
    const int half = (k + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Chebyshev-based initial guess for the i-th root from the right.
        double z = std::cos(M_PI * (i + 0.75) / (k + 0.5));
        double p = 0.0, dp = 0.0;
        bool converged = false;
        for (int it = 0; it < 100; ++it) {
            legendre_standard(k, z, p, dp);
            if (std::abs(p) <= 1e-15) {
                converged = true;
                break;
            }
            double step = p / dp;
            double znew = z - step;
            while (!(znew > -1.0 && znew < 1.0)) {  // keep iterates inside the interval
                step *= 0.5;
                znew = z - step;
            }
            z = znew;
            if (std::abs(step) <= 1e-15) {  // at the roundoff floor of the recurrence
                converged = true;
                break;
            }
        }
        legendre_standard(k, z, p, dp);
        if (!converged && std::abs(p) > 1e-10) {
            throw std::runtime_error("gauss_rule: node iteration failed for k = " +
                                     std::to_string(k));
        }
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        // Map [-1,1] -> [0,1]: node (1+z)/2, weight w/2, mirror partner at -z.
        rule.nodes[k - 1 - i] = (1.0 + z) / 2.0;
        rule.weights[k - 1 - i] = w / 2.0;
        rule.nodes[i] = (1.0 - z) / 2.0;
        rule.weights[i] = w / 2.0;
    }
    if (k % 2 == 1) {
        rule.nodes[k / 2] = 0.5;  // centre node is exact by symmetry
    }
    return rule;
}

}  // namespace hbvm
