#include "qbd/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qbd {

namespace {

// Symmetric tridiagonal QL with implicit shifts; also carries the first row
// of the identity through the rotations, which is what Golub-Welsch needs:
// after convergence d holds the eigenvalues and z[i] the first component of
// the i-th normalized eigenvector.
void tridiag_ql(std::vector<double>& d, std::vector<double>& e, std::vector<double>& z) {
    const std::size_t n = d.size();
    if (n == 1) return;
    e.push_back(0.0);
    const double eps = 2.220446049250313e-16;
    for (std::size_t l = 0; l < n; ++l) {
        std::size_t iter = 0;
        while (true) {
            std::size_t m = l;
            for (; m + 1 < n; ++m) {
                double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
                if (std::fabs(e[m]) <= eps * dd) break;
            }
            if (m == l) break;
            if (++iter > 50)
                throw std::runtime_error("gauss_jacobi: QL iteration failed to converge");
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0, c = 1.0, p = 0.0;
            bool underflow = false;
            for (std::size_t i = m; i-- > l;) {
                double f = s * e[i];
                double b = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if (underflow) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    // sort ascending, carrying z along
    for (std::size_t i = 0; i + 1 < n; ++i) {
        std::size_t k = i;
        for (std::size_t j = i + 1; j < n; ++j)
            if (d[j] < d[k]) k = j;
        if (k != i) {
            std::swap(d[i], d[k]);
            std::swap(z[i], z[k]);
        }
    }
}

double log_beta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

}  // namespace

QuadratureRule gauss_jacobi(double alpha, double beta, std::size_t order) {
    if (!(alpha > -1.0) || !(beta > -1.0))
        throw std::invalid_argument("gauss_jacobi: require alpha, beta > -1");
    if (order < 1) throw std::invalid_argument("gauss_jacobi: order must be >= 1");

    // Recurrence coefficients of the monic Jacobi polynomials for the weight
    // (1-t)^a (1+t)^b on [-1,1]; mapping x = (1+t)/2 sends that weight to
    // x^alpha (1-x)^beta on [0,1] with a = beta, b = alpha.
    const double a = beta, b = alpha;
    const std::size_t n = order;
    std::vector<double> diag(n), sub;  // Jacobi matrix: diag and sqrt(offdiag)
    sub.reserve(n - 1);
    double apb = a + b;
    diag[0] = (b - a) / (apb + 2.0);
    for (std::size_t k = 1; k < n; ++k) {
        double dk = static_cast<double>(k);
        double denom = (2.0 * dk + apb) * (2.0 * dk + apb + 2.0);
        diag[k] = (b * b - a * a) / denom;
    }
    for (std::size_t k = 1; k < n; ++k) {
        double dk = static_cast<double>(k);
        double bk;
        if (k == 1)
            bk = 4.0 * (a + 1.0) * (b + 1.0) / ((apb + 2.0) * (apb + 2.0) * (apb + 3.0));
        else
            bk = 4.0 * dk * (dk + a) * (dk + b) * (dk + apb) /
                 ((2.0 * dk + apb) * (2.0 * dk + apb) * (2.0 * dk + apb + 1.0) *
                  (2.0 * dk + apb - 1.0));
        sub.push_back(std::sqrt(bk));
    }
    // total mass of (1-t)^a (1+t)^b on [-1,1]
    const double mu0 = std::exp((apb + 1.0) * std::log(2.0) + log_beta(a + 1.0, b + 1.0));

    std::vector<double> z(n, 0.0);
    z[0] = 1.0;
    tridiag_ql(diag, sub, z);

    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    // map t -> (1+t)/2 and fold in the Jacobian and weight rescaling:
    // int_0^1 x^alpha (1-x)^beta f dx = 2^{-(alpha+beta+1)} int_-1^1 (1-t)^a (1+t)^b f((1+t)/2) dt
    const double scale = std::exp(-(apb + 1.0) * std::log(2.0));
    for (std::size_t i = 0; i < n; ++i) {
        rule.nodes[i] = 0.5 * (1.0 + diag[i]);
        rule.weights[i] = scale * mu0 * z[i] * z[i];
    }
    return rule;
}

}  // namespace qbd
