#ifndef QBD_QUADRATURE_HPP
#define QBD_QUADRATURE_HPP

#include <cstddef>
#include <vector>

namespace qbd {

// Gauss-Jacobi rule on [0,1] for the weight x^alpha (1-x)^beta:
//   sum_i weights[i] f(nodes[i]) = int_0^1 x^alpha (1-x)^beta f(x) dx
// exactly for polynomials f of degree <= 2*order - 1.
struct QuadratureRule {
    std::vector<double> nodes;    // strictly inside (0,1), ascending
    std::vector<double> weights;  // all positive
};

QuadratureRule gauss_jacobi(double alpha, double beta, std::size_t order);

}  // namespace qbd

#endif  // QBD_QUADRATURE_HPP
