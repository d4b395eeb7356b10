#ifndef QBD_MOP_HPP
#define QBD_MOP_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qbd/matrix.hpp"
#include "qbd/model.hpp"
#include "qbd/quadrature.hpp"

namespace qbd {

// Weight matrix W(x) = x^alpha (1-x)^beta PolyPart(x) on [0,1], with
// PolyPart(x) = sum_d poly[d] x^d, every coefficient matrix symmetric.
template <ScalarField T>
struct WeightSpec {
    std::size_t n_phases = 0;
    T alpha = ScalarTraits<T>::zero();
    T beta = ScalarTraits<T>::zero();
    std::vector<Matrix<T>> poly;

    std::size_t poly_degree() const { return poly.empty() ? 0 : poly.size() - 1; }

    Matrix<T> poly_part_at(const T& x) const {
        Matrix<T> acc(n_phases, n_phases);
        T xp = ScalarTraits<T>::one();
        for (const auto& coeff : poly) {
            acc += coeff * xp;
            xp *= x;
        }
        return acc;
    }
};

template <ScalarField T>
void validate_weight_spec(const WeightSpec<T>& w) {
    if (w.n_phases == 0 || w.poly.empty())
        throw std::invalid_argument("WeightSpec: empty polynomial part");
    for (const auto& coeff : w.poly)
        if (coeff.rows() != w.n_phases || coeff.cols() != w.n_phases || !is_symmetric(coeff))
            throw std::invalid_argument("WeightSpec: coefficients must be symmetric NxN");
}

// Sampling check of positive definiteness on (0,1); float backend heuristic.
inline bool weight_positive_definite_sampled(const WeightSpec<double>& w,
                                             std::size_t samples = 51) {
    for (std::size_t i = 1; i <= samples; ++i) {
        double x = static_cast<double>(i) / static_cast<double>(samples + 1);
        Matrix<double> v = w.poly_part_at(x) *
                           (std::pow(x, w.alpha) * std::pow(1.0 - x, w.beta));
        if (!is_positive_definite(v)) return false;
    }
    return true;
}

// Monic matrix orthogonal polynomial data: the three-term recurrence
//   x P_n = P_{n+1} + beta[n] P_n + gamma[n] P_{n-1}
// plus squared norms h[n] = <P_n, P_n>, and, once a normalization
// Lambda_n is applied, the stochastic recurrence blocks of Q_n = Lambda_n
// P_n Lambda_0^{-1} together with |Q_n|^2 = Lambda_n h_n Lambda_n^T.
template <ScalarField T>
struct MopFamily {
    std::size_t n_phases = 0;
    std::size_t degree = 0;         // coefficients cover n = 0..degree
    std::vector<Matrix<T>> beta;    // n = 0..degree
    std::vector<Matrix<T>> gamma;   // n = 1..degree; gamma[0] is a zero placeholder
    std::vector<Matrix<T>> h;       // n = 0..degree

    bool normalized = false;
    std::vector<Matrix<T>> lambda;  // Lambda_n as supplied
    std::vector<Matrix<T>> A;       // n = 0..lambda.size()-2
    std::vector<Matrix<T>> B;       // n = 0..degree
    std::vector<Matrix<T>> C;       // n = 1..degree; C[0] zero placeholder
    std::vector<Matrix<T>> norms;   // |Q_n|^2, n = 0..degree

    // Pi_0 = (|Q_0|^2)^{-1} = (Lambda_0 S_0 Lambda_0^T)^{-1}
    Matrix<T> pi0() const {
        if (!normalized) throw std::logic_error("MopFamily: not normalized");
        return inverse(norms.at(0));
    }
};

namespace detail {

inline mpz_class factorial_mpz(unsigned long n) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return f;
}

// int_0^1 x^a (1-x)^b dx = a! b! / (a+b+1)!
inline Rational beta_integral(unsigned long a, unsigned long b) {
    return Rational(factorial_mpz(a) * factorial_mpz(b), factorial_mpz(a + b + 1));
}

// long-double accumulator for quadrature sums over one matrix
class AccumMatrix {
  public:
    AccumMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), acc_(rows * cols, 0.0L) {}
    void add_scaled(double s, const Matrix<double>& m) {
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                acc_[i * cols_ + j] += static_cast<long double>(s) * m(i, j);
    }
    Matrix<double> value() const {
        Matrix<double> out(rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                out(i, j) = static_cast<double>(acc_[i * cols_ + j]);
        return out;
    }

  private:
    std::size_t rows_, cols_;
    std::vector<long double> acc_;
};

}  // namespace qbd::detail

// Matrix moments S_k = int_0^1 x^k W(x) dx for k = 0..k_max. The exact path
// needs nonnegative integer alpha, beta (Beta integrals are then rational);
// the float path integrates by Gauss-Jacobi sized for degree exactness.
template <ScalarField T>
std::vector<Matrix<T>> moments(const WeightSpec<T>& w, std::size_t k_max) {
    validate_weight_spec(w);
    std::vector<Matrix<T>> out;
    out.reserve(k_max + 1);
    if constexpr (ScalarTraits<T>::is_exact) {
        if (!w.alpha.is_integer() || !w.beta.is_integer() || w.alpha.sign() < 0 ||
            w.beta.sign() < 0)
            throw std::invalid_argument(
                "moments: exact path requires nonnegative integer alpha and beta (got alpha=" +
                w.alpha.str() + ", beta=" + w.beta.str() + "); use the float backend");
        const unsigned long ia = static_cast<unsigned long>(w.alpha.to_long());
        const unsigned long ib = static_cast<unsigned long>(w.beta.to_long());
        for (std::size_t k = 0; k <= k_max; ++k) {
            Matrix<T> s(w.n_phases, w.n_phases);
            for (std::size_t d = 0; d < w.poly.size(); ++d)
                s += w.poly[d] * detail::beta_integral(static_cast<unsigned long>(k + d) + ia, ib);
            out.push_back(std::move(s));
        }
    } else {
        const std::size_t order = (k_max + w.poly_degree() + 2) / 2 + 8;
        QuadratureRule rule = gauss_jacobi(w.alpha, w.beta, order);
        std::vector<Matrix<double>> poly_at;
        poly_at.reserve(rule.nodes.size());
        for (double x : rule.nodes) poly_at.push_back(w.poly_part_at(x));
        for (std::size_t k = 0; k <= k_max; ++k) {
            detail::AccumMatrix acc(w.n_phases, w.n_phases);
            for (std::size_t q = 0; q < rule.nodes.size(); ++q)
                acc.add_scaled(rule.weights[q] * std::pow(rule.nodes[q], static_cast<double>(k)),
                               poly_at[q]);
            out.push_back(acc.value());
        }
    }
    return out;
}

namespace detail {

// <x^shift P, R> = sum_{i,j} p_i S_{i+j+shift} r_j^T over coefficient lists
template <ScalarField T>
Matrix<T> moment_inner(const std::vector<Matrix<T>>& p, const std::vector<Matrix<T>>& r,
                       const std::vector<Matrix<T>>& moms, std::size_t shift) {
    const std::size_t n = p.front().rows();
    Matrix<T> acc(n, n);
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < r.size(); ++j)
            acc += p[i] * moms.at(i + j + shift) * r[j].transpose();
    return acc;
}

template <ScalarField T>
double normalized_residual(const Matrix<T>& cross, const Matrix<T>& ha, const Matrix<T>& hb) {
    double scale = std::sqrt(ScalarTraits<T>::to_double(max_abs(ha)) *
                             ScalarTraits<T>::to_double(max_abs(hb)));
    if (!(scale > 0.0)) scale = 1.0;
    return ScalarTraits<T>::to_double(max_abs(cross)) / scale;
}

template <ScalarField T>
Matrix<T> inverse_h(const Matrix<T>& h, std::size_t n) {
    try {
        return inverse(h);
    } catch (const std::runtime_error&) {
        if constexpr (ScalarTraits<T>::is_exact)
            throw std::runtime_error("monic recurrence: singular h_" + std::to_string(n) +
                                     " (weight does not support this degree)");
        else
            // monic norms decay exponentially and leave binary64 range near
            // degree ~250 even for healthy weights
            throw std::runtime_error("monic recurrence: h_" + std::to_string(n) +
                                     " is singular or underflowed (the float engine supports "
                                     "degrees up to a few hundred)");
    }
}

}  // namespace qbd::detail

// Monic family built degree-by-degree from the moment sequence:
//   beta_n = <x P_n, P_n> h_n^{-1},  gamma_n = h_n h_{n-1}^{-1},
// with every new polynomial verified orthogonal to all previous ones (a
// failure here means an inner-product convention bug, so it is a hard error).
// Needs moments S_0..S_{2 n_max + 1}. On the float backend this moment-form
// route is numerically reliable only for small n; the quadrature route below
// is the production float path.
template <ScalarField T>
MopFamily<T> monic_recurrence(const std::vector<Matrix<T>>& moms, std::size_t n_max,
                              double ortho_tol = 1e-8) {
    if (moms.size() < 2 * n_max + 2)
        throw std::invalid_argument("monic_recurrence: need " + std::to_string(2 * n_max + 2) +
                                    " moments, have " + std::to_string(moms.size()));
    const std::size_t np = moms.front().rows();
    MopFamily<T> fam;
    fam.n_phases = np;
    fam.degree = n_max;
    fam.gamma.push_back(Matrix<T>(np, np));  // placeholder gamma_0

    std::vector<std::vector<Matrix<T>>> coeffs;  // coeffs[n][i], i = 0..n
    coeffs.push_back({Matrix<T>::identity(np)});
    fam.h.push_back(detail::moment_inner(coeffs[0], coeffs[0], moms, 0));

    for (std::size_t n = 0; n <= n_max; ++n) {
        Matrix<T> hn_inv = detail::inverse_h(fam.h[n], n);
        fam.beta.push_back(detail::moment_inner(coeffs[n], coeffs[n], moms, 1) * hn_inv);
        if (n >= 1)
            fam.gamma.push_back(fam.h[n] * detail::inverse_h(fam.h[n - 1], n - 1));
        if (n == n_max) break;

        std::vector<Matrix<T>> next(n + 2, Matrix<T>(np, np));
        for (std::size_t i = 0; i <= n; ++i) {
            next[i + 1] += coeffs[n][i];
            next[i] -= fam.beta[n] * coeffs[n][i];
        }
        if (n >= 1)
            for (std::size_t i = 0; i < n; ++i) next[i] -= fam.gamma[n] * coeffs[n - 1][i];

        Matrix<T> hnext = detail::moment_inner(next, next, moms, 0);
        for (std::size_t k = 0; k <= n; ++k) {
            Matrix<T> cross = detail::moment_inner(next, coeffs[k], moms, 0);
            bool ok;
            if constexpr (ScalarTraits<T>::is_exact)
                ok = (max_abs(cross) == ScalarTraits<T>::zero());
            else
                ok = detail::normalized_residual(cross, hnext, fam.h[k]) < ortho_tol;
            if (!ok)
                throw std::runtime_error("monic_recurrence: P_" + std::to_string(n + 1) +
                                         " not orthogonal to P_" + std::to_string(k) +
                                         " (inner-product convention bug)");
        }
        coeffs.push_back(std::move(next));
        fam.h.push_back(std::move(hnext));
    }
    return fam;
}

// Float-path monic construction by discretized Stieltjes: the same inner
// product, evaluated on Gauss-Jacobi node values where it is degree-exact.
// Stable where the raw moment form loses the low bits to cancellation.
inline MopFamily<double> monic_recurrence_stieltjes(const WeightSpec<double>& w,
                                                    std::size_t n_max,
                                                    double ortho_tol = 1e-8) {
    validate_weight_spec(w);
    const std::size_t np = w.n_phases;
    const std::size_t order = (2 * n_max + w.poly_degree() + 2) / 2 + 8;
    QuadratureRule rule = gauss_jacobi(w.alpha, w.beta, order);
    const std::size_t nq = rule.nodes.size();

    std::vector<Matrix<double>> omega;
    omega.reserve(nq);
    for (double x : rule.nodes) omega.push_back(w.poly_part_at(x));

    // values[n][q] = P_n(x_q)
    std::vector<std::vector<Matrix<double>>> values;
    values.push_back(std::vector<Matrix<double>>(nq, Matrix<double>::identity(np)));

    auto inner = [&](const std::vector<Matrix<double>>& va, const std::vector<Matrix<double>>& vb,
                     bool with_x) {
        detail::AccumMatrix acc(np, np);
        for (std::size_t q = 0; q < nq; ++q) {
            double s = rule.weights[q] * (with_x ? rule.nodes[q] : 1.0);
            acc.add_scaled(s, va[q] * omega[q] * vb[q].transpose());
        }
        return acc.value();
    };

    MopFamily<double> fam;
    fam.n_phases = np;
    fam.degree = n_max;
    fam.gamma.push_back(Matrix<double>(np, np));
    fam.h.push_back(inner(values[0], values[0], false));

    for (std::size_t n = 0; n <= n_max; ++n) {
        Matrix<double> hn_inv = detail::inverse_h(fam.h[n], n);
        fam.beta.push_back(inner(values[n], values[n], true) * hn_inv);
        if (n >= 1) fam.gamma.push_back(fam.h[n] * detail::inverse_h(fam.h[n - 1], n - 1));
        if (n == n_max) break;

        std::vector<Matrix<double>> next(nq, Matrix<double>(np, np));
        for (std::size_t q = 0; q < nq; ++q) {
            next[q] = values[n][q] * rule.nodes[q] - fam.beta[n] * values[n][q];
            if (n >= 1) next[q] -= fam.gamma[n] * values[n - 1][q];
        }
        Matrix<double> hnext = inner(next, next, false);
        for (std::size_t k = 0; k <= n; ++k) {
            Matrix<double> cross = inner(next, values[k], false);
            if (detail::normalized_residual(cross, hnext, fam.h[k]) >= ortho_tol)
                throw std::runtime_error("monic_recurrence_stieltjes: P_" + std::to_string(n + 1) +
                                         " not orthogonal to P_" + std::to_string(k));
        }
        values.push_back(std::move(next));
        fam.h.push_back(std::move(hnext));
    }
    return fam;
}

// Conjugates the monic family by Lambda_n: Q_n = Lambda_n P_n Lambda_0^{-1}.
//   A_n = Lambda_n Lambda_{n+1}^{-1}, B_n = Lambda_n beta_n Lambda_n^{-1},
//   C_n = Lambda_n gamma_n Lambda_{n-1}^{-1}, |Q_n|^2 = Lambda_n h_n Lambda_n^T.
// With expect_stochastic set, the assembled block rows must sum to one.
template <ScalarField T>
MopFamily<T> stochastic_normalize(MopFamily<T> fam, std::vector<Matrix<T>> lambdas,
                                  bool expect_stochastic = false) {
    if (lambdas.size() < fam.degree + 1)
        throw std::invalid_argument("stochastic_normalize: need at least " +
                                    std::to_string(fam.degree + 1) + " Lambda matrices");
    std::vector<Matrix<T>> lam_inv;
    lam_inv.reserve(lambdas.size());
    for (std::size_t n = 0; n < lambdas.size(); ++n) {
        try {
            lam_inv.push_back(inverse(lambdas[n]));
        } catch (const std::runtime_error&) {
            throw std::runtime_error("stochastic_normalize: Lambda_" + std::to_string(n) +
                                     " is singular");
        }
    }
    fam.lambda = std::move(lambdas);
    fam.A.clear();
    fam.B.clear();
    fam.C.clear();
    fam.norms.clear();
    fam.C.push_back(Matrix<T>(fam.n_phases, fam.n_phases));  // placeholder C_0
    for (std::size_t n = 0; n <= fam.degree; ++n) {
        if (n + 1 < fam.lambda.size()) fam.A.push_back(fam.lambda[n] * lam_inv[n + 1]);
        fam.B.push_back(fam.lambda[n] * fam.beta[n] * lam_inv[n]);
        if (n >= 1) fam.C.push_back(fam.lambda[n] * fam.gamma[n] * lam_inv[n - 1]);
        fam.norms.push_back(fam.lambda[n] * fam.h[n] * fam.lambda[n].transpose());
    }
    fam.normalized = true;

    if (expect_stochastic) {
        const T one = ScalarTraits<T>::one();
        const std::size_t rows_to_check = fam.A.size();  // need A_n for a full block row
        for (std::size_t n = 0; n < rows_to_check; ++n) {
            for (std::size_t i = 0; i < fam.n_phases; ++i) {
                T sum = ScalarTraits<T>::zero();
                for (std::size_t j = 0; j < fam.n_phases; ++j) {
                    sum += fam.A[n](i, j) + fam.B[n](i, j);
                    if (n >= 1) sum += fam.C[n](i, j);
                }
                T err = ScalarTraits<T>::abs(sum - one);
                bool bad;
                if constexpr (ScalarTraits<T>::is_exact)
                    bad = !(err == ScalarTraits<T>::zero());
                else
                    bad = ScalarTraits<T>::to_double(err) > 1e-12;
                if (bad)
                    throw std::runtime_error("stochastic_normalize: block row " +
                                             std::to_string(n) + ", phase " + std::to_string(i) +
                                             " sums to " + ScalarTraits<T>::str(sum) +
                                             ", expected 1");
            }
        }
    }
    return fam;
}

// A model whose level blocks are the normalized recurrence coefficients.
template <ScalarField T>
BlockTridiagonal<T> assemble_model(const MopFamily<T>& fam, Kind kind = Kind::Discrete) {
    if (!fam.normalized) throw std::logic_error("assemble_model: family not normalized");
    std::vector<LevelBlocks<T>> blocks;
    for (std::size_t n = 0; n <= fam.degree; ++n) {
        LevelBlocks<T> lb;
        lb.B = fam.B[n];
        if (n < fam.A.size()) lb.A = fam.A[n];
        if (n >= 1) lb.C = fam.C[n];
        blocks.push_back(std::move(lb));
    }
    return build_model<T>(fam.n_phases, kind, std::move(blocks));
}

// Q_0..Q_{n_upto} at x by the forward recurrence
//   Q_{n+1} = A_n^{-1} ((x I - B_n) Q_n - C_n Q_{n-1}),  Q_0 = I.
template <ScalarField T>
std::vector<Matrix<T>> evaluate_Q(const MopFamily<T>& fam, const T& x, std::size_t n_upto) {
    if (!fam.normalized) throw std::logic_error("evaluate_Q: family not normalized");
    if (fam.A.size() < n_upto)
        throw std::invalid_argument("evaluate_Q: need A_0..A_" + std::to_string(n_upto - 1));
    std::vector<Matrix<T>> q;
    q.push_back(Matrix<T>::identity(fam.n_phases));
    for (std::size_t n = 0; n < n_upto; ++n) {
        Matrix<T> xi = Matrix<T>::identity(fam.n_phases) * x;
        Matrix<T> rhs = (xi - fam.B[n]) * q[n];
        if (n >= 1) rhs -= fam.C[n] * q[n - 1];
        q.push_back(inverse(fam.A[n]) * rhs);
    }
    return q;
}

// Same recurrence driven by a model's blocks (the Jacobi-matrix polynomials).
template <ScalarField T>
std::vector<Matrix<T>> evaluate_Q(const BlockTridiagonal<T>& m, const T& x, std::size_t n_upto) {
    std::vector<Matrix<T>> q;
    q.push_back(Matrix<T>::identity(m.phases()));
    for (std::size_t n = 0; n < n_upto; ++n) {
        Matrix<T> xi = Matrix<T>::identity(m.phases()) * x;
        Matrix<T> rhs = (xi - m.B(n)) * q[n];
        if (n >= 1) rhs -= m.C(n) * q[n - 1];
        q.push_back(inverse(m.A(n)) * rhs);
    }
    return q;
}

struct OrthogonalityReport {
    std::vector<std::vector<double>> residual;  // residual[n][m], n,m = 0..n_upto
    double max_residual = 0.0;
};

// Quadrature check of int Q_n W~ Q_m^T dx = delta_nm |Q_n|^2 against the
// conjugated weight W~ = Lambda_0 W Lambda_0^T. Float backend.
inline OrthogonalityReport orthogonality_check(const MopFamily<double>& fam,
                                               const WeightSpec<double>& w,
                                               std::size_t n_upto) {
    if (!fam.normalized) throw std::logic_error("orthogonality_check: family not normalized");
    if (n_upto > fam.degree || fam.A.size() < n_upto)
        throw std::invalid_argument("orthogonality_check: family too short");
    const std::size_t np = fam.n_phases;
    const std::size_t order = (2 * n_upto + w.poly_degree() + 2) / 2 + 8;
    QuadratureRule rule = gauss_jacobi(w.alpha, w.beta, order);
    const std::size_t nq = rule.nodes.size();

    const Matrix<double>& lam0 = fam.lambda.at(0);
    std::vector<std::vector<Matrix<double>>> qvals(nq);
    std::vector<Matrix<double>> omega_t(nq, Matrix<double>(np, np));
    for (std::size_t q = 0; q < nq; ++q) {
        qvals[q] = evaluate_Q(fam, rule.nodes[q], n_upto);
        omega_t[q] = lam0 * w.poly_part_at(rule.nodes[q]) * lam0.transpose();
    }

    OrthogonalityReport rep;
    rep.residual.assign(n_upto + 1, std::vector<double>(n_upto + 1, 0.0));
    for (std::size_t n = 0; n <= n_upto; ++n)
        for (std::size_t m = 0; m <= n_upto; ++m) {
            detail::AccumMatrix acc(np, np);
            for (std::size_t q = 0; q < nq; ++q)
                acc.add_scaled(rule.weights[q], qvals[q][n] * omega_t[q] * qvals[q][m].transpose());
            Matrix<double> g = acc.value();
            if (n == m) g -= fam.norms[n];
            double r = max_abs(g);
            rep.residual[n][m] = r;
            rep.max_residual = std::max(rep.max_residual, r);
        }
    return rep;
}

}  // namespace qbd

#endif  // QBD_MOP_HPP
