#ifndef QBD_POTENTIAL_HPP
#define QBD_POTENTIAL_HPP

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "qbd/model.hpp"

namespace qbd {

// The matrix-valued potential coefficients Pi_0, Pi_1, ... Each one is
// symmetric positive definite; Pi_n equals the inverse squared norm of the
// n-th orthogonal polynomial of any weight matrix attached to the model.
template <ScalarField T>
struct PotentialSequence {
    Matrix<T> pi0;
    std::vector<Matrix<T>> items;  // Pi_1, Pi_2, ...

    std::size_t count() const { return items.size() + 1; }
    const Matrix<T>& at(std::size_t n) const {
        if (n == 0) return pi0;
        if (n > items.size())
            throw std::invalid_argument("PotentialSequence: Pi_" + std::to_string(n) +
                                        " not computed");
        return items[n - 1];
    }
};

namespace detail {

template <ScalarField T>
bool symmetric_within(const Matrix<T>& m, double rel_tol) {
    if constexpr (ScalarTraits<T>::is_exact) {
        (void)rel_tol;
        return is_symmetric(m);
    } else {
        double scale = ScalarTraits<T>::to_double(max_abs(m));
        return ScalarTraits<T>::to_double(symmetry_gap(m)) <=
               rel_tol * (scale > 1.0 ? scale : 1.0);
    }
}

}  // namespace detail

// One-step recursion Pi_n = (C_n^T)^{-1} Pi_{n-1} A_{n-1}. Each result must
// come out symmetric; a violation means pi0 does not belong to the model.
template <ScalarField T>
PotentialSequence<T> potential_coefficients(const BlockTridiagonal<T>& m, const Matrix<T>& pi0,
                                            std::size_t n_max, double sym_rel_tol = 1e-11) {
    if (pi0.rows() != m.phases() || pi0.cols() != m.phases())
        throw std::invalid_argument("potential_coefficients: pi0 has wrong shape");
    if (!detail::symmetric_within(pi0, sym_rel_tol))
        throw std::invalid_argument("potential_coefficients: pi0 not symmetric");
    if (!is_positive_definite(pi0))
        throw std::invalid_argument("potential_coefficients: pi0 not positive definite");
    if (n_max > 0 && m.stored_levels() < n_max + 1)
        throw std::invalid_argument("potential_coefficients: need " + std::to_string(n_max + 1) +
                                    " stored levels");
    PotentialSequence<T> ps{pi0, {}};
    ps.items.reserve(n_max);
    Matrix<T> prev = pi0;
    for (std::size_t n = 1; n <= n_max; ++n) {
        Matrix<T> ct_inv = inverse(m.C(n).transpose());  // throws if C_n singular
        Matrix<T> pin = ct_inv * prev * m.A(n - 1);
        if (!detail::symmetric_within(pin, sym_rel_tol))
            throw std::runtime_error(
                "potential_coefficients: Pi_" + std::to_string(n) +
                " is not symmetric; pi0 is inconsistent with the model blocks");
        ps.items.push_back(pin);
        prev = std::move(pin);
    }
    return ps;
}

// Product form Pi_n = (C_1^T ... C_n^T)^{-1} Pi_0 (A_0 ... A_{n-1}); kept as
// an independent oracle for the one-step recursion.
template <ScalarField T>
Matrix<T> potential_product_formula(const BlockTridiagonal<T>& m, const Matrix<T>& pi0,
                                    std::size_t n) {
    if (n == 0) return pi0;
    Matrix<T> cprod = m.C(1).transpose();
    for (std::size_t k = 2; k <= n; ++k) cprod = cprod * m.C(k).transpose();
    Matrix<T> aprod = m.A(0);
    for (std::size_t k = 1; k < n; ++k) aprod = aprod * m.A(k);
    return inverse(cprod) * pi0 * aprod;
}

// Residuals of the two symmetry conditions
//   Pi_n B_n = B_n^T Pi_n          (condition on the diagonal blocks)
//   Pi_n A_n = C_{n+1}^T Pi_{n+1}  (coupling condition)
// reported per level. Exact backend passes only on equality.
struct SymmetryReport {
    std::vector<double> diagonal_residual;  // index n = 0..count-1
    std::vector<double> coupling_residual;  // index n = 0..count-2
    bool exact = false;
    double tolerance = 0.0;
    bool pass = false;
    double max_residual = 0.0;           // absolute, over both conditions
    double max_relative_residual = 0.0;  // scaled by max(1, |Pi_n|) per level
};

// The float pass rule is relative to the magnitude of Pi_n: the coefficients
// grow with the level, so a fixed absolute threshold would reject healthy
// runs at nothing but depth.
template <ScalarField T>
SymmetryReport check_symmetry_conditions(const BlockTridiagonal<T>& m,
                                         const PotentialSequence<T>& ps,
                                         double tol = 1e-11) {
    SymmetryReport rep;
    rep.exact = ScalarTraits<T>::is_exact;
    rep.tolerance = rep.exact ? 0.0 : tol;
    bool all_zero = true;
    auto scale_of = [](const Matrix<T>& pi_n) {
        double s = ScalarTraits<T>::to_double(max_abs(pi_n));
        return s > 1.0 ? s : 1.0;
    };
    for (std::size_t n = 0; n < ps.count(); ++n) {
        Matrix<T> r = ps.at(n) * m.B(n) - m.B(n).transpose() * ps.at(n);
        T gap = max_abs(r);
        if (!(gap == ScalarTraits<T>::zero())) all_zero = false;
        double abs_r = ScalarTraits<T>::to_double(gap);
        rep.diagonal_residual.push_back(abs_r);
        rep.max_relative_residual =
            std::max(rep.max_relative_residual, abs_r / scale_of(ps.at(n)));
        if (n + 1 < ps.count()) {
            Matrix<T> d = ps.at(n) * m.A(n) - m.C(n + 1).transpose() * ps.at(n + 1);
            T g2 = max_abs(d);
            if (!(g2 == ScalarTraits<T>::zero())) all_zero = false;
            double abs_c = ScalarTraits<T>::to_double(g2);
            rep.coupling_residual.push_back(abs_c);
            rep.max_relative_residual =
                std::max(rep.max_relative_residual,
                         abs_c / std::max(scale_of(ps.at(n)), scale_of(ps.at(n + 1))));
        }
    }
    for (double r : rep.diagonal_residual) rep.max_residual = std::max(rep.max_residual, r);
    for (double r : rep.coupling_residual) rep.max_residual = std::max(rep.max_residual, r);
    rep.pass = rep.exact ? all_zero : rep.max_relative_residual < tol;
    return rep;
}

// One representative R_n of the non-unique symmetrizer family:
// upper-triangular with R_n^T R_n = pi_n. Float backend only.
inline Matrix<double> symmetrizer(const Matrix<double>& pi_n) { return cholesky_upper(pi_n); }

// Determines the admissible Pi_0 of a literal model from the symmetry
// conditions alone: both conditions are linear in the N(N+1)/2 entries of a
// symmetric Pi_0, and for a model that really does carry a weight matrix the
// solution space is one-dimensional. The result is scale-normalized to
// Pi_0(0,0) = 1 and must come out positive definite. For N = 1 every choice
// works and the classical convention pi_0 = 1 is returned.
template <ScalarField T>
Matrix<T> solve_pi0(const BlockTridiagonal<T>& m, std::size_t depth = 0) {
    const std::size_t np = m.phases();
    const std::size_t unknowns = np * (np + 1) / 2;
    if (depth == 0) depth = std::min(m.stored_levels() - 1, std::size_t(8));

    // basis of symmetric matrices, and the linear images Pi_n^{(u)} of each
    // basis element under the potential recursion
    std::vector<Matrix<T>> basis;
    for (std::size_t i = 0; i < np; ++i)
        for (std::size_t j = i; j < np; ++j) {
            Matrix<T> e(np, np);
            e(i, j) = ScalarTraits<T>::one();
            e(j, i) = ScalarTraits<T>::one();
            basis.push_back(std::move(e));
        }

    std::vector<std::vector<T>> rows;  // constraint rows over the unknowns
    auto add_antisym_rows = [&](const std::vector<Matrix<T>>& images) {
        // images[u] antisymmetric-part rows: one equation per strict upper entry
        for (std::size_t i = 0; i < np; ++i)
            for (std::size_t j = i + 1; j < np; ++j) {
                std::vector<T> row;
                row.reserve(unknowns);
                for (std::size_t u = 0; u < unknowns; ++u)
                    row.push_back(images[u](i, j) - images[u](j, i));
                rows.push_back(std::move(row));
            }
    };

    std::vector<Matrix<T>> pin = basis;
    for (std::size_t n = 0;; ++n) {
        std::vector<Matrix<T>> cond;
        cond.reserve(unknowns);
        for (std::size_t u = 0; u < unknowns; ++u) cond.push_back(pin[u] * m.B(n));
        for (std::size_t u = 0; u < unknowns; ++u)
            cond[u] = cond[u] - m.B(n).transpose() * pin[u];
        // cond now holds Pi_n B_n - B_n^T Pi_n per basis element; every entry
        // must vanish, not just the antisymmetric part
        for (std::size_t i = 0; i < np; ++i)
            for (std::size_t j = 0; j < np; ++j) {
                std::vector<T> row;
                row.reserve(unknowns);
                for (std::size_t u = 0; u < unknowns; ++u) row.push_back(cond[u](i, j));
                rows.push_back(std::move(row));
            }
        if (n == depth) break;
        Matrix<T> ct_inv = inverse(m.C(n + 1).transpose());
        for (std::size_t u = 0; u < unknowns; ++u) pin[u] = ct_inv * pin[u] * m.A(n);
        add_antisym_rows(pin);  // Pi_{n+1} must be symmetric
    }

    // nullspace of the stacked system; needs exactly one free direction
    const std::size_t nrows = rows.size();
    double scale = 0.0;
    for (const auto& r : rows)
        for (const auto& x : r) scale = std::max(scale, std::abs(ScalarTraits<T>::to_double(x)));
    const double float_tol = 1e-9 * (scale > 1.0 ? scale : 1.0);
    std::vector<std::size_t> pivot_col;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < unknowns && rank < nrows; ++c) {
        std::size_t best = rank;
        T best_abs = ScalarTraits<T>::abs(rows[rank][c]);
        for (std::size_t r = rank + 1; r < nrows; ++r) {
            T cand = ScalarTraits<T>::abs(rows[r][c]);
            if (cand > best_abs) { best_abs = cand; best = r; }
        }
        bool zero_col;
        if constexpr (ScalarTraits<T>::is_exact)
            zero_col = (best_abs == ScalarTraits<T>::zero());
        else
            zero_col = ScalarTraits<T>::to_double(best_abs) <= float_tol;
        if (zero_col) continue;
        std::swap(rows[rank], rows[best]);
        T piv = rows[rank][c];
        for (std::size_t j = c; j < unknowns; ++j) rows[rank][j] /= piv;
        for (std::size_t r = 0; r < nrows; ++r) {
            if (r == rank) continue;
            T f = rows[r][c];
            if (ScalarTraits<T>::is_exact && f == ScalarTraits<T>::zero()) continue;
            for (std::size_t j = c; j < unknowns; ++j) rows[r][j] -= f * rows[rank][j];
        }
        pivot_col.push_back(c);
        ++rank;
    }
    if (rank + 1 < unknowns)
        throw std::runtime_error(
            "solve_pi0: symmetry conditions leave Pi_0 underdetermined (nullspace dimension " +
            std::to_string(unknowns - rank) + "); supply more levels");
    if (rank == unknowns)
        throw std::runtime_error(
            "solve_pi0: no admissible Pi_0; the model does not satisfy the symmetry conditions");

    // reconstruct the one free direction
    std::size_t free_col = 0;
    {
        std::vector<bool> is_pivot(unknowns, false);
        for (std::size_t c : pivot_col) is_pivot[c] = true;
        for (std::size_t c = 0; c < unknowns; ++c)
            if (!is_pivot[c]) { free_col = c; break; }
    }
    std::vector<T> sol(unknowns, ScalarTraits<T>::zero());
    sol[free_col] = ScalarTraits<T>::one();
    for (std::size_t r = 0; r < rank; ++r) sol[pivot_col[r]] = -rows[r][free_col];

    Matrix<T> pi0(np, np);
    std::size_t u = 0;
    for (std::size_t i = 0; i < np; ++i)
        for (std::size_t j = i; j < np; ++j) {
            pi0(i, j) = sol[u];
            pi0(j, i) = sol[u];
            ++u;
        }
    if (pi0(0, 0) == ScalarTraits<T>::zero())
        throw std::runtime_error("solve_pi0: degenerate solution (vanishing (0,0) entry)");
    T norm = pi0(0, 0);
    for (std::size_t i = 0; i < np; ++i)
        for (std::size_t j = 0; j < np; ++j) pi0(i, j) /= norm;
    if (!is_positive_definite(pi0))
        throw std::runtime_error("solve_pi0: admissible Pi_0 is not positive definite");
    return pi0;
}

}  // namespace qbd

#endif  // QBD_POTENTIAL_HPP
