#ifndef QBD_INVARIANT_HPP
#define QBD_INVARIANT_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "qbd/potential.hpp"

namespace qbd {

// The invariant row vector pi = ((Pi_0 e)^T; (Pi_1 e)^T; ...). Components are
// nonnegative; it need not be summable (the chain may be null recurrent or
// transient), so any normalization is over a finite truncation.
template <ScalarField T>
struct InvariantVector {
    std::vector<Matrix<T>> blocks;  // each 1 x N

    LevelVector<T> as_level_vector() const { return LevelVector<T>{blocks}; }
};

template <ScalarField T>
InvariantVector<T> invariant_vector(const PotentialSequence<T>& ps) {
    InvariantVector<T> v;
    const std::size_t n_phases = ps.pi0.rows();
    Matrix<T> e = ones_column<T>(n_phases);
    for (std::size_t n = 0; n < ps.count(); ++n) {
        Matrix<T> block = (ps.at(n) * e).transpose();  // 1 x N
        for (std::size_t j = 0; j < n_phases; ++j)
            if (block(0, j) < ScalarTraits<T>::zero())
                throw std::runtime_error(
                    "invariant_vector: negative component at level " + std::to_string(n) +
                    ", phase " + std::to_string(j) +
                    "; Pi_" + std::to_string(n) + " is not positive semi-definite");
        v.blocks.push_back(std::move(block));
    }
    return v;
}

// Max-norm residual per level of pi P - pi (discrete) or pi A (continuous,
// where the target is the zero vector). Levels 0..levels-1 are reported.
template <ScalarField T>
std::vector<T> stationarity_residual(const BlockTridiagonal<T>& m, const InvariantVector<T>& v,
                                     std::size_t levels) {
    LevelVector<T> applied = row_apply(v.as_level_vector(), m, levels);
    std::vector<T> out;
    out.reserve(levels);
    for (std::size_t k = 0; k < levels; ++k) {
        Matrix<T> diff = applied.blocks[k];
        if (m.kind() == Kind::Discrete) diff -= v.blocks[k];
        out.push_back(max_abs(diff));
    }
    return out;
}

// Stationary row vector of the lumped truncation: solves x (P - I) = 0 with
// the normalization sum(x) = 1 appended in place of the last equation.
template <ScalarField T>
std::vector<T> brute_force_invariant(const BlockTridiagonal<T>& m, std::size_t level_cap) {
    if (m.kind() != Kind::Discrete)
        throw std::invalid_argument("brute_force_invariant: discrete models only");
    if (level_cap < 2) throw std::invalid_argument("brute_force_invariant: need L >= 2");
    Matrix<T> p = truncate_lumped(m, level_cap);
    const std::size_t dim = p.rows();
    Matrix<T> sys = p.transpose();
    for (std::size_t i = 0; i < dim; ++i) sys(i, i) -= ScalarTraits<T>::one();
    for (std::size_t j = 0; j < dim; ++j) sys(dim - 1, j) = ScalarTraits<T>::one();
    Matrix<T> rhs(dim, 1);
    rhs(dim - 1, 0) = ScalarTraits<T>::one();
    Matrix<T> x = solve(sys, rhs);
    std::vector<T> out;
    out.reserve(dim);
    for (std::size_t i = 0; i < dim; ++i) out.push_back(x(i, 0));
    return out;
}

// Divides blocks 0..L by their total mass, yielding a finite distribution.
template <ScalarField T>
std::vector<T> normalize_truncated(const InvariantVector<T>& v, std::size_t level_cap) {
    if (v.blocks.empty() || level_cap + 1 > v.blocks.size())
        throw std::invalid_argument("normalize_truncated: not enough blocks");
    T mass = ScalarTraits<T>::zero();
    for (std::size_t n = 0; n <= level_cap; ++n)
        for (std::size_t j = 0; j < v.blocks[n].cols(); ++j) mass += v.blocks[n](0, j);
    if (!(mass > ScalarTraits<T>::zero()))
        throw std::runtime_error("normalize_truncated: zero mass");
    std::vector<T> out;
    for (std::size_t n = 0; n <= level_cap; ++n)
        for (std::size_t j = 0; j < v.blocks[n].cols(); ++j)
            out.push_back(v.blocks[n](0, j) / mass);
    return out;
}

// Rescales the truncation oracle so its level-0 block matches pi in the first
// component, then reports the max relative error over levels 0..levels-1.
template <ScalarField T>
double oracle_max_relative_error(const InvariantVector<T>& pi, const std::vector<T>& oracle,
                                 std::size_t levels, std::size_t n_phases) {
    if (pi.blocks.size() < levels || oracle.size() < levels * n_phases)
        throw std::invalid_argument("oracle_max_relative_error: not enough data");
    double pi00 = ScalarTraits<T>::to_double(pi.blocks[0](0, 0));
    double or00 = ScalarTraits<T>::to_double(oracle[0]);
    if (or00 == 0.0) throw std::runtime_error("oracle_max_relative_error: zero reference");
    double scale = pi00 / or00;
    double worst = 0.0;
    for (std::size_t n = 0; n < levels; ++n)
        for (std::size_t j = 0; j < n_phases; ++j) {
            double target = ScalarTraits<T>::to_double(pi.blocks[n](0, j));
            double got = scale * ScalarTraits<T>::to_double(oracle[n * n_phases + j]);
            double rel = std::abs(got - target) / (std::abs(target) > 0 ? std::abs(target) : 1.0);
            worst = std::max(worst, rel);
        }
    return worst;
}

}  // namespace qbd

#endif  // QBD_INVARIANT_HPP
