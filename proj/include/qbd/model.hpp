#ifndef QBD_MODEL_HPP
#define QBD_MODEL_HPP

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qbd/matrix.hpp"

namespace qbd {

enum class Kind { Discrete, Continuous };

inline const char* kind_name(Kind k) { return k == Kind::Discrete ? "discrete" : "continuous"; }

// One level of the block tridiagonal operator. C is absent at level 0 by
// definition; A may be absent only at the last stored level of a literal model.
template <ScalarField T>
struct LevelBlocks {
    Matrix<T> B;
    std::optional<Matrix<T>> A;
    std::optional<Matrix<T>> C;
};

struct ModelError : std::runtime_error {
    explicit ModelError(const std::string& what) : std::runtime_error(what) {}
};

// A quasi-birth-and-death process: block tridiagonal transition matrix
// (discrete) or generator (continuous), stored as a validated finite prefix
// plus an optional closed-form generator for materializing further levels.
// Immutable after construction; extension returns a new value.
template <ScalarField T>
class BlockTridiagonal {
  public:
    using Generator = std::function<LevelBlocks<T>(std::size_t)>;

    std::size_t phases() const { return n_; }
    Kind kind() const { return kind_; }
    std::size_t stored_levels() const { return levels_.size(); }
    bool has_generator() const { return static_cast<bool>(gen_); }

    const Matrix<T>& B(std::size_t level) const { return at(level).B; }
    const Matrix<T>& A(std::size_t level) const {
        const auto& l = at(level);
        if (!l.A) throw ModelError("level " + std::to_string(level) + ": A block not stored");
        return *l.A;
    }
    const Matrix<T>& C(std::size_t level) const {
        const auto& l = at(level);
        if (!l.C) throw ModelError("level " + std::to_string(level) + ": C block not stored");
        return *l.C;
    }
    bool has_A(std::size_t level) const { return level < levels_.size() && levels_[level].A; }

    // Returns a model whose prefix covers at least `levels` levels, pulling
    // new blocks from the generator. New levels are validated on the way in.
    BlockTridiagonal extended_to(std::size_t levels) const;

    const std::vector<std::string>& warnings() const { return warnings_; }

    static BlockTridiagonal build(std::size_t n_phases, Kind kind,
                                  std::vector<LevelBlocks<T>> blocks, Generator gen);

  private:
    BlockTridiagonal() = default;
    const LevelBlocks<T>& at(std::size_t level) const {
        if (level >= levels_.size())
            throw ModelError("level " + std::to_string(level) + " not stored (have " +
                             std::to_string(levels_.size()) + " levels); extend the model first");
        return levels_[level];
    }

    std::size_t n_ = 0;
    Kind kind_ = Kind::Discrete;
    std::vector<LevelBlocks<T>> levels_;
    Generator gen_;
    std::vector<std::string> warnings_;
};

namespace detail {

template <ScalarField T>
std::string fmt_entry(const T& x) {
    return ScalarTraits<T>::str(x);
}

// Validates one level in place; appends irreducibility warnings.
template <ScalarField T>
void validate_level(std::size_t n_phases, Kind kind, std::size_t level, const LevelBlocks<T>& lb,
                    bool is_last, std::vector<std::string>& warnings) {
    const T zero = ScalarTraits<T>::zero();
    auto dim_check = [&](const Matrix<T>& m, const char* name) {
        if (m.rows() != n_phases || m.cols() != n_phases)
            throw ModelError("level " + std::to_string(level) + ": block " + name + " is " +
                             std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                             ", expected " + std::to_string(n_phases) + "x" +
                             std::to_string(n_phases));
    };
    dim_check(lb.B, "B");
    if (lb.A) dim_check(*lb.A, "A");
    if (lb.C) dim_check(*lb.C, "C");

    if (level == 0 && lb.C) throw ModelError("level 0: C block must be absent");
    if (level > 0 && !lb.C)
        throw ModelError("level " + std::to_string(level) + ": C block missing");
    if (!lb.A && !is_last)
        throw ModelError("level " + std::to_string(level) + ": A block missing");

    auto sign_check = [&](const Matrix<T>& m, const char* name, bool skip_diagonal) {
        for (std::size_t i = 0; i < n_phases; ++i)
            for (std::size_t j = 0; j < n_phases; ++j) {
                if (skip_diagonal && i == j) continue;
                bool negative;
                if constexpr (ScalarTraits<T>::is_exact)
                    negative = m(i, j) < zero;
                else
                    negative = m(i, j) < -1e-12;  // same scale as the row-sum tolerance
                if (negative)
                    throw ModelError("level " + std::to_string(level) + ", row " +
                                     std::to_string(i) + ": negative entry " +
                                     fmt_entry(m(i, j)) + " in " + name + "(" +
                                     std::to_string(i) + "," + std::to_string(j) + ")");
            }
    };
    const bool generator = kind == Kind::Continuous;
    sign_check(lb.B, "B", generator);  // generator diagonal may be negative
    if (lb.A) sign_check(*lb.A, "A", false);
    if (lb.C) sign_check(*lb.C, "C", false);

    // Row sums: 1 for stochastic blocks, 0 for a generator. Checkable only
    // when the full block row is stored (A present, or absent by truncation).
    if (lb.A) {
        const T target = generator ? zero : ScalarTraits<T>::one();
        for (std::size_t i = 0; i < n_phases; ++i) {
            T sum = zero;
            for (std::size_t j = 0; j < n_phases; ++j) {
                sum += lb.B(i, j) + (*lb.A)(i, j);
                if (lb.C) sum += (*lb.C)(i, j);
            }
            T err = ScalarTraits<T>::abs(sum - target);
            bool bad;
            if constexpr (ScalarTraits<T>::is_exact)
                bad = !(err == zero);
            else
                bad = ScalarTraits<T>::to_double(err) > 1e-12;
            if (bad)
                throw ModelError("level " + std::to_string(level) + ", row " +
                                 std::to_string(i) + ": row sum " + fmt_entry(sum) +
                                 " differs from " + fmt_entry(target));
        }
    }

    auto nonsingular_check = [&](const Matrix<T>& m, const char* name) {
        if (is_singular(m))
            throw ModelError("level " + std::to_string(level) + ": block " + name +
                             " is singular");
        for (std::size_t i = 0; i < n_phases; ++i) {
            bool zero_row = true, zero_col = true;
            for (std::size_t j = 0; j < n_phases; ++j) {
                if (!(m(i, j) == zero)) zero_row = false;
                if (!(m(j, i) == zero)) zero_col = false;
            }
            if (zero_row || zero_col)
                warnings.push_back("level " + std::to_string(level) + ": block " + name +
                                   " has a zero " + (zero_row ? "row" : "column") + " " +
                                   std::to_string(i) + " (irreducibility heuristic)");
        }
    };
    if (lb.A) nonsingular_check(*lb.A, "A");
    if (lb.C) nonsingular_check(*lb.C, "C");
}

}  // namespace detail

template <ScalarField T>
BlockTridiagonal<T> BlockTridiagonal<T>::build(std::size_t n_phases, Kind kind,
                                               std::vector<LevelBlocks<T>> blocks,
                                               Generator gen) {
    if (n_phases == 0) throw ModelError("phase count must be positive");
    if (blocks.empty()) throw ModelError("at least one level required");
    BlockTridiagonal<T> m;
    m.n_ = n_phases;
    m.kind_ = kind;
    m.gen_ = std::move(gen);
    for (std::size_t lvl = 0; lvl < blocks.size(); ++lvl) {
        const bool is_last = (lvl + 1 == blocks.size()) && !m.gen_;
        detail::validate_level(n_phases, kind, lvl, blocks[lvl], is_last, m.warnings_);
    }
    m.levels_ = std::move(blocks);
    return m;
}

// Builds and validates a model from literal blocks and an optional generator.
// Violated invariants are reported with the level index and failing row.
template <ScalarField T>
BlockTridiagonal<T> build_model(std::size_t n_phases, Kind kind,
                                std::vector<LevelBlocks<T>> blocks,
                                typename BlockTridiagonal<T>::Generator gen = nullptr) {
    return BlockTridiagonal<T>::build(n_phases, kind, std::move(blocks), std::move(gen));
}

template <ScalarField T>
BlockTridiagonal<T> BlockTridiagonal<T>::extended_to(std::size_t levels) const {
    if (levels <= levels_.size()) return *this;
    if (!gen_)
        throw ModelError("cannot extend literal model beyond its " +
                         std::to_string(levels_.size()) + " stored levels");
    BlockTridiagonal out = *this;
    for (std::size_t lvl = levels_.size(); lvl < levels; ++lvl) {
        LevelBlocks<T> lb = gen_(lvl);
        detail::validate_level(n_, kind_, lvl, lb, /*is_last=*/false, out.warnings_);
        out.levels_.push_back(std::move(lb));
    }
    return out;
}

// Float copy of a model: blocks converted entrywise, generator wrapped.
template <ScalarField T>
BlockTridiagonal<double> to_float(const BlockTridiagonal<T>& m) {
    std::vector<LevelBlocks<double>> blocks;
    blocks.reserve(m.stored_levels());
    for (std::size_t lvl = 0; lvl < m.stored_levels(); ++lvl) {
        LevelBlocks<double> lb;
        lb.B = to_float(m.B(lvl));
        if (m.has_A(lvl)) lb.A = to_float(m.A(lvl));
        if (lvl > 0) lb.C = to_float(m.C(lvl));
        blocks.push_back(std::move(lb));
    }
    typename BlockTridiagonal<double>::Generator gen;
    // Wrapping the source generator keeps lazily extendable models extendable.
    if (m.has_generator()) {
        gen = [m](std::size_t lvl) {
            BlockTridiagonal<T> ext = m.extended_to(lvl + 1);
            LevelBlocks<double> lb;
            lb.B = to_float(ext.B(lvl));
            if (ext.has_A(lvl)) lb.A = to_float(ext.A(lvl));
            if (lvl > 0) lb.C = to_float(ext.C(lvl));
            return lb;
        };
    }
    return build_model<double>(m.phases(), m.kind(), std::move(blocks), std::move(gen));
}

// Level-indexed row vector (blocks of length N); houses pi and its relatives.
template <ScalarField T>
struct LevelVector {
    std::vector<Matrix<T>> blocks;  // each 1 x N

    static LevelVector constant(std::size_t levels, const Matrix<T>& block) {
        LevelVector v;
        v.blocks.assign(levels, block);
        return v;
    }
};

// Block rows of v P (discrete) or v A (continuous): block k of the result is
// v_{k-1} A_{k-1} + v_k B_k + v_{k+1} C_{k+1}, with the k = 0 boundary
// v_0 B_0 + v_1 C_1. Only blocks 0..levels-1 are computable from a prefix.
template <ScalarField T>
LevelVector<T> row_apply(const LevelVector<T>& v, const BlockTridiagonal<T>& m,
                         std::size_t levels) {
    if (v.blocks.size() < levels + 1)
        throw std::invalid_argument("row_apply: need " + std::to_string(levels + 1) +
                                    " vector blocks, have " + std::to_string(v.blocks.size()));
    if (m.stored_levels() < levels + 1)
        throw std::invalid_argument("row_apply: need " + std::to_string(levels + 1) +
                                    " stored levels, have " + std::to_string(m.stored_levels()));
    LevelVector<T> out;
    out.blocks.reserve(levels);
    for (std::size_t k = 0; k < levels; ++k) {
        Matrix<T> acc = v.blocks[k] * m.B(k);
        if (k > 0) acc += v.blocks[k - 1] * m.A(k - 1);
        acc += v.blocks[k + 1] * m.C(k + 1);
        out.blocks.push_back(std::move(acc));
    }
    return out;
}

// Finite stochastic truncation: the outflow block A_L of the last level is
// lumped into the diagonal block, keeping every row sum at one.
template <ScalarField T>
Matrix<T> truncate_lumped(const BlockTridiagonal<T>& m, std::size_t level_cap) {
    if (m.kind() != Kind::Discrete)
        throw std::invalid_argument("truncate_lumped: continuous models unsupported");
    if (level_cap < 1) throw std::invalid_argument("truncate_lumped: need L >= 1");
    if (m.stored_levels() < level_cap + 1)
        throw std::invalid_argument("truncate_lumped: need " + std::to_string(level_cap + 1) +
                                    " stored levels, have " + std::to_string(m.stored_levels()));
    const std::size_t n = m.phases();
    Matrix<T> p((level_cap + 1) * n, (level_cap + 1) * n);
    auto put = [&](std::size_t bi, std::size_t bj, const Matrix<T>& blk) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) p(bi * n + i, bj * n + j) += blk(i, j);
    };
    for (std::size_t lvl = 0; lvl <= level_cap; ++lvl) {
        put(lvl, lvl, m.B(lvl));
        if (lvl > 0) put(lvl, lvl - 1, m.C(lvl));
        if (lvl < level_cap) put(lvl, lvl + 1, m.A(lvl));
    }
    put(level_cap, level_cap, m.A(level_cap));  // lump the outflow back
    return p;
}

}  // namespace qbd

#endif  // QBD_MODEL_HPP
