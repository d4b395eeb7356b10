#include <doctest.h>

#include <random>

#include "qbd/invariant.hpp"
#include "qbd/model.hpp"
#include "qbd/potential.hpp"

using qbd::BlockTridiagonal;
using qbd::Kind;
using qbd::LevelBlocks;
using qbd::Matrix;
using qbd::Rational;

namespace {

// Random valid discrete QBD: each block row is a random rational probability
// vector over the 3N slots (C | B | A), adjusted in the B diagonal so the sum
// is exactly one; redrawn until A and C are nonsingular.
BlockTridiagonal<Rational> random_model(std::mt19937& rng, std::size_t n_phases,
                                        std::size_t levels) {
    std::uniform_int_distribution<long> cell(0, 12);
    auto draw_level = [&](bool with_c) {
        while (true) {
            Matrix<Rational> b(n_phases, n_phases), a(n_phases, n_phases),
                c(n_phases, n_phases);
            for (std::size_t i = 0; i < n_phases; ++i) {
                std::vector<Rational> w;
                long total = 0;
                for (std::size_t s = 0; s < 3 * n_phases; ++s) {
                    long v = cell(rng);
                    w.push_back(Rational(v));
                    total += v;
                }
                if (total == 0) {
                    w[n_phases + i] = Rational(1);
                    total = 1;
                }
                for (auto& x : w) x /= Rational(total);
                for (std::size_t j = 0; j < n_phases; ++j) {
                    c(i, j) = with_c ? w[j] : Rational(0);
                    b(i, j) = with_c ? w[n_phases + j] : w[n_phases + j] + w[j];
                    a(i, j) = w[2 * n_phases + j];
                }
            }
            if (qbd::is_singular(a)) continue;
            if (with_c && qbd::is_singular(c)) continue;
            LevelBlocks<Rational> lb;
            lb.B = b;
            lb.A = a;
            if (with_c) lb.C = c;
            return lb;
        }
    };
    std::vector<LevelBlocks<Rational>> blocks;
    blocks.push_back(draw_level(false));
    for (std::size_t n = 1; n < levels; ++n) blocks.push_back(draw_level(true));
    return qbd::build_model<Rational>(n_phases, Kind::Discrete, std::move(blocks));
}

}  // namespace

TEST_CASE("random models: lumped truncation is row-stochastic, any L") {
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 12; ++trial) {
        std::size_t n_phases = 1 + trial % 3;
        auto m = random_model(rng, n_phases, 7);
        for (std::size_t cap = 1; cap <= 5; ++cap) {
            Matrix<Rational> p = qbd::truncate_lumped(m, cap);
            REQUIRE(p.rows() == (cap + 1) * n_phases);
            for (std::size_t i = 0; i < p.rows(); ++i) {
                Rational sum(0);
                for (std::size_t j = 0; j < p.cols(); ++j) {
                    CHECK(p(i, j) >= Rational(0));
                    sum += p(i, j);
                }
                CHECK(sum == Rational(1));
            }
        }
    }
}

TEST_CASE("random models: brute-force vector is stationary, nonnegative, sums to one") {
    std::mt19937 rng(77);
    for (int trial = 0; trial < 6; ++trial) {
        std::size_t n_phases = 1 + trial % 2;
        auto m = random_model(rng, n_phases, 6);
        auto x = qbd::brute_force_invariant(m, 4);
        Matrix<Rational> p = qbd::truncate_lumped(m, 4);
        Rational total(0);
        Matrix<Rational> row(1, x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            CHECK(x[i] >= Rational(0));
            total += x[i];
            row(0, i) = x[i];
        }
        CHECK(total == Rational(1));
        CHECK(row * p == row);  // exact stationarity of the solve
    }
}

TEST_CASE("random models: row_apply is linear (exact)") {
    std::mt19937 rng(99);
    auto m = random_model(rng, 2, 6);
    std::uniform_int_distribution<long> cell(-6, 6);
    qbd::LevelVector<Rational> v, w;
    for (int n = 0; n < 6; ++n) {
        Matrix<Rational> bv(1, 2), bw(1, 2);
        for (int j = 0; j < 2; ++j) {
            bv(0, j) = Rational(cell(rng), 5);
            bw(0, j) = Rational(cell(rng), 3);
        }
        v.blocks.push_back(bv);
        w.blocks.push_back(bw);
    }
    Rational s(3, 7), t(-2, 5);
    qbd::LevelVector<Rational> comb;
    for (int n = 0; n < 6; ++n) comb.blocks.push_back(v.blocks[n] * s + w.blocks[n] * t);
    auto rv = qbd::row_apply(v, m, 5);
    auto rw = qbd::row_apply(w, m, 5);
    auto rc = qbd::row_apply(comb, m, 5);
    for (int n = 0; n < 5; ++n) CHECK(rc.blocks[n] == rv.blocks[n] * s + rw.blocks[n] * t);
}

TEST_CASE("random models generically admit no Pi_0 (no weight attached)") {
    std::mt19937 rng(5150);
    int rejected = 0;
    for (int trial = 0; trial < 5; ++trial) {
        auto m = random_model(rng, 2, 6);
        try {
            Matrix<Rational> pi0 = qbd::solve_pi0(m);
            // if one exists, it must actually satisfy the conditions
            auto ps = qbd::potential_coefficients(m, pi0, 3);
            CHECK(qbd::check_symmetry_conditions(m, ps).pass);
        } catch (const std::runtime_error&) {
            ++rejected;
        }
    }
    CHECK(rejected >= 4);  // a random model satisfying the conditions is a measure-zero event
}
