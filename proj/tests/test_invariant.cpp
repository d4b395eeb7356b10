#include <doctest.h>

#include "qbd/duran.hpp"
#include "qbd/invariant.hpp"

using qbd::BlockTridiagonal;
using qbd::InvariantVector;
using qbd::Kind;
using qbd::LevelBlocks;
using qbd::Matrix;
using qbd::Rational;

namespace {

BlockTridiagonal<Rational> reflecting_walk(std::size_t levels) {
    Rational half(1, 2), zero(0);
    std::vector<LevelBlocks<Rational>> blocks;
    blocks.push_back({Matrix<Rational>{{half}}, Matrix<Rational>{{half}}, std::nullopt});
    for (std::size_t n = 1; n < levels; ++n)
        blocks.push_back({Matrix<Rational>{{zero}}, Matrix<Rational>{{half}},
                          Matrix<Rational>{{half}}});
    return qbd::build_model<Rational>(1, Kind::Discrete, std::move(blocks));
}

qbd::PotentialSequence<Rational> golden_potentials(std::size_t n_max) {
    auto m = qbd::golden_model(n_max + 1);
    return qbd::potential_coefficients(m, qbd::inverse(qbd::golden_norm(0)), n_max);
}

}  // namespace

TEST_CASE("invariant vector blocks match the golden display") {
    auto v = qbd::invariant_vector(golden_potentials(2));
    CHECK(v.blocks[0](0, 0) == Rational(648, 217));
    CHECK(v.blocks[0](0, 1) == Rational(96, 217));
    CHECK(v.blocks[1](0, 0) == Rational(165240, 55097));
    CHECK(v.blocks[1](0, 1) == Rational(112560, 55097));
}

TEST_CASE("constant potential gives a constant invariant vector") {
    qbd::PotentialSequence<Rational> ps{Matrix<Rational>{{Rational(2, 3)}}, {}};
    ps.items.assign(4, Matrix<Rational>{{Rational(2, 3)}});
    auto v = qbd::invariant_vector(ps);
    for (const auto& b : v.blocks) CHECK(b(0, 0) == Rational(2, 3));
}

TEST_CASE("negative component is rejected") {
    // a symmetric matrix with a negative row sum in the second row
    qbd::PotentialSequence<Rational> ps{
        Matrix<Rational>{{Rational(1), Rational(-2)}, {Rational(-2), Rational(1)}}, {}};
    CHECK_THROWS_WITH_AS(qbd::invariant_vector(ps), doctest::Contains("negative component"),
                         std::runtime_error);
}

TEST_CASE("stationarity residual is exactly zero (golden, exact)") {
    std::size_t levels = 12;
    auto m = qbd::golden_model(levels + 2);
    auto ps = qbd::potential_coefficients(m, qbd::inverse(qbd::golden_norm(0)), levels + 1);
    auto v = qbd::invariant_vector(ps);
    auto res = qbd::stationarity_residual(m, v, levels);
    CHECK(res.size() == levels);
    for (const auto& r : res) CHECK(r == Rational(0));
}

TEST_CASE("stationarity identities, boundary and interior") {
    auto ps = golden_potentials(6);
    auto m = qbd::golden_model(7);
    auto et = qbd::ones_column<Rational>(2).transpose();  // e^T as 1x2
    // boundary: e^T (Pi_0 B_0 + Pi_1 C_1) = (Pi_0 e)^T
    Matrix<Rational> lhs = et * (ps.at(0) * m.B(0) + ps.at(1) * m.C(1));
    Matrix<Rational> rhs = (ps.at(0) * qbd::ones_column<Rational>(2)).transpose();
    CHECK(lhs == rhs);
    // interior: e^T (Pi_{n-1} A_{n-1} + Pi_n B_n + Pi_{n+1} C_{n+1}) = (Pi_n e)^T
    for (std::size_t n = 1; n <= 5; ++n) {
        Matrix<Rational> l =
            et * (ps.at(n - 1) * m.A(n - 1) + ps.at(n) * m.B(n) + ps.at(n + 1) * m.C(n + 1));
        Matrix<Rational> r = (ps.at(n) * qbd::ones_column<Rational>(2)).transpose();
        CHECK(l == r);
    }
}

TEST_CASE("constant vector is stationary for the reflecting walk") {
    auto m = reflecting_walk(8);
    InvariantVector<Rational> v;
    v.blocks.assign(8, Matrix<Rational>{{Rational(5)}});
    auto res = qbd::stationarity_residual(m, v, 7);
    for (const auto& r : res) CHECK(r == Rational(0));
}

TEST_CASE("doubling one block perturbs residuals at exactly levels 2,3,4") {
    std::size_t levels = 7;
    auto m = qbd::golden_model(levels + 2);
    auto ps = qbd::potential_coefficients(m, qbd::inverse(qbd::golden_norm(0)), levels + 1);
    auto v = qbd::invariant_vector(ps);
    v.blocks[3] = v.blocks[3] * Rational(2);
    auto res = qbd::stationarity_residual(m, v, levels);
    for (std::size_t k = 0; k < levels; ++k) {
        if (k >= 2 && k <= 4)
            CHECK(res[k] > Rational(0));
        else
            CHECK(res[k] == Rational(0));
    }
}

TEST_CASE("continuous-time variant: pi A = 0 for the generator P - I") {
    // Turn the golden transition matrix into a generator; pi is unchanged.
    std::size_t levels = 8;
    auto gold = qbd::golden_model(levels + 2);
    std::vector<LevelBlocks<Rational>> blocks;
    for (std::size_t lvl = 0; lvl < gold.stored_levels(); ++lvl) {
        LevelBlocks<Rational> lb;
        lb.B = gold.B(lvl) - Matrix<Rational>::identity(2);
        lb.A = gold.A(lvl);
        if (lvl > 0) lb.C = gold.C(lvl);
        blocks.push_back(std::move(lb));
    }
    auto gen = qbd::build_model<Rational>(2, Kind::Continuous, std::move(blocks));
    auto ps = qbd::potential_coefficients(gen, qbd::inverse(qbd::golden_norm(0)), levels + 1);
    auto v = qbd::invariant_vector(ps);
    auto res = qbd::stationarity_residual(gen, v, levels);
    for (const auto& r : res) CHECK(r == Rational(0));
}

TEST_CASE("brute force: reflecting walk L=2 gives the uniform vector") {
    auto m = reflecting_walk(4);
    auto x = qbd::brute_force_invariant(m, 2);
    REQUIRE(x.size() == 3);
    for (const auto& xi : x) CHECK(xi == Rational(1, 3));
    CHECK_THROWS_AS(qbd::brute_force_invariant(m, 1), std::invalid_argument);
}

TEST_CASE("brute force: uniform stationary vector for any truncation") {
    auto m = reflecting_walk(12);
    auto x = qbd::brute_force_invariant(m, 10);
    REQUIRE(x.size() == 11);
    for (const auto& xi : x) CHECK(xi == Rational(1, 11));
}

TEST_CASE("oracle converges to the golden invariant vector") {
    auto ps = golden_potentials(6);
    auto v = qbd::invariant_vector(ps);
    qbd::InvariantVector<double> vf;
    for (const auto& b : v.blocks) vf.blocks.push_back(qbd::to_float(b));

    double prev = 1e9;
    for (std::size_t cap : {100ul, 200ul, 400ul}) {
        auto mf = qbd::golden_model_float(cap + 1);
        auto x = qbd::brute_force_invariant(mf, cap);
        double err = qbd::oracle_max_relative_error(vf, x, 6, 2);
        CHECK(err < prev);
        prev = err;
    }
    CHECK(prev < 5e-2);
}

TEST_CASE("normalize_truncated") {
    InvariantVector<Rational> v;
    v.blocks.assign(5, Matrix<Rational>{{Rational(3)}});
    auto x = qbd::normalize_truncated(v, 3);
    REQUIRE(x.size() == 4);
    for (const auto& xi : x) CHECK(xi == Rational(1, 4));

    auto gv = qbd::invariant_vector(golden_potentials(1));
    auto g0 = qbd::normalize_truncated(gv, 0);
    CHECK(g0[0] == Rational(27, 31));  // 648/744
    CHECK(g0[1] == Rational(4, 31));   // 96/744

    CHECK_THROWS_AS(qbd::normalize_truncated(v, 9), std::invalid_argument);
    InvariantVector<Rational> zero;
    zero.blocks.assign(2, Matrix<Rational>(1, 1));
    CHECK_THROWS_AS(qbd::normalize_truncated(zero, 1), std::runtime_error);
}
