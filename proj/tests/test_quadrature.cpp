#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "qbd/quadrature.hpp"

using qbd::gauss_jacobi;

TEST_CASE("one-point uniform rule is the midpoint rule") {
    auto rule = gauss_jacobi(0.0, 0.0, 1);
    REQUIRE(rule.nodes.size() == 1);
    CHECK(rule.nodes[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(rule.weights[0] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("two-point uniform rule") {
    auto rule = gauss_jacobi(0.0, 0.0, 2);
    REQUIRE(rule.nodes.size() == 2);
    double off = 1.0 / (2.0 * std::sqrt(3.0));
    CHECK(rule.nodes[0] == doctest::Approx(0.5 - off).epsilon(1e-14));
    CHECK(rule.nodes[1] == doctest::Approx(0.5 + off).epsilon(1e-14));
    CHECK(rule.weights[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(rule.weights[1] == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("degree exactness: int x^5 dx with 3 points") {
    auto rule = gauss_jacobi(0.0, 0.0, 3);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        acc += rule.weights[i] * std::pow(rule.nodes[i], 5);
    CHECK(std::abs(acc - 1.0 / 6.0) < 1e-15);
}

TEST_CASE("jacobi weight moments match Beta integrals (alpha=1, beta=2)") {
    // int_0^1 x^{1+k} (1-x)^2 dx = (k+1)! 2! / (k+4)!
    auto rule = gauss_jacobi(1.0, 2.0, 8);
    auto factorial = [](int n) { double f = 1; for (int i = 2; i <= n; ++i) f *= i; return f; };
    for (int k = 0; k <= 10; ++k) {
        double acc = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            acc += rule.weights[i] * std::pow(rule.nodes[i], k);
        double expect = factorial(k + 1) * 2.0 / factorial(k + 4);
        CHECK(acc == doctest::Approx(expect).epsilon(1e-13));
    }
}

TEST_CASE("fractional parameters: total mass equals the Beta function") {
    // int_0^1 x^{-1/2} (1-x)^{1/2} dx = B(1/2, 3/2) = pi/2
    auto rule = gauss_jacobi(-0.5, 0.5, 12);
    double acc = 0.0;
    for (double w : rule.weights) acc += w;
    CHECK(acc == doctest::Approx(std::acos(-1.0) / 2.0).epsilon(1e-13));
    for (double x : rule.nodes) {
        CHECK(x > 0.0);
        CHECK(x < 1.0);
    }
    for (double w : rule.weights) CHECK(w > 0.0);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(gauss_jacobi(-1.0, 0.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(gauss_jacobi(0.0, -1.5, 4), std::invalid_argument);
    CHECK_THROWS_AS(gauss_jacobi(0.0, 0.0, 0), std::invalid_argument);
}

TEST_CASE("nodes are ascending and interior for a larger rule") {
    auto rule = gauss_jacobi(0.5, 1.5, 40);
    REQUIRE(rule.nodes.size() == 40);
    for (std::size_t i = 0; i + 1 < rule.nodes.size(); ++i)
        CHECK(rule.nodes[i] < rule.nodes[i + 1]);
    CHECK(rule.nodes.front() > 0.0);
    CHECK(rule.nodes.back() < 1.0);
}
