#include <doctest.h>

#include "qbd/duran.hpp"
#include "qbd/potential.hpp"

using qbd::DuranParams;
using qbd::Matrix;
using qbd::Rational;

namespace {
DuranParams<Rational> golden() { return {Rational(0), Rational(0), Rational(1, 2)}; }
}  // namespace

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS((DuranParams<Rational>{Rational(-2), Rational(0), Rational(1, 2)}.validate()),
                    std::invalid_argument);
    CHECK_THROWS_AS((DuranParams<Rational>{Rational(0), Rational(0), Rational(3, 2)}.validate()),
                    std::invalid_argument);
    CHECK_THROWS_AS((DuranParams<double>{0.0, 0.0, 0.0}.validate()), std::invalid_argument);
    CHECK_NOTHROW((DuranParams<double>{-0.5, 2.0, 2.9}.validate()));
}

TEST_CASE("weight at the endpoints and midpoint") {
    // top-left at x=1 is k + beta - k + 1 = beta + 1; the (1-x) factors vanish
    Matrix<Rational> w1 = qbd::duran_weight_at(golden(), Rational(1));
    CHECK(w1 == Matrix<Rational>{{Rational(1), Rational(0)}, {Rational(0), Rational(0)}});
    Matrix<Rational> wh = qbd::duran_weight_at(golden(), Rational(1, 2));
    CHECK(wh == Matrix<Rational>{{Rational(5, 8), Rational(1, 4)},
                                 {Rational(1, 4), Rational(1, 8)}});
}

TEST_CASE("weight is symmetric wherever evaluated") {
    DuranParams<double> p{0.25, 1.75, 0.6};
    for (double x : {0.1, 0.37, 0.5, 0.93})
        CHECK(qbd::is_symmetric(qbd::duran_weight_at(p, x)));
}

TEST_CASE("pochhammer base case and products") {
    CHECK(qbd::pochhammer(Rational(7, 3), 0) == Rational(1));
    CHECK(qbd::pochhammer(Rational(2), 3) == Rational(24));  // 2*3*4
    CHECK(qbd::pochhammer(3.0, 2) == 12.0);
}

TEST_CASE("delta_0 matches the displayed closed form") {
    Matrix<Rational> d0 = qbd::duran_delta(golden(), 0);
    CHECK(d0 == Matrix<Rational>{{Rational(1), Rational(-5, 6)},
                                 {Rational(1), Rational(-6)}});
}

TEST_CASE("delta_n at n=0 equals the Delta_0 display across parameters") {
    // Delta_0 = [[1, -(a+b-k+3)/(a+2b-2k+4)], [1, -(a+2b-2k+4)/(b-k+1)]]
    std::vector<DuranParams<Rational>> params = {
        golden(),
        {Rational(1), Rational(2), Rational(1, 2)},
        {Rational(0), Rational(1), Rational(3, 4)},
        {Rational(3), Rational(1, 2), Rational(5, 4)},
        {Rational(-1, 2), Rational(3, 2), Rational(2)},
    };
    for (const auto& p : params) {
        Matrix<Rational> d0 = qbd::duran_delta(p, 0);
        Rational a = p.alpha, b = p.beta, k = p.k;
        CHECK(d0(0, 0) == Rational(1));
        CHECK(d0(1, 0) == Rational(1));
        CHECK(d0(0, 1) == -(a + b - k + Rational(3)) / (a + Rational(2) * b - Rational(2) * k +
                                                        Rational(4)));
        CHECK(d0(1, 1) == -(a + Rational(2) * b - Rational(2) * k + Rational(4)) /
                              (b - k + Rational(1)));
    }
}

TEST_CASE("delta_n is nonsingular for n <= 20 at the golden parameters") {
    for (std::size_t n = 0; n <= 20; ++n)
        CHECK_FALSE(qbd::is_singular(qbd::duran_delta(golden(), n)));
}

TEST_CASE("golden blocks: spot values at n = 0") {
    Matrix<Rational> b0 = qbd::golden_B(0);
    CHECK(b0 == Matrix<Rational>{{Rational(163, 217), Rational(121, 2604)},
                                 {Rational(39, 217), Rational(54, 217)}});
    Matrix<Rational> a0 = qbd::golden_A(0);
    CHECK(a0(0, 0) == Rational(1989, 12964));
    CHECK(a0(0, 1) == Rational(68, 1389));
    CHECK_THROWS_AS(qbd::golden_C(0), std::invalid_argument);
    CHECK_FALSE(qbd::golden_blocks(0).C.has_value());
    CHECK(qbd::golden_blocks(1).C.has_value());
}

TEST_CASE("golden C_1 entries are positive") {
    Matrix<Rational> c1 = qbd::golden_C(1);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) CHECK(c1(i, j) > Rational(0));
}

TEST_CASE("golden block row sums are one for n <= 50") {
    for (std::size_t n = 0; n <= 50; ++n) {
        Matrix<Rational> a = qbd::golden_A(n), b = qbd::golden_B(n);
        for (std::size_t i = 0; i < 2; ++i) {
            Rational sum = a(i, 0) + a(i, 1) + b(i, 0) + b(i, 1);
            if (n >= 1) {
                Matrix<Rational> c = qbd::golden_C(n);
                sum += c(i, 0) + c(i, 1);
            }
            CHECK(sum == Rational(1));
        }
    }
}

TEST_CASE("golden norms and invariant blocks reconcile for n <= 20") {
    for (std::size_t n = 0; n <= 20; ++n) {
        Matrix<Rational> inv = qbd::inverse(qbd::golden_norm(n));
        auto [p1, p2] = qbd::golden_pi_block(n);
        CHECK(inv(0, 0) + inv(0, 1) == p1);
        CHECK(inv(1, 0) + inv(1, 1) == p2);
    }
    CHECK(qbd::golden_norm(0) == Matrix<Rational>{{Rational(79, 216), Rational(-5, 24)},
                                                  {Rational(-5, 24), Rational(11, 3)}});
    auto [p1, p2] = qbd::golden_pi_block(0);
    CHECK(p1 == Rational(648, 217));
    CHECK(p2 == Rational(96, 217));
}

TEST_CASE("invariant blocks grow linearly: pi/n -> 1") {
    auto [p1, p2] = qbd::golden_pi_block(10000);
    double r1 = p1.to_double() / 10000.0;
    double r2 = p2.to_double() / 10000.0;
    CHECK(std::abs(r1 - 1.0) < 5e-2);
    CHECK(std::abs(r2 - 1.0) < 5e-2);
}

TEST_CASE("classification follows beta only") {
    auto c1 = qbd::classify(golden());
    CHECK(c1.recurrence == qbd::Recurrence::NullRecurrent);
    CHECK(c1.unique_invariant);
    auto c2 = qbd::classify(DuranParams<Rational>{Rational(0), Rational(1), Rational(1, 2)});
    CHECK(c2.recurrence == qbd::Recurrence::Transient);
    CHECK_FALSE(c2.unique_invariant);
    auto c3 = qbd::classify(DuranParams<double>{0.0, -0.5, 0.25});
    CHECK(c3.recurrence == qbd::Recurrence::NullRecurrent);
}

TEST_CASE("pipeline reconciliation at non-golden integer parameters") {
    // alpha = beta = 1, k = 1/2: exact pipeline must produce a stochastic
    // model whose Pi recursion matches the inverse norms.
    DuranParams<Rational> p{Rational(1), Rational(1), Rational(1, 2)};
    auto pipe = qbd::duran_pipeline(p, 6);
    REQUIRE(pipe.model.has_value());
    auto ps = qbd::potential_coefficients(*pipe.model, pipe.family.pi0(), 5);
    for (std::size_t n = 0; n <= 5; ++n)
        CHECK(ps.at(n) == qbd::inverse(pipe.family.norms[n]));
    auto rep = qbd::check_symmetry_conditions(*pipe.model, ps);
    CHECK(rep.pass);
    CHECK(rep.exact);
}

TEST_CASE("float pipeline validates on sign-clean parameter triples (levels 0..20)") {
    std::vector<DuranParams<double>> params = {
        {0.0, 0.0, 0.5}, {0.5, 1.5, 1.0}, {-0.5, 0.25, 1.1}, {2.3, 0.7, 1.6},
        {0.5, 0.5, 0.6}, {-0.5, 2.0, 2.9},
    };
    for (const auto& p : params) {
        auto pipe = qbd::duran_pipeline(p, 20);
        REQUIRE(pipe.model.has_value());
        CHECK(pipe.model->stored_levels() == 21);
        auto cls = qbd::classify(p);
        CHECK((cls.recurrence == qbd::Recurrence::NullRecurrent ||
               cls.recurrence == qbd::Recurrence::Transient));
    }
}

TEST_CASE("exact pipeline validates at integer parameters (levels 0..20)") {
    DuranParams<Rational> p{Rational(0), Rational(1), Rational(3, 4)};
    auto pipe = qbd::duran_pipeline(p, 20);
    REQUIRE(pipe.model.has_value());
    CHECK(pipe.model->stored_levels() == 21);
}

TEST_CASE("nonnegativity fails at alpha=1, beta=2, k=1/2 although rows sum to 1") {
    // The weight family is stochastic in row sums on the whole box, but not
    // entrywise nonnegative everywhere: here B_0(1,0) = -128/9849 exactly,
    // so no discrete model exists at these parameters.
    DuranParams<Rational> p{Rational(1), Rational(2), Rational(1, 2)};
    auto pipe = qbd::duran_pipeline(p, 4);  // row sums asserted inside
    CHECK_FALSE(pipe.model.has_value());
    CHECK(pipe.model_issue.find("negative entry") != std::string::npos);
    CHECK(pipe.family.B[0](1, 0) == Rational(-128, 9849));
    CHECK_THROWS_AS(pipe.model_or_throw(), std::runtime_error);

    // the orthogonal-polynomial structure is intact regardless
    DuranParams<double> pf{1.0, 2.0, 0.5};
    auto fpipe = qbd::duran_pipeline(pf, 9);
    CHECK_FALSE(fpipe.model.has_value());
    auto rep = qbd::orthogonality_check(fpipe.family, fpipe.weight, 8);
    CHECK(rep.max_residual < 1e-10);
}
