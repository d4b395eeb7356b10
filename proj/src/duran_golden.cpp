#include "qbd/duran.hpp"

// Closed forms of the alpha = beta = 0, k = 1/2 example: the recurrence
// blocks, squared norms and invariant blocks are rational functions of the
// level n, transcribed as polynomial coefficient lists (low degree first)
// and evaluated exactly. Transcription is guarded by the row-sum and
// norm-inverse reconciliation tests.

namespace qbd {

namespace {

Rational pv(std::initializer_list<long> coeffs, std::size_t level) {
    const Rational n(static_cast<long>(level));
    Rational acc(0L), xp(1L);
    for (long c : coeffs) {
        acc += Rational(c) * xp;
        xp *= n;
    }
    return acc;
}

Rational lin(long a, long b, std::size_t n) { return pv({a, b}, n); }  // a + b n

}  // namespace

Matrix<Rational> golden_A(std::size_t n) {
    const Rational d = pv({463, 860, 572, 160, 16}, n);
    const Rational q1 = pv({1, 4, 2}, n);    // 2n^2 + 4n + 1
    const Rational q7 = pv({7, 8, 2}, n);    // 2n^2 + 8n + 7
    const Rational q3 = pv({3, 10, 4}, n);   // 4n^2 + 10n + 3
    const Rational cb = pv({1, 9, 14, 4}, n);  // 4n^3 + 14n^2 + 9n + 1
    const Rational n3 = lin(3, 1, n);
    const Rational a11 = n3 * n3 * q1 * pv({17, 18, 4}, n) * pv({117, 368, 348, 128, 16}, n) /
                         (Rational(2L) * lin(2, 1, n) * lin(3, 2, n) * q7 * q3 * d);
    const Rational a12 = Rational(2L) * n3 * q1 * pv({17, 12, 2}, n) * pv({28, 49, 26, 4}, n) /
                         (lin(2, 1, n) * lin(3, 2, n) * q7 * q3 * d);
    const Rational a21 = Rational(2L) * n3 * n3 * q1 * q1 * pv({17, 18, 4}, n) /
                         (lin(3, 2, n) * q7 * cb * d);
    const Rational a22 = n3 * q1 * pv({28, 49, 26, 4}, n) * pv({125, 368, 348, 128, 16}, n) /
                         (Rational(2L) * lin(3, 2, n) * q7 * cb * d);
    return Matrix<Rational>{{a11, a12}, {a21, a22}};
}

Matrix<Rational> golden_B(std::size_t n) {
    const Rational d = pv({31, 132, 188, 96, 16}, n);
    const Rational q1 = pv({1, 4, 2}, n);
    const Rational q7 = pv({7, 8, 2}, n);
    const Rational q3 = pv({3, 10, 4}, n);
    const Rational cb = pv({1, 9, 14, 4}, n);
    const Rational b11 =
        pv({163, 1365, 4577, 8148, 8450, 5256, 1928, 384, 32}, n) / (q1 * q7 * d);
    const Rational b12 = cb * pv({121, 834, 2114, 2320, 1240, 320, 32}, n) /
                         (Rational(2L) * lin(2, 1, n) * q1 * q7 * q3 * d);
    const Rational b21 = lin(2, 1, n) * q3 * pv({13, 186, 674, 1040, 760, 256, 32}, n) /
                         (Rational(2L) * q1 * q7 * cb * d);
    const Rational b22 = pv({3, 6, 2}, n) * pv({6, 21, 18, 4}, n) * pv({3, 21, 18, 4}, n) /
                         (q1 * q7 * d);
    return Matrix<Rational>{{b11, b12}, {b21, b22}};
}

Matrix<Rational> golden_C(std::size_t n) {
    if (n < 1) throw std::invalid_argument("golden_C: defined for n >= 1");
    const Rational d = pv({7, -20, -4, 32, 16}, n);
    const Rational nn(static_cast<long>(n));
    const Rational q2m1 = pv({-1, 0, 2}, n);   // 2n^2 - 1
    const Rational q3 = pv({3, 10, 4}, n);
    const Rational cb = pv({1, 9, 14, 4}, n);
    const Rational f1 = pv({-3, 2, 4}, n);     // 4n^2 + 2n - 3
    const Rational f2 = pv({2, -7, 2, 4}, n);  // 4n^3 + 2n^2 - 7n + 2
    const Rational f3 = pv({-5, 8, 36, 32, 8}, n);
    const Rational c11 = nn * lin(1, 1, n) * f1 * pv({33, -4, -226, 32, 328, 192, 32}, n) /
                         (Rational(2L) * lin(2, 1, n) * lin(3, 2, n) * q2m1 * q3 * d);
    const Rational c12 = nn * f2 * f3 / (lin(2, 1, n) * lin(3, 2, n) * q2m1 * q3 * d);
    const Rational c21 = nn * lin(1, 1, n) * f1 * f3 / (lin(3, 2, n) * q2m1 * cb * d);
    const Rational c22 = nn * f2 * pv({-43, -132, -34, 288, 392, 192, 32}, n) /
                         (Rational(2L) * lin(3, 2, n) * q2m1 * cb * d);
    return Matrix<Rational>{{c11, c12}, {c21, c22}};
}

Matrix<Rational> golden_norm(std::size_t n) {
    const Rational q1 = pv({1, 4, 2}, n);
    const Rational q3 = pv({3, 10, 4}, n);
    const Rational cb = pv({1, 9, 14, 4}, n);
    const Rational np1 = lin(1, 1, n), np2 = lin(2, 1, n);
    const Rational off = -(lin(1, 2, n) * lin(5, 2, n) * q1) /
                         (Rational(2L) * np1 * np2 * np2 * q3 * cb);
    const Rational m11 = q1 * pv({79, 514, 1173, 1212, 628, 160, 16}, n) /
                         (np1 * lin(3, 2, n) * q3 * q3 * np2 * np2 * np2);
    const Rational m22 = q1 * pv({22, 152, 417, 564, 388, 128, 16}, n) /
                         (np1 * np2 * lin(3, 2, n) * cb * cb);
    return Matrix<Rational>{{m11, off}, {off, m22}};
}

std::pair<Rational, Rational> golden_pi_block(std::size_t n) {
    const Rational d = pv({1, 4, 2}, n) * pv({7, 8, 2}, n) * pv({31, 132, 188, 96, 16}, n);
    const Rational np1 = lin(1, 1, n), np2 = lin(2, 1, n), tn3 = lin(3, 2, n);
    const Rational p1 =
        Rational(2L) * np1 * np1 * np2 * np2 * tn3 * pv({3, 10, 4}, n) * pv({9, 14, 4}, n) / d;
    const Rational p2 = Rational(2L) * np1 * np2 * tn3 * pv({1, 9, 14, 4}, n) *
                        pv({8, 33, 22, 4}, n) / d;
    return {p1, p2};
}

GoldenBlocks golden_blocks(std::size_t n) {
    GoldenBlocks g{golden_A(n), golden_B(n), std::nullopt};
    if (n >= 1) g.C = golden_C(n);
    return g;
}

BlockTridiagonal<Rational> golden_model(std::size_t levels) {
    if (levels == 0) levels = 1;
    auto gen = [](std::size_t n) {
        GoldenBlocks g = golden_blocks(n);
        LevelBlocks<Rational> lb;
        lb.B = std::move(g.B);
        lb.A = std::move(g.A);
        if (g.C) lb.C = std::move(*g.C);
        return lb;
    };
    std::vector<LevelBlocks<Rational>> prefix;
    prefix.push_back(gen(0));
    return build_model<Rational>(2, Kind::Discrete, std::move(prefix), gen).extended_to(levels);
}

BlockTridiagonal<double> golden_model_float(std::size_t levels) {
    if (levels == 0) levels = 1;
    auto conv = [](const Matrix<Rational>& m) {
        Matrix<double> out(m.rows(), m.cols());
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).to_double();
        return out;
    };
    auto gen = [conv](std::size_t n) {
        GoldenBlocks g = golden_blocks(n);
        LevelBlocks<double> lb;
        lb.B = conv(g.B);
        lb.A = conv(g.A);
        if (g.C) lb.C = conv(*g.C);
        return lb;
    };
    std::vector<LevelBlocks<double>> prefix;
    prefix.push_back(gen(0));
    return build_model<double>(2, Kind::Discrete, std::move(prefix), gen).extended_to(levels);
}

}  // namespace qbd
