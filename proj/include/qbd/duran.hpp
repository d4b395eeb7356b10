#ifndef QBD_DURAN_HPP
#define QBD_DURAN_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qbd/model.hpp"
#include "qbd/mop.hpp"

namespace qbd {

// Parameters of the 2x2 weight family
//   W(x) = x^alpha (1-x)^beta [ k x^2 + beta - k + 1     (beta-k+1)(1-x)
//                               (beta-k+1)(1-x)          (beta-k+1)(1-x)^2 ]
// on [0,1], with alpha, beta > -1 and 0 < k < beta + 1.
template <ScalarField T>
struct DuranParams {
    T alpha = ScalarTraits<T>::zero();
    T beta = ScalarTraits<T>::zero();
    T k = ScalarTraits<T>::zero();

    void validate() const {
        const T neg_one = ScalarTraits<T>::from_int(-1);
        if (!(alpha > neg_one) || !(beta > neg_one))
            throw std::invalid_argument("DuranParams: require alpha, beta > -1 (got alpha=" +
                                        ScalarTraits<T>::str(alpha) + ", beta=" +
                                        ScalarTraits<T>::str(beta) + ")");
        if (!(k > ScalarTraits<T>::zero()) || !(k < beta + ScalarTraits<T>::one()))
            throw std::invalid_argument("DuranParams: require 0 < k < beta + 1 (got k=" +
                                        ScalarTraits<T>::str(k) + ", beta=" +
                                        ScalarTraits<T>::str(beta) + ")");
    }
};

template <ScalarField T>
bool is_golden(const DuranParams<T>& p) {
    return p.alpha == ScalarTraits<T>::zero() && p.beta == ScalarTraits<T>::zero() &&
           p.k == ScalarTraits<T>::from_ratio(1, 2);
}

template <ScalarField T>
WeightSpec<T> duran_weight_spec(const DuranParams<T>& p) {
    p.validate();
    const T zero = ScalarTraits<T>::zero();
    const T c = p.beta - p.k + ScalarTraits<T>::one();  // beta - k + 1
    const T two = ScalarTraits<T>::from_int(2);
    WeightSpec<T> w;
    w.n_phases = 2;
    w.alpha = p.alpha;
    w.beta = p.beta;
    w.poly = {Matrix<T>{{c, c}, {c, c}},
              Matrix<T>{{zero, -c}, {-c, -two * c}},
              Matrix<T>{{p.k, zero}, {zero, c}}};
    return w;
}

// W evaluated at a point, including the scalar x^alpha (1-x)^beta factor.
// On the exact backend alpha and beta must be nonnegative integers.
template <ScalarField T>
Matrix<T> duran_weight_at(const DuranParams<T>& p, const T& x) {
    WeightSpec<T> w = duran_weight_spec(p);
    T scalar;
    if constexpr (ScalarTraits<T>::is_exact) {
        if (!p.alpha.is_integer() || !p.beta.is_integer() || p.alpha.sign() < 0 ||
            p.beta.sign() < 0)
            throw std::invalid_argument(
                "duran_weight_at: exact evaluation needs nonnegative integer alpha, beta");
        scalar = ScalarTraits<T>::one();
        for (long i = 0; i < p.alpha.to_long(); ++i) scalar *= x;
        const T omx = ScalarTraits<T>::one() - x;
        for (long i = 0; i < p.beta.to_long(); ++i) scalar *= omx;
    } else {
        scalar = std::pow(x, p.alpha) * std::pow(1.0 - x, p.beta);
    }
    return w.poly_part_at(x) * scalar;
}

// The conjugation Delta_n whose choice makes Q_n(1) e = e:
//   Delta_n = [ -a_n E / (k (alpha+beta-k+n+3))    a_n
//               b_n                                -b_n E / ((k+n)(beta-k+1)) ]
// with E = n^2 + n(alpha+beta+3) + k(alpha+2 beta-2k+4) and a_n, b_n built
// from Pochhammer symbols. Zero denominators are reported with the factor.
template <ScalarField T>
Matrix<T> duran_delta(const DuranParams<T>& p, std::size_t n) {
    p.validate();
    const T one = ScalarTraits<T>::one();
    const T nn = ScalarTraits<T>::from_int(static_cast<long>(n));
    auto num = [](long v) { return ScalarTraits<T>::from_int(v); };
    const T ab = p.alpha + p.beta;

    auto nonzero = [&](const T& v, const std::string& what) {
        if (v == ScalarTraits<T>::zero())
            throw std::runtime_error("duran_delta: zero denominator factor " + what + " at n=" +
                                     std::to_string(n));
        return v;
    };

    // (alpha+beta+n+3)_n / (beta+2)_n as a product of factor ratios: the two
    // Pochhammers separately overflow binary64 near n ~ 130 while the ratio
    // only grows like 4^n
    T poch_ratio = one;
    for (std::size_t j = 0; j < n; ++j) {
        T bot = nonzero(p.beta + num(2) + num(static_cast<long>(j)), "(beta+2)_n");
        poch_ratio *= (ab + nn + num(3) + num(static_cast<long>(j))) / bot;
    }
    const T shared = nn * (ab + nn + num(2)) + p.k * (p.alpha + one);

    const T da = nonzero(
        nn * ab * ab + nn * (num(2) * nn + num(5)) * ab + nn * (nn + num(2)) * (nn + num(3)) +
            p.k * (num(2) * p.alpha * p.beta + num(2) * p.beta - p.k * (nn + num(2)) +
                   p.alpha * p.alpha + num(5) * p.alpha - num(2) * p.k * p.alpha - nn * nn +
                   num(4)),
        "a_n denominator polynomial");
    const T a_n = -(poch_ratio * (ab - p.k + nn + num(3)) * shared) / da;

    const T db = nonzero((nn * nn + num(2) * nn * p.k) * ab + nn * (nn + num(5)) * p.k +
                             p.k * p.k * (p.alpha - nn + one) + nn * nn * (nn + num(3)),
                         "b_n denominator polynomial");
    const T b_n = (poch_ratio * (p.k + nn) * shared) / db;

    const T e_poly = nn * nn + nn * (ab + num(3)) + p.k * (p.alpha + num(2) * p.beta -
                                                           num(2) * p.k + num(4));
    const T d11 = nonzero(p.k * (ab - p.k + nn + num(3)), "k(alpha+beta-k+n+3)");
    const T d22 = nonzero((p.k + nn) * (p.beta - p.k + one), "(k+n)(beta-k+1)");

    return Matrix<T>{{-a_n * e_poly / d11, a_n}, {b_n, -b_n * e_poly / d22}};
}

enum class Recurrence { NullRecurrent, Transient };

struct Classification {
    Recurrence recurrence;
    bool unique_invariant;  // unique iff recurrent; open for transient chains
};

inline const char* recurrence_name(Recurrence r) {
    return r == Recurrence::NullRecurrent ? "null recurrent" : "transient";
}

// The family is never positive recurrent: null recurrent iff beta <= 0,
// transient iff beta > 0. Only beta enters the classification.
template <ScalarField T>
Classification classify(const DuranParams<T>& p) {
    p.validate();
    if (p.beta > ScalarTraits<T>::zero()) return {Recurrence::Transient, false};
    return {Recurrence::NullRecurrent, true};
}

// ---- closed forms at alpha = beta = 0, k = 1/2 -------------------------

Matrix<Rational> golden_A(std::size_t n);
Matrix<Rational> golden_B(std::size_t n);
Matrix<Rational> golden_C(std::size_t n);  // n >= 1
Matrix<Rational> golden_norm(std::size_t n);
std::pair<Rational, Rational> golden_pi_block(std::size_t n);

struct GoldenBlocks {
    Matrix<Rational> A;
    Matrix<Rational> B;
    std::optional<Matrix<Rational>> C;  // absent at n = 0
};

GoldenBlocks golden_blocks(std::size_t n);

// Golden model backed by the closed-form generator, prefix covering `levels`.
BlockTridiagonal<Rational> golden_model(std::size_t levels);
BlockTridiagonal<double> golden_model_float(std::size_t levels);

// ---- full pipeline for arbitrary valid parameters ----------------------

template <ScalarField T>
struct DuranPipeline {
    WeightSpec<T> weight;
    MopFamily<T> family;  // normalized, coefficients 0..n_max; row sums are 1
    // Present iff the blocks also pass the sign validation of a discrete
    // model. Q_n(1)e = e holds on the whole parameter box, but entrywise
    // nonnegativity does not (e.g. alpha=1, beta=2, k=1/2 has
    // B_0(1,0) = -128/9849 exactly), so not every valid parameter triple
    // yields a bona fide QBD.
    std::optional<BlockTridiagonal<T>> model;
    std::string model_issue;  // validation message when model is absent

    const BlockTridiagonal<T>& model_or_throw() const {
        if (!model)
            throw std::runtime_error("these parameters do not give a stochastic model: " +
                                     model_issue);
        return *model;
    }
};

// moments -> monic recurrence -> Delta_n normalization -> model (when the
// blocks are nonnegative). The exact path needs nonnegative integer alpha,
// beta and rational k. Row sums equal one on the whole parameter box and are
// always asserted.
template <ScalarField T>
DuranPipeline<T> duran_pipeline(const DuranParams<T>& p, std::size_t n_max) {
    p.validate();
    WeightSpec<T> w = duran_weight_spec(p);
    MopFamily<T> fam;
    if constexpr (ScalarTraits<T>::is_exact) {
        fam = monic_recurrence(moments(w, 2 * n_max + 1), n_max);
    } else {
        if (!weight_positive_definite_sampled(w))
            throw std::runtime_error("duran_pipeline: weight not positive definite on (0,1)");
        fam = monic_recurrence_stieltjes(w, n_max);
    }
    std::vector<Matrix<T>> lambdas;
    lambdas.reserve(n_max + 2);
    for (std::size_t n = 0; n <= n_max + 1; ++n) lambdas.push_back(duran_delta(p, n));
    fam = stochastic_normalize(std::move(fam), std::move(lambdas), /*expect_stochastic=*/true);
    DuranPipeline<T> out{std::move(w), std::move(fam), std::nullopt, {}};
    try {
        out.model = assemble_model(out.family, Kind::Discrete);
    } catch (const ModelError& e) {
        out.model_issue = e.what();
    }
    return out;
}

}  // namespace qbd

#endif  // QBD_DURAN_HPP
