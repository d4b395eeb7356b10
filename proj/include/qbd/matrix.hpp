#ifndef QBD_MATRIX_HPP
#define QBD_MATRIX_HPP

#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qbd/scalar.hpp"

namespace qbd {

// Dense row-major matrix over one scalar realization. Values are immutable in
// spirit: every operation returns a new matrix, so instances can be shared
// across threads freely.
template <ScalarField T>
class Matrix {
  public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, ScalarTraits<T>::zero()) {
        if (rows == 0 || cols == 0) throw std::invalid_argument("Matrix: zero dimension");
    }
    Matrix(std::initializer_list<std::initializer_list<T>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        if (rows_ == 0 || cols_ == 0) throw std::invalid_argument("Matrix: zero dimension");
        data_.reserve(rows_ * cols_);
        for (const auto& row : init) {
            if (row.size() != cols_) throw std::invalid_argument("Matrix: ragged initializer");
            for (const auto& x : row) data_.push_back(x);
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = ScalarTraits<T>::one();
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Matrix& operator+=(const Matrix& o) {
        require_same_shape(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        require_same_shape(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
        return *this;
    }
    Matrix& operator*=(const T& s) {
        for (auto& x : data_) x *= s;
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, const T& s) { return a *= s; }
    friend Matrix operator*(const T& s, Matrix a) { return a *= s; }
    Matrix operator-() const {
        Matrix r = *this;
        for (auto& x : r.data_) x = -x;
        return r;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_)
            throw std::invalid_argument("Matrix multiply: inner dimensions " +
                                        std::to_string(a.cols_) + " and " +
                                        std::to_string(b.rows_) + " differ");
        Matrix r(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const T& aik = a(i, k);
                for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) += aik * b(k, j);
            }
        return r;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }
    friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

    Matrix transpose() const {
        Matrix r(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

  private:
    void require_same_shape(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument("Matrix: shape mismatch");
    }

    std::size_t rows_, cols_;
    std::vector<T> data_;
};

template <ScalarField T>
Matrix<T> transpose(const Matrix<T>& a) {
    return a.transpose();
}

template <ScalarField T>
Matrix<double> to_float(const Matrix<T>& a) {
    Matrix<double> out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            out(i, j) = ScalarTraits<T>::to_double(a(i, j));
    return out;
}

// Column vector of ones (the e_N of the block row-sum conditions).
template <ScalarField T>
Matrix<T> ones_column(std::size_t n) {
    Matrix<T> e(n, 1);
    for (std::size_t i = 0; i < n; ++i) e(i, 0) = ScalarTraits<T>::one();
    return e;
}

template <ScalarField T>
bool is_symmetric(const Matrix<T>& a) {
    if (!a.square()) return false;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j)
            if (!(a(i, j) == a(j, i))) return false;
    return true;
}

// max_ij |a(i,j) - a(j,i)|
template <ScalarField T>
T symmetry_gap(const Matrix<T>& a) {
    T gap = ScalarTraits<T>::zero();
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j) {
            T d = ScalarTraits<T>::abs(a(i, j) - a(j, i));
            if (d > gap) gap = d;
        }
    return gap;
}

template <ScalarField T>
T max_abs(const Matrix<T>& a) {
    T m = ScalarTraits<T>::zero();
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            T d = ScalarTraits<T>::abs(a(i, j));
            if (d > m) m = d;
        }
    return m;
}

// Gauss-Jordan with partial pivoting. Exact backend: singular means no nonzero
// pivot remains. Float backend: a pivot below 1e-13 times the largest input
// entry is treated as singular.
template <ScalarField T>
Matrix<T> inverse(const Matrix<T>& a) {
    if (!a.square()) throw std::invalid_argument("inverse: matrix not square");
    const std::size_t n = a.rows();
    Matrix<T> w = a;
    Matrix<T> inv = Matrix<T>::identity(n);
    T floor = ScalarTraits<T>::zero();
    if constexpr (!ScalarTraits<T>::is_exact) floor = 1e-13 * max_abs(a);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        T best = ScalarTraits<T>::abs(w(c, c));
        for (std::size_t r = c + 1; r < n; ++r) {
            T cand = ScalarTraits<T>::abs(w(r, c));
            if (cand > best) { best = cand; p = r; }
        }
        bool singular = ScalarTraits<T>::is_exact ? (best == ScalarTraits<T>::zero())
                                                  : !(best > floor);
        if (singular) throw std::runtime_error("inverse: singular matrix (pivot column " +
                                               std::to_string(c) + ")");
        if (p != c)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(w(c, j), w(p, j));
                std::swap(inv(c, j), inv(p, j));
            }
        T piv = w(c, c);
        for (std::size_t j = 0; j < n; ++j) {
            w(c, j) /= piv;
            inv(c, j) /= piv;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c) continue;
            T f = w(r, c);
            if (ScalarTraits<T>::is_exact && f == ScalarTraits<T>::zero()) continue;
            for (std::size_t j = 0; j < n; ++j) {
                w(r, j) -= f * w(c, j);
                inv(r, j) -= f * inv(c, j);
            }
        }
    }
    return inv;
}

template <ScalarField T>
bool is_singular(const Matrix<T>& a) {
    try {
        inverse(a);
        return false;
    } catch (const std::runtime_error&) {
        return true;
    }
}

// Solves A X = B by Gaussian elimination with partial pivoting.
template <ScalarField T>
Matrix<T> solve(const Matrix<T>& a, const Matrix<T>& b) {
    if (!a.square()) throw std::invalid_argument("solve: matrix not square");
    if (a.rows() != b.rows()) throw std::invalid_argument("solve: shape mismatch");
    const std::size_t n = a.rows(), m = b.cols();
    Matrix<T> w = a, x = b;
    T floor = ScalarTraits<T>::zero();
    if constexpr (!ScalarTraits<T>::is_exact) floor = 1e-13 * max_abs(a);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        T best = ScalarTraits<T>::abs(w(c, c));
        for (std::size_t r = c + 1; r < n; ++r) {
            T cand = ScalarTraits<T>::abs(w(r, c));
            if (cand > best) { best = cand; p = r; }
        }
        bool singular = ScalarTraits<T>::is_exact ? (best == ScalarTraits<T>::zero())
                                                  : !(best > floor);
        if (singular) throw std::runtime_error("solve: singular matrix (pivot column " +
                                               std::to_string(c) + ")");
        if (p != c)
            for (std::size_t j = 0; j < n; ++j) std::swap(w(c, j), w(p, j));
        if (p != c)
            for (std::size_t j = 0; j < m; ++j) std::swap(x(c, j), x(p, j));
        for (std::size_t r = c + 1; r < n; ++r) {
            T f = w(r, c) / w(c, c);
            if (ScalarTraits<T>::is_exact && f == ScalarTraits<T>::zero()) continue;
            for (std::size_t j = c; j < n; ++j) w(r, j) -= f * w(c, j);
            for (std::size_t j = 0; j < m; ++j) x(r, j) -= f * x(c, j);
        }
    }
    for (std::size_t ci = n; ci-- > 0;) {
        for (std::size_t j = 0; j < m; ++j) {
            T acc = x(ci, j);
            for (std::size_t k = ci + 1; k < n; ++k) acc -= w(ci, k) * x(k, j);
            x(ci, j) = acc / w(ci, ci);
        }
    }
    return x;
}

// Square-root-free LDL^T of a symmetric positive definite matrix:
// A = L diag(d) L^T with L unit lower triangular. Works on both backends;
// this is what the exact backend exposes in place of Cholesky.
template <ScalarField T>
struct Ldlt {
    Matrix<T> L;
    std::vector<T> d;
};

template <ScalarField T>
Ldlt<T> ldlt(const Matrix<T>& a) {
    if (!a.square()) throw std::invalid_argument("ldlt: matrix not square");
    const std::size_t n = a.rows();
    T sym_tol = ScalarTraits<T>::zero();
    if constexpr (!ScalarTraits<T>::is_exact) {
        double scale = ScalarTraits<T>::to_double(max_abs(a));
        sym_tol = 1e-12 * (scale > 1.0 ? scale : 1.0);
    }
    if (symmetry_gap(a) > sym_tol) throw std::runtime_error("ldlt: matrix not symmetric");

    Ldlt<T> out{Matrix<T>::identity(n), std::vector<T>(n, ScalarTraits<T>::zero())};
    // pivot floor: exact demands d_i > 0; float demands d_i > 1e-13 * trace
    T floor = ScalarTraits<T>::zero();
    if constexpr (!ScalarTraits<T>::is_exact) {
        T tr = ScalarTraits<T>::zero();
        for (std::size_t i = 0; i < n; ++i) tr += ScalarTraits<T>::abs(a(i, i));
        floor = 1e-13 * tr;
    }
    for (std::size_t j = 0; j < n; ++j) {
        T dj = a(j, j);
        for (std::size_t k = 0; k < j; ++k) dj -= out.L(j, k) * out.L(j, k) * out.d[k];
        if (!(dj > floor))
            throw std::runtime_error("ldlt: matrix not positive definite (pivot " +
                                     std::to_string(j) + ")");
        out.d[j] = dj;
        for (std::size_t i = j + 1; i < n; ++i) {
            T acc = a(i, j);
            for (std::size_t k = 0; k < j; ++k) acc -= out.L(i, k) * out.L(j, k) * out.d[k];
            out.L(i, j) = acc / dj;
        }
    }
    return out;
}

template <ScalarField T>
bool is_positive_definite(const Matrix<T>& a) {
    try {
        ldlt(a);
        return true;
    } catch (const std::runtime_error&) {
        return false;
    }
}

// Upper-triangular U with U^T U = a. Float backend only: rational square
// roots need not exist, so the exact backend stops at ldlt().
inline Matrix<double> cholesky_upper(const Matrix<double>& a) {
    Ldlt<double> f = ldlt(a);
    const std::size_t n = a.rows();
    Matrix<double> u(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = std::sqrt(f.d[i]);
        for (std::size_t j = i; j < n; ++j) u(i, j) = s * f.L(j, i);
    }
    return u;
}

}  // namespace qbd

#endif  // QBD_MATRIX_HPP
