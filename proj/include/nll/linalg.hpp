// Copyright 2026 The nll Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file
 * Dense complex linear algebra at small dimension: matrices, state vectors,
 * tensor products, commutators and a Jacobi eigensolver for Hermitian
 * matrices.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "random.hpp"

namespace nll {

using Complex = std::complex<double>;

/// Absolute tolerance used for structural checks unless a caller overrides it.
inline constexpr double kTol = 1e-10;

/**
 * @brief Row-major dense matrix with value semantics.
 */
template <class T> class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<T> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (data_.size() != rows_ * cols_) {
            fail(ErrorCode::DimMismatch, "matrix data length " +
                                             std::to_string(data_.size()) +
                                             " != rows*cols");
        }
    }
    Matrix(std::initializer_list<std::initializer_list<T>> rows) {
        rows_ = rows.size();
        cols_ = rows_ == 0 ? 0 : rows.begin()->size();
        data_.reserve(rows_ * cols_);
        for (const auto &r : rows) {
            if (r.size() != cols_) {
                fail(ErrorCode::DimMismatch, "ragged matrix literal");
            }
            data_.insert(data_.end(), r.begin(), r.end());
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            m(i, i) = T{1};
        }
        return m;
    }

    static Matrix diagonal(std::span<const double> diag) {
        Matrix m(diag.size(), diag.size());
        for (std::size_t i = 0; i < diag.size(); ++i) {
            m(i, i) = T{diag[i]};
        }
        return m;
    }

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool square() const noexcept { return rows_ == cols_; }
    [[nodiscard]] std::span<const T> data() const noexcept { return data_; }
    [[nodiscard]] std::span<T> data() noexcept { return data_; }

    T &operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T &operator()(std::size_t i, std::size_t j) const {
        return data_[i * cols_ + j];
    }

    [[nodiscard]] Matrix adjoint() const {
        Matrix out(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) {
                out(j, i) = std::conj((*this)(i, j));
            }
        }
        return out;
    }

    [[nodiscard]] Matrix transpose() const {
        Matrix out(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) {
                out(j, i) = (*this)(i, j);
            }
        }
        return out;
    }

    [[nodiscard]] Matrix conj() const {
        Matrix out = *this;
        for (auto &x : out.data_) {
            x = std::conj(x);
        }
        return out;
    }

    [[nodiscard]] T trace() const {
        T acc{};
        for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) {
            acc += (*this)(i, i);
        }
        return acc;
    }

    /// Largest entry modulus.
    [[nodiscard]] double max_abs() const {
        double m = 0.0;
        for (const auto &x : data_) {
            m = std::max(m, std::abs(x));
        }
        return m;
    }

    [[nodiscard]] double frobenius() const {
        double s = 0.0;
        for (const auto &x : data_) {
            s += std::norm(x);
        }
        return std::sqrt(s);
    }

    [[nodiscard]] bool is_hermitian(double tol = 1e-12) const {
        if (!square()) {
            return false;
        }
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = i; j < cols_; ++j) {
                if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) {
                    return false;
                }
            }
        }
        return true;
    }

    Matrix &operator+=(const Matrix &o) {
        require_same_shape(o);
        for (std::size_t k = 0; k < data_.size(); ++k) {
            data_[k] += o.data_[k];
        }
        return *this;
    }
    Matrix &operator-=(const Matrix &o) {
        require_same_shape(o);
        for (std::size_t k = 0; k < data_.size(); ++k) {
            data_[k] -= o.data_[k];
        }
        return *this;
    }
    Matrix &operator*=(T s) {
        for (auto &x : data_) {
            x *= s;
        }
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix &b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix &b) { return a -= b; }
    friend Matrix operator-(Matrix a) { return a *= T{-1}; }
    friend Matrix operator*(Matrix a, T s) { return a *= s; }
    friend Matrix operator*(T s, Matrix a) { return a *= s; }

    friend Matrix operator*(const Matrix &a, const Matrix &b) {
        if (a.cols_ != b.rows_) {
            fail(ErrorCode::DimMismatch,
                 "product of " + a.shape() + " and " + b.shape());
        }
        Matrix out(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const T aik = a(i, k);
                if (aik == T{}) {
                    continue;
                }
                for (std::size_t j = 0; j < b.cols_; ++j) {
                    out(i, j) += aik * b(k, j);
                }
            }
        }
        return out;
    }

    friend bool operator==(const Matrix &, const Matrix &) = default;

    [[nodiscard]] std::string shape() const {
        return std::to_string(rows_) + "x" + std::to_string(cols_);
    }

  private:
    void require_same_shape(const Matrix &o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) {
            fail(ErrorCode::DimMismatch, shape() + " vs " + o.shape());
        }
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using CMatrix = Matrix<Complex>;

inline double max_abs_diff(const CMatrix &a, const CMatrix &b) {
    return (a - b).max_abs();
}

inline double max_abs_diff(std::span<const Complex> a,
                           std::span<const Complex> b) {
    if (a.size() != b.size()) {
        fail(ErrorCode::DimMismatch, "vector lengths differ");
    }
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

/// Kronecker product: (a⊗b)[i*rb+k, j*cb+l] = a[i,j]*b[k,l].
template <class T> Matrix<T> tensor(const Matrix<T> &a, const Matrix<T> &b) {
    const std::size_t rb = b.rows();
    const std::size_t cb = b.cols();
    Matrix<T> out(a.rows() * rb, a.cols() * cb);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const T aij = a(i, j);
            for (std::size_t k = 0; k < rb; ++k) {
                for (std::size_t l = 0; l < cb; ++l) {
                    out(i * rb + k, j * cb + l) = aij * b(k, l);
                }
            }
        }
    }
    return out;
}

template <class T>
Matrix<T> tensor(std::initializer_list<std::reference_wrapper<const Matrix<T>>>
                     factors) {
    Matrix<T> out = Matrix<T>::identity(1);
    for (const auto &f : factors) {
        out = tensor(out, f.get());
    }
    return out;
}

inline void require_square_pair(const CMatrix &a, const CMatrix &b) {
    if (!a.square() || !b.square() || a.rows() != b.rows()) {
        fail(ErrorCode::DimMismatch,
             "commutator needs equal square matrices, got " + a.shape() +
                 " and " + b.shape());
    }
}

inline CMatrix commutator(const CMatrix &a, const CMatrix &b) {
    require_square_pair(a, b);
    return a * b - b * a;
}

inline CMatrix anticommutator(const CMatrix &a, const CMatrix &b) {
    require_square_pair(a, b);
    return a * b + b * a;
}

// ---------------------------------------------------------------------------
// Vectors
// ---------------------------------------------------------------------------

using CVector = std::vector<Complex>;

inline Complex inner(std::span<const Complex> a, std::span<const Complex> b) {
    if (a.size() != b.size()) {
        fail(ErrorCode::DimMismatch, "inner product of vectors of length " +
                                         std::to_string(a.size()) + " and " +
                                         std::to_string(b.size()));
    }
    Complex acc{};
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc += std::conj(a[i]) * b[i];
    }
    return acc;
}

inline double norm2(std::span<const Complex> a) {
    double s = 0.0;
    for (const auto &x : a) {
        s += std::norm(x);
    }
    return std::sqrt(s);
}

inline CVector matvec(const CMatrix &m, std::span<const Complex> v) {
    if (m.cols() != v.size()) {
        fail(ErrorCode::DimMismatch, "applying " + m.shape() +
                                         " to a vector of length " +
                                         std::to_string(v.size()));
    }
    CVector out(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Complex acc{};
        for (std::size_t j = 0; j < m.cols(); ++j) {
            acc += m(i, j) * v[j];
        }
        out[i] = acc;
    }
    return out;
}

inline CVector kron(std::span<const Complex> a, std::span<const Complex> b) {
    CVector out;
    out.reserve(a.size() * b.size());
    for (const auto &x : a) {
        for (const auto &y : b) {
            out.push_back(x * y);
        }
    }
    return out;
}

/// Column j of a matrix.
inline CVector column(const CMatrix &m, std::size_t j) {
    CVector out(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        out[i] = m(i, j);
    }
    return out;
}

/// |a><b|
inline CMatrix outer(std::span<const Complex> a, std::span<const Complex> b) {
    CMatrix out(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            out(i, j) = a[i] * std::conj(b[j]);
        }
    }
    return out;
}

/**
 * @brief Normalized complex amplitudes with tensor-factor structure.
 *
 * The amplitude vector is normalized on construction; `dims` lists the
 * subsystem dimensions whose product is the vector length.
 */
class StateVector {
  public:
    StateVector(std::vector<std::size_t> dims, CVector amps)
        : dims_(std::move(dims)), amps_(std::move(amps)) {
        const std::size_t total = std::accumulate(
            dims_.begin(), dims_.end(), std::size_t{1}, std::multiplies<>());
        if (total != amps_.size()) {
            fail(ErrorCode::DimMismatch,
                 "amplitude count " + std::to_string(amps_.size()) +
                     " does not match product of dims " +
                     std::to_string(total));
        }
        const double n = norm2(amps_);
        if (!(n > 0.0) || !std::isfinite(n)) {
            fail(ErrorCode::ZeroState, "cannot normalize a zero vector");
        }
        if (n != 1.0) {
            for (auto &a : amps_) {
                a /= n;
            }
        }
    }

    explicit StateVector(CVector amps) : StateVector(single(std::move(amps))) {}

    [[nodiscard]] const std::vector<std::size_t> &dims() const noexcept {
        return dims_;
    }
    [[nodiscard]] std::span<const Complex> amps() const noexcept {
        return amps_;
    }
    [[nodiscard]] std::size_t size() const noexcept { return amps_.size(); }
    const Complex &operator[](std::size_t i) const { return amps_[i]; }

    /// |<this|other>|, the phase-insensitive overlap.
    [[nodiscard]] double overlap(const StateVector &other) const {
        return std::abs(inner(amps_, other.amps_));
    }

    /// <psi|M|psi>
    [[nodiscard]] Complex expectation(const CMatrix &m) const {
        return inner(amps_, matvec(m, amps_));
    }

  private:
    using Parts = std::pair<std::vector<std::size_t>, CVector>;

    // Reads the length before moving; argument evaluation order is unspecified.
    static Parts single(CVector amps) {
        const std::size_t n = amps.size();
        return {{n}, std::move(amps)};
    }
    explicit StateVector(Parts p)
        : StateVector(std::move(p.first), std::move(p.second)) {}

    std::vector<std::size_t> dims_;
    CVector amps_;
};

inline StateVector tensor(const StateVector &a, const StateVector &b) {
    std::vector<std::size_t> dims = a.dims();
    dims.insert(dims.end(), b.dims().begin(), b.dims().end());
    return {std::move(dims), kron(a.amps(), b.amps())};
}

/**
 * @brief Hermitian matrix with a display label.
 */
class HermitianOperator {
  public:
    HermitianOperator() = default;
    explicit HermitianOperator(CMatrix m, std::string label = {},
                               double tol = kTol)
        : matrix_(std::move(m)), label_(std::move(label)) {
        if (!matrix_.is_hermitian(tol)) {
            fail(ErrorCode::NotHermitian,
                 "operator '" + label_ + "' is not Hermitian");
        }
    }

    [[nodiscard]] const CMatrix &matrix() const noexcept { return matrix_; }
    [[nodiscard]] const std::string &label() const noexcept { return label_; }
    [[nodiscard]] std::size_t dim() const noexcept { return matrix_.rows(); }

  private:
    CMatrix matrix_;
    std::string label_;
};

// ---------------------------------------------------------------------------
// Hermitian eigensolver
// ---------------------------------------------------------------------------

struct EigenSystem {
    std::vector<double> values; ///< ascending
    CMatrix vectors;            ///< unitary, column k pairs with values[k]
};

/**
 * @brief Cyclic Jacobi diagonalization of a Hermitian matrix.
 *
 * Each rotation is a 2x2 unitary that first removes the phase of the (p,q)
 * element and then applies a real Jacobi rotation. Sweeps run in row order
 * until the off-diagonal Frobenius norm drops below
 * 1e-12 * max(1, ||m||_F), or 100 sweeps have run.
 *
 * @throws Error(NotHermitian) if m deviates from m† by more than `tol`.
 */
inline EigenSystem hermitian_eig(const CMatrix &m, double tol = kTol) {
    if (!m.square() || !m.is_hermitian(tol)) {
        fail(ErrorCode::NotHermitian, "hermitian_eig input " + m.shape());
    }
    const std::size_t n = m.rows();
    CMatrix a = m;
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = a(i, i).real();
    }
    CMatrix v = CMatrix::identity(n);

    const double threshold = 1e-12 * std::max(1.0, m.frobenius());
    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i != j) {
                    s += std::norm(a(i, j));
                }
            }
        }
        return std::sqrt(s);
    };

    for (int sweep = 0; sweep < 100 && off_norm() >= threshold; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag == 0.0) {
                    continue;
                }
                const Complex phase = apq / mag; // e^{i phi}
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * mag);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // Rotation restricted to (p,q): [[c, s], [-s e^{-i phi}, c e^{-i phi}]]
                const Complex vpp = c;
                const Complex vpq = s;
                const Complex vqp = -s * std::conj(phase);
                const Complex vqq = c * std::conj(phase);

                for (std::size_t k = 0; k < n; ++k) {
                    const Complex akp = a(k, p);
                    const Complex akq = a(k, q);
                    a(k, p) = akp * vpp + akq * vqp;
                    a(k, q) = akp * vpq + akq * vqq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex apk = a(p, k);
                    const Complex aqk = a(q, k);
                    a(p, k) = std::conj(vpp) * apk + std::conj(vqp) * aqk;
                    a(q, k) = std::conj(vpq) * apk + std::conj(vqq) * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = app - t * mag;
                a(q, q) = aqq + t * mag;

                for (std::size_t k = 0; k < n; ++k) {
                    const Complex vkp = v(k, p);
                    const Complex vkq = v(k, q);
                    v(k, p) = vkp * vpp + vkq * vqp;
                    v(k, q) = vkp * vpq + vkq * vqq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) {
        return a(i, i).real() < a(j, j).real();
    });
    EigenSystem out{std::vector<double>(n), CMatrix(n, n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) {
            out.vectors(i, k) = v(i, order[k]);
        }
    }
    return out;
}

inline EigenSystem hermitian_eig(const HermitianOperator &op) {
    return hermitian_eig(op.matrix());
}

/// Groups ascending eigenvalues whose gap is <= tol; returns [begin, end)
/// index ranges.
inline std::vector<std::pair<std::size_t, std::size_t>>
eigen_clusters(std::span<const double> ascending, double tol = 1e-8) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    std::size_t begin = 0;
    for (std::size_t k = 1; k <= ascending.size(); ++k) {
        if (k == ascending.size() || ascending[k] - ascending[k - 1] > tol) {
            out.emplace_back(begin, k);
            begin = k;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Random generators used by property tests and demos
// ---------------------------------------------------------------------------

inline CMatrix random_gaussian_matrix(std::size_t rows, std::size_t cols,
                                      Rng &rng) {
    CMatrix m(rows, cols);
    for (auto &x : m.data()) {
        const double re = rng.normal();
        const double im = rng.normal();
        x = Complex(re, im);
    }
    return m;
}

inline CMatrix random_hermitian(std::size_t n, Rng &rng) {
    const CMatrix g = random_gaussian_matrix(n, n, rng);
    return (g + g.adjoint()) * Complex(0.5);
}

/// Orthonormalizes the columns of m in place (modified Gram-Schmidt).
inline CMatrix gram_schmidt(CMatrix m) {
    const std::size_t n = m.rows();
    for (std::size_t j = 0; j < m.cols(); ++j) {
        for (std::size_t i = 0; i < j; ++i) {
            Complex proj{};
            for (std::size_t k = 0; k < n; ++k) {
                proj += std::conj(m(k, i)) * m(k, j);
            }
            for (std::size_t k = 0; k < n; ++k) {
                m(k, j) -= proj * m(k, i);
            }
        }
        double nrm = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            nrm += std::norm(m(k, j));
        }
        nrm = std::sqrt(nrm);
        if (nrm == 0.0) {
            fail(ErrorCode::ZeroState, "linearly dependent columns");
        }
        for (std::size_t k = 0; k < n; ++k) {
            m(k, j) /= nrm;
        }
    }
    return m;
}

inline CMatrix random_unitary(std::size_t n, Rng &rng) {
    return gram_schmidt(random_gaussian_matrix(n, n, rng));
}

inline StateVector random_state(std::vector<std::size_t> dims, Rng &rng) {
    const std::size_t total = std::accumulate(
        dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
    return {std::move(dims), column(random_gaussian_matrix(total, 1, rng), 0)};
}

/// max |U†U - I|
inline double unitarity_error(const CMatrix &u) {
    return max_abs_diff(u.adjoint() * u, CMatrix::identity(u.cols()));
}

} // namespace nll
