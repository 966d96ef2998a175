#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace qmetro {

using cplx = std::complex<double>;

// Largest total dimension any operation will accept. Everything in this
// toolkit lives on two qubits or small qudits, so a hard cap keeps the dense
// eigensolvers honest.
inline constexpr std::size_t kMaxDim = 64;

// Dense row-major complex matrix. Dynamic but small: see kMaxDim.
class ComplexMatrix {
public:
    ComplexMatrix() : rows_(0), cols_(0) {}

    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, cplx(0.0, 0.0)) {
        if (rows == 0 || cols == 0)
            throw std::invalid_argument("ComplexMatrix: dimensions must be positive");
        if (rows > kMaxDim || cols > kMaxDim)
            throw std::invalid_argument("ComplexMatrix: dimension exceeds cap " +
                                        std::to_string(kMaxDim));
    }

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    cplx& operator()(std::size_t i, std::size_t j) {
        return data_[i * cols_ + j];
    }
    const cplx& operator()(std::size_t i, std::size_t j) const {
        return data_[i * cols_ + j];
    }

    cplx& at(std::size_t i, std::size_t j) {
        check_index(i, j);
        return data_[i * cols_ + j];
    }
    const cplx& at(std::size_t i, std::size_t j) const {
        check_index(i, j);
        return data_[i * cols_ + j];
    }

    const std::vector<cplx>& data() const { return data_; }
    std::vector<cplx>& data() { return data_; }

    bool all_finite() const {
        for (const cplx& z : data_)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        return true;
    }

    ComplexMatrix adjoint() const {
        ComplexMatrix out(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                out(j, i) = std::conj((*this)(i, j));
        return out;
    }

    ComplexMatrix transpose() const {
        ComplexMatrix out(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                out(j, i) = (*this)(i, j);
        return out;
    }

    ComplexMatrix conjugate() const {
        ComplexMatrix out(rows_, cols_);
        for (std::size_t k = 0; k < data_.size(); ++k)
            out.data_[k] = std::conj(data_[k]);
        return out;
    }

    cplx trace() const {
        if (rows_ != cols_)
            throw std::invalid_argument("trace: matrix must be square");
        cplx t = 0.0;
        for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
        return t;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const cplx& z : data_) s += std::norm(z);
        return std::sqrt(s);
    }

    double max_abs() const {
        double m = 0.0;
        for (const cplx& z : data_) m = std::max(m, std::abs(z));
        return m;
    }

    // max elementwise |M - M^dagger|
    double hermiticity_defect() const {
        if (rows_ != cols_) return std::numeric_limits<double>::infinity();
        double d = 0.0;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = i; j < cols_; ++j)
                d = std::max(d, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
        return d;
    }

    bool is_hermitian(double tol) const { return hermiticity_defect() <= tol; }

    // (M + M^dagger)/2
    ComplexMatrix symmetrized() const {
        if (rows_ != cols_)
            throw std::invalid_argument("symmetrized: matrix must be square");
        ComplexMatrix out(rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                out(i, j) = 0.5 * ((*this)(i, j) + std::conj((*this)(j, i)));
        return out;
    }

    ComplexMatrix& operator+=(const ComplexMatrix& o) {
        check_same_shape(o, "+=");
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
        return *this;
    }
    ComplexMatrix& operator-=(const ComplexMatrix& o) {
        check_same_shape(o, "-=");
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
        return *this;
    }
    ComplexMatrix& operator*=(cplx s) {
        for (cplx& z : data_) z *= s;
        return *this;
    }

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) {
        a += b;
        return a;
    }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) {
        a -= b;
        return a;
    }
    friend ComplexMatrix operator*(cplx s, ComplexMatrix a) {
        a *= s;
        return a;
    }
    friend ComplexMatrix operator*(ComplexMatrix a, cplx s) {
        a *= s;
        return a;
    }

    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
        if (a.cols_ != b.rows_)
            throw std::invalid_argument("operator*: inner dimensions do not match");
        ComplexMatrix out(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const cplx aik = a(i, k);
                if (aik == cplx(0.0, 0.0)) continue;
                for (std::size_t j = 0; j < b.cols_; ++j)
                    out(i, j) += aik * b(k, j);
            }
        return out;
    }

    // y = M x
    std::vector<cplx> apply(const std::vector<cplx>& x) const {
        if (x.size() != cols_)
            throw std::invalid_argument("apply: vector length does not match");
        std::vector<cplx> y(rows_, cplx(0.0, 0.0));
        for (std::size_t i = 0; i < rows_; ++i) {
            cplx s = 0.0;
            for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j) * x[j];
            y[i] = s;
        }
        return y;
    }

private:
    void check_index(std::size_t i, std::size_t j) const {
        if (i >= rows_ || j >= cols_)
            throw std::out_of_range("ComplexMatrix: index out of range");
    }
    void check_same_shape(const ComplexMatrix& o, const char* op) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument(std::string("ComplexMatrix ") + op +
                                        ": shape mismatch");
    }

    std::size_t rows_, cols_;
    std::vector<cplx> data_;
};

// Kronecker product. Rejects results beyond the dimension cap so that a
// mistaken composition fails loudly instead of allocating a huge matrix.
inline ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b,
                                    std::size_t max_dim = kMaxDim) {
    const std::size_t r = a.rows() * b.rows();
    const std::size_t c = a.cols() * b.cols();
    if (r > max_dim || c > max_dim)
        throw std::invalid_argument("tensor_product: result dimension " +
                                    std::to_string(std::max(r, c)) +
                                    " exceeds cap " + std::to_string(max_dim));
    ComplexMatrix out(r, c);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const cplx aij = a(i, j);
            if (aij == cplx(0.0, 0.0)) continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
    return out;
}

inline cplx inner_product(const std::vector<cplx>& x, const std::vector<cplx>& y) {
    if (x.size() != y.size())
        throw std::invalid_argument("inner_product: length mismatch");
    cplx s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
    return s;
}

}  // namespace qmetro
