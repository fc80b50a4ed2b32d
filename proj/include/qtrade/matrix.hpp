#pragma once
// Dense complex matrices and state vectors for small-dimension quantum
// numerics (dimensions up to a few dozen). Row-major storage; a composite
// index over a bipartite space H_A ⊗ H_B is a*dim_B + b throughout.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "errors.hpp"

namespace qtrade {

using Complex = std::complex<double>;
using CVec = std::vector<Complex>;

class ComplexMatrix {
  public:
    ComplexMatrix() : rows_(0), cols_(0) {}
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols, Complex(0.0, 0.0)) {}
    ComplexMatrix(std::size_t rows, std::size_t cols, std::initializer_list<Complex> entries)
        : rows_(rows), cols_(cols), a_(entries) {
        if (a_.size() != rows * cols)
            throw DimMismatchError("matrix initializer has " + std::to_string(a_.size()) +
                                   " entries, expected " + std::to_string(rows * cols));
    }

    static ComplexMatrix zero(std::size_t rows, std::size_t cols) { return ComplexMatrix(rows, cols); }

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    Complex& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    const CVec& data() const { return a_; }
    CVec& data() { return a_; }

    ComplexMatrix& operator+=(const ComplexMatrix& o) {
        require_same_shape(o, "+=");
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
        return *this;
    }
    ComplexMatrix& operator-=(const ComplexMatrix& o) {
        require_same_shape(o, "-=");
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
        return *this;
    }
    ComplexMatrix& operator*=(Complex s) {
        for (auto& x : a_) x *= s;
        return *this;
    }

    friend ComplexMatrix operator+(ComplexMatrix l, const ComplexMatrix& r) { return l += r; }
    friend ComplexMatrix operator-(ComplexMatrix l, const ComplexMatrix& r) { return l -= r; }
    friend ComplexMatrix operator*(Complex s, ComplexMatrix m) { return m *= s; }
    friend ComplexMatrix operator*(ComplexMatrix m, Complex s) { return m *= s; }
    friend ComplexMatrix operator*(double s, ComplexMatrix m) { return m *= Complex(s, 0.0); }
    friend ComplexMatrix operator*(ComplexMatrix m, double s) { return m *= Complex(s, 0.0); }

    friend ComplexMatrix operator*(const ComplexMatrix& l, const ComplexMatrix& r) {
        if (l.cols_ != r.rows_)
            throw DimMismatchError("matrix product: " + l.shape_str() + " times " + r.shape_str());
        ComplexMatrix out(l.rows_, r.cols_);
        for (std::size_t i = 0; i < l.rows_; ++i)
            for (std::size_t k = 0; k < l.cols_; ++k) {
                const Complex lik = l(i, k);
                if (lik == Complex(0.0, 0.0)) continue;
                for (std::size_t j = 0; j < r.cols_; ++j) out(i, j) += lik * r(k, j);
            }
        return out;
    }

    ComplexMatrix adjoint() const {
        ComplexMatrix out(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
        return out;
    }

    ComplexMatrix transpose() const {
        ComplexMatrix out(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
        return out;
    }

    ComplexMatrix conjugate() const {
        ComplexMatrix out(rows_, cols_);
        for (std::size_t k = 0; k < a_.size(); ++k) out.a_[k] = std::conj(a_[k]);
        return out;
    }

    Complex trace() const {
        require_square("trace");
        Complex t(0.0, 0.0);
        for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
        return t;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const auto& x : a_) s += std::norm(x);
        return std::sqrt(s);
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& x : a_) m = std::max(m, std::abs(x));
        return m;
    }

    double hermiticity_residual() const {
        require_square("hermiticity_residual");
        double m = 0.0;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = i; j < cols_; ++j)
                m = std::max(m, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
        return m;
    }

    bool is_hermitian(double tolerance) const { return hermiticity_residual() <= tolerance; }

    // Averages the matrix with its adjoint; removes Hermiticity noise of
    // order machine epsilon without masking genuine asymmetry (callers check
    // the residual first where that matters).
    ComplexMatrix hermitized() const {
        require_square("hermitized");
        ComplexMatrix out(rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                out(i, j) = 0.5 * ((*this)(i, j) + std::conj((*this)(j, i)));
        return out;
    }

    std::string shape_str() const {
        return std::to_string(rows_) + "x" + std::to_string(cols_);
    }

    void require_square(const char* op) const {
        if (!square()) throw DimMismatchError(std::string(op) + " requires a square matrix, got " + shape_str());
    }
    void require_same_shape(const ComplexMatrix& o, const char* op) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw DimMismatchError(std::string(op) + ": shapes " + shape_str() + " and " + o.shape_str());
    }

  private:
    std::size_t rows_, cols_;
    CVec a_;
};

inline double max_abs_diff(const ComplexMatrix& l, const ComplexMatrix& r) {
    l.require_same_shape(r, "max_abs_diff");
    double m = 0.0;
    for (std::size_t i = 0; i < l.rows(); ++i)
        for (std::size_t j = 0; j < l.cols(); ++j) m = std::max(m, std::abs(l(i, j) - r(i, j)));
    return m;
}

// Kronecker product; index convention (a, b) -> a*dim_B + b.
inline ComplexMatrix tensor(const ComplexMatrix& l, const ComplexMatrix& r) {
    ComplexMatrix out(l.rows() * r.rows(), l.cols() * r.cols());
    for (std::size_t i = 0; i < l.rows(); ++i)
        for (std::size_t j = 0; j < l.cols(); ++j) {
            const Complex lij = l(i, j);
            if (lij == Complex(0.0, 0.0)) continue;
            for (std::size_t p = 0; p < r.rows(); ++p)
                for (std::size_t q = 0; q < r.cols(); ++q)
                    out(i * r.rows() + p, j * r.cols() + q) = lij * r(p, q);
        }
    return out;
}

enum class Subsystem { a, b };

// Partial trace of an operator on H_A ⊗ H_B, keeping the named factor.
inline ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t dim_a, std::size_t dim_b,
                                   Subsystem keep) {
    if (!m.square() || m.rows() != dim_a * dim_b)
        throw DimMismatchError("partial_trace: matrix is " + m.shape_str() + ", expected " +
                               std::to_string(dim_a * dim_b) + " square");
    if (keep == Subsystem::a) {
        ComplexMatrix out(dim_a, dim_a);
        for (std::size_t a = 0; a < dim_a; ++a)
            for (std::size_t a2 = 0; a2 < dim_a; ++a2)
                for (std::size_t b = 0; b < dim_b; ++b)
                    out(a, a2) += m(a * dim_b + b, a2 * dim_b + b);
        return out;
    }
    ComplexMatrix out(dim_b, dim_b);
    for (std::size_t b = 0; b < dim_b; ++b)
        for (std::size_t b2 = 0; b2 < dim_b; ++b2)
            for (std::size_t a = 0; a < dim_a; ++a)
                out(b, b2) += m(a * dim_b + b, a * dim_b + b2);
    return out;
}

// --- state-vector helpers ---

inline Complex dot(const CVec& x, const CVec& y) {
    if (x.size() != y.size())
        throw DimMismatchError("dot: lengths " + std::to_string(x.size()) + " and " + std::to_string(y.size()));
    Complex s(0.0, 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
    return s;
}

inline double vec_norm(const CVec& x) {
    double s = 0.0;
    for (const auto& v : x) s += std::norm(v);
    return std::sqrt(s);
}

inline CVec& scale(CVec& x, Complex s) {
    for (auto& v : x) v *= s;
    return x;
}

inline CVec normalized(CVec x) {
    const double n = vec_norm(x);
    if (n == 0.0) throw NotNormalizedError("cannot normalize the zero vector");
    scale(x, Complex(1.0 / n, 0.0));
    return x;
}

inline CVec matvec(const ComplexMatrix& m, const CVec& x) {
    if (m.cols() != x.size())
        throw DimMismatchError("matvec: " + m.shape_str() + " times length " + std::to_string(x.size()));
    CVec y(m.rows(), Complex(0.0, 0.0));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) y[i] += m(i, j) * x[j];
    return y;
}

// |x><y|
inline ComplexMatrix outer(const CVec& x, const CVec& y) {
    ComplexMatrix out(x.size(), y.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < y.size(); ++j) out(i, j) = x[i] * std::conj(y[j]);
    return out;
}

inline ComplexMatrix projector(const CVec& x) { return outer(x, x); }

inline CVec tensor(const CVec& x, const CVec& y) {
    CVec out(x.size() * y.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < y.size(); ++j) out[i * y.size() + j] = x[i] * y[j];
    return out;
}

inline CVec basis_vector(std::size_t dim, std::size_t index) {
    CVec e(dim, Complex(0.0, 0.0));
    e[index] = 1.0;
    return e;
}

// <x|M|x>
inline Complex expectation(const ComplexMatrix& m, const CVec& x) { return dot(x, matvec(m, x)); }

}  // namespace qtrade
