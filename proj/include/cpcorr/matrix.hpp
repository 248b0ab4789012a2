/*
 * Copyright 2026 The cpcorr authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef CPCORR_MATRIX_HPP
#define CPCORR_MATRIX_HPP

#include <algorithm>
#include <complex>
#include <stdexcept>
#include <vector>

#include "cpcorr/logdomain.hpp"

namespace cpcorr {

/// Dense row-major complex matrix.
class ComplexMatrix {
  public:
    ComplexMatrix() : rows_(0), cols_(0) {}
    ComplexMatrix(int rows, int cols)
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols) {
        if (rows < 0 || cols < 0) throw std::invalid_argument("ComplexMatrix: negative dimension");
    }

    static ComplexMatrix identity(int n) {
        ComplexMatrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }
    static ComplexMatrix diagonal(const std::vector<complex_t>& d) {
        ComplexMatrix m(static_cast<int>(d.size()), static_cast<int>(d.size()));
        for (std::size_t i = 0; i < d.size(); ++i) m(int(i), int(i)) = d[i];
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    complex_t& operator()(int i, int j) { return data_[std::size_t(i) * cols_ + j]; }
    const complex_t& operator()(int i, int j) const { return data_[std::size_t(i) * cols_ + j]; }

    ComplexMatrix transpose() const {
        ComplexMatrix m(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
        return m;
    }
    ComplexMatrix adjoint() const {
        ComplexMatrix m(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
        return m;
    }
    ComplexMatrix conj() const {
        ComplexMatrix m(rows_, cols_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) m(i, j) = std::conj((*this)(i, j));
        return m;
    }

    ComplexMatrix block(int i0, int j0, int r, int c) const {
        if (i0 + r > rows_ || j0 + c > cols_) throw std::invalid_argument("block: out of range");
        ComplexMatrix m(r, c);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j) m(i, j) = (*this)(i0 + i, j0 + j);
        return m;
    }

    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("matmul: dimension mismatch");
        ComplexMatrix c(a.rows_, b.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int l = 0; l < a.cols_; ++l) {
                complex_t ail = a(i, l);
                if (ail == complex_t{}) continue;
                for (int j = 0; j < b.cols_; ++j) c(i, j) += ail * b(l, j);
            }
        return c;
    }

    friend ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw std::invalid_argument("matadd: dimension mismatch");
        ComplexMatrix c = a;
        for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] += b.data_[i];
        return c;
    }
    friend ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw std::invalid_argument("matsub: dimension mismatch");
        ComplexMatrix c = a;
        for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] -= b.data_[i];
        return c;
    }
    friend ComplexMatrix operator*(complex_t s, const ComplexMatrix& a) {
        ComplexMatrix c = a;
        for (auto& x : c.data_) x *= s;
        return c;
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& x : data_) m = std::max(m, std::abs(x));
        return m;
    }

    complex_t trace() const {
        complex_t t = 0.0;
        for (int i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
        return t;
    }

  private:
    int rows_, cols_;
    std::vector<complex_t> data_;
};

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix c(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) {
            complex_t aij = a(i, j);
            if (aij == complex_t{}) continue;
            for (int p = 0; p < b.rows(); ++p)
                for (int q = 0; q < b.cols(); ++q)
                    c(i * b.rows() + p, j * b.cols() + q) = aij * b(p, q);
        }
    return c;
}

inline ComplexMatrix block2x2(const ComplexMatrix& a, const ComplexMatrix& b,
                              const ComplexMatrix& c, const ComplexMatrix& d) {
    if (a.rows() != b.rows() || c.rows() != d.rows() || a.cols() != c.cols() || b.cols() != d.cols())
        throw std::invalid_argument("block2x2: non-conformable blocks");
    ComplexMatrix m(a.rows() + c.rows(), a.cols() + b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
        for (int j = 0; j < b.cols(); ++j) m(i, a.cols() + j) = b(i, j);
    }
    for (int i = 0; i < c.rows(); ++i) {
        for (int j = 0; j < c.cols(); ++j) m(a.rows() + i, j) = c(i, j);
        for (int j = 0; j < d.cols(); ++j) m(a.rows() + i, a.cols() + j) = d(i, j);
    }
    return m;
}

}  // namespace cpcorr

#endif
