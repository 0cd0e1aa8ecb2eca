#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "kissing/rational.hpp"

namespace kissing {

inline constexpr int kMaxDim = 24;

/// Dense matrix of exact rationals, row major.
class RationalMatrix {
  public:
    RationalMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {
        if (rows <= 0 || cols <= 0) throw std::invalid_argument("RationalMatrix: empty shape");
    }

    static RationalMatrix identity(int n) {
        RationalMatrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = Rational(1);
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Rational& operator()(int r, int c) { return a_[static_cast<size_t>(r) * cols_ + c]; }
    const Rational& operator()(int r, int c) const { return a_[static_cast<size_t>(r) * cols_ + c]; }

    bool is_square() const { return rows_ == cols_; }

    bool is_symmetric() const {
        if (!is_square()) return false;
        for (int i = 0; i < rows_; ++i)
            for (int j = i + 1; j < cols_; ++j)
                if ((*this)(i, j) != (*this)(j, i)) return false;
        return true;
    }

    bool is_integral() const {
        for (const auto& v : a_)
            if (!v.is_integer()) return false;
        return true;
    }

    RationalMatrix transposed() const {
        RationalMatrix t(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("RationalMatrix: shape mismatch in product");
        RationalMatrix c(a.rows_, b.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int k = 0; k < a.cols_; ++k) {
                if (a(i, k).is_zero()) continue;
                for (int j = 0; j < b.cols_; ++j) c(i, j) += a(i, k) * b(k, j);
            }
        return c;
    }

    friend bool operator==(const RationalMatrix& a, const RationalMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
    }

    /// Exact determinant. Bareiss fraction-free elimination on integer input,
    /// rational Gaussian elimination otherwise.
    Rational det() const {
        if (!is_square()) throw std::invalid_argument("det: matrix is not square");
        if (rows_ > kMaxDim) throw std::invalid_argument("det: dimension above 24");
        return is_integral() ? det_bareiss() : det_gauss();
    }

    /// Leading principal minor of order k (determinant of the top-left k x k block).
    Rational leading_principal_minor(int k) const {
        if (!is_square() || k < 1 || k > rows_) throw std::invalid_argument("leading_principal_minor: bad order");
        RationalMatrix sub(k, k);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) sub(i, j) = (*this)(i, j);
        return sub.det();
    }

    /// Exact inverse via Gauss-Jordan.
    RationalMatrix inverse() const {
        if (!is_square()) throw std::invalid_argument("inverse: matrix is not square");
        const int n = rows_;
        RationalMatrix m(*this);
        RationalMatrix inv = identity(n);
        for (int col = 0; col < n; ++col) {
            int piv = -1;
            for (int r = col; r < n; ++r)
                if (!m(r, col).is_zero()) { piv = r; break; }
            if (piv < 0) throw std::domain_error("inverse: singular matrix");
            if (piv != col) {
                for (int j = 0; j < n; ++j) {
                    std::swap(m(piv, j), m(col, j));
                    std::swap(inv(piv, j), inv(col, j));
                }
            }
            const Rational p = m(col, col);
            for (int j = 0; j < n; ++j) {
                m(col, j) /= p;
                inv(col, j) /= p;
            }
            for (int r = 0; r < n; ++r) {
                if (r == col || m(r, col).is_zero()) continue;
                const Rational f = m(r, col);
                for (int j = 0; j < n; ++j) {
                    m(r, j) -= f * m(col, j);
                    inv(r, j) -= f * inv(col, j);
                }
            }
        }
        return inv;
    }

  private:
    Rational det_bareiss() const {
        const int n = rows_;
        std::vector<Integer> m(static_cast<size_t>(n) * n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m[static_cast<size_t>(i) * n + j] = (*this)(i, j).num();
        auto at = [&](int i, int j) -> Integer& { return m[static_cast<size_t>(i) * n + j]; };
        int sign = 1;
        Integer prev = 1;
        for (int k = 0; k < n - 1; ++k) {
            if (at(k, k) == 0) {
                int piv = -1;
                for (int r = k + 1; r < n; ++r)
                    if (at(r, k) != 0) { piv = r; break; }
                if (piv < 0) return Rational(0);
                for (int j = 0; j < n; ++j) std::swap(at(k, j), at(piv, j));
                sign = -sign;
            }
            for (int i = k + 1; i < n; ++i) {
                for (int j = k + 1; j < n; ++j) {
                    Integer t = at(i, j) * at(k, k) - at(i, k) * at(k, j);
                    mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
                    at(i, j) = t;
                }
                at(i, k) = 0;
            }
            prev = at(k, k);
        }
        Integer d = at(n - 1, n - 1);
        if (sign < 0) d = -d;
        return Rational(d);
    }

    Rational det_gauss() const {
        const int n = rows_;
        RationalMatrix m(*this);
        Rational det(1);
        for (int col = 0; col < n; ++col) {
            int piv = -1;
            for (int r = col; r < n; ++r)
                if (!m(r, col).is_zero()) { piv = r; break; }
            if (piv < 0) return Rational(0);
            if (piv != col) {
                for (int j = 0; j < n; ++j) std::swap(m(piv, j), m(col, j));
                det = -det;
            }
            det *= m(col, col);
            const Rational p = m(col, col);
            for (int r = col + 1; r < n; ++r) {
                if (m(r, col).is_zero()) continue;
                const Rational f = m(r, col) / p;
                for (int j = col; j < n; ++j) m(r, j) -= f * m(col, j);
            }
        }
        return det;
    }

    int rows_, cols_;
    std::vector<Rational> a_;
};

/// Exact 3x3 solve; nullopt when the system has no unique solution.
inline std::optional<std::array<Rational, 3>> solve3(const RationalMatrix& a, const std::array<Rational, 3>& b) {
    if (a.rows() != 3 || a.cols() != 3) throw std::invalid_argument("solve3: matrix must be 3x3");
    const Rational d = a.det();
    if (d.is_zero()) return std::nullopt;
    std::array<Rational, 3> x;
    for (int col = 0; col < 3; ++col) {
        RationalMatrix m(3, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) m(i, j) = (j == col) ? b[i] : a(i, j);
        x[col] = m.det() / d;
    }
    return x;
}

/// Floating-point 3x3 solve by Cramer's rule; nullopt when near singular
/// relative to the row scale.
inline std::optional<std::array<double, 3>> solve3(const std::array<std::array<double, 3>, 3>& a,
                                                   const std::array<double, 3>& b) {
    auto det3 = [](const std::array<std::array<double, 3>, 3>& m) {
        return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
               m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
               m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    };
    const double d = det3(a);
    double scale = 1.0;
    for (const auto& row : a) {
        double s = std::sqrt(row[0] * row[0] + row[1] * row[1] + row[2] * row[2]);
        scale *= (s > 0 ? s : 1.0);
    }
    if (std::abs(d) <= 1e-12 * scale) return std::nullopt;
    std::array<double, 3> x{};
    for (int col = 0; col < 3; ++col) {
        auto m = a;
        for (int i = 0; i < 3; ++i) m[i][col] = b[i];
        x[col] = det3(m) / d;
    }
    return x;
}

} // namespace kissing
