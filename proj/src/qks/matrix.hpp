#pragma once

#include <algorithm>
#include <vector>

#include "qks/errors.hpp"
#include "qks/scalar.hpp"

namespace qks {

/// Dense complex matrix.  Sizes here top out at 2^8 = 256, so everything is
/// naive and allocation-friendly; no attempt at blocking or sparsity.
template <class C>
class Mat {
  public:
    Mat() = default;
    Mat(int rows, int cols) : r_(rows), c_(cols), d_(static_cast<std::size_t>(rows) * cols) {}

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = C(1);
        return m;
    }

    int rows() const { return r_; }
    int cols() const { return c_; }
    bool empty() const { return r_ == 0 || c_ == 0; }

    C& operator()(int i, int j) { return d_[static_cast<std::size_t>(i) * c_ + j]; }
    const C& operator()(int i, int j) const { return d_[static_cast<std::size_t>(i) * c_ + j]; }

    Mat& operator+=(const Mat& o) {
        for (std::size_t i = 0; i < d_.size(); ++i) d_[i] += o.d_[i];
        return *this;
    }
    Mat& operator-=(const Mat& o) {
        for (std::size_t i = 0; i < d_.size(); ++i) d_[i] -= o.d_[i];
        return *this;
    }
    Mat& operator*=(const C& s) {
        for (auto& v : d_) v *= s;
        return *this;
    }

    friend Mat operator+(Mat a, const Mat& b) { return a += b; }
    friend Mat operator-(Mat a, const Mat& b) { return a -= b; }
    friend Mat operator*(Mat a, const C& s) { return a *= s; }
    friend Mat operator*(const C& s, Mat a) { return a *= s; }

    friend Mat operator*(const Mat& a, const Mat& b) {
        Mat out(a.r_, b.c_);
        for (int i = 0; i < a.r_; ++i)
            for (int l = 0; l < a.c_; ++l) {
                const C v = a(i, l);
                if (v == C(0)) continue;
                for (int j = 0; j < b.c_; ++j) out(i, j) += v * b(l, j);
            }
        return out;
    }

    std::vector<C> apply(const std::vector<C>& v) const {
        std::vector<C> out(static_cast<std::size_t>(r_), C(0));
        for (int i = 0; i < r_; ++i)
            for (int j = 0; j < c_; ++j) out[i] += (*this)(i, j) * v[j];
        return out;
    }

    typename scalar_traits<C>::real_type max_abs() const {
        typename scalar_traits<C>::real_type m(0);
        for (const auto& v : d_) m = std::max(m, abs_val(v));
        return m;
    }

  private:
    int r_ = 0, c_ = 0;
    std::vector<C> d_;
};

/// Solve A x = b by LU with partial pivoting; b may have several columns.
template <class C>
Mat<C> lu_solve(Mat<C> a, Mat<C> b) {
    const int n = a.rows();
    if (a.cols() != n || b.rows() != n)
        throw QksError(ErrorCode::InvalidArgument, "lu_solve: shape mismatch");
    for (int col = 0; col < n; ++col) {
        int piv = col;
        auto best = abs_val(a(col, col));
        for (int i = col + 1; i < n; ++i)
            if (abs_val(a(i, col)) > best) {
                best = abs_val(a(i, col));
                piv = i;
            }
        if (best == typename scalar_traits<C>::real_type(0))
            throw QksError(ErrorCode::InvalidArgument, "lu_solve: singular matrix");
        if (piv != col) {
            for (int j = 0; j < n; ++j) std::swap(a(col, j), a(piv, j));
            for (int j = 0; j < b.cols(); ++j) std::swap(b(col, j), b(piv, j));
        }
        const C inv = C(1) / a(col, col);
        for (int i = col + 1; i < n; ++i) {
            const C f = a(i, col) * inv;
            if (f == C(0)) continue;
            for (int j = col; j < n; ++j) a(i, j) -= f * a(col, j);
            for (int j = 0; j < b.cols(); ++j) b(i, j) -= f * b(col, j);
        }
    }
    for (int col = n - 1; col >= 0; --col) {
        const C inv = C(1) / a(col, col);
        for (int j = 0; j < b.cols(); ++j) {
            C acc = b(col, j);
            for (int l = col + 1; l < n; ++l) acc -= a(col, l) * b(l, j);
            b(col, j) = acc * inv;
        }
    }
    return b;
}

template <class C>
Mat<C> inverse(const Mat<C>& a) {
    return lu_solve(a, Mat<C>::identity(a.rows()));
}

/// Numerical rank of the Gram matrix of `vectors` at relative tolerance
/// `tol`: pivoted Hermitian elimination, counting pivots above
/// tol * (largest initial diagonal).
template <class C>
int gram_rank(const std::vector<std::vector<C>>& vectors, double tol) {
    using R = typename scalar_traits<C>::real_type;
    const int m = static_cast<int>(vectors.size());
    if (m == 0) return 0;
    const std::size_t dim = vectors[0].size();
    for (const auto& v : vectors)
        if (v.size() != dim)
            throw QksError(ErrorCode::InvalidArgument, "gram_rank: unequal dimensions");
    Mat<C> g(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            C acc(0);
            for (std::size_t t = 0; t < dim; ++t) acc += conj(vectors[i][t]) * vectors[j][t];
            g(i, j) = acc;
        }
    R scale(0);
    for (int i = 0; i < m; ++i) scale = std::max(scale, abs_val(g(i, i)));
    if (scale == R(0)) return 0;
    const R cutoff = scale * R(tol);
    int rank = 0;
    for (int step = 0; step < m; ++step) {
        int piv = step;
        R best = abs_val(g(step, step));
        for (int i = step + 1; i < m; ++i)
            if (abs_val(g(i, i)) > best) {
                best = abs_val(g(i, i));
                piv = i;
            }
        if (best <= cutoff) break;
        if (piv != step) {
            for (int j = 0; j < m; ++j) std::swap(g(step, j), g(piv, j));
            for (int i = 0; i < m; ++i) std::swap(g(i, step), g(i, piv));
        }
        ++rank;
        // Schur complement of the pivot; trailing block stays Hermitian.
        const C d = g(step, step);
        for (int i = step + 1; i < m; ++i) {
            const C f = g(i, step) / d;
            for (int j = step; j < m; ++j) g(i, j) -= f * g(step, j);
        }
    }
    return rank;
}

}  // namespace qks
