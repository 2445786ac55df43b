#pragma once

#include <functional>
#include <vector>

#include "qks/combinatorics.hpp"
#include "qks/matrix.hpp"

namespace qks {

/// Vector on the 2^n fixed-point space stored sector by sector in the
/// canonical subset order.
template <class C>
struct GradedVector {
    int n = 0;
    std::vector<std::vector<C>> sectors;  // index k = 0..n, length C(n,k)

    static GradedVector zero(int n) {
        GradedVector v;
        v.n = n;
        v.sectors.resize(n + 1);
        for (int k = 0; k <= n; ++k)
            v.sectors[k].assign(static_cast<std::size_t>(binomial(n, k)), C(0));
        return v;
    }
};

/// Block linear map on the graded 2^n space with a fixed degree shift d:
/// block k is a C(n,k+d) x C(n,k) matrix mapping sector k to k+d.
/// Blocks whose source or target sector is out of range are empty (zero).
template <class C>
class GradedOperator {
  public:
    GradedOperator() = default;
    GradedOperator(int n, int shift) : n_(n), shift_(shift), blocks_(n + 1) {
        for (int k = 0; k <= n; ++k) {
            const int kt = k + shift;
            if (kt < 0 || kt > n) continue;
            blocks_[k] = Mat<C>(static_cast<int>(binomial(n, kt)), static_cast<int>(binomial(n, k)));
        }
    }

    static GradedOperator identity(int n) {
        GradedOperator op(n, 0);
        for (int k = 0; k <= n; ++k) op.blocks_[k] = Mat<C>::identity(static_cast<int>(binomial(n, k)));
        return op;
    }

    /// Diagonal operator from eigenvalue(mask).
    static GradedOperator diagonal(int n, const std::function<C(std::uint32_t)>& eig) {
        GradedOperator op(n, 0);
        for (int k = 0; k <= n; ++k) {
            const auto pts = enumerate_fixed_points(n, k);
            for (std::size_t i = 0; i < pts.size(); ++i)
                op.blocks_[k](static_cast<int>(i), static_cast<int>(i)) = eig(pts[i].mask);
        }
        return op;
    }

    int n() const { return n_; }
    int shift() const { return shift_; }
    bool has_block(int k) const { return k >= 0 && k <= n_ && !blocks_[k].empty(); }
    Mat<C>& block(int k) { return blocks_[k]; }
    const Mat<C>& block(int k) const { return blocks_[k]; }

    GradedOperator& operator+=(const GradedOperator& o) {
        check_same_shape(o);
        for (int k = 0; k <= n_; ++k)
            if (has_block(k)) blocks_[k] += o.blocks_[k];
        return *this;
    }
    GradedOperator& operator-=(const GradedOperator& o) {
        check_same_shape(o);
        for (int k = 0; k <= n_; ++k)
            if (has_block(k)) blocks_[k] -= o.blocks_[k];
        return *this;
    }
    GradedOperator& operator*=(const C& s) {
        for (int k = 0; k <= n_; ++k)
            if (has_block(k)) blocks_[k] *= s;
        return *this;
    }
    friend GradedOperator operator+(GradedOperator a, const GradedOperator& b) { return a += b; }
    friend GradedOperator operator-(GradedOperator a, const GradedOperator& b) { return a -= b; }
    friend GradedOperator operator*(GradedOperator a, const C& s) { return a *= s; }
    friend GradedOperator operator*(const C& s, GradedOperator a) { return a *= s; }

    /// Composition A*B; shifts add.
    friend GradedOperator operator*(const GradedOperator& a, const GradedOperator& b) {
        GradedOperator out(a.n_, a.shift_ + b.shift_);
        for (int k = 0; k <= a.n_; ++k) {
            const int mid = k + b.shift_;
            const int top = mid + a.shift_;
            if (mid < 0 || mid > a.n_ || top < 0 || top > a.n_) continue;
            if (!b.has_block(k) || !a.has_block(mid)) continue;
            out.blocks_[k] = a.blocks_[mid] * b.blocks_[k];
        }
        return out;
    }

    GradedVector<C> apply(const GradedVector<C>& v) const {
        GradedVector<C> out = GradedVector<C>::zero(n_);
        for (int k = 0; k <= n_; ++k) {
            const int kt = k + shift_;
            if (kt < 0 || kt > n_ || !has_block(k)) continue;
            auto w = blocks_[k].apply(v.sectors[k]);
            for (std::size_t i = 0; i < w.size(); ++i) out.sectors[kt][i] += w[i];
        }
        return out;
    }

    typename scalar_traits<C>::real_type max_abs() const {
        typename scalar_traits<C>::real_type m(0);
        for (int k = 0; k <= n_; ++k)
            if (has_block(k)) m = std::max(m, blocks_[k].max_abs());
        return m;
    }

    GradedOperator inverse_diagonal() const {
        GradedOperator out(n_, 0);
        for (int k = 0; k <= n_; ++k) {
            if (!has_block(k)) continue;
            for (int i = 0; i < blocks_[k].rows(); ++i) out.blocks_[k](i, i) = C(1) / blocks_[k](i, i);
        }
        return out;
    }

  private:
    void check_same_shape(const GradedOperator& o) const {
        if (n_ != o.n_ || shift_ != o.shift_)
            throw QksError(ErrorCode::InvalidArgument, "graded operator shape mismatch");
    }

    int n_ = 0;
    int shift_ = 0;
    std::vector<Mat<C>> blocks_;
};

template <class C>
GradedOperator<C> commutator(const GradedOperator<C>& a, const GradedOperator<C>& b) {
    return a * b - b * a;
}

}  // namespace qks
