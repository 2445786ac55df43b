#pragma once

#include <vector>

#include "qks/graded_operator.hpp"
#include "qks/scalar.hpp"

namespace qks {

enum class SeriesVar { X, Z, UInv };

/// Truncated formal power series; all arithmetic exact through order M.
template <class C>
class PowerSeries {
  public:
    PowerSeries() = default;
    PowerSeries(SeriesVar var, int order) : var_(var), c_(order + 1, C(0)) {}
    PowerSeries(SeriesVar var, std::vector<C> coeffs) : var_(var), c_(std::move(coeffs)) {}

    static PowerSeries one(SeriesVar var, int order) {
        PowerSeries s(var, order);
        s.c_[0] = C(1);
        return s;
    }

    SeriesVar var() const { return var_; }
    int order() const { return static_cast<int>(c_.size()) - 1; }
    C& operator[](int i) { return c_[i]; }
    const C& operator[](int i) const { return c_[i]; }

    PowerSeries& operator+=(const PowerSeries& o) {
        for (int i = 0; i <= order(); ++i) c_[i] += o.c_[i];
        return *this;
    }
    PowerSeries& operator-=(const PowerSeries& o) {
        for (int i = 0; i <= order(); ++i) c_[i] -= o.c_[i];
        return *this;
    }
    friend PowerSeries operator+(PowerSeries a, const PowerSeries& b) { return a += b; }
    friend PowerSeries operator-(PowerSeries a, const PowerSeries& b) { return a -= b; }

    friend PowerSeries operator*(const PowerSeries& a, const PowerSeries& b) {
        const int m = a.order();
        PowerSeries out(a.var_, m);
        for (int i = 0; i <= m; ++i) {
            if (a.c_[i] == C(0)) continue;
            for (int j = 0; i + j <= m; ++j) out.c_[i + j] += a.c_[i] * b.c_[j];
        }
        return out;
    }

    /// Division, defined when the divisor has nonzero constant term.
    friend PowerSeries operator/(const PowerSeries& a, const PowerSeries& b) {
        if (b.c_[0] == C(0))
            throw QksError(ErrorCode::InvalidArgument, "series division by zero constant term");
        const int m = a.order();
        PowerSeries out(a.var_, m);
        for (int i = 0; i <= m; ++i) {
            C acc = a.c_[i];
            for (int j = 1; j <= i; ++j) acc -= b.c_[j] * out.c_[i - j];
            out.c_[i] = acc / b.c_[0];
        }
        return out;
    }

    PowerSeries& operator*=(const C& s) {
        for (auto& v : c_) v *= s;
        return *this;
    }
    friend PowerSeries operator*(PowerSeries a, const C& s) { return a *= s; }
    friend PowerSeries operator*(const C& s, PowerSeries a) { return a *= s; }

    /// f(x) -> f(c*x)
    PowerSeries rescaled(const C& scale) const {
        PowerSeries out(var_, order());
        C p(1);
        for (int i = 0; i <= order(); ++i) {
            out.c_[i] = c_[i] * p;
            p *= scale;
        }
        return out;
    }

    C eval(const C& x) const {
        C acc(0);
        for (int i = order(); i >= 0; --i) acc = acc * x + c_[i];
        return acc;
    }

  private:
    SeriesVar var_ = SeriesVar::X;
    std::vector<C> c_;
};

/// Series of (c*t; b)_infinity in t through order M, by the closed
/// alternating form of each coefficient:
///   prod_{i>=0} (1 - c b^i t) = sum_m (-c)^m b^{m(m-1)/2} / prod_{i=1..m}(1-b^i) t^m.
/// Requires b away from roots of unity so the denominators stay alive.
template <class C>
PowerSeries<C> q_pochhammer_series(const C& c, const C& b, int order, SeriesVar var = SeriesVar::X,
                                   double tol = 1e-12) {
    PowerSeries<C> out(var, order);
    out[0] = C(1);
    if (c == C(0) || order == 0) return out;
    C num(1);   // (-c)^m b^{m(m-1)/2}
    C den(1);   // prod (1 - b^i)
    C bpow(1);  // b^{m-1} running factor for the triangular exponent
    C bi(1);    // b^i
    for (int m = 1; m <= order; ++m) {
        num *= -c;
        if (m >= 2) {
            bpow *= b;
            num *= bpow;  // multiply by b^{m-1}: total exponent m(m-1)/2
        }
        bi *= b;
        const C factor = C(1) - bi;
        if (abs_val(factor) <= typename scalar_traits<C>::real_type(tol))
            throw QksError(ErrorCode::BaseDegenerate,
                           "q-pochhammer base is a near-root of unity (order " + std::to_string(m) +
                               ")");
        den *= factor;
        out[m] = num / den;
    }
    return out;
}

/// Series with GradedOperator coefficients, all sharing one shift.
template <class C>
class OperatorSeries {
  public:
    OperatorSeries() = default;
    OperatorSeries(SeriesVar var, int n, int shift, int order) : var_(var) {
        c_.assign(order + 1, GradedOperator<C>(n, shift));
    }
    static OperatorSeries one(SeriesVar var, int n, int order) {
        OperatorSeries s(var, n, 0, order);
        s.c_[0] = GradedOperator<C>::identity(n);
        return s;
    }

    SeriesVar var() const { return var_; }
    int order() const { return static_cast<int>(c_.size()) - 1; }
    GradedOperator<C>& operator[](int i) { return c_[i]; }
    const GradedOperator<C>& operator[](int i) const { return c_[i]; }

    OperatorSeries& operator+=(const OperatorSeries& o) {
        for (int i = 0; i <= order(); ++i) c_[i] += o.c_[i];
        return *this;
    }
    OperatorSeries& operator-=(const OperatorSeries& o) {
        for (int i = 0; i <= order(); ++i) c_[i] -= o.c_[i];
        return *this;
    }
    friend OperatorSeries operator+(OperatorSeries a, const OperatorSeries& b) { return a += b; }
    friend OperatorSeries operator-(OperatorSeries a, const OperatorSeries& b) { return a -= b; }

    friend OperatorSeries operator*(const OperatorSeries& a, const OperatorSeries& b) {
        const int m = a.order();
        OperatorSeries out(a.var_, a.c_[0].n(), a.c_[0].shift() + b.c_[0].shift(), m);
        for (int i = 0; i <= m; ++i)
            for (int j = 0; i + j <= m; ++j) out.c_[i + j] += a.c_[i] * b.c_[j];
        return out;
    }

    OperatorSeries& operator*=(const C& s) {
        for (auto& op : c_) op *= s;
        return *this;
    }
    friend OperatorSeries operator*(OperatorSeries a, const C& s) { return a *= s; }
    friend OperatorSeries operator*(const C& s, OperatorSeries a) { return a *= s; }

    /// Multiply by a scalar series.
    OperatorSeries scaled_by(const PowerSeries<C>& s) const {
        OperatorSeries out(var_, c_[0].n(), c_[0].shift(), order());
        for (int i = 0; i <= order(); ++i)
            for (int j = 0; i + j <= order(); ++j) out.c_[i + j] += c_[j] * s[i];
        return out;
    }

    OperatorSeries rescaled(const C& scale) const {
        OperatorSeries out = *this;
        C p(1);
        for (int i = 0; i <= order(); ++i) {
            out.c_[i] *= p;
            p *= scale;
        }
        return out;
    }

    typename scalar_traits<C>::real_type max_abs() const {
        typename scalar_traits<C>::real_type m(0);
        for (const auto& op : c_) m = std::max(m, op.max_abs());
        return m;
    }

  private:
    SeriesVar var_ = SeriesVar::X;
    std::vector<GradedOperator<C>> c_;
};

}  // namespace qks
