#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include <cmath>
#include <complex>

namespace qks {

using cplx = std::complex<double>;

namespace mp = boost::multiprecision;
using big_real = mp::number<mp::cpp_bin_float<256, mp::backends::digit_base_2>, mp::et_off>;
using big_cplx = mp::number<mp::complex_adaptor<mp::cpp_bin_float<256, mp::backends::digit_base_2>>,
                            mp::et_off>;

template <class C>
struct scalar_traits;

template <>
struct scalar_traits<cplx> {
    using real_type = double;
    static constexpr int precision_bits = 53;
    static double eps() { return 2.220446049250313e-16; }
    static cplx from(const cplx& v) { return v; }
    static cplx to_cplx(const cplx& v) { return v; }
    static double to_double(double v) { return v; }
};

template <>
struct scalar_traits<big_cplx> {
    using real_type = big_real;
    static constexpr int precision_bits = 256;
    static big_real eps() {
        static const big_real e = pow(big_real(2), -255);
        return e;
    }
    static big_cplx from(const cplx& v) { return big_cplx(big_real(v.real()), big_real(v.imag())); }
    static cplx to_cplx(const big_cplx& v) {
        return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
    }
    static double to_double(const big_real& v) { return static_cast<double>(v); }
};

template <class C>
typename scalar_traits<C>::real_type abs_val(const C& v) {
    using std::abs;
    return abs(v);
}

template <class C>
C int_pow(C base, long e) {
    if (e < 0) return C(1) / int_pow(base, -e);
    C r(1);
    while (e) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

/// Consistent fractional powers of one base value.  All half- and
/// quarter-integer powers of hbar (and of 1/hbar) used anywhere in the
/// project go through a single principal-branch square root, so that
/// identities mixing hbar^{1/2} from different formulas stay exact.
template <class C>
class RootCache {
  public:
    RootCache() = default;
    explicit RootCache(const C& base) : base_(base) {
        using std::sqrt;
        rt2_ = sqrt(base_);
        rt4_ = sqrt(rt2_);
    }
    const C& value() const { return base_; }
    const C& sqrt1() const { return rt2_; }
    /// base^{m/2}
    C half(long m) const { return int_pow(rt2_, m); }
    /// base^{m/4}
    C quarter(long m) const { return int_pow(rt4_, m); }

  private:
    C base_{};
    C rt2_{};
    C rt4_{};
};

template <class C>
C principal_sqrt(const C& v) {
    using std::sqrt;
    return sqrt(v);
}

}  // namespace qks
