#pragma once

#include <map>
#include <vector>

#include "qks/bethe.hpp"
#include "qks/power_series.hpp"
#include "qks/uq_action.hpp"

namespace qks {

/// Quantum tautological classes from the universal combinatorial formula,
/// Baxter Q-operator series, and the Wronskian/TQ identity suite.
///
/// Everything lives on the fixed-point module at the model's hbar.  The
/// Bethe-ansatz structures it talks to are those of the chain at inverted
/// anisotropy hc = 1/hbar with twist Z, Z^2 = (-1)^n z; under that
/// dictionary the module's own solutions of the geometric equations at
/// (hbar, z) are exactly the chain's Bethe roots, and Q+ assembled from the
/// Drinfeld-basis formula matches the alternating sum of quantum exterior
/// powers order by order.
template <class C>
class QuantumClasses {
  public:
    explicit QuantumClasses(const ModelParams& p, double resonance_tol = 1e-6)
        : params_(p), act_(p), resonance_tol_(resonance_tol) {}

    const UqAction<C>& action() const { return act_; }
    int n() const { return params_.n; }

    /// Universal coefficient
    ///   a_m(z) = (h-1)^m h^{m^2/2} K^m / ( (m)_h! prod_{i=1..m} (1 - (-1)^n z^{-1} h^i K) )
    /// with K the sector eigenvalue h^{(n-2k)/2}.  The prefactor exponent
    /// m^2/2 is the empirically pinned convention (see tests); the pole
    /// locations are z = (-1)^n h^i K.
    C coeff_a(int m, const C& z, int sector, double perturb = 0.0) const {
        if (m == 0) return C(1);
        const C h = act_.hbar();
        const auto& rt = act_.roots();
        const C K = act_.k_eigenvalue(sector);
        const C sgn = (params_.n % 2 == 0) ? C(1) : C(-1);
        C num = int_pow(h - C(1), m) * rt.half(static_cast<long>(m) * m) * int_pow(K, m);
        C den(1);
        C hi(1);
        for (int i = 1; i <= m; ++i) {
            hi *= h;
            const C factor = C(1) - sgn * hi * K / z;
            if (abs_val(factor) < typename scalar_traits<C>::real_type(resonance_tol_))
                throw QksError(ErrorCode::ResonantZ, "z sits on a pole of a_m");
            den *= factor;
        }
        C fact(1), pm(1);
        for (int i = 1; i <= m; ++i) {
            pm *= h;
            fact *= (C(1) - pm) / (C(1) - h);
        }
        C out = num / (den * fact);
        if (perturb != 0.0) out *= C(1) + C(perturb);
        return out;
    }

    /// Diagonal classical class e_l(x_p).
    GradedOperator<C> elementary_diag(int l) const {
        const auto& a = act_.a();
        const int nn = params_.n;
        return GradedOperator<C>::diagonal(nn, [&a, l, nn](std::uint32_t mask) {
            std::vector<C> xs;
            for (int i = 0; i < nn; ++i)
                if (mask & (1u << i)) xs.push_back(a[i]);
            return elementary_symmetric<C>(l, xs);
        });
    }

    /// Quantum exterior power Lhat^l(z) = sum_m a_m(z) F_0^m e_{l-m} E_{-1}^m.
    GradedOperator<C> quantum_exterior(int l, const C& z, double perturb = 0.0) const {
        ensure_powers(std::min(l, params_.n));
        GradedOperator<C> out(params_.n, 0);
        for (int k = 0; k <= params_.n; ++k) {
            auto& blk = out.block(k);
            const int mmax = std::min({l, k});
            for (int m = 0; m <= mmax; ++m) {
                // F_0^m e_{l-m} E_{-1}^m restricted to source sector k
                if (l - m > k - m) continue;  // e_{l-m} vanishes on sector k-m
                Mat<C> term = compose_fwe(m, l - m, k);
                const C am = (m == 0) ? C(1) : coeff_a(m, z, k, perturb);
                if (m == 0)
                    blk += term;
                else
                    blk += term * am;
            }
        }
        return out;
    }

    /// Quantum line bundle by the independent route B(z) O(1) with
    /// B(z) = sum_m a_m(z) F_0^m E_0^m; agrees with quantum_exterior(l = k)
    /// sector by sector.
    GradedOperator<C> quantum_line_bundle(const C& z) const {
        const auto det_diag = elementary_full_diag();
        const auto E0 = act_.op_E(0);
        const auto F0 = act_.op_F(0);
        // powers E_0^m, F_0^m
        std::vector<GradedOperator<C>> epow{GradedOperator<C>::identity(params_.n)};
        std::vector<GradedOperator<C>> fpow{GradedOperator<C>::identity(params_.n)};
        for (int m = 1; m <= params_.n; ++m) {
            epow.push_back(E0 * epow.back());
            fpow.push_back(F0 * fpow.back());
        }
        GradedOperator<C> out(params_.n, 0);
        for (int k = 0; k <= params_.n; ++k) {
            Mat<C> acc = det_diag.block(k);
            for (int m = 1; m <= k; ++m) {
                const auto term = fpow[m] * (epow[m] * det_diag);
                acc += term.block(k) * coeff_a(m, z, k);
            }
            out.block(k) = acc;
        }
        return out;
    }

  private:
    Mat<C> compose_fwe(int m, int l, int k) const {
        // F_0^m * diag(e_l on sector k-m) * E_{-1}^m, source sector k
        Mat<C> cur = Mat<C>::identity(static_cast<int>(binomial(params_.n, k)));
        for (int j = 0; j < m; ++j) cur = em1_.block(k - j) * cur;
        cur = diag_cache_.at(l).block(k - m) * cur;
        for (int j = 0; j < m; ++j) cur = f0_.block(k - m + j) * cur;
        return cur;
    }

    GradedOperator<C> elementary_full_diag() const {
        const auto& a = act_.a();
        const int nn = params_.n;
        return GradedOperator<C>::diagonal(nn, [&a, nn](std::uint32_t mask) {
            C p(1);
            for (int i = 0; i < nn; ++i)
                if (mask & (1u << i)) p *= a[i];
            return p;
        });
    }

    void ensure_powers(int lmax) const {
        if (em1_.n() == 0) {
            em1_ = act_.op_E(-1);
            f0_ = act_.op_F(0);
        }
        for (int l = 0; l <= std::max(lmax, params_.n); ++l)
            if (!diag_cache_.count(l)) diag_cache_.emplace(l, elementary_diag(l));
    }

    ModelParams params_;
    UqAction<C> act_;
    double resonance_tol_;
    mutable GradedOperator<C> em1_{};
    mutable GradedOperator<C> f0_{};
    mutable std::map<int, GradedOperator<C>> diag_cache_;
};

/// Baxter Q series on the fixed-point module.
template <class C>
struct QOperatorSeries {
    int side = +1;  // +1 = Q_plus, -1 = Q_minus
    cplx z{};
    OperatorSeries<C> series;  // x^0 coefficient is the identity
};

/// Normalization series F(x) = prod_i (a_i x h^{-2}; h^2)_inf / (a_i x h^{-1}; h^2)_inf.
template <class C>
PowerSeries<C> normalization_series(const ModelParams& p, int order) {
    const C h = scalar_traits<C>::from(p.hbar);
    const C h2 = h * h;
    auto out = PowerSeries<C>::one(SeriesVar::X, order);
    for (const auto& av : p.a) {
        const C a = scalar_traits<C>::from(av);
        auto num = q_pochhammer_series<C>(a / h2, h2, order);
        auto den = q_pochhammer_series<C>(a / h, h2, order);
        out = out * (num / den);
    }
    return out;
}

}  // namespace qks
