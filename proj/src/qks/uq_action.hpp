#pragma once

#include <string>
#include <vector>

#include "qks/graded_operator.hpp"
#include "qks/params.hpp"
#include "qks/report.hpp"
#include "qks/scalar.hpp"

namespace qks {

/// Geometric action of the quantum affine sl(2) on the fixed-point space.
/// Generators are materialized as GradedOperator blocks in the canonical
/// subset basis; conventions:
///   K       diagonal, eigenvalue hbar^{(n-2k)/2} on sector k
///   H_m     diagonal, ([m]/m)(hbar^{-m/2} sum_{i not in p} a_i^{-m}
///                      - hbar^{m/2} sum_{i in p} a_i^{-m})
///   E_r     lowers k by one, F_r raises it; matrix elements are the
///           localization weights with denominators prod (a_j - a_s).
template <class C>
class UqAction {
  public:
    explicit UqAction(const ModelParams& p)
        : n_(p.n), tol_(p.genericity_tol), hbar_(scalar_traits<C>::from(p.hbar)), rt_(hbar_) {
        a_.reserve(p.a.size());
        for (const auto& v : p.a) a_.push_back(scalar_traits<C>::from(v));
        amax_ = typename scalar_traits<C>::real_type(0);
        for (const auto& v : a_) amax_ = std::max(amax_, abs_val(v));
    }

    int n() const { return n_; }
    const C& hbar() const { return hbar_; }
    const RootCache<C>& roots() const { return rt_; }
    const std::vector<C>& a() const { return a_; }

    /// hbar^{(n-2k)/2}
    C k_eigenvalue(int k) const { return rt_.half(n_ - 2 * k); }

    GradedOperator<C> op_K() const {
        return GradedOperator<C>::diagonal(n_, [this](std::uint32_t mask) {
            return k_eigenvalue(std::popcount(mask));
        });
    }

    GradedOperator<C> op_K_inv() const {
        return GradedOperator<C>::diagonal(n_, [this](std::uint32_t mask) {
            return C(1) / k_eigenvalue(std::popcount(mask));
        });
    }

    GradedOperator<C> op_H(long m) const {
        if (m == 0) throw QksError(ErrorCode::ZeroMode, "H_0 is not a generator");
        const C bracket = (rt_.half(m) - rt_.half(-m)) / (rt_.half(1) - rt_.half(-1));
        return GradedOperator<C>::diagonal(n_, [this, m, bracket](std::uint32_t mask) {
            C out_sum(0), in_sum(0);
            for (int i = 0; i < n_; ++i) {
                const C t = int_pow(a_[i], -m);
                if (mask & (1u << i))
                    in_sum += t;
                else
                    out_sum += t;
            }
            return bracket / C(double(m)) * (rt_.half(-m) * out_sum - rt_.half(m) * in_sum);
        });
    }

    GradedOperator<C> op_E(long r) const {
        GradedOperator<C> op(n_, -1);
        for (int k = 1; k <= n_; ++k) {
            const auto cols = enumerate_fixed_points(n_, k);
            auto& blk = op.block(k);
            for (std::size_t cj = 0; cj < cols.size(); ++cj) {
                const std::uint32_t q = cols[cj].mask;
                for (int s = 0; s < n_; ++s) {
                    if (!(q & (1u << s))) continue;
                    C num(1), den(1);
                    for (int j = 0; j < n_; ++j) {
                        if (j == s) continue;
                        if (q & (1u << j))
                            num *= a_[j] - hbar_ * a_[s];
                        else
                            den *= guarded(a_[j] - a_[s]);
                    }
                    const std::uint32_t tgt = q & ~(1u << s);
                    blk(sector_rank(n_, tgt), static_cast<int>(cj)) +=
                        int_pow(a_[s], -r - 1) * num / den;
                }
            }
        }
        return op;
    }

    GradedOperator<C> op_F(long r) const {
        GradedOperator<C> op(n_, +1);
        for (int k = 0; k < n_; ++k) {
            const auto cols = enumerate_fixed_points(n_, k);
            auto& blk = op.block(k);
            const C pref = rt_.half(n_ - 2 * k - 1);
            for (std::size_t cj = 0; cj < cols.size(); ++cj) {
                const std::uint32_t p = cols[cj].mask;
                for (int s = 0; s < n_; ++s) {
                    if (p & (1u << s)) continue;
                    C num(1), den(1);
                    for (int j = 0; j < n_; ++j) {
                        if (j == s) continue;
                        if (p & (1u << j))
                            den *= guarded(a_[j] - a_[s]);
                        else
                            num *= a_[j] - a_[s] / hbar_;
                    }
                    const std::uint32_t tgt = p | (1u << s);
                    blk(sector_rank(n_, tgt), static_cast<int>(cj)) +=
                        pref * int_pow(a_[s], -r + 1) * num / den;
                }
            }
        }
        return op;
    }

    /// psi^+_0..M and psi^-_0..-M from the generating functions
    ///   sum psi^+_m w^m = K exp(+(h^{1/2}-h^{-1/2}) sum_{t>=1} H_t w^t),  w = z^{-1}
    ///   sum psi^-_{-m} w^m = K^{-1} exp(-(h^{1/2}-h^{-1/2}) sum_{t>=1} H_{-t} w^t)
    struct PsiSeries {
        std::vector<GradedOperator<C>> plus;   // psi^+_m, m = 0..M
        std::vector<GradedOperator<C>> minus;  // psi^-_{-m}, m = 0..M
    };

    PsiSeries psi_series(int order) const {
        PsiSeries out;
        out.plus = exp_diag_series(order, +1);
        out.minus = exp_diag_series(order, -1);
        return out;
    }

  private:
    C guarded(const C& d) const {
        if (abs_val(d) < typename scalar_traits<C>::real_type(tol_) * amax_)
            throw QksError(ErrorCode::NearSingularDenominator,
                           "equivariant parameters too close for E/F matrix elements");
        return d;
    }

    std::vector<GradedOperator<C>> exp_diag_series(int order, int sign) const {
        const C coef = (rt_.half(1) - rt_.half(-1)) * C(double(sign));
        // X_t = coef * H_{sign*t}; all diagonal so the exponential is scalar
        // per fixed point.
        std::vector<GradedOperator<C>> xs;
        xs.reserve(order);
        for (int t = 1; t <= order; ++t) xs.push_back(op_H(sign * t) * coef);

        // exp of a series with no constant term: term_p = term_{p-1} * X / p
        GradedOperator<C> front = sign > 0 ? op_K() : op_K_inv();
        std::vector<GradedOperator<C>> acc(order + 1, GradedOperator<C>(n_, 0));
        acc[0] = GradedOperator<C>::identity(n_);
        std::vector<GradedOperator<C>> term = acc;
        for (int p = 1; p <= order; ++p) {
            std::vector<GradedOperator<C>> next(order + 1, GradedOperator<C>(n_, 0));
            for (int i = 0; i + 1 <= order; ++i)
                for (int t = 1; i + t <= order; ++t) next[i + t] += term[i] * xs[t - 1];
            for (int i = 0; i <= order; ++i) {
                next[i] *= C(1.0 / double(p));
                acc[i] += next[i];
            }
            term = std::move(next);
        }
        std::vector<GradedOperator<C>> out;
        out.reserve(order + 1);
        for (int m = 0; m <= order; ++m) out.push_back(front * acc[m]);
        return out;
    }

    int n_;
    double tol_;
    C hbar_;
    RootCache<C> rt_;
    std::vector<C> a_;
    typename scalar_traits<C>::real_type amax_;
};

struct DrinfeldCheckOptions {
    int index_range = 2;  // generator indices r, m in [-range, range]
    int psi_order = 4;    // [E_m, F_l] tested for |m+l| <= psi_order
    double tol = 1e-10;
    bool sabotage_sign = false;  // negative control: flips the sign of K
};

/// Residual report for the full Drinfeld relation list.
template <class C>
void check_drinfeld(const ModelParams& params, const DrinfeldCheckOptions& opt,
                    VerificationReport& report) {
    UqAction<C> act(params);
    const int R = opt.index_range;
    const C h = act.hbar();
    auto K = act.op_K();
    if (opt.sabotage_sign) K *= C(-1);
    const auto Kinv = K.inverse_diagonal();
    const auto& rt = act.roots();
    const C denom = rt.half(1) - rt.half(-1);

    std::vector<GradedOperator<C>> E, F;
    for (long r = -2 * R; r <= 2 * R; ++r) {
        E.push_back(act.op_E(r));
        F.push_back(act.op_F(r));
    }
    auto e_at = [&](long r) -> const GradedOperator<C>& { return E[static_cast<std::size_t>(r + 2 * R)]; };
    auto f_at = [&](long r) -> const GradedOperator<C>& { return F[static_cast<std::size_t>(r + 2 * R)]; };

    auto psi = act.psi_series(opt.psi_order);

    auto add = [&](const std::string& id, double residual) {
        report.add(id, "uq:drinfeld", residual, opt.tol);
    };

    // K E_m K^{-1} = hbar E_m ;  K F_m K^{-1} = hbar^{-1} F_m
    {
        double worst_e = 0, worst_f = 0;
        for (long m = -R; m <= R; ++m) {
            auto lhs_e = K * e_at(m) * Kinv - e_at(m) * h;
            auto lhs_f = K * f_at(m) * Kinv - f_at(m) * (C(1) / h);
            worst_e = std::max(worst_e, scalar_traits<C>::to_double(lhs_e.max_abs()));
            worst_f = std::max(worst_f, scalar_traits<C>::to_double(lhs_f.max_abs()));
        }
        add("drinfeld.KEK", worst_e);
        add("drinfeld.KFK", worst_f);
    }

    // [H_m, H_l] = 0 (all diagonal: exact), and [H_m, K] = 0
    {
        double worst = 0;
        for (long m = -R; m <= R; ++m) {
            if (m == 0) continue;
            for (long l = -R; l <= R; ++l) {
                if (l == 0) continue;
                auto c = commutator(act.op_H(m), act.op_H(l));
                worst = std::max(worst, scalar_traits<C>::to_double(c.max_abs()));
            }
            worst = std::max(worst, scalar_traits<C>::to_double(commutator(act.op_H(m), K).max_abs()));
        }
        add("drinfeld.HH", worst);
    }

    // [E_m, F_l] = (psi^+_{m+l} - psi^-_{m+l}) / (h^{1/2} - h^{-1/2})
    {
        double worst = 0;
        for (long m = -R; m <= R; ++m)
            for (long l = -R; l <= R; ++l) {
                const long j = m + l;
                if (std::abs(j) > opt.psi_order) continue;
                auto lhs = commutator(e_at(m), f_at(l));
                GradedOperator<C> rhs(params.n, 0);
                if (j > 0)
                    rhs = psi.plus[static_cast<std::size_t>(j)];
                else if (j < 0)
                    rhs = psi.minus[static_cast<std::size_t>(-j)] * C(-1);
                else
                    rhs = psi.plus[0] - psi.minus[0];
                auto diff = lhs * denom - rhs;
                worst = std::max(worst, scalar_traits<C>::to_double(diff.max_abs()));
            }
        add("drinfeld.EF", worst);
    }

    // [H_k, E_l] = ([2k]/k) E_{k+l} ;  [H_k, F_l] = -([2k]/k) F_{k+l}
    {
        double worst_e = 0, worst_f = 0;
        for (long k = -R; k <= R; ++k) {
            if (k == 0) continue;
            const C bracket2k = (rt.half(2 * k) - rt.half(-2 * k)) / denom;
            const C coef = bracket2k / C(double(k));
            for (long l = -R; l <= R; ++l) {
                auto lhs_e = commutator(act.op_H(k), e_at(l)) - e_at(k + l) * coef;
                auto lhs_f = commutator(act.op_H(k), f_at(l)) + f_at(k + l) * coef;
                worst_e = std::max(worst_e, scalar_traits<C>::to_double(lhs_e.max_abs()));
                worst_f = std::max(worst_f, scalar_traits<C>::to_double(lhs_f.max_abs()));
            }
        }
        add("drinfeld.HE", worst_e);
        add("drinfeld.HF", worst_f);
    }

}

}  // namespace qks
