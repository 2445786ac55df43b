#pragma once

#include <string>
#include <vector>

#include "qks/qop.hpp"
#include "qks/report.hpp"

namespace qks {

/// Solve the geometric system at an explicit anisotropy (the minus side of
/// the Q-operator pair uses the inverted one).
inline SolutionSet solve_all_at(const ModelParams& params, const cplx& hbar_use, int k,
                                const cplx& z, const StepControl& ctrl = {}) {
    ModelParams p = params;
    p.hbar = hbar_use;
    return solve_all(p, k, z, ctrl);
}

/// Identity suite for the Baxter pair on the fixed-point module.
///
/// Chain dictionary (frozen, see tests): the module at (hbar, z) carries the
/// Bethe structures of a chain at hc = 1/hbar, twist Z with Z^2 = (-1)^n z.
///   plus roots  (sector k):  solutions of the geometric system at (hbar, z)
///   minus roots (sector k):  hbar * [solutions at (1/hbar, z)] with n-k
///                            roots, paired by complementary origin
/// Q+ is assembled from the combinatorial Drinfeld-basis formula; Q-, T1 by
/// spectral synthesis over the joint eigenbasis, which is built from
/// Lagrange projectors of Lhat^1 (no dense eigensolver anywhere).
template <class C>
class QIdentitySuite {
  public:
    QIdentitySuite(const ModelParams& params, const cplx& z, int order,
                   const StepControl& ctrl = {})
        : params_(params), qc_(params), z_(scalar_traits<C>::from(z)), zd_(z), order_(order) {
        const int n = params_.n;
        const auto& rt = qc_.action().roots();
        const cplx sgn = (n % 2 == 0) ? cplx(1) : cplx(-1);
        Zd_ = std::sqrt(sgn * z);
        Z_ = scalar_traits<C>::from(Zd_);
        hc_half_ = rt.half(-1);     // hc^{1/2} = hbar^{-1/2}, shared root cache
        hc_quarter_ = rt.quarter(-1);

        plus_.resize(n + 1);
        minus_.resize(n + 1);
        for (int k = 0; k <= n; ++k) {
            plus_[k] = solve_all(params_, k, zd_, ctrl);
            if (!plus_[k].complete)
                throw QksError(ErrorCode::IncompleteSet, "plus-side solution set incomplete");
            minus_[k] = solve_all_at(params_, cplx(1) / params_.hbar, k, zd_, ctrl);
            if (!minus_[k].complete)
                throw QksError(ErrorCode::IncompleteSet, "minus-side solution set incomplete");
            for (auto& sol : minus_[k].solutions)
                for (auto& r : sol.roots) r *= params_.hbar;
        }
        build_eigenbasis();
    }

    const QuantumClasses<C>& classes() const { return qc_; }
    double eigenbasis_residual() const { return eig_residual_; }
    const SolutionSet& plus_solutions(int k) const { return plus_[k]; }

    /// Q+ as the x-series with W^Z_m coefficients; c_j(k) = (-1)^j a_j(z,k)
    /// relative to the exterior-power coefficients (Z^{-2} = z^{-1}(-1)^n).
    QOperatorSeries<C> q_plus(double perturb = 0.0) const {
        const int n = params_.n;
        QOperatorSeries<C> out;
        out.side = +1;
        out.z = zd_;
        out.series = OperatorSeries<C>::one(SeriesVar::X, n, order_);
        for (int m = 1; m <= order_; ++m) {
            GradedOperator<C> wm(n, 0);
            for (int k = 0; k <= n; ++k) {
                auto& blk = wm.block(k);
                for (int j = 0; j <= std::min(m, k); ++j) {
                    if (m - j > k - j) continue;  // W_{m-j} vanishes there
                    Mat<C> term = compose_fwd(j, m - j, k);
                    const C cj = (j == 0) ? C(1)
                                          : ((j % 2 == 0) ? qc_.coeff_a(j, z_, k, perturb)
                                                          : -qc_.coeff_a(j, z_, k, perturb));
                    blk += term * cj;
                }
            }
            out.series[m] = wm;
        }
        return out;
    }

    /// Q- by spectral synthesis: eigenvalue series prod (1 - x s'_i) over
    /// the minus roots paired by complementary origin.
    QOperatorSeries<C> q_minus() const {
        const int n = params_.n;
        QOperatorSeries<C> out;
        out.side = -1;
        out.z = zd_;
        out.series = OperatorSeries<C>::one(SeriesVar::X, n, order_);
        for (int m = 1; m <= order_; ++m) out.series[m] = GradedOperator<C>(n, 0);
        for (int k = 0; k <= n; ++k) {
            const int dim = static_cast<int>(binomial(n, k));
            std::vector<PowerSeries<C>> eigser;
            for (const auto& sol : plus_[k].solutions) {
                const std::uint32_t comp = (~sol.origin_mask) & ((1u << n) - 1u);
                const auto* msol = find_by_origin(minus_[n - k], comp);
                if (!msol)
                    throw QksError(ErrorCode::IncompleteSet, "missing paired minus solution");
                eigser.push_back(root_poly(msol->roots, C(1)));
            }
            synthesize_sector(out.series, k, dim, eigser);
        }
        return out;
    }

    /// Normalized transfer matrix T1(x) of the virtual chain, synthesized
    /// from its eigenvalue series on the joint eigenbasis.  Also reports the
    /// worst truncation coefficient beyond x^n, which vanishes exactly when
    /// the plus roots satisfy the Bethe equations.
    OperatorSeries<C> t1_series(double* poly_tail = nullptr) const {
        const int n = params_.n;
        OperatorSeries<C> out(SeriesVar::X, n, 0, order_);
        double tail = 0.0;
        for (int k = 0; k <= n; ++k) {
            const int dim = static_cast<int>(binomial(n, k));
            std::vector<PowerSeries<C>> eigser;
            for (const auto& sol : plus_[k].solutions) {
                auto lam = lambda_series(sol.roots, k);
                for (int m = n + 1; m <= order_; ++m)
                    tail = std::max(tail, scalar_traits<C>::to_double(abs_val(lam[m])));
                eigser.push_back(std::move(lam));
            }
            synthesize_sector_raw(out, k, dim, eigser);
        }
        if (poly_tail) *poly_tail = tail;
        return out;
    }

    /// Normalized quantum Wronskian, coefficient-wise through x^order.
    /// sabotage_branch flips the branch of Z in the first term only.
    double wronskian_residual(bool sabotage_branch = false) const {
        const auto qp = q_plus().series;
        const auto qm = q_minus().series;
        const auto d4 = diag_quarter(+1);
        const auto d4i = diag_quarter(-1);
        const C Z1 = sabotage_branch ? -Z_ : Z_;
        auto first = qp.rescaled(hc_half_) * qm.rescaled(C(1) / hc_half_);
        auto second = qp.rescaled(C(1) / hc_half_) * qm.rescaled(hc_half_);
        auto gshift = root_poly_a(C(1) / hc_half_);
        double worst = 0.0;
        for (int m = 0; m <= order_; ++m) {
            GradedOperator<C> lhs = d4 * first[m] * Z1 - d4i * second[m] * (C(1) / Z_);
            GradedOperator<C> rhs = (d4 * Z_ - d4i * (C(1) / Z_)) * gshift[m];
            worst = std::max(worst, scalar_traits<C>::to_double((lhs - rhs).max_abs()));
        }
        return worst;
    }

    /// Baxter TQ relation in operator-series form for both Q's, plus point
    /// evaluations on a u-grid (x = u^{-2}).
    void tq_residuals(double& series_resid, double& grid_resid,
                      const std::vector<cplx>& u_grid) const {
        const auto qp = q_plus().series;
        const auto qm = q_minus().series;
        const auto t1 = t1_series();
        const auto d4 = diag_quarter(+1);
        const auto d4i = diag_quarter(-1);
        const C hc = C(1) / scalar_traits<C>::from(params_.hbar);
        auto g1 = root_poly_a(C(1));
        auto ghm = root_poly_a(C(1) / hc);

        auto lhs_p = t1 * qp;
        auto rhs_p = apply_diag(qp.rescaled(hc).scaled_by(ghm), d4) * Z_ +
                     apply_diag(qp.rescaled(C(1) / hc).scaled_by(g1), d4i) * (C(1) / Z_);
        auto lhs_m = t1 * qm;
        auto rhs_m = apply_diag(qm.rescaled(hc).scaled_by(ghm), d4i) * (C(1) / Z_) +
                     apply_diag(qm.rescaled(C(1) / hc).scaled_by(g1), d4) * Z_;

        series_resid = 0.0;
        for (int m = 0; m <= order_; ++m) {
            series_resid = std::max(
                series_resid, scalar_traits<C>::to_double((lhs_p[m] - rhs_p[m]).max_abs()));
            series_resid = std::max(
                series_resid, scalar_traits<C>::to_double((lhs_m[m] - rhs_m[m]).max_abs()));
        }
        grid_resid = 0.0;
        for (const auto& u : u_grid) {
            const C x = C(1) / scalar_traits<C>::from(u * u);
            grid_resid = std::max(grid_resid, eval_gap(lhs_p, rhs_p, x));
            grid_resid = std::max(grid_resid, eval_gap(lhs_m, rhs_m, x));
        }
    }

    /// Order-by-order equality of Q+ with the alternating exterior series.
    double identify_residual() const {
        const auto qp = q_plus().series;
        double worst = 0.0;
        for (int m = 0; m <= order_; ++m) {
            GradedOperator<C> ref =
                (m <= params_.n) ? qc_.quantum_exterior(m, z_) : GradedOperator<C>(params_.n, 0);
            if (m % 2 == 1) ref *= C(-1);
            worst = std::max(worst, scalar_traits<C>::to_double((qp[m] - ref).max_abs()));
        }
        return worst;
    }

    /// Eigenvalue theorem: Lhat^l(z) v_S = e_l(S) v_S on every sector.
    double eigenvalue_theorem_residual(double am_perturb = 0.0) const {
        const int n = params_.n;
        double worst = 0.0;
        for (int l = 1; l <= n; ++l) {
            const auto op = qc_.quantum_exterior(l, z_, am_perturb);
            for (int k = 0; k <= n; ++k) {
                const int dim = static_cast<int>(binomial(n, k));
                for (std::size_t si = 0; si < plus_[k].solutions.size(); ++si) {
                    std::vector<C> roots = to_scalar(plus_[k].solutions[si].roots);
                    const C el = elementary_symmetric<C>(l, roots);
                    double rel = 0.0, vn = 0.0;
                    for (int i = 0; i < dim; ++i) {
                        C acc(0);
                        for (int j = 0; j < dim; ++j)
                            acc += op.block(k)(i, j) * basis_[k](j, static_cast<int>(si));
                        const C gap = acc - el * basis_[k](i, static_cast<int>(si));
                        rel = std::max(rel, scalar_traits<C>::to_double(abs_val(gap)));
                        vn = std::max(vn, scalar_traits<C>::to_double(
                                              abs_val(basis_[k](i, static_cast<int>(si)))));
                    }
                    const double scale =
                        vn * std::max(1.0, scalar_traits<C>::to_double(abs_val(el)));
                    worst = std::max(worst, rel / scale);
                }
            }
        }
        return worst;
    }

    /// Lhat^{l=k} against the independently assembled line bundle.
    double top_vs_line_bundle_residual() const {
        const auto lb = qc_.quantum_line_bundle(z_);
        double worst = 0.0;
        for (int k = 0; k <= params_.n; ++k) {
            const auto ex = qc_.quantum_exterior(k, z_);
            worst = std::max(worst, scalar_traits<C>::to_double(
                                        (ex.block(k) - lb.block(k)).max_abs()));
        }
        return worst;
    }

    /// Weighted-exterior sign map: sum_l x^l Lhat^l has eigenvalue
    /// prod (1 + x s_i) on v_S (the tau_x side of the sign dictionary).
    double baxter_sign_residual(const cplx& x_sample) const {
        const int n = params_.n;
        const C x = scalar_traits<C>::from(x_sample);
        GradedOperator<C> gen(n, 0);
        C xp(1);
        for (int l = 0; l <= n; ++l) {
            gen += qc_.quantum_exterior(l, z_) * xp;
            xp *= x;
        }
        double worst = 0.0;
        for (int k = 0; k <= n; ++k) {
            const int dim = static_cast<int>(binomial(n, k));
            for (std::size_t si = 0; si < plus_[k].solutions.size(); ++si) {
                auto roots = to_scalar(plus_[k].solutions[si].roots);
                C lam(1);
                for (const auto& s : roots) lam *= C(1) + x * s;
                for (int i = 0; i < dim; ++i) {
                    C acc(0);
                    for (int j = 0; j < dim; ++j)
                        acc += gen.block(k)(i, j) * basis_[k](j, static_cast<int>(si));
                    worst = std::max(worst, scalar_traits<C>::to_double(abs_val(
                                                acc - lam * basis_[k](i, static_cast<int>(si)))));
                }
            }
        }
        return worst;
    }

    double t1_polynomial_tail() const {
        double tail = 0.0;
        (void)t1_series(&tail);
        return tail;
    }

  private:
    static std::vector<C> to_scalar(const std::vector<cplx>& v) {
        std::vector<C> out;
        out.reserve(v.size());
        for (const auto& x : v) out.push_back(scalar_traits<C>::from(x));
        return out;
    }

    static const BetheSolution* find_by_origin(const SolutionSet& set, std::uint32_t mask) {
        for (const auto& s : set.solutions)
            if (s.origin_mask == mask) return &s;
        return nullptr;
    }

    /// prod (1 - c*r*x) over the roots, as a series of order order_.
    PowerSeries<C> root_poly(const std::vector<cplx>& roots, const C& c) const {
        auto out = PowerSeries<C>::one(SeriesVar::X, order_);
        for (const auto& rd : roots) {
            PowerSeries<C> lin(SeriesVar::X, order_);
            lin[0] = C(1);
            if (order_ >= 1) lin[1] = -c * scalar_traits<C>::from(rd);
            out = out * lin;
        }
        return out;
    }
    /// prod (1 - a_i*c*x)
    PowerSeries<C> root_poly_a(const C& c) const {
        auto out = PowerSeries<C>::one(SeriesVar::X, order_);
        for (const auto& av : params_.a) {
            PowerSeries<C> lin(SeriesVar::X, order_);
            lin[0] = C(1);
            if (order_ >= 1) lin[1] = -c * scalar_traits<C>::from(av);
            out = out * lin;
        }
        return out;
    }

    /// Eigenvalue series of the normalized virtual-chain transfer matrix on
    /// the Bethe vector with the given plus roots (sector k):
    ///   Z hc^{(n-2k)/4} G(x/hc) q(hc x)/q(x) + Z^{-1} hc^{-(n-2k)/4} G(x) q(x/hc)/q(x)
    PowerSeries<C> lambda_series(const std::vector<cplx>& roots, int k) const {
        const C hc = C(1) / scalar_traits<C>::from(params_.hbar);
        const C kq = int_pow(hc_quarter_, params_.n - 2 * k);
        auto den = root_poly(roots, C(1));
        auto t1 = root_poly_a(C(1) / hc) * root_poly(roots, hc);
        auto t2 = root_poly_a(C(1)) * root_poly(roots, C(1) / hc);
        return (t1 / den) * (Z_ * kq) + (t2 / den) * (C(1) / (Z_ * kq));
    }

    Mat<C> compose_fwd(int j, int t, int k) const {
        // F_0^j * Wdiag_t(sector k-j) * E_{-1}^j on source sector k
        ensure_gens();
        Mat<C> cur = Mat<C>::identity(static_cast<int>(binomial(params_.n, k)));
        for (int i = 0; i < j; ++i) cur = em1_.block(k - i) * cur;
        cur = wdiag(t).block(k - j) * cur;
        for (int i = 0; i < j; ++i) cur = f0_.block(k - j + i) * cur;
        return cur;
    }

    const GradedOperator<C>& wdiag(int t) const {
        auto it = wdiag_cache_.find(t);
        if (it != wdiag_cache_.end()) return it->second;
        const auto& a = qc_.action().a();
        const int nn = params_.n;
        auto op = GradedOperator<C>::diagonal(nn, [&a, t, nn](std::uint32_t mask) {
            std::vector<C> xs;
            for (int i = 0; i < nn; ++i)
                if (mask & (1u << i)) xs.push_back(a[i]);
            const C e = elementary_symmetric<C>(t, xs);
            return (t % 2 == 0) ? e : -e;
        });
        return wdiag_cache_.emplace(t, std::move(op)).first->second;
    }

    /// diag hc^{ sign*(n-2k)/4 } as a graded operator
    GradedOperator<C> diag_quarter(int sign) const {
        const int n = params_.n;
        GradedOperator<C> d(n, 0);
        for (int k = 0; k <= n; ++k) {
            const C v = int_pow(hc_quarter_, sign * (n - 2 * k));
            d.block(k) = Mat<C>::identity(static_cast<int>(binomial(n, k))) * v;
        }
        return d;
    }

    static OperatorSeries<C> apply_diag(const OperatorSeries<C>& s, const GradedOperator<C>& d) {
        OperatorSeries<C> out = s;
        for (int m = 0; m <= s.order(); ++m) out[m] = d * s[m];
        return out;
    }

    double eval_gap(const OperatorSeries<C>& a, const OperatorSeries<C>& b, const C& x) const {
        GradedOperator<C> accA(params_.n, 0), accB(params_.n, 0);
        C xp(1);
        for (int m = 0; m <= order_; ++m) {
            accA += a[m] * xp;
            accB += b[m] * xp;
            xp *= x;
        }
        return scalar_traits<C>::to_double((accA - accB).max_abs());
    }

    void synthesize_sector(std::vector<GradedOperator<C>>& coeffs, int k, int dim,
                           const std::vector<PowerSeries<C>>& eigser) const {
        for (int m = 1; m <= order_; ++m) {
            Mat<C> d(dim, dim);
            for (int s = 0; s < dim; ++s) d(s, s) = eigser[static_cast<std::size_t>(s)][m];
            coeffs[static_cast<std::size_t>(m)].block(k) = basis_[k] * d * basis_inv_[k];
        }
    }
    void synthesize_sector_raw(OperatorSeries<C>& out, int k, int dim,
                               const std::vector<PowerSeries<C>>& eigser) const {
        for (int m = 0; m <= order_; ++m) {
            Mat<C> d(dim, dim);
            for (int s = 0; s < dim; ++s) d(s, s) = eigser[static_cast<std::size_t>(s)][m];
            out[m].block(k) = basis_[k] * d * basis_inv_[k];
        }
    }

    void ensure_gens() const {
        if (em1_.n() == 0) {
            em1_ = qc_.action().op_E(-1);
            f0_ = qc_.action().op_F(0);
        }
    }

    void build_eigenbasis() {
        const int n = params_.n;
        basis_.resize(n + 1);
        basis_inv_.resize(n + 1);
        eig_residual_ = 0.0;
        const auto lam1 = qc_.quantum_exterior(1, z_);
        for (int k = 0; k <= n; ++k) {
            const int dim = static_cast<int>(binomial(n, k));
            basis_[k] = Mat<C>::identity(dim);
            basis_inv_[k] = Mat<C>::identity(dim);
            if (dim == 1) continue;
            // predicted e_1 spectrum
            std::vector<C> ev;
            for (const auto& sol : plus_[k].solutions)
                ev.push_back(elementary_symmetric<C>(1, to_scalar(sol.roots)));
            for (std::size_t i = 0; i < ev.size(); ++i)
                for (std::size_t j = i + 1; j < ev.size(); ++j)
                    if (abs_val(ev[i] - ev[j]) < typename scalar_traits<C>::real_type(1e-10))
                        throw QksError(ErrorCode::IncompleteSet,
                                       "degenerate e_1 spectrum; cannot separate eigenvectors");
            const auto& A = lam1.block(k);
            for (int s = 0; s < dim; ++s) {
                // Lagrange projector applied to a deterministic probe
                std::vector<C> v(static_cast<std::size_t>(dim));
                for (int i = 0; i < dim; ++i) v[static_cast<std::size_t>(i)] = C(1.0 + 0.37 * i);
                for (int t = 0; t < dim; ++t) {
                    if (t == s) continue;
                    std::vector<C> w(static_cast<std::size_t>(dim), C(0));
                    for (int i = 0; i < dim; ++i) {
                        C acc(0);
                        for (int j = 0; j < dim; ++j) acc += A(i, j) * v[static_cast<std::size_t>(j)];
                        w[static_cast<std::size_t>(i)] =
                            (acc - ev[static_cast<std::size_t>(t)] * v[static_cast<std::size_t>(i)]) /
                            (ev[static_cast<std::size_t>(s)] - ev[static_cast<std::size_t>(t)]);
                    }
                    v = std::move(w);
                }
                // normalize sup-norm and record the eigen residual
                typename scalar_traits<C>::real_type vmax(0);
                for (const auto& x : v) vmax = std::max(vmax, abs_val(x));
                if (scalar_traits<C>::to_double(vmax) == 0.0)
                    throw QksError(ErrorCode::IncompleteSet, "projector annihilated the probe");
                for (auto& x : v) x /= vmax;
                double res = 0.0;
                for (int i = 0; i < dim; ++i) {
                    C acc(0);
                    for (int j = 0; j < dim; ++j) acc += A(i, j) * v[static_cast<std::size_t>(j)];
                    res = std::max(res, scalar_traits<C>::to_double(abs_val(
                                            acc - ev[static_cast<std::size_t>(s)] *
                                                      v[static_cast<std::size_t>(i)])));
                }
                eig_residual_ = std::max(eig_residual_, res);
                for (int i = 0; i < dim; ++i) basis_[k](i, s) = v[static_cast<std::size_t>(i)];
            }
            basis_inv_[k] = inverse(basis_[k]);
        }
    }

    ModelParams params_;
    QuantumClasses<C> qc_;
    C z_;
    cplx zd_;
    int order_;
    C Z_;
    cplx Zd_;
    C hc_half_;
    C hc_quarter_;
    std::vector<SolutionSet> plus_, minus_;
    std::vector<Mat<C>> basis_, basis_inv_;
    double eig_residual_ = 0.0;
    mutable GradedOperator<C> em1_{}, f0_{};
    mutable std::map<int, GradedOperator<C>> wdiag_cache_;
};

}  // namespace qks
