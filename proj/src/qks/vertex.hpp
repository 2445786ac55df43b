#pragma once

#include <vector>

#include "qks/combinatorics.hpp"
#include "qks/params.hpp"
#include "qks/power_series.hpp"
#include "qks/symmetric_functions.hpp"

namespace qks {

/// Bare vertex functions as truncated q-series in the box-counting
/// variable z, and the q->1 eigenvalue extraction.
template <class C>
class VertexCalculator {
  public:
    VertexCalculator(const ModelParams& p, const C& q)
        : n_(p.n), hbar_(scalar_traits<C>::from(p.hbar)), q_(q), rt_h_(hbar_), rt_q_(q) {
        a_.reserve(p.a.size());
        for (const auto& v : p.a) a_.push_back(scalar_traits<C>::from(v));
    }

    /// {x}_d = (h/x; q)_d / (q/x; q)_d * (-q^{1/2} h^{-1/2})^d for d in Z,
    /// with (x; q)_d the phi-ratio convention: finite products for d >= 0,
    /// reciprocal products of q^{-j} x for d < 0.
    C bracket(const C& x, long d, double pole_tol = 1e-12) const {
        const C num = pochhammer_ratio(hbar_ / x, d, pole_tol);
        const C den = pochhammer_ratio(q_ / x, d, pole_tol);
        if (abs_val(den) < typename scalar_traits<C>::real_type(pole_tol))
            throw QksError(ErrorCode::PoleHit, "bracket denominator vanished");
        return num / den * int_pow(-rt_q_.half(1) / rt_h_.half(1), d);
    }

    /// Vertex coefficient series V^(tau)_p(z) through z^{d_max}.  The sum
    /// runs over degree tuples (d_1..d_k) >= 0 grouped by total degree;
    /// tuples are visited in lexicographic order for reproducibility.
    PowerSeries<C> vertex_series(std::uint32_t p_mask, const SymmetricFunctionSpec<C>& tau,
                                 int d_max) const {
        std::vector<C> x;
        for (int i = 0; i < n_; ++i)
            if (p_mask & (1u << i)) x.push_back(a_[i]);
        const int k = static_cast<int>(x.size());
        PowerSeries<C> out(SeriesVar::Z, d_max);
        if (k == 0) {
            out[0] = C(1);
            return out;
        }
        std::vector<long> d(static_cast<std::size_t>(k), 0);
        std::vector<C> shifted(static_cast<std::size_t>(k));
        // iterate all tuples with sum <= d_max, lexicographic
        while (true) {
            long total = 0;
            for (auto v : d) total += v;
            if (total <= d_max) {
                C term = rt_q_.half(static_cast<long>(n_) * total);
                for (int i = 0; i < k && term != C(0); ++i)
                    for (int j = 0; j < k; ++j) {
                        if (i == j) continue;
                        term /= bracket(x[static_cast<std::size_t>(i)] / x[static_cast<std::size_t>(j)],
                                        d[static_cast<std::size_t>(i)] - d[static_cast<std::size_t>(j)]);
                    }
                for (int i = 0; i < k; ++i)
                    for (int j = 0; j < n_; ++j)
                        term *= bracket(x[static_cast<std::size_t>(i)] / a_[static_cast<std::size_t>(j)],
                                        d[static_cast<std::size_t>(i)]);
                for (int i = 0; i < k; ++i)
                    shifted[static_cast<std::size_t>(i)] =
                        x[static_cast<std::size_t>(i)] * int_pow(q_, -d[static_cast<std::size_t>(i)]);
                out[static_cast<int>(total)] += term * tau(shifted);
            }
            // next tuple
            int pos = k - 1;
            while (pos >= 0) {
                ++d[static_cast<std::size_t>(pos)];
                long t2 = 0;
                for (auto v : d) t2 += v;
                if (t2 <= d_max) break;
                d[static_cast<std::size_t>(pos)] = 0;
                --pos;
            }
            if (pos < 0) break;
        }
        return out;
    }

  private:
    /// (x; q)_d = phi(x)/phi(q^d x) as a finite product.
    C pochhammer_ratio(const C& x, long d, double pole_tol) const {
        C r(1);
        if (d >= 0) {
            C qp(1);
            for (long i = 0; i < d; ++i) {
                r *= C(1) - qp * x;
                qp *= q_;
            }
        } else {
            C qi(1);
            for (long j = 1; j <= -d; ++j) {
                qi /= q_;
                const C f = C(1) - qi * x;
                if (abs_val(f) < typename scalar_traits<C>::real_type(pole_tol))
                    throw QksError(ErrorCode::PoleHit, "pochhammer factor vanished");
                r /= f;
            }
        }
        return r;
    }

    int n_;
    C hbar_;
    C q_;
    RootCache<C> rt_h_;
    RootCache<C> rt_q_;
    std::vector<C> a_;
};

struct ExtractionOptions {
    int j_min = 4, j_max = 10;      // q = 1 - 2^{-j}
    int d_max = 14;
    double admit_tol = 1e-3;        // ratio stability |r(d) - r(d-2)|
    int fit_degree = 2;
};

struct ExtractionResult {
    cplx value{};
    double error_estimate = 0.0;
    int points_admitted = 0;
    std::vector<double> stabilities;  // per q-point, before admission
};

/// Quantum-multiplication eigenvalue at fixed point p via the q->1 ratio
/// V^(tau)/V^(1).  Ratios are computed on a ladder of q values; a point is
/// admitted when deepening the truncation by two degrees moves the ratio by
/// less than admit_tol, and the admitted points are extrapolated to q = 1
/// by a stability-weighted polynomial fit in (1-q).
inline ExtractionResult extract_eigenvalue(const ModelParams& params, std::uint32_t p_mask,
                                           const SymmetricFunctionSpec<cplx>& tau, const cplx& z,
                                           const ExtractionOptions& opt = {}) {
    std::vector<double> eps_list;
    std::vector<cplx> ratios;
    std::vector<double> stabs;
    for (int j = opt.j_min; j <= opt.j_max; ++j) {
        const double eps = std::ldexp(1.0, -j);
        VertexCalculator<cplx> vc(params, cplx(1.0 - eps));
        auto ratio_at = [&](int dm) {
            auto vt = vc.vertex_series(p_mask, tau, dm);
            auto v1 = vc.vertex_series(p_mask, SymmetricFunctionSpec<cplx>{}, dm);
            cplx st(0), s1(0);
            cplx zp(1);
            for (int d = 0; d <= dm; ++d) {
                st += vt[d] * zp;
                s1 += v1[d] * zp;
                zp *= z;
            }
            if (s1 == cplx(0)) throw QksError(ErrorCode::PoleHit, "vanishing bare vertex");
            return st / s1;
        };
        const cplx r_full = ratio_at(opt.d_max);
        const cplx r_less = ratio_at(opt.d_max - 2);
        eps_list.push_back(eps);
        ratios.push_back(r_full);
        stabs.push_back(std::abs(r_full - r_less));
    }

    std::vector<std::size_t> admitted;
    for (std::size_t i = 0; i < ratios.size(); ++i)
        if (stabs[i] < opt.admit_tol) admitted.push_back(i);
    ExtractionResult res;
    res.stabilities = stabs;
    res.points_admitted = static_cast<int>(admitted.size());
    if (admitted.size() < 2)
        throw QksError(ErrorCode::TruncationDominates,
                       "too few q-points converged at this truncation depth");

    const int deg = std::min<int>(opt.fit_degree, static_cast<int>(admitted.size()) - 1);
    // weighted least squares in eps with weights 1/(stab + tiny)
    Mat<cplx> A(static_cast<int>(admitted.size()), deg + 1);
    Mat<cplx> b(static_cast<int>(admitted.size()), 1);
    for (std::size_t r = 0; r < admitted.size(); ++r) {
        const double w = 1.0 / (stabs[admitted[r]] + 1e-12);
        double ep = 1.0;
        for (int c = 0; c <= deg; ++c) {
            A(static_cast<int>(r), c) = cplx(w * ep);
            ep *= eps_list[admitted[r]];
        }
        b(static_cast<int>(r), 0) = cplx(w) * ratios[admitted[r]];
    }
    // normal equations (sizes <= 7 x 3)
    Mat<cplx> At(deg + 1, static_cast<int>(admitted.size()));
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j) At(j, i) = A(i, j);
    auto coef = lu_solve(At * A, At * b);
    res.value = coef(0, 0);

    double disp = 0.0;
    for (std::size_t r = 0; r < admitted.size(); ++r) {
        cplx fit(0);
        double ep = 1.0;
        for (int c = 0; c <= deg; ++c) {
            fit += coef(c, 0) * ep;
            ep *= eps_list[admitted[r]];
        }
        disp = std::max(disp, std::abs(fit - ratios[admitted[r]]));
    }
    double min_stab = 1e300;
    for (auto i : admitted) min_stab = std::min(min_stab, stabs[i]);
    res.error_estimate = disp + min_stab;
    return res;
}

}  // namespace qks
