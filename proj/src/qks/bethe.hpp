#pragma once

#include <algorithm>
#include <complex>
#include <optional>
#include <vector>

#include "qks/combinatorics.hpp"
#include "qks/matrix.hpp"
#include "qks/params.hpp"
#include "qks/symmetric_functions.hpp"

namespace qks {

/// The three equivalent presentations of the Bethe equations.  The solver
/// canonicalizes everything to Geometric:
///   prod_j (s_i - a_j)/(h a_j - s_i) = z h^{-n/2} prod_{j!=i} (s_i h - s_j)/(s_i - s_j h).
/// Saddle is literally the same system rearranged.  Aba(h, Z) maps to
/// Geometric(1/h, (-1)^n Z^2); the sign table is frozen and asserted in tests.
enum class BetheConvention { Geometric, Saddle, Aba };

struct BetheSolution {
    std::vector<cplx> roots;  // sorted by (Re, Im)
    cplx z{};
    double residual_norm = 0.0;
    std::uint32_t origin_mask = 0;
    int path_steps = 0;
    BetheConvention convention = BetheConvention::Geometric;
    int precision_bits = 53;
};

struct StepControl {
    double newton_tol = 1e-12;
    int max_newton_iters = 40;
    double initial_step = 1.0 / 16.0;
    double min_step = 1e-7;
    int grow_after = 3;
    double collision_tol = 1e-5;
    double dedup_tol = 1e-8;
};

/// Bethe system in the canonical geometric form at anisotropy `hbar`.
template <class C>
class BetheSystem {
  public:
    BetheSystem(int n, int k, std::vector<C> a, C hbar)
        : n_(n), k_(k), a_(std::move(a)), hbar_(hbar), rt_(hbar_) {}

    static BetheSystem from_params(const ModelParams& p, int k) {
        std::vector<C> a;
        a.reserve(p.a.size());
        for (const auto& v : p.a) a.push_back(scalar_traits<C>::from(v));
        return BetheSystem(p.n, k, std::move(a), scalar_traits<C>::from(p.hbar));
    }

    int n() const { return n_; }
    int k() const { return k_; }
    const C& hbar() const { return hbar_; }
    const std::vector<C>& a() const { return a_; }

    /// Cleared-denominator residual
    ///   R_i = prod_j (s_i - a_j) prod_{j!=i} (s_i - s_j h)
    ///       - z h^{-n/2} prod_j (h a_j - s_i) prod_{j!=i} (s_i h - s_j)
    std::vector<C> residual(const std::vector<C>& s, const C& z) const {
        std::vector<C> r(k_);
        const C pref = z * rt_.half(-n_);
        for (int i = 0; i < k_; ++i) {
            C lhs(1), rhs(pref);
            for (int j = 0; j < n_; ++j) {
                lhs *= s[i] - a_[j];
                rhs *= hbar_ * a_[j] - s[i];
            }
            for (int j = 0; j < k_; ++j) {
                if (j == i) continue;
                lhs *= s[i] - s[j] * hbar_;
                rhs *= s[i] * hbar_ - s[j];
            }
            r[i] = lhs - rhs;
        }
        return r;
    }

    /// Logarithmic residual log(LHS) - log(RHS) per equation, for
    /// diagnostics; each component is defined modulo 2 pi i.
    std::vector<C> residual_log(const std::vector<C>& s, const C& z, double pole_tol = 1e-12) const {
        using std::log;
        std::vector<C> r(k_);
        for (int i = 0; i < k_; ++i) {
            C lhs(1), rhs(z * rt_.half(-n_));
            for (int j = 0; j < n_; ++j) {
                lhs *= s[i] - a_[j];
                rhs *= hbar_ * a_[j] - s[i];
            }
            for (int j = 0; j < k_; ++j) {
                if (j == i) continue;
                lhs *= s[i] - s[j] * hbar_;
                rhs *= s[i] * hbar_ - s[j];
            }
            if (abs_val(rhs) <= typename scalar_traits<C>::real_type(pole_tol))
                throw QksError(ErrorCode::PoleHit, "log residual undefined on a pole");
            r[i] = log(lhs / rhs);
        }
        return r;
    }

    /// residual and analytic Jacobian d R_i / d s_l
    void residual_jacobian(const std::vector<C>& s, const C& z, std::vector<C>& r,
                           Mat<C>& jac) const {
        r.assign(k_, C(0));
        jac = Mat<C>(k_, k_);
        const C pref = z * rt_.half(-n_);
        for (int i = 0; i < k_; ++i) {
            C pa(1), dpa(0);  // prod (s_i - a_j) and d/ds_i
            for (int j = 0; j < n_; ++j) {
                dpa = dpa * (s[i] - a_[j]) + pa;
                pa = pa * (s[i] - a_[j]);
            }
            C pb(1), dpb(0);  // prod_{j!=i} (s_i - s_j h)
            for (int j = 0; j < k_; ++j) {
                if (j == i) continue;
                dpb = dpb * (s[i] - s[j] * hbar_) + pb;
                pb = pb * (s[i] - s[j] * hbar_);
            }
            C pc(1), dpc(0);  // prod (h a_j - s_i)
            for (int j = 0; j < n_; ++j) {
                dpc = dpc * (hbar_ * a_[j] - s[i]) - pc;
                pc = pc * (hbar_ * a_[j] - s[i]);
            }
            C pd(1), dpd(0);  // prod_{j!=i} (s_i h - s_j)
            for (int j = 0; j < k_; ++j) {
                if (j == i) continue;
                dpd = dpd * (s[i] * hbar_ - s[j]) + pd * hbar_;
                pd = pd * (s[i] * hbar_ - s[j]);
            }
            r[i] = pa * pb - pref * pc * pd;
            jac(i, i) = dpa * pb + pa * dpb - pref * (dpc * pd + pc * dpd);
            for (int l = 0; l < k_; ++l) {
                if (l == i) continue;
                C pbl(1), pdl(1);
                for (int j = 0; j < k_; ++j) {
                    if (j == i || j == l) continue;
                    pbl *= s[i] - s[j] * hbar_;
                    pdl *= s[i] * hbar_ - s[j];
                }
                jac(i, l) = pa * (-hbar_) * pbl - pref * pc * (-C(1)) * pdl;
            }
        }
    }

    /// Scale of the residual polynomial, used for relative convergence.
    typename scalar_traits<C>::real_type residual_scale(const std::vector<C>& s, const C& z) const {
        using R = typename scalar_traits<C>::real_type;
        R amax(0);
        for (const auto& v : a_) amax = std::max(amax, abs_val(v));
        for (const auto& v : s) amax = std::max(amax, abs_val(v));
        R scale = std::max(R(1), abs_val(z));
        const R habs = std::max(abs_val(hbar_), abs_val(C(1) / hbar_));
        return scale * int_pow_real(std::max(amax * (R(1) + habs), R(1)), n_ + k_ - 1);
    }

  private:
    static typename scalar_traits<C>::real_type int_pow_real(
        typename scalar_traits<C>::real_type b, int e) {
        typename scalar_traits<C>::real_type r(1);
        for (int i = 0; i < e; ++i) r *= b;
        return r;
    }

    int n_, k_;
    std::vector<C> a_;
    C hbar_;
    RootCache<C> rt_;
};

/// All solutions of the z = 0 system: k-subsets of the a_j.
template <class C>
std::vector<std::vector<C>> classical_solutions(const BetheSystem<C>& sys) {
    std::vector<std::vector<C>> out;
    for (const auto& fp : enumerate_fixed_points(sys.n(), sys.k())) {
        std::vector<C> roots;
        for (int i = 0; i < sys.n(); ++i)
            if (fp.mask & (1u << i)) roots.push_back(sys.a()[i]);
        out.push_back(std::move(roots));
    }
    return out;
}

namespace detail {

template <class C>
bool newton_polish(const BetheSystem<C>& sys, std::vector<C>& s, const C& z,
                   const StepControl& ctrl, double* out_resid) {
    using R = typename scalar_traits<C>::real_type;
    using std::exp;
    const int k = sys.k();
    std::vector<C> r;
    Mat<C> jac;
    const R scale = sys.residual_scale(s, z);
    // Newton in log s_i when every root stays away from the origin
    // (better conditioned for spread-out roots), affine otherwise.
    R amax(0);
    for (const auto& v : sys.a()) amax = std::max(amax, abs_val(v));
    bool log_coords = true;
    for (const auto& v : s)
        if (abs_val(v) < amax * R(1e-3)) log_coords = false;
    for (int it = 0; it < ctrl.max_newton_iters; ++it) {
        sys.residual_jacobian(s, z, r, jac);
        R rn(0);
        for (const auto& v : r) rn = std::max(rn, abs_val(v));
        if (rn <= R(ctrl.newton_tol) * scale) {
            if (out_resid) *out_resid = scalar_traits<C>::to_double(rn / scale);
            return true;
        }
        if (log_coords)
            for (int i = 0; i < k; ++i)
                for (int l = 0; l < k; ++l) jac(i, l) *= s[l];
        Mat<C> rhs(k, 1);
        for (int i = 0; i < k; ++i) rhs(i, 0) = r[i];
        Mat<C> ds;
        try {
            ds = lu_solve(jac, rhs);
        } catch (const QksError&) {
            return false;
        }
        for (int i = 0; i < k; ++i) {
            if (log_coords) {
                s[i] *= exp(-ds(i, 0));
                if (abs_val(s[i]) < amax * R(1e-3)) log_coords = false;
            } else {
                s[i] -= ds(i, 0);
            }
        }
    }
    return false;
}

template <class C>
double min_pairwise_gap(const std::vector<C>& s) {
    double m = 1e300;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j) {
            const double d = scalar_traits<C>::to_double(abs_val(s[i] - s[j]));
            const double sc = std::max(
                {scalar_traits<C>::to_double(abs_val(s[i])), scalar_traits<C>::to_double(abs_val(s[j])), 1e-30});
            m = std::min(m, d / sc);
        }
    return m;
}

}  // namespace detail

inline bool cplx_less(const cplx& a, const cplx& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

/// Track the solution with classical origin `origin_mask` from z = 0 to
/// `z_target` along the straight path z(t) = t z_target with adaptive
/// stepping: the step halves on a Newton failure and doubles after
/// `grow_after` clean steps.  Root collisions inside the tracked multiset
/// raise PathCollision; step underflow raises StepUnderflow.
template <class C>
BetheSolution continue_solution(const BetheSystem<C>& sys, std::uint32_t origin_mask,
                                const cplx& z_target, const StepControl& ctrl = {}) {
    std::vector<C> s;
    for (int i = 0; i < sys.n(); ++i)
        if (origin_mask & (1u << i)) s.push_back(sys.a()[i]);
    if (static_cast<int>(s.size()) != sys.k())
        throw QksError(ErrorCode::InvalidArgument, "origin mask has wrong cardinality");

    const C zt = scalar_traits<C>::from(z_target);
    double t = 0.0, step = ctrl.initial_step;
    int clean = 0, steps = 0;
    double resid = 0.0;
    std::vector<C> best = s;
    while (t < 1.0) {
        const double tn = std::min(1.0, t + step);
        std::vector<C> trial = best;
        const bool ok = detail::newton_polish(sys, trial, zt * C(tn), ctrl, &resid);
        ++steps;
        if (ok && sys.k() >= 2 && detail::min_pairwise_gap(trial) < ctrl.collision_tol)
            throw QksError(ErrorCode::PathCollision, "tracked roots collided along the path");
        if (ok) {
            best = trial;
            t = tn;
            if (++clean >= ctrl.grow_after) {
                step = std::min(step * 2.0, 0.25);
                clean = 0;
            }
        } else {
            step *= 0.5;
            clean = 0;
            if (step < ctrl.min_step)
                throw QksError(ErrorCode::StepUnderflow, "continuation step underflow");
        }
    }

    BetheSolution sol;
    sol.roots.reserve(best.size());
    for (const auto& v : best) sol.roots.push_back(scalar_traits<C>::to_cplx(v));
    std::sort(sol.roots.begin(), sol.roots.end(), cplx_less);
    sol.z = z_target;
    sol.residual_norm = resid;
    sol.origin_mask = origin_mask;
    sol.path_steps = steps;
    sol.precision_bits = scalar_traits<C>::precision_bits;
    return sol;
}

struct SolutionSet {
    int n = 0, k = 0;
    cplx z{};
    std::vector<BetheSolution> solutions;  // one per classical origin, canonical order
    bool complete = false;
};

/// Continue every classical origin to z, deduplicate (a merge at generic
/// parameters is reported as a genericity warning), escalate the failed
/// paths to 256-bit floats, and flag completeness.
inline SolutionSet solve_all(const ModelParams& params, int k, const cplx& z,
                             const StepControl& ctrl = {},
                             std::vector<std::string>* warnings = nullptr) {
    SolutionSet set;
    set.n = params.n;
    set.k = k;
    set.z = z;
    auto sys = BetheSystem<cplx>::from_params(params, k);
    auto big_sys = BetheSystem<big_cplx>::from_params(params, k);
    for (const auto& fp : enumerate_fixed_points(params.n, k)) {
        std::optional<BetheSolution> sol;
        try {
            sol = continue_solution(sys, fp.mask, z, ctrl);
        } catch (const QksError&) {
            // escalate precision once, with a finer minimum step
            StepControl fine = ctrl;
            fine.min_step = ctrl.min_step * 1e-3;
            fine.newton_tol = 1e-30;
            try {
                sol = continue_solution(big_sys, fp.mask, z, fine);
            } catch (const QksError&) {
                sol.reset();
            }
        }
        if (sol) set.solutions.push_back(std::move(*sol));
    }
    // dedup as sorted multisets
    std::vector<std::size_t> drop;
    for (std::size_t i = 0; i < set.solutions.size(); ++i)
        for (std::size_t j = i + 1; j < set.solutions.size(); ++j) {
            const auto& A = set.solutions[i].roots;
            const auto& B = set.solutions[j].roots;
            double d = 0, scale = 0;
            for (std::size_t t = 0; t < A.size(); ++t) {
                d = std::max(d, std::abs(A[t] - B[t]));
                scale = std::max({scale, std::abs(A[t]), 1e-30});
            }
            if (d / scale < ctrl.dedup_tol) {
                drop.push_back(j);
                if (warnings)
                    warnings->push_back("solutions from two origins merged at generic parameters");
            }
        }
    if (!drop.empty()) {
        std::sort(drop.begin(), drop.end());
        drop.erase(std::unique(drop.begin(), drop.end()), drop.end());
        for (auto it = drop.rbegin(); it != drop.rend(); ++it)
            set.solutions.erase(set.solutions.begin() + static_cast<std::ptrdiff_t>(*it));
    }
    set.complete = static_cast<long>(set.solutions.size()) == binomial(params.n, k);
    return set;
}

/// Permutation-invariant evaluation of a symmetric function at the roots.
inline cplx symmetric_eval(const SymmetricFunctionSpec<cplx>& spec, const std::vector<cplx>& roots) {
    return spec(roots);
}

}  // namespace qks
