#pragma once

#include <array>
#include <vector>

#include "qks/graded_operator.hpp"
#include "qks/params.hpp"
#include "qks/scalar.hpp"

namespace qks {

/// Inhomogeneous twisted XXZ chain on n sites.  Chain states live on the
/// same 2^n index set as the fixed-point basis: bit i-1 of the index is the
/// occupation of site i (0 = up).  The monodromy matrix is the ordered
/// product of site L-operators times diag(Z, 1/Z); its entries A, B, C, D
/// act matrix-free via site-by-site 2x2 sweeps.
template <class C>
class XxzChain {
  public:
    XxzChain(const ModelParams& p, const C& twist)
        : n_(p.n), hbar_(scalar_traits<C>::from(p.hbar)), rt_(hbar_), twist_(twist) {
        a_.reserve(p.a.size());
        xi_.reserve(p.a.size());
        for (const auto& v : p.a) {
            a_.push_back(scalar_traits<C>::from(v));
            xi_.push_back(principal_sqrt(a_.back()));
        }
    }

    /// Chain at explicitly given anisotropy (used by adapters that need the
    /// inverted-hbar chain while sharing the a_i).
    XxzChain(int n, std::vector<C> a, const C& hbar, const C& twist)
        : n_(n), hbar_(hbar), rt_(hbar), twist_(twist), a_(std::move(a)) {
        xi_.reserve(a_.size());
        for (const auto& v : a_) xi_.push_back(principal_sqrt(v));
    }

    int n() const { return n_; }
    std::size_t dim() const { return std::size_t(1) << n_; }
    const C& twist() const { return twist_; }
    const C& hbar() const { return hbar_; }

    enum Entry { A = 0, B = 1, Cc = 2, D = 3 };

    /// Apply the monodromy entry T[row][col](u) to a chain vector.
    std::vector<C> apply_entry(int row, int col, const C& u, const std::vector<C>& v) const {
        if (abs_val(u) == typename scalar_traits<C>::real_type(0))
            throw QksError(ErrorCode::ZeroSpectralParameter, "monodromy needs u != 0");
        // twist column factor first: diag(Z, 1/Z) acts on the aux column index
        std::array<std::vector<C>, 2> aux;
        aux[0].assign(dim(), C(0));
        aux[1].assign(dim(), C(0));
        aux[col] = v;
        const C zfac = (col == 0) ? twist_ : C(1) / twist_;
        for (auto& x : aux[col]) x *= zfac;
        // sweep sites n..1 applying the 2x2 aux structure of L_i(u/xi_i)
        for (int site = n_ - 1; site >= 0; --site) {
            std::array<std::vector<C>, 2> next;
            next[0].assign(dim(), C(0));
            next[1].assign(dim(), C(0));
            const C w = u / xi_[site];
            const auto ops = site_ops(w);
            for (int r = 0; r < 2; ++r)
                for (int c = 0; c < 2; ++c) apply_site(ops[r * 2 + c], site, aux[c], next[r]);
            aux = std::move(next);
        }
        return aux[row];
    }

    std::vector<C> apply_transfer(const C& u, const std::vector<C>& v) const {
        auto x = apply_entry(0, 0, u, v);
        auto y = apply_entry(1, 1, u, v);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] += y[i];
        return x;
    }

    /// Materialize an entry as a dense matrix on the 2^n space.
    Mat<C> entry_matrix(int row, int col, const C& u) const {
        Mat<C> m(static_cast<int>(dim()), static_cast<int>(dim()));
        std::vector<C> e(dim(), C(0));
        for (std::size_t j = 0; j < dim(); ++j) {
            e[j] = C(1);
            auto w = apply_entry(row, col, u, e);
            for (std::size_t i = 0; i < dim(); ++i) m(static_cast<int>(i), static_cast<int>(j)) = w[i];
            e[j] = C(0);
        }
        return m;
    }

    /// Transfer matrix as a shift-0 graded operator, plus the largest
    /// off-sector leakage (should be zero in exact arithmetic).
    struct TransferBlocks {
        GradedOperator<C> op;
        double off_sector = 0.0;
    };

    TransferBlocks transfer(const C& u) const {
        TransferBlocks out{GradedOperator<C>(n_, 0), 0.0};
        std::vector<int> rank(dim());
        for (std::uint32_t m = 0; m < dim(); ++m) rank[m] = sector_rank(n_, m);
        std::vector<C> e(dim(), C(0));
        for (int k = 0; k <= n_; ++k) {
            const auto pts = enumerate_fixed_points(n_, k);
            for (std::size_t j = 0; j < pts.size(); ++j) {
                e[pts[j].mask] = C(1);
                auto w = apply_transfer(u, e);
                e[pts[j].mask] = C(0);
                for (std::size_t i = 0; i < dim(); ++i) {
                    if (std::popcount(static_cast<std::uint32_t>(i)) == k)
                        out.op.block(k)(rank[i], static_cast<int>(j)) = w[i];
                    else
                        out.off_sector =
                            std::max(out.off_sector, scalar_traits<C>::to_double(abs_val(w[i])));
                }
            }
        }
        return out;
    }

    std::vector<C> omega_plus() const {
        std::vector<C> v(dim(), C(0));
        v[0] = C(1);
        return v;
    }
    std::vector<C> omega_minus() const {
        std::vector<C> v(dim(), C(0));
        v[dim() - 1] = C(1);
        return v;
    }

    /// B(v_1)...B(v_k) Omega+ for side = +1, C-chain on Omega- for side = -1.
    /// Roots are the s_i; the chain uses v_i = sqrt(s_i), principal branch.
    std::vector<C> bethe_vector(const std::vector<C>& roots, int side, double admis_tol = 1e-8) const {
        check_admissible(roots, admis_tol);
        auto v = side > 0 ? omega_plus() : omega_minus();
        for (const auto& s : roots) {
            const C vs = principal_sqrt(s);
            v = side > 0 ? apply_entry(0, 1, vs, v) : apply_entry(1, 0, vs, v);
        }
        return v;
    }

    /// Transfer eigenvalue on the Bethe vector with the given roots:
    ///   alpha(u) prod (v u^{-1} h^{1/2} - v^{-1} u h^{-1/2})/(v u^{-1} - v^{-1} u) + (dual)
    C transfer_eigenvalue(const C& u, const std::vector<C>& roots, double pole_tol = 1e-10) const {
        if (abs_val(u) == typename scalar_traits<C>::real_type(0))
            throw QksError(ErrorCode::ZeroSpectralParameter, "transfer_eigenvalue needs u != 0");
        const C u2 = u * u;
        for (const auto& s : roots)
            if (abs_val(u2 - s) <= typename scalar_traits<C>::real_type(pole_tol) * abs_val(s))
                throw QksError(ErrorCode::PoleAtSpectralParameter,
                               "u^2 hits a Bethe root; eigenvalue formula is singular there");
        const C rh = rt_.half(1), rhi = rt_.half(-1);
        C alpha = twist_, delta = C(1) / twist_;
        for (int i = 0; i < n_; ++i) {
            alpha *= u / xi_[i] * rh - xi_[i] / u * rhi;
            delta *= u / xi_[i] - xi_[i] / u;
        }
        C ratio_a(1), ratio_d(1);
        for (const auto& s : roots) {
            const C v = principal_sqrt(s);
            ratio_a *= (v / u * rh - u / v * rhi) / (v / u - u / v);
            ratio_d *= (u / v * rh - v / u * rhi) / (u / v - v / u);
        }
        return alpha * ratio_a + delta * ratio_d;
    }

  private:
    struct SiteOp {
        // 2x2 action on one site: entries [out][in]
        std::array<C, 4> m{};
    };

    std::array<SiteOp, 4> site_ops(const C& w) const {
        const C rh = rt_.half(1), rhi = rt_.half(-1);
        const C rq = rt_.quarter(1), rqi = rt_.quarter(-1);
        const C cf = (rh - rhi) * rhi / w;
        std::array<SiteOp, 4> ops{};
        // A = diag(w h^{1/2} - w^{-1} h^{-1/2}, w - w^{-1})
        ops[0].m = {w * rh - rhi / w, C(0), C(0), w - C(1) / w};
        // B: |1><0| with coefficient cf * h^{1/4}
        ops[1].m = {C(0), C(0), cf * rq, C(0)};
        // C: |0><1| with coefficient cf * h^{-1/4}
        ops[2].m = {C(0), cf * rqi, C(0), C(0)};
        // D = diag(w - w^{-1}, w h^{1/2} - w^{-1} h^{-1/2})
        ops[3].m = {w - C(1) / w, C(0), C(0), w * rh - rhi / w};
        return ops;
    }

    void apply_site(const SiteOp& op, int site, const std::vector<C>& in, std::vector<C>& out) const {
        const std::uint32_t bit = 1u << site;
        for (std::uint32_t idx = 0; idx < dim(); ++idx) {
            const C& x = in[idx];
            if (x == C(0)) continue;
            const int b = (idx & bit) ? 1 : 0;
            // out bits 0 and 1 at this site
            if (op.m[0 * 2 + b] != C(0)) out[idx & ~bit] += op.m[0 * 2 + b] * x;
            if (op.m[1 * 2 + b] != C(0)) out[idx | bit] += op.m[1 * 2 + b] * x;
        }
    }

    void check_admissible(const std::vector<C>& roots, double tol) const {
        using R = typename scalar_traits<C>::real_type;
        for (std::size_t i = 0; i < roots.size(); ++i)
            for (std::size_t j = i + 1; j < roots.size(); ++j) {
                const R scale = std::max(abs_val(roots[i]), abs_val(roots[j]));
                if (abs_val(roots[i] - roots[j]) <= R(tol) * scale)
                    throw QksError(ErrorCode::InadmissibleRoots, "coincident Bethe roots");
                if (abs_val(roots[i] - hbar_ * roots[j]) <= R(tol) * scale ||
                    abs_val(roots[j] - hbar_ * roots[i]) <= R(tol) * scale)
                    throw QksError(ErrorCode::InadmissibleRoots,
                                   "Bethe roots on the hbar resonance locus");
            }
    }

    int n_;
    C hbar_;
    RootCache<C> rt_;
    C twist_;
    std::vector<C> a_;
    std::vector<C> xi_;
};

}  // namespace qks
