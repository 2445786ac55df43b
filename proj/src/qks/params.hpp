#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qks/errors.hpp"
#include "qks/scalar.hpp"

namespace qks {

/// Validated model parameters: chain length n, equivariant characters a_i,
/// anisotropy hbar, box-counting q (vertex series only), working precision.
struct ModelParams {
    int n = 0;
    std::vector<cplx> a;
    cplx hbar{};
    cplx q{};
    int precision_bits = 53;
    double genericity_tol = 1e-6;

    /// Non-fatal warnings from validation (resonance ratios, |hbar| near 1).
    std::vector<std::string> flags;

    /// Digest of the canonical serialization; identifies cached solutions.
    std::uint64_t hash() const;
    std::string canonical_text() const;
};

/// Validates and returns the parameter pack.  Pairwise coincidence of the
/// a_i is fatal (DegenerateParameters); hbar-power resonances and |hbar|
/// close to 1 are recorded as flags.
ModelParams make_params(int n, std::vector<cplx> a, cplx hbar, cplx q, int precision_bits = 53,
                        double genericity_tol = 1e-6);

std::string format_cplx(const cplx& v);
cplx parse_cplx(const std::string& text);

}  // namespace qks
