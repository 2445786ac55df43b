#include "qks/params.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace qks {

std::string format_cplx(const cplx& v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g%+.17gi", v.real(), v.imag());
    return buf;
}

cplx parse_cplx(const std::string& text) {
    // forms: "re", "re+imi", "re-imi"
    const char* s = text.c_str();
    char* end = nullptr;
    double re = std::strtod(s, &end);
    if (end == s) throw QksError(ErrorCode::InvalidArgument, "bad complex literal: " + text);
    while (*end == ' ') ++end;
    if (*end == '\0') return {re, 0.0};
    const char* s2 = end;
    double im = std::strtod(s2, &end);
    if (end == s2 || (*end != 'i' && *end != 'j'))
        throw QksError(ErrorCode::InvalidArgument, "bad complex literal: " + text);
    return {re, im};
}

std::string ModelParams::canonical_text() const {
    std::ostringstream os;
    os << "n=" << n << ";a=";
    for (const auto& v : a) os << format_cplx(v) << ",";
    os << ";hbar=" << format_cplx(hbar) << ";q=" << format_cplx(q)
       << ";precision=" << precision_bits;
    return os.str();
}

std::uint64_t ModelParams::hash() const {
    // FNV-1a over the canonical serialization
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : canonical_text()) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

ModelParams make_params(int n, std::vector<cplx> a, cplx hbar, cplx q, int precision_bits,
                        double genericity_tol) {
    if (n < 1) throw QksError(ErrorCode::InvalidArgument, "n must be >= 1");
    if (static_cast<int>(a.size()) != n)
        throw QksError(ErrorCode::InvalidArgument, "need exactly n equivariant parameters");
    if (precision_bits < 2) throw QksError(ErrorCode::InvalidArgument, "precision_bits too small");

    ModelParams p;
    p.n = n;
    p.a = std::move(a);
    p.hbar = hbar;
    p.q = q;
    p.precision_bits = precision_bits;
    p.genericity_tol = genericity_tol;

    double amax = 0.0;
    for (const auto& v : p.a) amax = std::max(amax, std::abs(v));
    if (amax == 0.0) throw QksError(ErrorCode::DegenerateParameters, "all a_i vanish");

    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(p.a[i] - p.a[j]) / amax <= genericity_tol)
                throw QksError(ErrorCode::DegenerateParameters,
                               "a_" + std::to_string(i + 1) + " and a_" + std::to_string(j + 1) +
                                   " coincide within tolerance");

    if (hbar == cplx(0)) throw QksError(ErrorCode::DegenerateParameters, "hbar must be nonzero");

    // resonance scan  a_i/a_j = hbar^m  for |m| <= 2 k_max (k_max = n)
    const int mmax = 2 * n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const cplx ratio = p.a[i] / p.a[j];
            cplx hm(1.0);
            for (int m = 1; m <= mmax; ++m) {
                hm *= hbar;
                if (std::abs(ratio - hm) <= genericity_tol)
                    p.flags.push_back("a" + std::to_string(i + 1) + "/a" + std::to_string(j + 1) +
                                      " = hbar^" + std::to_string(m) + " within tolerance");
            }
        }

    const double habs = std::abs(hbar);
    if (habs >= 1.0 - genericity_tol && habs <= 1.0 + genericity_tol)
        p.flags.push_back("|hbar| within tolerance of 1 (not fatal, expect ill-conditioning)");

    return p;
}

}  // namespace qks
