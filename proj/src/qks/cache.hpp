#pragma once

#include <string>
#include <vector>

#include "qks/bethe.hpp"
#include "qks/params.hpp"

namespace qks {

/// Text-based solution cache.  One record per solution:
///   solution n k z_re z_im params_hash hbar_re hbar_im origin_mask residual s1_re s1_im ...
/// Values are printed with 17 significant digits, so a round trip is exact
/// at double precision.
struct SolutionCache {
    static void save(const std::string& path, const ModelParams& params, const cplx& hbar_used,
                     const std::vector<SolutionSet>& sets);
    /// Append to an existing file (creating it if needed).
    static void append(const std::string& path, const ModelParams& params, const cplx& hbar_used,
                       const SolutionSet& set);
    /// Load every record matching the params hash; throws CacheMismatch if
    /// the file exists but holds nothing for these parameters.
    static std::vector<SolutionSet> load(const std::string& path, const ModelParams& params,
                                         const cplx& hbar_used);
    static bool exists_nonempty(const std::string& path);
};

std::string default_cache_dir();

}  // namespace qks
