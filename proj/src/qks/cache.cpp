#include "qks/cache.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace qks {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_set(std::ostream& os, const ModelParams& params, const cplx& hbar_used,
               const SolutionSet& set) {
    for (const auto& sol : set.solutions) {
        os << "solution " << set.n << " " << set.k << " " << fmt(set.z.real()) << " "
           << fmt(set.z.imag()) << " " << params.hash() << " " << fmt(hbar_used.real()) << " "
           << fmt(hbar_used.imag()) << " " << sol.origin_mask << " " << fmt(sol.residual_norm);
        for (const auto& r : sol.roots) os << " " << fmt(r.real()) << " " << fmt(r.imag());
        os << "\n";
    }
}

}  // namespace

void SolutionCache::save(const std::string& path, const ModelParams& params, const cplx& hbar_used,
                         const std::vector<SolutionSet>& sets) {
    std::ofstream f(path);
    if (!f) throw QksError(ErrorCode::IoError, "cannot open cache file " + path);
    f << "# qkslab solution cache v1\n";
    for (const auto& s : sets) write_set(f, params, hbar_used, s);
}

void SolutionCache::append(const std::string& path, const ModelParams& params,
                           const cplx& hbar_used, const SolutionSet& set) {
    const bool fresh = !std::filesystem::exists(path);
    std::ofstream f(path, std::ios::app);
    if (!f) throw QksError(ErrorCode::IoError, "cannot open cache file " + path);
    if (fresh) f << "# qkslab solution cache v1\n";
    write_set(f, params, hbar_used, set);
}

std::vector<SolutionSet> SolutionCache::load(const std::string& path, const ModelParams& params,
                                             const cplx& hbar_used) {
    std::ifstream f(path);
    if (!f) throw QksError(ErrorCode::IoError, "cannot open cache file " + path);
    std::map<std::tuple<int, int, double, double>, SolutionSet> sets;
    std::string line;
    const auto want_hash = params.hash();
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream is(line);
        std::string tag;
        is >> tag;
        if (tag != "solution") continue;
        int n, k;
        double zr, zi, hr, hi, resid;
        std::uint64_t hash;
        std::uint32_t origin;
        is >> n >> k >> zr >> zi >> hash >> hr >> hi >> origin >> resid;
        if (!is) throw QksError(ErrorCode::IoError, "malformed cache record");
        if (hash != want_hash) continue;
        if (cplx(hr, hi) != hbar_used) continue;
        BetheSolution sol;
        sol.z = {zr, zi};
        sol.origin_mask = origin;
        sol.residual_norm = resid;
        for (int i = 0; i < k; ++i) {
            double rr, ri;
            is >> rr >> ri;
            if (!is) throw QksError(ErrorCode::IoError, "malformed cache roots");
            sol.roots.emplace_back(rr, ri);
        }
        auto& set = sets[{n, k, zr, zi}];
        set.n = n;
        set.k = k;
        set.z = {zr, zi};
        set.solutions.push_back(std::move(sol));
    }
    std::vector<SolutionSet> out;
    for (auto& [key, set] : sets) {
        set.complete = static_cast<long>(set.solutions.size()) == binomial(set.n, set.k);
        out.push_back(std::move(set));
    }
    if (out.empty())
        throw QksError(ErrorCode::CacheMismatch, "cache holds no records for these parameters");
    return out;
}

bool SolutionCache::exists_nonempty(const std::string& path) {
    std::error_code ec;
    return std::filesystem::exists(path, ec) && std::filesystem::file_size(path, ec) > 0;
}

std::string default_cache_dir() {
    if (const char* env = std::getenv("QKS_CACHE_DIR")) return env;
    return ".";
}

}  // namespace qks
