#include "qks/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "qks/errors.hpp"

namespace qks {

using nlohmann::ordered_json;

namespace {

ordered_json cplx_to_json(const cplx& v) {
    return ordered_json{{"re", v.real()}, {"im", v.imag()}};
}

cplx cplx_from_json(const ordered_json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_object()) {
        for (const auto& [key, val] : j.items())
            if (key != "re" && key != "im")
                throw QksError(ErrorCode::InvalidArgument, "unknown key in complex value: " + key);
        return {j.value("re", 0.0), j.value("im", 0.0)};
    }
    throw QksError(ErrorCode::InvalidArgument, "complex value must be number or {re, im}");
}

void require_keys(const ordered_json& j, const std::set<std::string>& allowed,
                  const std::string& where) {
    for (const auto& [key, val] : j.items())
        if (!allowed.count(key))
            throw QksError(ErrorCode::InvalidArgument, "unknown key '" + key + "' in " + where);
}

}  // namespace

ModelParams RunConfig::to_params() const {
    return make_params(n, a, hbar, q, precision_bits, genericity_tol);
}

std::string RunConfig::serialize() const {
    ordered_json j;
    j["params"]["n"] = n;
    j["params"]["a"] = ordered_json::array();
    for (const auto& v : a) j["params"]["a"].push_back(cplx_to_json(v));
    j["params"]["hbar"] = cplx_to_json(hbar);
    j["params"]["q"] = cplx_to_json(q);
    j["params"]["precision_bits"] = precision_bits;
    j["params"]["genericity_tol"] = genericity_tol;
    j["task"]["checks"] = checks;
    j["task"]["tolerances"] = tolerances;
    j["task"]["series_order"] = series_order;
    j["task"]["d_max"] = d_max;
    j["task"]["z"] = ordered_json::array();
    for (const auto& v : z_list) j["task"]["z"].push_back(cplx_to_json(v));
    j["task"]["sabotage"] = sabotage;
    j["io"]["cache_path"] = cache_path;
    j["io"]["report_path"] = report_path;
    j["io"]["format"] = format;
    return j.dump(2) + "\n";
}

RunConfig RunConfig::parse(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw QksError(ErrorCode::InvalidArgument, std::string("config is not valid JSON: ") + e.what());
    }
    require_keys(j, {"params", "task", "io"}, "config root");
    RunConfig c;
    if (j.contains("params")) {
        const auto& p = j["params"];
        require_keys(p, {"n", "a", "hbar", "q", "precision_bits", "genericity_tol"}, "params");
        c.n = p.value("n", c.n);
        if (p.contains("a")) {
            c.a.clear();
            for (const auto& v : p["a"]) c.a.push_back(cplx_from_json(v));
        }
        if (p.contains("hbar")) c.hbar = cplx_from_json(p["hbar"]);
        if (p.contains("q")) c.q = cplx_from_json(p["q"]);
        c.precision_bits = p.value("precision_bits", c.precision_bits);
        c.genericity_tol = p.value("genericity_tol", c.genericity_tol);
    }
    if (j.contains("task")) {
        const auto& t = j["task"];
        require_keys(t, {"checks", "tolerances", "series_order", "d_max", "z", "sabotage"}, "task");
        if (t.contains("checks")) c.checks = t["checks"].get<std::vector<std::string>>();
        if (t.contains("tolerances"))
            c.tolerances = t["tolerances"].get<std::map<std::string, double>>();
        c.series_order = t.value("series_order", c.series_order);
        c.d_max = t.value("d_max", c.d_max);
        if (t.contains("z")) {
            c.z_list.clear();
            for (const auto& v : t["z"]) c.z_list.push_back(cplx_from_json(v));
        }
        c.sabotage = t.value("sabotage", c.sabotage);
    }
    if (j.contains("io")) {
        const auto& io = j["io"];
        require_keys(io, {"cache_path", "report_path", "format"}, "io");
        c.cache_path = io.value("cache_path", c.cache_path);
        c.report_path = io.value("report_path", c.report_path);
        c.format = io.value("format", c.format);
        if (c.format != "json" && c.format != "csv")
            throw QksError(ErrorCode::InvalidArgument, "format must be json or csv");
    }
    if (c.a.empty())
        for (int i = 0; i < c.n; ++i) c.a.emplace_back(1.0 + 0.3 * i, 0.0);
    return c;
}

RunConfig RunConfig::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw QksError(ErrorCode::IoError, "cannot open config " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return parse(os.str());
}

}  // namespace qks
