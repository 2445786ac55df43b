#include "qks/report.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"
#include "qks/errors.hpp"

namespace qks {

using nlohmann::ordered_json;

std::string VerificationReport::render_structured() const {
    ordered_json j;
    j["schema"] = "qkslab.report.v1";
    j["params_hash"] = params_hash_;
    j["precision_bits"] = precision_bits_;
    j["overall"] = pass() ? "pass" : "fail";
    j["checks"] = ordered_json::array();
    for (const auto& e : entries_) {
        ordered_json c;
        c["check_id"] = e.check_id;
        c["anchor"] = e.anchor;
        c["residual"] = e.residual;
        c["tolerance"] = e.tolerance;
        c["status"] = e.passed ? "pass" : "fail";
        j["checks"].push_back(c);
    }
    return j.dump(2) + "\n";
}

std::string VerificationReport::render_csv() const {
    std::ostringstream os;
    os << "check_id,anchor,residual,tolerance,status\n";
    os << std::setprecision(17);
    for (const auto& e : entries_)
        os << e.check_id << "," << e.anchor << "," << e.residual << "," << e.tolerance << ","
           << (e.passed ? "pass" : "fail") << "\n";
    return os.str();
}

std::string VerificationReport::render_table() const {
    std::ostringstream os;
    os << std::left << std::setw(36) << "check" << std::setw(24) << "anchor" << std::setw(14)
       << "residual" << std::setw(14) << "tolerance" << "status\n";
    for (const auto& e : entries_) {
        std::ostringstream r, t;
        r << std::scientific << std::setprecision(3) << e.residual;
        t << std::scientific << std::setprecision(3) << e.tolerance;
        os << std::left << std::setw(36) << e.check_id << std::setw(24) << e.anchor << std::setw(14)
           << r.str() << std::setw(14) << t.str() << (e.passed ? "PASS" : "FAIL") << "\n";
    }
    os << "overall: " << (pass() ? "PASS" : "FAIL") << "\n";
    return os.str();
}

void VerificationReport::save(const std::string& path, const std::string& format) const {
    std::ofstream f(path);
    if (!f) throw QksError(ErrorCode::IoError, "cannot open report file " + path);
    f << (format == "csv" ? render_csv() : render_structured());
}

VerificationReport VerificationReport::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw QksError(ErrorCode::IoError, "cannot open report file " + path);
    ordered_json j;
    try {
        f >> j;
    } catch (const std::exception& e) {
        throw QksError(ErrorCode::IoError, std::string("malformed report: ") + e.what());
    }
    VerificationReport r;
    r.params_hash_ = j.value("params_hash", 0ull);
    r.precision_bits_ = j.value("precision_bits", 53);
    for (const auto& c : j.at("checks")) {
        CheckEntry e;
        e.check_id = c.at("check_id").get<std::string>();
        e.anchor = c.at("anchor").get<std::string>();
        e.residual = c.at("residual").get<double>();
        e.tolerance = c.at("tolerance").get<double>();
        e.passed = c.at("status").get<std::string>() == "pass";
        r.entries_.push_back(e);
    }
    return r;
}

}  // namespace qks
