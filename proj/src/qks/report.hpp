#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qks {

/// One residual check: identifier, subject anchor, measured residual
/// against its tolerance.
struct CheckEntry {
    std::string check_id;
    std::string anchor;
    double residual = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

/// Ordered collection of check results plus run metadata.  Serialization
/// is deterministic: no timestamps, fixed field order, full precision.
class VerificationReport {
  public:
    void add(const std::string& check_id, const std::string& anchor, double residual,
             double tolerance) {
        entries_.push_back({check_id, anchor, residual, tolerance, residual <= tolerance});
    }
    void add_status(const std::string& check_id, const std::string& anchor, bool ok) {
        entries_.push_back({check_id, anchor, ok ? 0.0 : 1.0, 0.5, ok});
    }

    bool pass() const {
        for (const auto& e : entries_)
            if (!e.passed) return false;
        return true;
    }
    const std::vector<CheckEntry>& entries() const { return entries_; }

    void set_params_hash(std::uint64_t h) { params_hash_ = h; }
    void set_precision_bits(int bits) { precision_bits_ = bits; }
    std::uint64_t params_hash() const { return params_hash_; }
    int precision_bits() const { return precision_bits_; }

    std::string render_structured() const;
    std::string render_csv() const;
    std::string render_table() const;
    void save(const std::string& path, const std::string& format) const;
    static VerificationReport load(const std::string& path);

  private:
    std::vector<CheckEntry> entries_;
    std::uint64_t params_hash_ = 0;
    int precision_bits_ = 53;
};

}  // namespace qks
