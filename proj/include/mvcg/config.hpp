#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "mvcg/env.hpp"
#include "mvcg/harness.hpp"

namespace mvcg {

/// Flat key/value view of a config: sections flatten to "section.key".
/// Accepts the plain-text format (diff-friendly, '#' comments, [sections])
/// and JSON with one level of nesting. Typed getters throw diagnostics that
/// name the offending key.
class KeyValues {
public:
    static KeyValues parse_text(const std::string& text);
    static KeyValues parse_json(const std::string& text);
    static KeyValues parse_auto(const std::string& text);
    static KeyValues load_file(const std::string& path);

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    void set(const std::string& key, const std::string& value) { values_[key] = value; }

    std::string get_string(const std::string& key, const std::string& fallback) const;
    int get_int(const std::string& key, int fallback) const;
    double get_double(const std::string& key, double fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    std::vector<int> get_int_list(const std::string& key, std::vector<int> fallback) const;

    /// Throws if any present key with the given prefix is not in `allowed`
    /// (checked against the part after the prefix).
    void check_known(const std::string& prefix, const std::set<std::string>& allowed) const;

    const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

InstanceSpec instance_spec_from(const KeyValues& kv, const std::string& prefix = "instance.");

/// Parses one agent strategy spec: truthful | zero | one | complement |
/// scale:<c> | switch:<r>:<spec>.
ReportingStrategy strategy_from_string(const std::string& text, const std::string& key);

ExperimentConfig experiment_config_from(const KeyValues& kv);

} // namespace mvcg
