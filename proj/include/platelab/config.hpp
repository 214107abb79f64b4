#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "platelab/bounds.hpp"
#include "platelab/discretize.hpp"
#include "platelab/families.hpp"

namespace platelab::config {

// Flat key-value config with [section] headers, '#' comments, and parse
// errors that carry line numbers.
class KeyValues {
  public:
    static KeyValues parse_file(const std::string& path);
    static KeyValues parse_string(const std::string& text, const std::string& origin);

    bool has(const std::string& key) const; // key = "section.name"
    std::string get(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    std::vector<std::string> get_list(const std::string& key) const; // comma-separated

    const std::map<std::string, std::string>& raw() const { return values_; }

  private:
    std::map<std::string, std::string> values_;
    std::map<std::string, int> lines_;
    std::string origin_;
    [[noreturn]] void fail(const std::string& key, const std::string& what) const;
};

struct ExperimentConfig {
    discretize::DomainSpec domain;
    bool has_domain = false;
    int k_max = 10;

    bounds::BoundContext context;

    std::vector<bounds::InequalityId> verify_ids; // empty: all applicable
    std::vector<families::FGCouple> couples;
    int verify_k_min = 1;
    int verify_k_max = 10;
    double tol_rel = 1e-10;
    std::string spectrum_csv; // verify a stored spectrum instead of solving

    std::vector<bounds::InequalityId> bound_ids;
    int bound_k_min = 1;
    int bound_k_max = 10;

    std::string out_dir = "out";
    std::uint64_t seed = 1;

    static ExperimentConfig from_file(const std::string& path);
    static ExperimentConfig from_values(const KeyValues& kv);
};

families::FGCouple couple_from_descriptor(const std::string& descriptor);

} // namespace platelab::config
