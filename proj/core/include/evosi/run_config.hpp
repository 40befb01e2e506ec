#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "evosi/degree_model.hpp"

namespace evosi {

// Flat key = value file. Keys before any [section] are global; keys inside [name]
// apply only when `name` is the active section (the CLI passes its subcommand).
class run_config {
public:
    static run_config parse(const std::string& text, const std::string& source = "<string>");
    static run_config load(const std::string& path);

    // view restricted to global keys plus keys of `section` (section wins)
    run_config for_section(const std::string& section) const;

    bool has(const std::string& key) const;
    std::optional<std::string> raw(const std::string& key) const;
    std::vector<std::string> keys() const;

    // typed lookups; a bad value throws config_error naming source, line and field
    std::optional<double> get_double(const std::string& key) const;
    std::optional<std::int64_t> get_int(const std::string& key) const;
    std::optional<bool> get_bool(const std::string& key) const;
    std::optional<std::vector<std::int64_t>> get_int_list(const std::string& key) const;
    std::optional<std::vector<double>> get_double_list(const std::string& key) const;

    std::string where(const std::string& key) const;

private:
    struct entry {
        std::string value;
        int line = 0;
    };
    std::string source_;
    std::map<std::string, entry> global_;
    std::map<std::string, std::map<std::string, entry>> sections_;
    std::map<std::string, entry> view_;
};

// poisson:3, regular:3, explicit:0=0.2,3=0.8, explicit-file:path (two columns k p_k)
degree_model parse_model_spec(const std::string& spec);
std::vector<std::int64_t> parse_int_list(const std::string& s);
std::vector<double> parse_double_list(const std::string& s);

} // namespace evosi
