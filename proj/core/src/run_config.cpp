#include "evosi/run_config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "evosi/errors.hpp"

namespace evosi {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

bool to_double(const std::string& s, double& v) {
    const char* b = s.data();
    const char* e = b + s.size();
    auto r = std::from_chars(b, e, v);
    return r.ec == std::errc() && r.ptr == e;
}

bool to_int(const std::string& s, std::int64_t& v) {
    const char* b = s.data();
    const char* e = b + s.size();
    auto r = std::from_chars(b, e, v);
    if (r.ec == std::errc() && r.ptr == e) return true;
    // allow 1e5 style integers
    double d;
    if (to_double(s, d) && d == static_cast<double>(static_cast<std::int64_t>(d))) {
        v = static_cast<std::int64_t>(d);
        return true;
    }
    return false;
}

} // namespace

run_config run_config::parse(const std::string& text, const std::string& source) {
    run_config c;
    c.source_ = source;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3)
                throw config_error(source + ":" + std::to_string(lineno) + ": malformed section header '" + line + "'");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error(source + ":" + std::to_string(lineno) + ": expected 'key = value', got '" + line + "'");
        auto key = trim(line.substr(0, eq));
        auto value = trim(line.substr(eq + 1));
        if (key.empty())
            throw config_error(source + ":" + std::to_string(lineno) + ": empty key");
        std::replace(key.begin(), key.end(), '-', '_');
        auto& target = section.empty() ? c.global_ : c.sections_[section];
        if (target.count(key))
            throw config_error(source + ":" + std::to_string(lineno) + ": field '" + key + "' set twice");
        target[key] = {value, lineno};
    }
    c.view_ = c.global_;
    return c;
}

run_config run_config::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path);
}

run_config run_config::for_section(const std::string& section) const {
    run_config c = *this;
    c.view_ = global_;
    auto it = sections_.find(section);
    if (it != sections_.end())
        for (const auto& [k, v] : it->second) c.view_[k] = v;
    return c;
}

bool run_config::has(const std::string& key) const { return view_.count(key) > 0; }

std::optional<std::string> run_config::raw(const std::string& key) const {
    auto it = view_.find(key);
    if (it == view_.end()) return std::nullopt;
    return it->second.value;
}

std::vector<std::string> run_config::keys() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : view_) out.push_back(k);
    return out;
}

std::string run_config::where(const std::string& key) const {
    auto it = view_.find(key);
    int line = it == view_.end() ? 0 : it->second.line;
    return source_ + ":" + std::to_string(line) + ": field '" + key + "'";
}

std::optional<double> run_config::get_double(const std::string& key) const {
    auto r = raw(key);
    if (!r) return std::nullopt;
    double v;
    if (!to_double(*r, v)) throw config_error(where(key) + ": expected a number, got '" + *r + "'");
    return v;
}

std::optional<std::int64_t> run_config::get_int(const std::string& key) const {
    auto r = raw(key);
    if (!r) return std::nullopt;
    std::int64_t v;
    if (!to_int(*r, v)) throw config_error(where(key) + ": expected an integer, got '" + *r + "'");
    return v;
}

std::optional<bool> run_config::get_bool(const std::string& key) const {
    auto r = raw(key);
    if (!r) return std::nullopt;
    std::string s = *r;
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return std::tolower(ch); });
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw config_error(where(key) + ": expected true/false, got '" + *r + "'");
}

std::optional<std::vector<std::int64_t>> run_config::get_int_list(const std::string& key) const {
    auto r = raw(key);
    if (!r) return std::nullopt;
    try {
        return parse_int_list(*r);
    } catch (const config_error& e) {
        throw config_error(where(key) + ": " + e.what());
    }
}

std::optional<std::vector<double>> run_config::get_double_list(const std::string& key) const {
    auto r = raw(key);
    if (!r) return std::nullopt;
    try {
        return parse_double_list(*r);
    } catch (const config_error& e) {
        throw config_error(where(key) + ": " + e.what());
    }
}

std::vector<std::int64_t> parse_int_list(const std::string& s) {
    std::vector<std::int64_t> out;
    for (const auto& item : split(s, ',')) {
        std::int64_t v;
        if (!to_int(item, v)) throw config_error("expected an integer, got '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw config_error("empty list");
    return out;
}

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    for (const auto& item : split(s, ',')) {
        double v;
        if (!to_double(item, v)) throw config_error("expected a number, got '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw config_error("empty list");
    return out;
}

namespace {

degree_model pmf_from_pairs(const std::vector<std::pair<std::int64_t, double>>& pairs) {
    std::int64_t kmax = 0;
    for (const auto& [k, p] : pairs) {
        if (k < 0 || k > 100000) throw config_error("degree " + std::to_string(k) + " out of range");
        if (!(p >= 0.0)) throw config_error("negative probability for degree " + std::to_string(k));
        kmax = std::max(kmax, k);
    }
    std::vector<double> pk(static_cast<std::size_t>(kmax) + 1, 0.0);
    for (const auto& [k, p] : pairs) pk[static_cast<std::size_t>(k)] += p;
    try {
        return degree_model::explicit_pmf(std::move(pk));
    } catch (const std::exception& e) {
        throw config_error(std::string("invalid pmf: ") + e.what());
    }
}

} // namespace

degree_model parse_model_spec(const std::string& spec) {
    auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw config_error("model spec '" + spec + "' must look like kind:params");
    auto kind = trim(spec.substr(0, colon));
    auto rest = trim(spec.substr(colon + 1));
    if (kind == "poisson") {
        double mu;
        if (!to_double(rest, mu) || !(mu > 0.0)) throw config_error("poisson mean must be positive, got '" + rest + "'");
        return degree_model::poisson(mu);
    }
    if (kind == "regular") {
        std::int64_t d;
        if (!to_int(rest, d) || d < 1 || d > 10000) throw config_error("regular degree must be a positive integer, got '" + rest + "'");
        return degree_model::regular(static_cast<int>(d));
    }
    if (kind == "explicit") {
        std::vector<std::pair<std::int64_t, double>> pairs;
        for (const auto& item : split(rest, ',')) {
            auto eq = item.find('=');
            std::int64_t k;
            double p;
            if (eq == std::string::npos || !to_int(trim(item.substr(0, eq)), k) ||
                !to_double(trim(item.substr(eq + 1)), p))
                throw config_error("explicit pmf entry '" + item + "' must look like k=p");
            pairs.emplace_back(k, p);
        }
        if (pairs.empty()) throw config_error("explicit pmf is empty");
        return pmf_from_pairs(pairs);
    }
    if (kind == "explicit-file") {
        std::ifstream in(rest);
        if (!in) throw config_error("cannot open pmf file '" + rest + "'");
        std::vector<std::pair<std::int64_t, double>> pairs;
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            std::replace(line.begin(), line.end(), ',', ' ');
            std::istringstream ls(line);
            std::string a, b;
            if (!(ls >> a)) continue;
            std::int64_t k;
            double p;
            if (!(ls >> b) || !to_int(a, k) || !to_double(b, p))
                throw config_error(rest + ":" + std::to_string(lineno) + ": expected 'k p_k'");
            pairs.emplace_back(k, p);
        }
        if (pairs.empty()) throw config_error("pmf file '" + rest + "' is empty");
        return pmf_from_pairs(pairs);
    }
    throw config_error("unknown model kind '" + kind + "' (poisson, regular, explicit, explicit-file)");
}

} // namespace evosi
