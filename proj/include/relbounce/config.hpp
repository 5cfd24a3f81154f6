#pragma once

#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "relbounce/model.hpp"
#include "relbounce/trajectory.hpp"

namespace relbounce {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

}  // namespace detail

/// Flat sectioned key = value text.  '#' starts a comment, keys are typed at
/// the point of use, and any key the consumer never asks about is rejected.
class ConfigFile {
   public:
    static ConfigFile parse_stream(std::istream& in) {
        ConfigFile cfg;
        std::string line, section;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            line = detail::trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']')
                    throw ConfigError("config line " + std::to_string(line_no) +
                                      ": malformed section header");
                section = detail::trim(line.substr(1, line.size() - 2));
                cfg.sections_[section];
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos || section.empty())
                throw ConfigError("config line " + std::to_string(line_no) +
                                  ": expected 'key = value' inside a [section]");
            const std::string key = detail::trim(line.substr(0, eq));
            const std::string value = detail::trim(line.substr(eq + 1));
            if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) +
                                               ": empty key");
            if (!cfg.sections_[section].emplace(key, value).second)
                throw ConfigError("config: duplicate key '" + key + "' in [" + section + "]");
        }
        return cfg;
    }

    static ConfigFile parse_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("config: cannot open " + path);
        return parse_stream(in);
    }

    bool has_section(const std::string& s) const { return sections_.count(s) > 0; }

    bool has_key(const std::string& s, const std::string& k) const {
        const auto it = sections_.find(s);
        return it != sections_.end() && it->second.count(k) > 0;
    }

    std::optional<std::string> raw(const std::string& section, const std::string& key) const {
        const auto sec = sections_.find(section);
        if (sec == sections_.end()) return std::nullopt;
        const auto it = sec->second.find(key);
        if (it == sec->second.end()) return std::nullopt;
        consumed_.insert(section + "." + key);
        return it->second;
    }

    double get_double(const std::string& s, const std::string& k, double fallback) const {
        const auto v = raw(s, k);
        if (!v) return fallback;
        try {
            std::size_t pos = 0;
            const double out = std::stod(*v, &pos);
            if (pos != v->size()) throw std::invalid_argument("");
            return out;
        } catch (...) {
            throw ConfigError("config: [" + s + "] " + k + " = '" + *v + "' is not a number");
        }
    }

    long get_int(const std::string& s, const std::string& k, long fallback) const {
        const auto v = raw(s, k);
        if (!v) return fallback;
        try {
            std::size_t pos = 0;
            const long out = std::stol(*v, &pos);
            if (pos != v->size()) throw std::invalid_argument("");
            return out;
        } catch (...) {
            throw ConfigError("config: [" + s + "] " + k + " = '" + *v + "' is not an integer");
        }
    }

    bool get_bool(const std::string& s, const std::string& k, bool fallback) const {
        const auto v = raw(s, k);
        if (!v) return fallback;
        if (*v == "true" || *v == "1" || *v == "yes") return true;
        if (*v == "false" || *v == "0" || *v == "no") return false;
        throw ConfigError("config: [" + s + "] " + k + " = '" + *v + "' is not a boolean");
    }

    std::string get_string(const std::string& s, const std::string& k,
                           const std::string& fallback) const {
        const auto v = raw(s, k);
        return v ? *v : fallback;
    }

    std::vector<double> get_double_list(const std::string& s, const std::string& k,
                                        const std::vector<double>& fallback) const {
        const auto v = raw(s, k);
        if (!v) return fallback;
        std::vector<double> out;
        std::stringstream ss(*v);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = detail::trim(item);
            if (item.empty()) continue;
            try {
                out.push_back(std::stod(item));
            } catch (...) {
                throw ConfigError("config: [" + s + "] " + k + ": bad list entry '" + item + "'");
            }
        }
        if (out.empty()) throw ConfigError("config: [" + s + "] " + k + ": empty list");
        return out;
    }

    /// Every parsed key must have been consumed by now; unknown keys are
    /// configuration mistakes, not extensions.
    void reject_unconsumed() const {
        std::vector<std::string> unknown;
        for (const auto& [section, keys] : sections_)
            for (const auto& [key, value] : keys)
                if (!consumed_.count(section + "." + key)) unknown.push_back("[" + section + "] " + key);
        if (!unknown.empty()) {
            std::string msg = "config: unknown key(s):";
            for (const auto& u : unknown) msg += " " + u;
            throw ConfigError(msg);
        }
    }

   private:
    std::map<std::string, std::map<std::string, std::string>> sections_;
    mutable std::set<std::string> consumed_;
};

/// Model block shared by every command.
inline ModelParams load_model(const ConfigFile& cfg, bool natural_units) {
    ModelParams p;
    p.m = cfg.get_double("model", "m", p.m);
    p.f = cfg.get_double("model", "f", p.f);
    p.beta = cfg.get_double("model", "beta", p.beta);
    p.c = cfg.get_double("model", "c", p.c);
    p.hbar = cfg.get_double("model", "hbar", p.hbar);
    p.eps_c = cfg.get_double("model", "eps_c", p.eps_c);
    p.tol_regime = cfg.get_double("model", "tol_regime", p.tol_regime);
    p.clamp_to_light_cone = cfg.get_bool("model", "clamp", p.clamp_to_light_cone);
    if (natural_units) p.m = p.c = p.hbar = 1.0;
    p.validate();
    return p;
}

inline IntegratorConfig load_integrator(const ConfigFile& cfg) {
    IntegratorConfig ic;
    ic.dt_init = cfg.get_double("trajectory", "dt_init", ic.dt_init);
    ic.rel_tol = cfg.get_double("trajectory", "rel_tol", ic.rel_tol);
    ic.abs_tol = cfg.get_double("trajectory", "abs_tol", ic.abs_tol);
    ic.t_max = cfg.get_double("trajectory", "t_max", ic.t_max);
    ic.conservation_tol = cfg.get_double("trajectory", "conservation_tol", ic.conservation_tol);
    ic.max_steps = static_cast<std::size_t>(cfg.get_int("trajectory", "max_steps",
                                                        static_cast<long>(ic.max_steps)));
    ic.validate();
    return ic;
}

}  // namespace relbounce
