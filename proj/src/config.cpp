#include "cavcool/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "cavcool/errors.hpp"

#ifndef CAVCOOL_PRESET_DIR
#define CAVCOOL_PRESET_DIR ""
#endif

namespace cavcool {

namespace {

std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

[[noreturn]] void bad(const std::string& source, const std::string& what) {
    throw ConfigInvalid(source + ": " + what);
}

double parse_double(const std::string& source, const std::string& key, const std::string& v) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0')
        bad(source, "key '" + key + "' has non-numeric value '" + v + "'");
    return x;
}

int parse_int(const std::string& source, const std::string& key, const std::string& v) {
    char* end = nullptr;
    const long x = std::strtol(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0')
        bad(source, "key '" + key + "' has non-integer value '" + v + "'");
    return static_cast<int>(x);
}

bool parse_bool(const std::string& source, const std::string& key, const std::string& v) {
    if (v == "on" || v == "true" || v == "1" || v == "yes") return true;
    if (v == "off" || v == "false" || v == "0" || v == "no") return false;
    bad(source, "key '" + key + "' needs on/off, got '" + v + "'");
}

// Pulls keys out of a section map one by one so leftovers can be reported.
struct SectionReader {
    const std::string& source;
    std::string section;
    std::map<std::string, std::string> kv;

    std::optional<std::string> take(const std::string& key) {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        std::string v = it->second;
        kv.erase(it);
        return v;
    }
    double take_double(const std::string& key, double fallback) {
        auto v = take(key);
        return v ? parse_double(source, section + "." + key, *v) : fallback;
    }
    std::optional<double> take_double_opt(const std::string& key) {
        auto v = take(key);
        if (!v) return std::nullopt;
        return parse_double(source, section + "." + key, *v);
    }
    int take_int(const std::string& key, int fallback) {
        auto v = take(key);
        return v ? parse_int(source, section + "." + key, *v) : fallback;
    }
    bool take_bool(const std::string& key, bool fallback) {
        auto v = take(key);
        return v ? parse_bool(source, section + "." + key, *v) : fallback;
    }
    void done() {
        if (!kv.empty())
            bad(source, "unknown key '" + section + "." + kv.begin()->first + "'");
    }
};

} // namespace

IniFile parse_ini(const std::string& text, const std::string& source_name) {
    IniFile ini;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto where = source_name + ":" + std::to_string(lineno);
        const size_t comment = line.find_first_of("#;");
        if (comment != std::string::npos) line.erase(comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3)
                bad(where, "malformed section header '" + line + "'");
            section = trim(line.substr(1, line.size() - 2));
            ini.sections[section];  // empty sections are legal
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            bad(where, "expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) bad(where, "empty key");
        if (section.empty()) bad(where, "key '" + key + "' outside any [section]");
        if (!ini.sections[section].emplace(key, value).second)
            bad(where, "duplicate key '" + section + "." + key + "'");
    }
    return ini;
}

std::vector<int> parse_int_grid(const std::string& text, const std::string& key) {
    std::vector<int> out;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) throw ConfigInvalid("empty entry in '" + key + "'");
        const size_t dots = item.find("..");
        if (dots == std::string::npos) {
            out.push_back(parse_int(key, key, item));
            continue;
        }
        const size_t colon = item.find(':', dots + 2);
        const int a = parse_int(key, key, trim(item.substr(0, dots)));
        const int b = parse_int(
            key, key,
            trim(colon == std::string::npos ? item.substr(dots + 2)
                                            : item.substr(dots + 2, colon - dots - 2)));
        const int s = colon == std::string::npos ? 1 : parse_int(key, key, trim(item.substr(colon + 1)));
        if (s <= 0) throw ConfigInvalid("'" + key + "' range step must be > 0");
        if (b < a) throw ConfigInvalid("'" + key + "' range is descending");
        for (int v = a; v <= b; v += s) out.push_back(v);
    }
    if (out.empty()) throw ConfigInvalid("'" + key + "' is empty");
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

RunConfig build_config(IniFile ini, const std::string& source) {
    static const std::set<std::string> known_sections = {
        "system", "geometry", "sweep", "output", "run", "tolerances", "feasibility"};
    for (const auto& [name, _] : ini.sections)
        if (!known_sections.count(name))
            bad(source, "unknown section [" + name + "]");

    RunConfig cfg;

    {
        SectionReader r{source, "system", ini.sections["system"]};
        cfg.base.kappa = r.take_double("kappa", 1.0);
        cfg.base.nu = r.take_double("nu", 0.0);
        cfg.base.eta = r.take_double("eta", 0.0);
        cfg.base.eta_p = {r.take_double("eta_p", 0.0), 0.0};
        cfg.base.c_x = r.take_double("c_x", 0.4);
        cfg.base.spont_emission = r.take_bool("spont_emission", false);

        const auto g = r.take_double_opt("g");
        const auto delta_a = r.take_double_opt("delta_a");
        const auto gamma = r.take_double_opt("gamma");
        const auto c_d = r.take_double_opt("c_d");
        const auto c_r = r.take_double_opt("c_r");
        if (c_d && (g || delta_a))
            bad(source, "give either system.c_d or system.g/system.delta_a, not both");
        if (c_r && gamma)
            bad(source, "give either system.c_r or system.gamma, not both");
        if (c_d) {
            // Any atomic detuning with the right g reproduces the same model;
            // pick one far enough out that its own validity entries are quiet.
            cfg.base.delta_a = 1e4 * cfg.base.kappa;
            cfg.base.g = std::sqrt(std::abs(*c_d) * cfg.base.delta_a * cfg.base.kappa);
            if (*c_d < 0.0) cfg.base.delta_a = -cfg.base.delta_a;
        } else {
            if (g) cfg.base.g = *g;
            if (delta_a) cfg.base.delta_a = *delta_a;
        }
        if (c_r) {
            if (!(*c_r > 0.0)) bad(source, "system.c_r must be > 0");
            cfg.base.gamma = cfg.base.g * cfg.base.g / (cfg.base.kappa * *c_r);
        } else if (gamma) {
            cfg.base.gamma = *gamma;
        }

        if (auto det = r.take("detuning")) {
            if (*det == "sideband") {
                cfg.base.detuning_policy = DetuningPolicy::Sideband;
            } else {
                cfg.base.detuning_policy = DetuningPolicy::ExplicitDetuning;
                cfg.base.delta_c = parse_double(source, "system.detuning", *det);
            }
        }
        r.done();

        if (!(cfg.base.kappa > 0.0)) bad(source, "system.kappa must be > 0");
        if (!(cfg.base.nu > 0.0)) bad(source, "system.nu must be > 0");
        if (!(cfg.base.eta > 0.0)) bad(source, "system.eta must be > 0");
        if (cfg.base.gamma < 0.0) bad(source, "system.gamma must be >= 0");
        if (cfg.base.g < 0.0) bad(source, "system.g must be >= 0");
        if (cfg.base.c_x < 0.0 || cfg.base.c_x > 1.0) bad(source, "system.c_x must lie in [0, 1]");
    }

    {
        SectionReader r{source, "geometry", ini.sections["geometry"]};
        if (auto kind = r.take("kind")) {
            if (*kind == "base")
                cfg.lattice_kind = LatticeProvenance::Kind::Base;
            else if (*kind == "optimized")
                cfg.lattice_kind = LatticeProvenance::Kind::Optimized;
            else
                bad(source, "geometry.kind must be base or optimized, got '" + *kind + "'");
        }
        cfg.winding = r.take_int("winding", 0);
        cfg.step_count = r.take_int("step_count", 1);
        r.done();
    }

    {
        SectionReader r{source, "sweep", ini.sections["sweep"]};
        const auto n = r.take("n_atoms");
        if (!n) bad(source, "sweep.n_atoms is required");
        cfg.n_values = parse_int_grid(*n, "sweep.n_atoms");
        if (cfg.n_values.front() < 1) bad(source, "sweep.n_atoms must be >= 1");
        if (auto steps = r.take("steps")) {
            if (cfg.lattice_kind != LatticeProvenance::Kind::Optimized)
                bad(source, "sweep.steps needs geometry.kind = optimized");
            cfg.step_values = parse_int_grid(*steps, "sweep.steps");
        } else {
            cfg.step_values = {0};
        }
        r.done();
    }

    {
        SectionReader r{source, "output", ini.sections["output"]};
        if (auto p = r.take("path")) cfg.output_path = *p;
        r.done();
    }

    {
        SectionReader r{source, "run", ini.sections["run"]};
        cfg.workers = r.take_int("workers", 0);
        if (cfg.workers < 0) bad(source, "run.workers must be >= 0");
        r.done();
    }

    {
        SectionReader r{source, "tolerances", ini.sections["tolerances"]};
        cfg.validity_threshold = r.take_double("validity_threshold", 0.1);
        if (!(cfg.validity_threshold > 0.0)) bad(source, "tolerances.validity_threshold must be > 0");
        r.done();
    }

    if (ini.sections.count("feasibility")) {
        SectionReader r{source, "feasibility", ini.sections["feasibility"]};
        FeasibilityInputs f;
        f.omega_recoil_hz = r.take_double("omega_recoil_hz", 0.0);
        f.eta = r.take_double("eta", 0.0);
        f.gamma_hz = r.take_double("gamma_hz", 0.0);
        f.g_hz = r.take_double("g_hz", 0.0);
        f.delta_a_hz = r.take_double("delta_a_hz", 0.0);
        f.slowest_rate = r.take_double("slowest_rate", 0.0);
        f.kappa_divisor = r.take_double("kappa_divisor", 10.0);
        f.kappa_hz = r.take_double_opt("kappa_hz");
        r.done();
        cfg.feasibility = f;
    }

    return cfg;
}

} // namespace

RunConfig parse_run_config(const std::string& text, const std::string& source_name,
                           const std::vector<std::string>& overrides) {
    IniFile ini = parse_ini(text, source_name);
    for (const auto& ov : overrides) {
        const size_t eq = ov.find('=');
        const size_t dot = ov.find('.');
        if (eq == std::string::npos || dot == std::string::npos || dot > eq)
            throw ConfigInvalid("override '" + ov + "' is not section.key=value");
        const std::string section = trim(ov.substr(0, dot));
        const std::string key = trim(ov.substr(dot + 1, eq - dot - 1));
        const std::string value = trim(ov.substr(eq + 1));
        if (section.empty() || key.empty())
            throw ConfigInvalid("override '" + ov + "' is not section.key=value");
        ini.sections[section][key] = value;
    }
    return build_config(std::move(ini), source_name);
}

RunConfig load_run_config(const std::string& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in)
        throw ConfigInvalid("cannot read config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_run_config(buf.str(), path, overrides);
}

std::string resolve_config_path(const std::string& name_or_path) {
    namespace fs = std::filesystem;
    std::vector<fs::path> candidates = {name_or_path, name_or_path + std::string(".ini")};
    const fs::path preset_dir = CAVCOOL_PRESET_DIR;
    if (!preset_dir.empty() && name_or_path.find('/') == std::string::npos) {
        candidates.push_back(preset_dir / name_or_path);
        candidates.push_back(preset_dir / (name_or_path + ".ini"));
    }
    for (const auto& c : candidates)
        if (fs::exists(c) && fs::is_regular_file(c)) return c.string();
    throw ConfigInvalid("no config file or preset named '" + name_or_path + "'");
}

std::vector<std::string> list_presets() {
    namespace fs = std::filesystem;
    std::vector<std::string> names;
    const fs::path preset_dir = CAVCOOL_PRESET_DIR;
    if (preset_dir.empty() || !fs::is_directory(preset_dir)) return names;
    for (const auto& entry : fs::directory_iterator(preset_dir))
        if (entry.is_regular_file() && entry.path().extension() == ".ini")
            names.push_back(entry.path().stem().string());
    std::sort(names.begin(), names.end());
    return names;
}

} // namespace cavcool
