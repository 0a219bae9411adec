#include "fracfp/config.hpp"

#include <algorithm>
#include <cctype>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "fracfp/catalog.hpp"

namespace fracfp::config {
namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ConfigError(where + ": " + what);
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

// Inline comments start at an unquoted '#'.
std::string strip_comment(const std::string& s) {
    bool quoted = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') quoted = !quoted;
        else if (s[i] == '#' && !quoted) return s.substr(0, i);
    }
    return s;
}

bool valid_key(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
            return false;
    return true;
}

struct RawValue {
    std::string text;  // comment-stripped, trimmed
    int line = 0;
};

using RawMap = std::map<std::string, RawValue>;

RawMap parse_raw(const std::string& text, const std::string& name) {
    static const std::set<std::string> sections = {"experiment", "domain",
                                                   "fields", "grid"};
    RawMap raw;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string where = name + ":" + std::to_string(lineno);
        const std::string s = trim(strip_comment(line));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']')
                fail(where, "malformed section header '" + s + "'");
            section = trim(s.substr(1, s.size() - 2));
            if (!sections.count(section))
                fail(where, "unknown section '[" + section + "]'");
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            fail(where, "expected 'key = value', got '" + s + "'");
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (!valid_key(key)) fail(where, "malformed key '" + key + "'");
        if (section.empty())
            fail(where, "key '" + key + "' appears before any [section] header");
        if (value.empty()) fail(where, "key '" + key + "' has no value");
        const std::string full = section + "." + key;
        const auto prev = raw.find(full);
        if (prev != raw.end())
            fail(where, "duplicate key '" + full + "' (first set on line " +
                            std::to_string(prev->second.line) + ")");
        raw[full] = {value, lineno};
    }
    return raw;
}

std::string where_of(const std::string& name, const RawValue& rv) {
    return name + ":" + std::to_string(rv.line);
}

std::string as_string(const std::string& name, const std::string& key,
                      const RawValue& rv) {
    const std::string& v = rv.text;
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"')
        return v.substr(1, v.size() - 2);
    if (v.front() == '"' || v.find('"') != std::string::npos)
        fail(where_of(name, rv), "malformed string for '" + key + "': " + v);
    if (v.front() == '[')
        fail(where_of(name, rv), "key '" + key + "' expects a single value");
    return v;
}

double parse_double(const std::string& where, const std::string& key,
                    const std::string& v) {
    const char* begin = v.c_str();
    char* end = nullptr;
    const double x = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || !std::isfinite(x))
        fail(where, "key '" + key + "' expects a number, got '" + v + "'");
    return x;
}

double as_double(const std::string& name, const std::string& key,
                 const RawValue& rv) {
    return parse_double(where_of(name, rv), key, rv.text);
}

long long as_integer(const std::string& name, const std::string& key,
                     const RawValue& rv) {
    const char* begin = rv.text.c_str();
    char* end = nullptr;
    const long long x = std::strtoll(begin, &end, 10);
    if (end == begin || *end != '\0')
        fail(where_of(name, rv),
             "key '" + key + "' expects an integer, got '" + rv.text + "'");
    return x;
}

std::uint64_t as_u64(const std::string& name, const std::string& key,
                     const RawValue& rv) {
    const std::string& v = rv.text;
    const char* begin = v.c_str();
    char* end = nullptr;
    const unsigned long long x = std::strtoull(begin, &end, 10);
    if (end == begin || *end != '\0' || v.front() == '-')
        fail(where_of(name, rv), "key '" + key +
                                     "' expects a nonnegative integer, got '" +
                                     v + "'");
    return x;
}

std::vector<std::string> split_array(const std::string& where,
                                     const std::string& key,
                                     const std::string& v) {
    if (v.size() < 2 || v.front() != '[' || v.back() != ']')
        fail(where, "key '" + key + "' expects an array like [0.3, 0.5]");
    const std::string inner = trim(v.substr(1, v.size() - 2));
    std::vector<std::string> items;
    if (inner.empty()) return items;
    std::size_t pos = 0;
    while (true) {
        const auto comma = inner.find(',', pos);
        const std::string item =
            trim(comma == std::string::npos ? inner.substr(pos)
                                            : inner.substr(pos, comma - pos));
        if (item.empty())
            fail(where, "empty entry in array for '" + key + "'");
        items.push_back(item);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return items;
}

std::vector<double> as_double_list(const std::string& name,
                                   const std::string& key,
                                   const RawValue& rv) {
    const std::string where = where_of(name, rv);
    std::vector<double> out;
    for (const auto& item : split_array(where, key, rv.text))
        out.push_back(parse_double(where, key, item));
    return out;
}

std::vector<int> as_int_list(const std::string& name, const std::string& key,
                             const RawValue& rv) {
    const std::string where = where_of(name, rv);
    std::vector<int> out;
    for (const auto& item : split_array(where, key, rv.text)) {
        const char* begin = item.c_str();
        char* end = nullptr;
        const long x = std::strtol(begin, &end, 10);
        if (end == begin || *end != '\0')
            fail(where,
                 "key '" + key + "' expects integers, got '" + item + "'");
        out.push_back(static_cast<int>(x));
    }
    return out;
}

bool is_sweep(const std::string& kind) {
    return kind == "stability-sweep" || kind == "gradient-sweep";
}

std::set<std::string> allowed_keys(const std::string& kind) {
    const std::set<std::string> common = {"experiment.kind", "experiment.seed"};
    const std::set<std::string> domain = {"domain.x_left", "domain.x_right"};
    const std::set<std::string> fields = {"fields.kappa", "fields.F",
                                          "fields.g", "fields.u0"};
    const std::set<std::string> grid = {"grid.M", "grid.N", "grid.T",
                                        "grid.gamma", "grid.p"};
    std::set<std::string> out = common;
    auto add = [&out](const std::set<std::string>& more) {
        out.insert(more.begin(), more.end());
    };
    if (kind == "lemma-suite") {
        out.insert("grid.trials");
        return out;
    }
    add(domain);
    if (kind == "convergence") {
        add({"fields.kappa", "fields.u0"});
        add({"grid.mesh_family", "grid.N", "grid.T", "grid.gamma",
             "grid.alpha", "grid.t_star"});
        return out;
    }
    add(fields);
    add(grid);
    if (kind == "solve" || kind == "energy-check") out.insert("grid.alpha");
    if (is_sweep(kind)) out.insert("grid.alpha_grid");
    if (kind == "gradient-sweep") out.insert("grid.t_star");
    return out;
}

void validate(const ExperimentConfig& cfg) {
    auto bad = [](const std::string& msg) {
        throw ConfigError("config validation: " + msg);
    };
    if (!(cfg.x_left < cfg.x_right))
        bad("domain.x_left must be below domain.x_right");
    if (cfg.M < 1) bad("grid.M must be at least 1");
    if (cfg.N < 1) bad("grid.N must be at least 1");
    if (!(cfg.T > 0.0)) bad("grid.T must be positive");
    if (cfg.gamma != 0.0 && cfg.gamma < 1.0)
        bad("grid.gamma must be at least 1");
    if (cfg.p != 0 && cfg.p != 1) bad("grid.p must be 0 or 1");
    if (cfg.trials < 1) bad("grid.trials must be at least 1");
    if (!(cfg.alpha > 0.0 && cfg.alpha <= 1.0))
        bad("grid.alpha must lie in (0, 1]");
    if (cfg.t_star != 0.0 && !(cfg.t_star > 0.0 && cfg.t_star <= cfg.T))
        bad("grid.t_star must lie in (0, T]");
    if (is_sweep(cfg.kind)) {
        if (cfg.alpha_grid.empty()) bad("alpha grid is empty");
        for (double a : cfg.alpha_grid)
            if (!(a >= 0.1 && a <= 1.0))
                bad("alpha grid entries must lie in [0.1, 1]; sweep ratios "
                    "are not meaningful for smaller orders");
    }
    if (cfg.kind == "convergence") {
        if (cfg.mesh_family.empty()) bad("grid.mesh_family must not be empty");
        int prev = 0;
        for (int m : cfg.mesh_family) {
            if (m < 1) bad("grid.mesh_family entries must be at least 1");
            if (m <= prev) bad("grid.mesh_family must be strictly increasing");
            prev = m;
        }
    }
    try {
        catalog::make_u0(cfg.u0, cfg.x_left, cfg.x_right);
        catalog::make_kappa(cfg.kappa, cfg.x_left, cfg.x_right);
        catalog::make_f(cfg.F, cfg.x_left, cfg.x_right);
        catalog::make_g(cfg.g, cfg.x_left, cfg.x_right);
    } catch (const std::invalid_argument& e) {
        bad(e.what());
    }
    if (cfg.kind == "energy-check" && cfg.F != "zero")
        bad("energy-check requires F = \"zero\"; the energy identity covers "
            "the drift-free scheme");
    if (cfg.kind == "convergence") {
        if (!catalog::kappa_is_constant(cfg.kappa))
            bad("convergence requires a spatially constant kappa");
        if (!catalog::u0_is_modal(cfg.u0) || cfg.u0 == "zero")
            bad("convergence requires a sine-mode u0 (sin1 or sin3)");
    }
}

ExperimentConfig build(const RawMap& raw, const std::string& name) {
    static const std::set<std::string> kinds = {
        "solve",        "stability-sweep", "gradient-sweep",
        "energy-check", "convergence",     "lemma-suite"};
    const auto kind_it = raw.find("experiment.kind");
    if (kind_it == raw.end())
        fail(name, "missing required key 'experiment.kind'");
    ExperimentConfig cfg;
    cfg.kind = as_string(name, "experiment.kind", kind_it->second);
    if (!kinds.count(cfg.kind))
        fail(where_of(name, kind_it->second),
             "unknown experiment kind '" + cfg.kind +
                 "' (expected solve, stability-sweep, gradient-sweep, "
                 "energy-check, convergence, or lemma-suite)");
    const auto allowed = allowed_keys(cfg.kind);
    for (const auto& [key, rv] : raw)
        if (!allowed.count(key))
            fail(where_of(name, rv), "key '" + key +
                                         "' is not accepted by experiment "
                                         "kind '" +
                                         cfg.kind + "'");
    auto get = [&raw](const std::string& key) -> const RawValue* {
        const auto it = raw.find(key);
        return it == raw.end() ? nullptr : &it->second;
    };
    if (const auto* rv = get("experiment.seed"))
        cfg.seed = as_u64(name, "experiment.seed", *rv);
    if (const auto* rv = get("domain.x_left"))
        cfg.x_left = as_double(name, "domain.x_left", *rv);
    if (const auto* rv = get("domain.x_right"))
        cfg.x_right = as_double(name, "domain.x_right", *rv);
    if (const auto* rv = get("fields.kappa"))
        cfg.kappa = as_string(name, "fields.kappa", *rv);
    if (const auto* rv = get("fields.F"))
        cfg.F = as_string(name, "fields.F", *rv);
    if (const auto* rv = get("fields.g")) cfg.g = as_string(name, "fields.g", *rv);
    if (const auto* rv = get("fields.u0"))
        cfg.u0 = as_string(name, "fields.u0", *rv);
    if (const auto* rv = get("grid.M"))
        cfg.M = static_cast<int>(as_integer(name, "grid.M", *rv));
    if (const auto* rv = get("grid.N"))
        cfg.N = static_cast<int>(as_integer(name, "grid.N", *rv));
    if (const auto* rv = get("grid.T")) cfg.T = as_double(name, "grid.T", *rv);
    if (const auto* rv = get("grid.gamma"))
        cfg.gamma = as_double(name, "grid.gamma", *rv);
    if (const auto* rv = get("grid.p"))
        cfg.p = static_cast<int>(as_integer(name, "grid.p", *rv));
    if (const auto* rv = get("grid.alpha"))
        cfg.alpha = as_double(name, "grid.alpha", *rv);
    if (const auto* rv = get("grid.alpha_grid")) {
        cfg.alpha_grid = as_double_list(name, "grid.alpha_grid", *rv);
        cfg.alpha_grid_given = true;
    }
    if (const auto* rv = get("grid.t_star"))
        cfg.t_star = as_double(name, "grid.t_star", *rv);
    if (const auto* rv = get("grid.mesh_family"))
        cfg.mesh_family = as_int_list(name, "grid.mesh_family", *rv);
    if (const auto* rv = get("grid.trials"))
        cfg.trials = static_cast<int>(as_integer(name, "grid.trials", *rv));
    if (is_sweep(cfg.kind) && !cfg.alpha_grid_given)
        cfg.alpha_grid = {0.3, 0.5, 0.7, 1.0};
    validate(cfg);
    return cfg;
}

// Shortest text that parses back to the same double.
std::string fmt_double(double x) {
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, x);
        if (std::strtod(buf, nullptr) == x) break;
    }
    return buf;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text,
                                   const std::string& name) {
    return build(parse_raw(text, name), name);
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open config file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

void apply_overrides(ExperimentConfig& cfg,
                     const std::optional<std::string>& alpha_grid,
                     const std::optional<std::uint64_t>& seed) {
    if (seed) cfg.seed = *seed;
    if (alpha_grid) {
        if (!is_sweep(cfg.kind))
            throw ConfigError(
                "--alpha-grid only applies to sweep experiments, not '" +
                cfg.kind + "'");
        cfg.alpha_grid.clear();
        cfg.alpha_grid_given = true;
        const std::string& s = *alpha_grid;
        std::size_t pos = 0;
        while (pos < s.size()) {
            const auto comma = s.find(',', pos);
            const std::string item =
                trim(comma == std::string::npos ? s.substr(pos)
                                                : s.substr(pos, comma - pos));
            if (item.empty())
                throw ConfigError("--alpha-grid: empty list entry");
            cfg.alpha_grid.push_back(
                parse_double("--alpha-grid", "alpha_grid", item));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
    }
    validate(cfg);
}

double effective_gamma(const ExperimentConfig& cfg) {
    if (cfg.gamma != 0.0) return cfg.gamma;
    if (is_sweep(cfg.kind)) return 2.0;
    return std::min(2.0 / cfg.alpha, 4.0);
}

double effective_t_star(const ExperimentConfig& cfg) {
    return cfg.t_star != 0.0 ? cfg.t_star : cfg.T / 2.0;
}

std::string canonical_text(const ExperimentConfig& cfg) {
    std::ostringstream out;
    out << "[experiment]\n";
    out << "kind = \"" << cfg.kind << "\"\n";
    out << "seed = " << cfg.seed << "\n";
    if (cfg.kind == "lemma-suite") {
        out << "\n[grid]\n";
        out << "trials = " << cfg.trials << "\n";
        return out.str();
    }
    out << "\n[domain]\n";
    out << "x_left = " << fmt_double(cfg.x_left) << "\n";
    out << "x_right = " << fmt_double(cfg.x_right) << "\n";
    out << "\n[fields]\n";
    out << "kappa = \"" << cfg.kappa << "\"\n";
    if (cfg.kind != "convergence") {
        out << "F = \"" << cfg.F << "\"\n";
        out << "g = \"" << cfg.g << "\"\n";
    }
    out << "u0 = \"" << cfg.u0 << "\"\n";
    out << "\n[grid]\n";
    if (cfg.kind == "convergence") {
        out << "mesh_family = [";
        for (std::size_t i = 0; i < cfg.mesh_family.size(); ++i)
            out << (i ? ", " : "") << cfg.mesh_family[i];
        out << "]\n";
    } else {
        out << "M = " << cfg.M << "\n";
    }
    out << "N = " << cfg.N << "\n";
    out << "T = " << fmt_double(cfg.T) << "\n";
    out << "gamma = " << fmt_double(effective_gamma(cfg)) << "\n";
    if (cfg.kind != "convergence") out << "p = " << cfg.p << "\n";
    if (is_sweep(cfg.kind)) {
        out << "alpha_grid = [";
        for (std::size_t i = 0; i < cfg.alpha_grid.size(); ++i)
            out << (i ? ", " : "") << fmt_double(cfg.alpha_grid[i]);
        out << "]\n";
    } else {
        out << "alpha = " << fmt_double(cfg.alpha) << "\n";
    }
    if (cfg.kind == "gradient-sweep" || cfg.kind == "convergence")
        out << "t_star = " << fmt_double(effective_t_star(cfg)) << "\n";
    return out.str();
}

std::string config_hash(const ExperimentConfig& cfg) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : canonical_text(cfg)) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

}  // namespace fracfp::config
