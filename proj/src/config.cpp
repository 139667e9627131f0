#include "nlgs/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "nlgs/io.hpp"
#include "nlgs/physics.hpp"

namespace nlgs {

std::string to_string(Subcommand s) {
    switch (s) {
        case Subcommand::Solve: return "solve";
        case Subcommand::Sweep: return "sweep";
        case Subcommand::Atlas: return "atlas";
        case Subcommand::Verify: return "verify";
    }
    return "?";
}

Subcommand parse_subcommand(const std::string& text) {
    for (Subcommand s : {Subcommand::Solve, Subcommand::Sweep, Subcommand::Atlas, Subcommand::Verify})
        if (to_string(s) == text) return s;
    throw ConfigError("unknown subcommand '" + text + "' (expected solve, sweep, atlas or verify)");
}

const std::vector<std::string>& valid_config_keys() {
    static const std::vector<std::string> keys{
        "a", "b", "alpha", "beta", "mu", "seed", "output_dir",
        "grid.n", "grid.box",
        "solver.tau", "solver.tau_max", "solver.tol_grad", "solver.tol_energy", "solver.stall_window",
        "solver.max_iters", "solver.n_starts", "solver.truncation",
        "potential.bounded_sup", "potential.bounded_width", "potential.bounded_center",
        "potential.term.q", "potential.term.alpha", "potential.term.center",
        "sweep.mu_list", "atlas.a_grid", "atlas.b_grid", "verify.samples",
    };
    return keys;
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string key_list() {
    std::string out;
    for (const auto& k : valid_config_keys()) out += (out.empty() ? "" : ", ") + k;
    return out;
}

double parse_number(const std::string& key, const std::string& raw) {
    const std::string v = trim(raw);
    if (v == "inf" || v == "infinity") return INFINITY;
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used == v.size()) return d;
    } catch (const std::exception&) {
    }
    throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
}

int parse_int(const std::string& key, const std::string& raw) {
    const double d = parse_number(key, raw);
    if (!std::isfinite(d) || d != std::floor(d) || std::fabs(d) > 2e9) throw ConfigError("key '" + key + "': expected an integer");
    return static_cast<int>(d);
}

std::uint64_t parse_seed(const std::string& key, const std::string& raw) {
    const std::string v = trim(raw);
    if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos)
        throw ConfigError("key '" + key + "': expected a nonnegative integer, got '" + v + "'");
    try {
        return std::stoull(v);
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': value out of range");
    }
}

std::vector<std::string> parse_list(const std::string& key, const std::string& raw) {
    const std::string v = trim(raw);
    if (v.size() < 2 || v.front() != '[' || v.back() != ']') throw ConfigError("key '" + key + "': expected a list [x, y, ...]");
    std::vector<std::string> out;
    std::stringstream ss(v.substr(1, v.size() - 2));
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw ConfigError("key '" + key + "': empty list entry");
        out.push_back(item);
    }
    return out;
}

std::vector<double> parse_numbers(const std::string& key, const std::string& raw) {
    std::vector<double> out;
    for (const auto& s : parse_list(key, raw)) out.push_back(parse_number(key, s));
    return out;
}

Point3 parse_point(const std::string& key, const std::string& raw) {
    const auto v = parse_numbers(key, raw);
    if (v.size() != 3) throw ConfigError("key '" + key + "': expected three coordinates");
    return {v[0], v[1], v[2]};
}

std::string parse_string(const std::string& raw) {
    const std::string v = trim(raw);
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return v.substr(1, v.size() - 2);
    return v;
}

ScreeningMass parse_mass(const std::string& key, const std::string& raw) {
    try {
        return parse_screening_mass(trim(raw));
    } catch (const std::exception& e) {
        throw ConfigError("key '" + key + "': " + e.what());
    }
}

std::vector<ScreeningMass> parse_masses(const std::string& key, const std::string& raw) {
    std::vector<ScreeningMass> out;
    for (const auto& s : parse_list(key, raw)) out.push_back(parse_mass(key, s));
    return out;
}

std::vector<ScreeningMass> default_atlas_grid() {
    std::vector<ScreeningMass> g;
    for (double v : {0.0, 0.5, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0}) g.push_back(ScreeningMass::finite(v));
    g.push_back(ScreeningMass::infinite());
    return g;
}

struct TermEntry {
    std::map<std::string, std::string> values;
};

struct Parsed {
    std::map<std::string, std::string> values;
    std::vector<TermEntry> terms;
};

Parsed parse_lines(const std::string& text) {
    static const std::vector<std::string> sections{"grid", "solver", "potential", "sweep", "atlas", "verify"};
    Parsed out;
    std::string section;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') quoted = !quoted;
            if (line[i] == '#' && !quoted) {
                line.resize(i);
                break;
            }
        }
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = "line " + std::to_string(lineno) + ": ";
        if (line == "[[potential.term]]") {
            section = "potential.term";
            out.terms.emplace_back();
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(where + "malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (std::find(sections.begin(), sections.end(), section) == sections.end())
                throw ConfigError(where + "unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where + "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) throw ConfigError(where + "expected key = value");
        const std::string full = section.empty() ? key : section + "." + key;
        const auto& valid = valid_config_keys();
        if (std::find(valid.begin(), valid.end(), full) == valid.end())
            throw ConfigError(where + "unknown key '" + full + "'; valid keys: " + key_list());
        if (full.rfind("potential.term.", 0) == 0) {
            if (section != "potential.term") throw ConfigError(where + "'" + full + "' must sit inside a [[potential.term]] block");
            auto& t = out.terms.back().values;
            if (!t.emplace(key, value).second) throw ConfigError(where + "duplicate key '" + full + "'");
            continue;
        }
        if (!out.values.emplace(full, value).second) throw ConfigError(where + "duplicate key '" + full + "'");
    }
    return out;
}

}  // namespace

std::string RunConfig::canonical() const {
    std::ostringstream os;
    const SolverConfig& s = solver;
    os << "subcommand=" << to_string(subcommand) << '\n';
    os << "kernel=" << kernel.to_string() << '\n';
    if (couplings) os << "couplings=" << format_double(couplings->first) << ',' << format_double(couplings->second) << '\n';
    os << "potential=" << (potential ? potential->describe() : "none") << '\n';
    if (potential) {
        for (const auto& t : potential->terms)
            os << "term=" << format_double(t.q) << ',' << format_double(t.alpha) << ',' << format_double(t.center[0]) << ','
               << format_double(t.center[1]) << ',' << format_double(t.center[2]) << '\n';
        if (potential->bounded) {
            const auto& b = *potential->bounded;
            os << "bounded=" << format_double(b.amplitude) << ',' << format_double(b.width) << ',' << format_double(b.center[0])
               << ',' << format_double(b.center[1]) << ',' << format_double(b.center[2]) << '\n';
        }
    }
    os << "mu=" << format_double(s.mu) << "\ntau=" << format_double(s.tau) << "\ntau_max=" << format_double(s.tau_max)
       << "\ntol_grad=" << format_double(s.tol_grad) << "\ntol_energy=" << format_double(s.tol_energy)
       << "\nstall_window=" << s.stall_window << "\nmax_iters=" << s.max_iters << "\nn_starts=" << s.n_starts
       << "\nseed=" << s.seed << "\ngrid_n=" << s.grid_n << "\nbox=" << format_double(s.box)
       << "\ntruncation=" << (s.truncation ? format_double(*s.truncation) : "default") << '\n';
    os << "mu_list=";
    for (double m : mu_list) os << format_double(m) << ';';
    os << "\na_grid=";
    for (const auto& m : a_grid) os << m.to_string() << ';';
    os << "\nb_grid=";
    for (const auto& m : b_grid) os << m.to_string() << ';';
    os << "\nverify_samples=" << verify_samples << '\n';
    return os.str();
}

std::string RunConfig::hash() const { return hex64(fnv1a64(canonical())); }

RunConfig parse_config_text(const std::string& text, Subcommand sub, const ConfigOverrides& flags) {
    const Parsed parsed = parse_lines(text);
    auto get = [&](const std::string& k) -> std::optional<std::string> {
        auto it = parsed.values.find(k);
        if (it == parsed.values.end()) return std::nullopt;
        return it->second;
    };

    RunConfig cfg;
    cfg.subcommand = sub;
    SolverConfig& s = cfg.solver;

    std::optional<ScreeningMass> a, b;
    std::optional<double> alpha, beta;
    if (auto v = get("a")) a = parse_mass("a", *v);
    if (auto v = get("b")) b = parse_mass("b", *v);
    if (auto v = get("alpha")) alpha = parse_number("alpha", *v);
    if (auto v = get("beta")) beta = parse_number("beta", *v);
    if (flags.a) a = parse_mass("--a", *flags.a);
    if (flags.b) b = parse_mass("--b", *flags.b);
    if (flags.alpha) alpha = *flags.alpha;
    if (flags.beta) beta = *flags.beta;
    if ((a || b) && (alpha || beta)) throw ConfigError("conflicting kernel settings: give either a/b or alpha/beta, not both");
    if (a.has_value() != b.has_value()) throw ConfigError("a and b must be given together");
    if (alpha.has_value() != beta.has_value()) throw ConfigError("alpha and beta must be given together");
    if (a) {
        cfg.kernel = {*a, *b};
    } else if (alpha) {
        try {
            cfg.kernel = graviton_masses(*alpha, *beta);
        } catch (const InvalidCouplings& e) {
            throw ConfigError(std::string("invalid couplings: ") + e.what());
        }
        cfg.couplings = std::make_pair(*alpha, *beta);
    }

    if (auto v = get("mu")) s.mu = parse_number("mu", *v);
    if (auto v = get("seed")) s.seed = parse_seed("seed", *v);
    if (auto v = get("output_dir")) cfg.output_dir = parse_string(*v);
    if (auto v = get("grid.n")) s.grid_n = parse_int("grid.n", *v);
    if (auto v = get("grid.box")) s.box = parse_number("grid.box", *v);
    if (auto v = get("solver.tau")) s.tau = parse_number("solver.tau", *v);
    if (auto v = get("solver.tau_max")) s.tau_max = parse_number("solver.tau_max", *v);
    if (auto v = get("solver.tol_grad")) s.tol_grad = parse_number("solver.tol_grad", *v);
    if (auto v = get("solver.tol_energy")) s.tol_energy = parse_number("solver.tol_energy", *v);
    if (auto v = get("solver.stall_window")) s.stall_window = parse_int("solver.stall_window", *v);
    if (auto v = get("solver.max_iters")) s.max_iters = parse_int("solver.max_iters", *v);
    if (auto v = get("solver.n_starts")) s.n_starts = parse_int("solver.n_starts", *v);
    if (auto v = get("solver.truncation")) s.truncation = parse_number("solver.truncation", *v);
    if (auto v = get("sweep.mu_list")) cfg.mu_list = parse_numbers("sweep.mu_list", *v);
    cfg.a_grid = default_atlas_grid();
    cfg.b_grid = default_atlas_grid();
    if (auto v = get("atlas.a_grid")) cfg.a_grid = parse_masses("atlas.a_grid", *v);
    if (auto v = get("atlas.b_grid")) cfg.b_grid = parse_masses("atlas.b_grid", *v);
    if (auto v = get("verify.samples")) cfg.verify_samples = parse_int("verify.samples", *v);

    if (!parsed.terms.empty() || get("potential.bounded_sup")) {
        PotentialSpec spec;
        for (const auto& t : parsed.terms) {
            PowerTerm term;
            auto it = t.values.find("q");
            if (it == t.values.end()) throw ConfigError("[[potential.term]] needs q");
            term.q = parse_number("potential.term.q", it->second);
            it = t.values.find("alpha");
            if (it == t.values.end()) throw ConfigError("[[potential.term]] needs alpha");
            term.alpha = parse_number("potential.term.alpha", it->second);
            it = t.values.find("center");
            if (it != t.values.end()) term.center = parse_point("potential.term.center", it->second);
            spec.terms.push_back(term);
        }
        if (auto v = get("potential.bounded_sup")) {
            BoundedBump bump;
            bump.amplitude = parse_number("potential.bounded_sup", *v);
            if (auto w = get("potential.bounded_width")) bump.width = parse_number("potential.bounded_width", *w);
            if (auto c = get("potential.bounded_center")) bump.center = parse_point("potential.bounded_center", *c);
            spec.bounded = bump;
        }
        try {
            spec.validate();
        } catch (const InvalidPotential& e) {
            throw ConfigError(std::string("invalid potential: ") + e.what());
        }
        cfg.potential = spec;
    } else if (get("potential.bounded_width") || get("potential.bounded_center")) {
        throw ConfigError("potential.bounded_width/center need potential.bounded_sup");
    }

    if (flags.mu) s.mu = *flags.mu;
    if (flags.grid_n) s.grid_n = *flags.grid_n;
    if (flags.box) s.box = *flags.box;
    if (flags.seed) s.seed = *flags.seed;
    if (flags.out) cfg.output_dir = *flags.out;
    if (flags.mu_list) cfg.mu_list = *flags.mu_list;

    try {
        s.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("invalid solver settings: ") + e.what());
    }
    if (cfg.potential) {
        const double half = 0.5 * s.box;
        for (const auto& t : cfg.potential->terms)
            for (double c : t.center)
                if (!(c >= -half && c < half)) throw ConfigError("invalid potential: term center lies outside the box");
    }
    if (cfg.mu_list.empty()) throw ConfigError("sweep.mu_list is empty");
    for (std::size_t i = 0; i < cfg.mu_list.size(); ++i) {
        if (!(cfg.mu_list[i] > 0.0) || !std::isfinite(cfg.mu_list[i])) throw ConfigError("sweep.mu_list entries must be positive");
        if (i > 0 && !(cfg.mu_list[i] > cfg.mu_list[i - 1])) throw ConfigError("sweep.mu_list must be strictly ascending");
    }
    if (cfg.a_grid.empty() || cfg.b_grid.empty()) throw ConfigError("atlas grids must be nonempty");
    if (cfg.verify_samples < 1) throw ConfigError("verify.samples must be at least 1");
    if (cfg.output_dir.empty()) throw ConfigError("output_dir is empty");
    return cfg;
}

RunConfig parse_config(const std::optional<std::string>& path, Subcommand sub, const ConfigOverrides& flags) {
    std::string text;
    if (path) {
        std::ifstream in(*path);
        if (!in) throw ConfigError("cannot read config file '" + *path + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    ConfigOverrides f = flags;
    if (!f.out)
        if (const char* env = std::getenv("NLGS_OUTPUT_DIR"); env && *env) f.out = std::string(env);
    return parse_config_text(text, sub, f);
}

}  // namespace nlgs
