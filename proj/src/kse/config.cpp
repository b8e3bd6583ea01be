#include "kse/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace kse {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad number for " + key + ": '" + v + "'");
    }
}

int parse_int(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        int i = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return i;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad integer for " + key + ": '" + v + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw std::invalid_argument("config: bad boolean for " + key + ": '" + v + "'");
}

} // namespace

ConfigEntries read_config_entries(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    ConfigEntries entries;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        lineno++;
        std::string s = trim(line);
        if (s.empty() || s[0] == '#' || s[0] == ';') continue;
        if (s.front() == '[' && s.back() == ']') {
            section = trim(s.substr(1, s.size() - 2));
            continue;
        }
        size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        " is not 'key = value': " + line);
        std::string key = trim(s.substr(0, eq));
        std::string value = trim(s.substr(eq + 1));
        if (section.empty())
            throw std::invalid_argument("config: key '" + key + "' appears before any [section]");
        entries[section + "." + key] = value;
    }
    return entries;
}

void apply_override(ConfigEntries& entries, const std::string& assignment) {
    size_t eq = assignment.find('=');
    if (eq == std::string::npos || assignment.find('.') == std::string::npos ||
        assignment.find('.') > eq)
        throw std::invalid_argument("override must look like section.key=value, got: " +
                                    assignment);
    entries[trim(assignment.substr(0, eq))] = trim(assignment.substr(eq + 1));
}

const std::map<std::string, std::string>& config_key_reference() {
    static const std::map<std::string, std::string> ref = {
        {"grid.L", "domain scale, the domain is [0, 2*pi*L) (default 16)"},
        {"grid.N", "collocation points, even power of two (default 512)"},
        {"truth.lambda1", "coefficient of u_x (default 0)"},
        {"truth.lambda2", "coefficient of u_xx (default 1)"},
        {"truth.lambda3", "coefficient of u_xxx (default 0)"},
        {"truth.lambda4", "coefficient of u_xxxx (default 1)"},
        {"truth.lambda5", "coefficient of u*u_x (default 1)"},
        {"truth.dt", "time step (default 1e-3)"},
        {"truth.t_final", "assimilation horizon (default 50)"},
        {"truth.warmup", "integrate the truth before assimilating (default true)"},
        {"truth.warmup_time", "warmup horizon (default 10)"},
        {"estimator.unknowns", "comma-separated coefficient indices to estimate, e.g. 2 or 2,4,5 (default empty)"},
        {"estimator.guess", "initial lambda_hat for every unknown (default 2)"},
        {"estimator.mu", "nudging strength, or 'auto' for 1.8/dt (default auto)"},
        {"estimator.alpha", "relaxation rate; 0 disables smoothing (default 1)"},
        {"estimator.bdf_order", "BDF order 1..3 (default 3)"},
        {"estimator.sigma_min", "relative pivot threshold for degeneracy (default 1e-6)"},
        {"estimator.e1_min", "suspend updates below this relative observed error (default 1e-13)"},
        {"observation.kind", "fourier | points (default fourier)"},
        {"observation.K", "Fourier cutoff: modes |k| > K are unobserved (default 21)"},
        {"observation.m", "number of evenly spaced observation points (default 40)"},
        {"observation.interp_order", "linear | quadratic | cubic (default cubic)"},
        {"output.dir", "output directory (default out)"},
        {"output.prefix", "output file prefix (default run)"},
        {"output.cache_dir", "warmup cache directory (default: system temp)"},
        {"output.seed", "reserved for future randomized studies (default 0)"},
    };
    return ref;
}

ExperimentSpec spec_from_entries(const ConfigEntries& entries) {
    const auto& ref = config_key_reference();
    for (const auto& [key, value] : entries) {
        (void)value;
        if (!ref.count(key)) {
            std::string msg = "config: unknown key '" + key + "'; valid keys are:";
            for (const auto& [k, d] : ref) msg += "\n  " + k + "  (" + d + ")";
            throw std::invalid_argument(msg);
        }
    }
    auto get = [&](const std::string& key) -> const std::string* {
        auto it = entries.find(key);
        return it == entries.end() ? nullptr : &it->second;
    };

    ExperimentSpec spec;
    if (auto* v = get("grid.L")) spec.L = parse_double("grid.L", *v);
    if (auto* v = get("grid.N")) spec.N = parse_int("grid.N", *v);
    for (int k = 1; k <= 5; k++) {
        std::string key = "truth.lambda" + std::to_string(k);
        if (auto* v = get(key)) spec.truth.lambda[k - 1] = parse_double(key, *v);
    }
    if (auto* v = get("truth.dt")) spec.dt = parse_double("truth.dt", *v);
    if (auto* v = get("truth.t_final")) spec.t_final = parse_double("truth.t_final", *v);
    if (auto* v = get("truth.warmup")) spec.warmup = parse_bool("truth.warmup", *v);
    if (auto* v = get("truth.warmup_time")) spec.warmup_time = parse_double("truth.warmup_time", *v);

    if (auto* v = get("estimator.unknowns")) {
        std::string s = *v;
        std::replace(s.begin(), s.end(), ',', ' ');
        std::stringstream ss(s);
        int k;
        while (ss >> k) {
            if (k < 1 || k > 5)
                throw std::invalid_argument("config: estimator.unknowns index out of 1..5: " +
                                            std::to_string(k));
            spec.truth.unknown[k - 1] = true;
        }
    }
    if (auto* v = get("estimator.guess")) {
        const double gv = parse_double("estimator.guess", *v);
        spec.guesses.fill(gv);
    }
    if (auto* v = get("estimator.mu")) {
        if (*v == "auto") {
            spec.mu_auto = true;
        } else {
            spec.cfg.mu = parse_double("estimator.mu", *v);
            spec.mu_auto = false;
        }
    }
    if (auto* v = get("estimator.alpha")) spec.cfg.alpha = parse_double("estimator.alpha", *v);
    if (auto* v = get("estimator.bdf_order")) spec.cfg.p = parse_int("estimator.bdf_order", *v);
    if (auto* v = get("estimator.sigma_min"))
        spec.cfg.sigma_min = parse_double("estimator.sigma_min", *v);
    if (auto* v = get("estimator.e1_min")) spec.cfg.e1_min = parse_double("estimator.e1_min", *v);

    if (auto* v = get("observation.kind")) {
        if (*v == "fourier") spec.obs.kind = ObservationOperator::Kind::fourier_truncation;
        else if (*v == "points") spec.obs.kind = ObservationOperator::Kind::pointwise_interpolation;
        else throw std::invalid_argument("config: observation.kind must be fourier or points, got '" + *v + "'");
    }
    if (auto* v = get("observation.K")) spec.obs.K = parse_int("observation.K", *v);
    if (auto* v = get("observation.m")) spec.obs.m = parse_int("observation.m", *v);
    if (auto* v = get("observation.interp_order")) {
        if (*v == "linear") spec.obs.interp_order = InterpOrder::linear;
        else if (*v == "quadratic") spec.obs.interp_order = InterpOrder::quadratic;
        else if (*v == "cubic") spec.obs.interp_order = InterpOrder::cubic;
        else throw std::invalid_argument("config: observation.interp_order must be linear, quadratic, or cubic, got '" + *v + "'");
    }
    if (auto* v = get("output.dir")) spec.out_dir = *v;
    if (auto* v = get("output.prefix")) spec.prefix = *v;
    if (auto* v = get("output.cache_dir")) spec.cache_dir = *v;
    if (auto* v = get("output.seed")) spec.seed = (unsigned)parse_int("output.seed", *v);

    if (spec.N < 4 || spec.N % 2 != 0)
        throw std::invalid_argument("config: grid.N must be even and >= 4");
    if (spec.dt <= 0.0) throw std::invalid_argument("config: truth.dt must be positive");
    if (spec.cfg.p < 1 || spec.cfg.p > 3)
        throw std::invalid_argument("config: estimator.bdf_order must be 1, 2, or 3");
    if (spec.effective_mu() * spec.dt >= 2.0)
        throw std::invalid_argument("config: mu*dt must stay below 2 (forward-Euler nudging stability)");
    if (spec.cfg.alpha < 0.0) throw std::invalid_argument("config: estimator.alpha must be >= 0");
    if (spec.truth.lambda[3] <= 0.0)
        throw std::invalid_argument("config: truth.lambda4 must be positive (dissipation)");
    return spec;
}

} // namespace kse
