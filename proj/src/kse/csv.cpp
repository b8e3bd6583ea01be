#include "kse/csv.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace kse {

namespace {

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::ofstream open_or_throw(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_csv: cannot open " + path);
    return out;
}

void close_or_throw(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) throw std::runtime_error("write_csv: write failed for " + path);
}

} // namespace

void write_csv(const std::vector<TimeSeriesRecord>& records, const std::string& path) {
    std::ofstream out = open_or_throw(path);
    const size_t n = records.empty() ? 0 : records.front().param_err.size();
    out << "t,state_err_l2,obs_err_l2";
    for (size_t i = 1; i <= n; i++) out << ",param_err_" << i;
    out << "\n";
    for (const auto& r : records) {
        out << g17(r.t) << ',' << g17(r.state_err_l2) << ',' << g17(r.obs_err_l2);
        for (double e : r.param_err) out << ',' << g17(e);
        out << "\n";
    }
    close_or_throw(out, path);
}

void write_csv(const std::vector<SweepRow>& rows, const std::string& path) {
    std::ofstream out = open_or_throw(path);
    out << "axis_value,beta,t_c,final_error,converged\n";
    for (const auto& r : rows) {
        const double beta = (r.failed || !r.beta_defined) ? NAN : r.beta;
        const double tc = r.failed ? NAN : r.t_c;
        const double fe = r.failed ? NAN : r.final_error;
        out << g17(r.axis_value) << ',' << g17(beta) << ',' << g17(tc) << ',' << g17(fe) << ','
            << (r.converged ? 1 : 0) << "\n";
    }
    close_or_throw(out, path);
}

void write_csv(const OrderStudyResult& result, const std::string& path) {
    std::ofstream out = open_or_throw(path);
    out << "bdf_order,dt,final_error,excluded\n";
    for (const auto& c : result.cells)
        out << c.p << ',' << g17(c.dt) << ',' << g17(c.final_error) << ',' << (c.excluded ? 1 : 0)
            << "\n";
    for (const auto& [p, slope] : result.slope)
        out << "slope," << p << ',' << g17(slope) << ',' << result.points_used.at(p) << "\n";
    close_or_throw(out, path);
}

namespace {

nlohmann::json spec_to_json(const ExperimentSpec& spec) {
    nlohmann::json j;
    j["grid"] = {{"L", spec.L}, {"N", spec.N}};
    j["truth"] = {{"lambda", spec.truth.lambda},
                  {"unknown", spec.truth.unknown},
                  {"dt", spec.dt},
                  {"t_final", spec.t_final},
                  {"warmup", spec.warmup},
                  {"warmup_time", spec.warmup_time}};
    j["estimator"] = {{"mu", spec.effective_mu()},
                      {"mu_auto", spec.mu_auto},
                      {"alpha", spec.cfg.alpha},
                      {"bdf_order", spec.cfg.p},
                      {"sigma_min", spec.cfg.sigma_min},
                      {"e1_min", spec.cfg.e1_min},
                      {"guesses", spec.guesses}};
    j["observation"] = {
        {"kind",
         spec.obs.kind == ObservationOperator::Kind::fourier_truncation ? "fourier" : "points"},
        {"K", spec.obs.K},
        {"m", spec.obs.m},
        {"interp_order", (int)spec.obs.interp_order}};
    j["output"] = {{"dir", spec.out_dir}, {"prefix", spec.prefix}, {"cache_dir", spec.cache_dir}};
    j["seed"] = spec.seed;
    return j;
}

} // namespace

void write_meta(const ExperimentSpec& spec, const RunResult& result, const std::string& path) {
    nlohmann::json j;
    j["spec"] = spec_to_json(spec);
    j["blew_up"] = result.blew_up;
    if (result.blew_up) j["diagnostic"] = result.diagnostic;
    j["summary"] = {{"t_c", result.summary.t_c},
                    {"beta", result.summary.beta_defined ? result.summary.beta : NAN},
                    {"final_error", result.summary.final_error},
                    {"converged", result.summary.converged}};
    j["lambda_hat_final"] = result.lambda_hat_final;
    std::ofstream out = open_or_throw(path);
    out << j.dump(2) << "\n";
    close_or_throw(out, path);
}

void write_meta(const ExperimentSpec& spec, const std::string& path) {
    nlohmann::json j;
    j["spec"] = spec_to_json(spec);
    std::ofstream out = open_or_throw(path);
    out << j.dump(2) << "\n";
    close_or_throw(out, path);
}

std::vector<TimeSeriesRecord> read_timeseries_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_timeseries_csv: cannot open " + path);
    std::vector<TimeSeriesRecord> out;
    std::string line;
    if (!std::getline(in, line)) return out;  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        TimeSeriesRecord r;
        std::stringstream ss(line);
        std::string cell;
        int col = 0;
        while (std::getline(ss, cell, ',')) {
            const double v = std::strtod(cell.c_str(), nullptr);
            if (col == 0) r.t = v;
            else if (col == 1) r.state_err_l2 = v;
            else if (col == 2) r.obs_err_l2 = v;
            else r.param_err.push_back(v);
            col++;
        }
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace kse
