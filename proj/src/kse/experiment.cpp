#include "kse/experiment.hpp"

#include <unistd.h>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace fs = std::filesystem;

namespace kse {

namespace {

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string warmup_key(const Grid& g, const ModelCoefficients& coeffs, double dt,
                       double warmup_time) {
    // the v2 tag versions the numerics, not just the file layout: a cache
    // written by a binary with different round-off behavior must not be reused
    char buf[512];
    std::snprintf(buf, sizeof(buf), "v2 N=%d L=%.17g dt=%.17g T=%.17g l=%.17g,%.17g,%.17g,%.17g,%.17g",
                  g.N, g.L, dt, warmup_time, coeffs.lambda[0], coeffs.lambda[1], coeffs.lambda[2],
                  coeffs.lambda[3], coeffs.lambda[4]);
    return buf;
}

} // namespace

SpectralField warmup_truth_cached(const Grid& g, const ModelCoefficients& coeffs, double dt,
                                  double warmup_time, const std::string& cache_dir) {
    const std::string key = warmup_key(g, coeffs, dt, warmup_time);
    fs::path dir = cache_dir.empty() ? fs::temp_directory_path() / "kse-warmup-cache"
                                     : fs::path(cache_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);  // failure handled below by falling back

    char name[64];
    std::snprintf(name, sizeof(name), "warmup_%016llx.bin", (unsigned long long)fnv1a(key));
    const fs::path path = dir / name;

    if (fs::exists(path)) {
        std::ifstream in(path, std::ios::binary);
        std::string stored_key;
        if (in && std::getline(in, stored_key) && stored_key == key) {
            SpectralField u(g);
            in.read(reinterpret_cast<char*>(u.c.data()), sizeof(std::complex<double>) * g.N);
            if (in) return u;
        }
        // stale or corrupt entry: recompute and overwrite
    }

    SpectralField u = warmup_truth(g, coeffs, dt, warmup_time);

    const fs::path tmp = path.string() + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) return u;  // cache directory not writable; still return the state
        out << key << "\n";
        out.write(reinterpret_cast<const char*>(u.c.data()), sizeof(std::complex<double>) * g.N);
    }
    fs::rename(tmp, path, ec);
    if (ec) fs::remove(tmp, ec);
    return u;
}

RunResult run_twin_experiment(const ExperimentSpec& spec) {
    Grid g(spec.L, spec.N);
    EstimatorConfig cfg = spec.cfg;
    cfg.mu = spec.effective_mu();

    RunResult out;
    SpectralField truth_state = spec.warmup
        ? warmup_truth_cached(g, spec.truth, spec.dt, spec.warmup_time, spec.cache_dir)
        : initial_profile(g);

    EstimatorState st;
    st.v = SpectralField(g);
    st.lambda_hat = spec.truth.lambda;
    const std::vector<int> unknowns = spec.truth.unknown_indices();
    for (int k : unknowns) st.lambda_hat[k - 1] = spec.guesses[k - 1];
    st.lambda_tilde = st.lambda_hat;

    Forcing none;
    const long nsteps = std::lround(spec.t_final / spec.dt);
    out.records.reserve(nsteps + 1);

    for (long j = 0; j <= nsteps; j++) {
        const double t = j * spec.dt;
        TimeSeriesRecord rec;
        rec.t = t;
        SpectralField w(g);
        for (int i = 0; i < g.N; i++) w.c[i] = truth_state.c[i] - st.v.c[i];
        rec.state_err_l2 = l2_norm(w);
        rec.obs_err_l2 = l2_norm(observe(spec.obs, w));
        for (int k : unknowns)
            rec.param_err.push_back(std::fabs(spec.truth.lambda[k - 1] - st.lambda_hat[k - 1]));
        out.records.push_back(std::move(rec));
        if (j == nsteps) break;

        try {
            SpectralField u_obs = observe(spec.obs, truth_state);
            assimilation_step(st, u_obs, spec.truth, cfg, spec.obs, none, t, spec.dt);
            truth_state = imex_step(truth_state, spec.truth, none, spec.dt);
        } catch (const BlowupError& e) {
            out.blew_up = true;
            out.diagnostic = std::string(e.what()) + " at step " + std::to_string(j) +
                             " (t = " + std::to_string(t) + ")";
            break;
        }
    }

    out.lambda_hat_final = st.lambda_hat;
    out.summary = estimate_convergence_rate(out.records);
    if (out.blew_up) out.summary.converged = false;
    return out;
}

ConvergenceSummary estimate_convergence_rate(const std::vector<TimeSeriesRecord>& records) {
    if (records.empty())
        throw std::invalid_argument("estimate_convergence_rate: empty series");
    ConvergenceSummary s;
    const double t0 = records.front().t;
    const double w0 = records.front().state_err_l2;
    const double tf = records.back().t;
    const double wf = records.back().state_err_l2;

    s.t_c = tf;
    for (const auto& r : records) {
        if (r.state_err_l2 <= wf) {
            s.t_c = r.t;
            break;
        }
    }
    const double wc = wf;
    if (s.t_c > t0 && w0 > 0.0 && wc > 0.0 && std::isfinite(w0) && std::isfinite(wc)) {
        s.beta = -(std::log(wc) - std::log(w0)) / (s.t_c - t0);
        s.beta_defined = true;
    }

    const size_t n_params = records.back().param_err.size();
    s.final_error.assign(n_params, 0.0);
    size_t count = 0;
    for (const auto& r : records) {
        if (r.t < tf - 1.0) continue;
        if (r.param_err.size() != n_params) continue;
        for (size_t i = 0; i < n_params; i++) s.final_error[i] += r.param_err[i];
        count++;
    }
    if (count > 0)
        for (auto& e : s.final_error) e /= (double)count;
    s.final_error_max = 0.0;
    for (double e : s.final_error) s.final_error_max = std::max(s.final_error_max, e);

    if (n_params > 0) {
        s.converged = std::isfinite(s.final_error_max) && s.final_error_max <= kParamConvergedTol;
    } else {
        s.converged = w0 > 0.0 && std::isfinite(wf) && wf / w0 <= kStateDecayFactor;
    }
    return s;
}

double fit_loglog_slope(const std::vector<std::pair<double, double>>& dt_err) {
    if (dt_err.size() < 2)
        throw std::invalid_argument("fit_loglog_slope: need at least two points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = (double)dt_err.size();
    for (const auto& [dt, err] : dt_err) {
        const double x = std::log(dt), y = std::log(err);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

OrderStudyResult order_of_accuracy_study(const ExperimentSpec& base, const std::vector<double>& dts,
                                         const std::vector<int>& orders,
                                         double saturation_threshold) {
    OrderStudyResult out;
    for (int p : orders) {
        std::vector<std::pair<double, double>> pts;
        for (double dt : dts) {
            ExperimentSpec spec = base;
            spec.dt = dt;
            spec.cfg.p = p;
            OrderStudyCell cell;
            cell.p = p;
            cell.dt = dt;
            RunResult r = run_twin_experiment(spec);
            cell.blew_up = r.blew_up;
            cell.final_error = r.summary.final_error_max;
            // A cell carries order information only when the run recovered the
            // parameter (plateau error well below the O(1) initial guess error)
            // and the plateau is not the scheme's error floor. First-order runs
            // at large dt legitimately plateau above 1e-4, so the recovery bar
            // is loose.
            cell.excluded = r.blew_up || !(cell.final_error < 1e-1) ||
                            cell.final_error < saturation_threshold;
            if (!cell.excluded) pts.emplace_back(dt, cell.final_error);
            out.cells.push_back(cell);
        }
        if (pts.size() >= 2) {
            out.slope[p] = fit_loglog_slope(pts);
            out.points_used[p] = (int)pts.size();
        } else {
            out.points_used[p] = (int)pts.size();
        }
    }
    return out;
}

std::vector<SweepRow> parameter_sweep(const ExperimentSpec& base, SweepAxis axis,
                                      const std::vector<double>& values) {
    std::vector<SweepRow> rows;
    for (double value : values) {
        SweepRow row;
        row.axis_value = value;
        ExperimentSpec spec = base;
        switch (axis) {
            case SweepAxis::alpha: spec.cfg.alpha = value; break;
            case SweepAxis::mu:
                spec.cfg.mu = value;
                spec.mu_auto = false;
                break;
            case SweepAxis::K: spec.obs.K = (int)std::lround(value); break;
            case SweepAxis::m: spec.obs.m = (int)std::lround(value); break;
        }
        if (spec.effective_mu() * spec.dt >= 2.0) {
            row.failed = true;
            row.note = "rejected: mu*dt >= 2 (forward-Euler nudging unstable)";
            rows.push_back(row);
            continue;
        }
        RunResult r = run_twin_experiment(spec);
        row.beta = r.summary.beta;
        row.beta_defined = r.summary.beta_defined;
        row.t_c = r.summary.t_c;
        row.final_error = r.summary.final_error_max;
        row.converged = r.summary.converged;
        row.failed = r.blew_up;
        if (r.blew_up) row.note = r.diagnostic;
        rows.push_back(row);
    }
    return rows;
}

} // namespace kse
