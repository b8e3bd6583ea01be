// Twin-experiment simulator CLI: single runs, parameter sweeps, and the
// BDF order-of-accuracy study, all driven by a flat config file plus
// dotted-key overrides. Outputs CSV with a JSON metadata sidecar.
#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kse/config.hpp"
#include "kse/csv.hpp"
#include "kse/experiment.hpp"

namespace fs = std::filesystem;

namespace {

kse::ExperimentSpec load_spec(const std::string& config_path,
                              const std::vector<std::string>& overrides,
                              const std::string& out_dir) {
    kse::ConfigEntries entries;
    if (!config_path.empty()) entries = kse::read_config_entries(config_path);
    for (const auto& ov : overrides) kse::apply_override(entries, ov);
    kse::ExperimentSpec spec = kse::spec_from_entries(entries);
    if (!out_dir.empty()) spec.out_dir = out_dir;
    return spec;
}

std::vector<double> parse_double_list(const std::string& csv) {
    std::vector<double> out;
    size_t pos = 0;
    while (pos <= csv.size()) {
        size_t comma = csv.find(',', pos);
        if (comma == std::string::npos) comma = csv.size();
        std::string tok = csv.substr(pos, comma - pos);
        if (!tok.empty()) {
            size_t used = 0;
            double v = std::stod(tok, &used);
            if (used != tok.size())
                throw std::invalid_argument("bad number in list: '" + tok + "'");
            out.push_back(v);
        }
        pos = comma + 1;
    }
    if (out.empty()) throw std::invalid_argument("empty value list");
    return out;
}

std::string output_path(const kse::ExperimentSpec& spec, const std::string& stem) {
    fs::create_directories(spec.out_dir);
    return (fs::path(spec.out_dir) / (spec.prefix + "_" + stem)).string();
}

int cmd_run(const kse::ExperimentSpec& spec) {
    kse::RunResult result = kse::run_twin_experiment(spec);
    const std::string csv = output_path(spec, "timeseries.csv");
    kse::write_csv(result.records, csv);
    kse::write_meta(spec, result, csv + ".meta.json");
    std::printf("run: %zu records -> %s\n", result.records.size(), csv.c_str());
    if (result.blew_up) {
        std::printf("run: BLEW UP (%s)\n", result.diagnostic.c_str());
        return 2;
    }
    const auto& s = result.summary;
    std::printf("run: t_c=%.6g", s.t_c);
    if (s.beta_defined) std::printf(" beta=%.6g", s.beta);
    if (!s.final_error.empty())
        std::printf(" final_error_max=%.6g converged=%d", s.final_error_max, s.converged ? 1 : 0);
    else
        std::printf(" converged=%d", s.converged ? 1 : 0);
    std::printf("\n");
    return 0;
}

int cmd_sweep(const kse::ExperimentSpec& spec, const std::string& axis_name,
              const std::string& values_csv) {
    kse::SweepAxis axis;
    if (axis_name == "alpha") axis = kse::SweepAxis::alpha;
    else if (axis_name == "mu") axis = kse::SweepAxis::mu;
    else if (axis_name == "K") axis = kse::SweepAxis::K;
    else if (axis_name == "m") axis = kse::SweepAxis::m;
    else throw std::invalid_argument("unknown sweep axis: " + axis_name);

    std::vector<double> values = parse_double_list(values_csv);
    std::vector<kse::SweepRow> rows = kse::parameter_sweep(spec, axis, values);
    const std::string csv = output_path(spec, "sweep_" + axis_name + ".csv");
    kse::write_csv(rows, csv);
    kse::write_meta(spec, csv + ".meta.json");
    std::printf("sweep over %s: %zu cells -> %s\n", axis_name.c_str(), rows.size(), csv.c_str());
    for (const auto& r : rows) {
        if (r.failed)
            std::printf("  %s=%.6g FAILED (%s)\n", axis_name.c_str(), r.axis_value, r.note.c_str());
        else
            std::printf("  %s=%.6g final_error=%.6g converged=%d\n", axis_name.c_str(),
                        r.axis_value, r.final_error, r.converged ? 1 : 0);
    }
    return 0;
}

int cmd_order_study(const kse::ExperimentSpec& spec, const std::string& dts_csv,
                    const std::string& orders_csv, double saturation) {
    std::vector<double> dts = parse_double_list(dts_csv);
    std::vector<int> orders;
    for (double v : parse_double_list(orders_csv)) {
        int p = static_cast<int>(v);
        if (p < 1 || p > 3 || static_cast<double>(p) != v)
            throw std::invalid_argument("orders must be integers in {1,2,3}");
        orders.push_back(p);
    }
    kse::OrderStudyResult result = kse::order_of_accuracy_study(spec, dts, orders, saturation);
    const std::string csv = output_path(spec, "order_study.csv");
    kse::write_csv(result, csv);
    kse::write_meta(spec, csv + ".meta.json");
    std::printf("order study: %zu cells -> %s\n", result.cells.size(), csv.c_str());
    for (const auto& [p, slope] : result.slope)
        std::printf("  bdf_order=%d slope=%.4f (%d points)\n", p, slope, result.points_used.at(p));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nudging-based concurrent parameter estimation on the generalized "
                 "Kuramoto-Sivashinsky equation (twin experiments)"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    std::vector<std::string> overrides;
    app.add_option("--config", config_path, "Config file (key = value with [sections])")
        ->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "Output directory (overrides output.dir)");
    app.add_option("--override", overrides,
                   "Override a config key, e.g. --override estimator.alpha=0.5 (repeatable)");

    auto* run = app.add_subcommand("run", "Run one twin experiment");

    auto* sweep = app.add_subcommand("sweep", "Run a one-axis parameter sweep");
    std::string axis_name, values_csv;
    sweep->add_option("--axis", axis_name, "Sweep axis: alpha, mu, K, or m")->required();
    sweep->add_option("--values", values_csv, "Comma-separated axis values")->required();

    auto* study = app.add_subcommand("order-study", "BDF order-of-accuracy study");
    std::string dts_csv = "1e-2,5e-3,2e-3,1e-3";
    std::string orders_csv = "1,2,3";
    double saturation = 1e-11;
    study->add_option("--dts", dts_csv, "Comma-separated time steps");
    study->add_option("--orders", orders_csv, "Comma-separated BDF orders from {1,2,3}");
    study->add_option("--saturation", saturation,
                      "Error floor; cells below it are excluded from the slope fit");

    auto* keys = app.add_subcommand("config-keys", "List every recognized config key");

    CLI11_PARSE(app, argc, argv);

    try {
        if (keys->parsed()) {
            for (const auto& [key, doc] : kse::config_key_reference())
                std::printf("%-28s %s\n", key.c_str(), doc.c_str());
            return 0;
        }
        kse::ExperimentSpec spec = load_spec(config_path, overrides, out_dir);
        if (run->parsed()) return cmd_run(spec);
        if (sweep->parsed()) return cmd_sweep(spec, axis_name, values_csv);
        if (study->parsed()) return cmd_order_study(spec, dts_csv, orders_csv, saturation);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
