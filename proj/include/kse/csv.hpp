#ifndef KSE_CSV_HPP
#define KSE_CSV_HPP

#include <string>
#include <vector>

#include "kse/experiment.hpp"

namespace kse {

// Time-series CSV: header `t,state_err_l2,obs_err_l2,param_err_1,...` then one
// row per record, every value printed with 17 significant digits so a parse
// round-trip is bit-exact. Throws std::runtime_error with the path on I/O
// failure.
void write_csv(const std::vector<TimeSeriesRecord>& records, const std::string& path);

// Sweep CSV: `axis_value,beta,t_c,final_error,converged`. Failed cells keep
// their row (nan metrics, converged=0) so no value goes silently missing.
void write_csv(const std::vector<SweepRow>& rows, const std::string& path);

// Order-study CSV: `bdf_order,dt,final_error,excluded` cell rows followed by
// `slope,<order>,<value>,<points_used>` summary rows.
void write_csv(const OrderStudyResult& result, const std::string& path);

// JSON sidecar embedding the full spec and run outcome next to a CSV.
void write_meta(const ExperimentSpec& spec, const RunResult& result, const std::string& path);
void write_meta(const ExperimentSpec& spec, const std::string& path);

// Parse a time-series CSV written by write_csv (used by tests and plotting).
std::vector<TimeSeriesRecord> read_timeseries_csv(const std::string& path);

} // namespace kse

#endif
