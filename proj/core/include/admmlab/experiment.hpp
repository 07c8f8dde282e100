#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "admmlab/experiment_spec.hpp"
#include "admmlab/result_table.hpp"

namespace admmlab {

struct RunOptions {
  int workers = 1;
  /// When set, <out_dir>/<name>.csv (and <name>_cdf.csv) are written.
  std::optional<std::filesystem::path> out_dir;
};

struct ExperimentResult {
  ExperimentSpec spec;  // lambda filled in when it was tuned
  ResultTable table;
  std::vector<CdfRow> cdf;
  /// Exact two-sample KS distance between pooled s^(k) and particle S_k.
  std::map<int, double> ks;
  /// Mass within 0.1 of +-1, pooled empirical and particle, per CDF k.
  std::map<int, double> mass_near_pm1_empirical;
  std::map<int, double> mass_near_pm1_predicted;
};

/// Runs `trials` independent ADMM realizations (trial t uses stream
/// (seed, t)) and one prediction trajectory, then aggregates per iteration.
/// On failure the partial table plus an error row is written before the
/// exception propagates.
ExperimentResult run_experiment(const ExperimentSpec& spec, const RunOptions& options = {});

/// One experiment per value; only `parameter` changes between cells.
std::vector<ExperimentResult> sweep(const ExperimentSpec& base, const std::string& parameter,
                                    const std::vector<std::string>& values,
                                    const RunOptions& options = {});

class MissingSource : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct IterationGap {
  int k = 0;
  double mse_gap_db = 0.0;  // 10 log10(empirical / predicted)
  double ser_gap = 0.0;     // empirical - predicted; NaN when not reported
};

struct CompareReport {
  std::vector<IterationGap> gaps;
  std::map<int, double> ks;
  double worst_mse_db = 0.0;
  double worst_ser = 0.0;
  double worst_ks = 0.0;
  bool pass = true;
  std::vector<std::string> failures;
};

/// Per-k gaps between empirical and prediction rows, judged against the
/// tolerances. `ks` supplies KS distances for the requested k (optional).
CompareReport compare_report(const ResultTable& table, const Tolerances& tolerances,
                             const std::map<int, double>& ks = {});

/// KS distance approximated on the CDF grid: max |F_emp - F_pred| per k.
std::map<int, double> grid_ks(const std::vector<CdfRow>& rows);

std::string format_report(const CompareReport& report);

}  // namespace admmlab
