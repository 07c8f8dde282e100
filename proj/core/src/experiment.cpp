#include "admmlab/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <future>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "admmlab/admm.hpp"

namespace admmlab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct TrialOutcome {
  bool done = false;
  std::vector<double> mse;
  std::vector<double> ser;
  std::vector<Vector> snapshots;  // aligned with spec.cdf_k
};

struct MeanStderr {
  double mean = kNaN;
  double stderr_ = kNaN;
};

MeanStderr mean_stderr(const std::vector<double>& v) {
  MeanStderr out;
  if (v.empty()) return out;
  double sum = 0.0;
  for (double x : v) sum += x;
  out.mean = sum / static_cast<double>(v.size());
  if (v.size() < 2) {
    out.stderr_ = 0.0;
    return out;
  }
  double ss = 0.0;
  for (double x : v) ss += (x - out.mean) * (x - out.mean);
  out.stderr_ = std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
  return out;
}

double mass_near_pm1(std::span<const double> v) {
  if (v.empty()) return kNaN;
  std::size_t hits = 0;
  for (double s : v) {
    if (std::abs(s - 1.0) <= 0.1 || std::abs(s + 1.0) <= 0.1) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(v.size());
}

const Vector* find_snapshot(const std::vector<std::pair<int, Vector>>& snaps, int k) {
  for (const auto& [kk, v] : snaps) {
    if (kk == k) return &v;
  }
  return nullptr;
}

void write_outputs(const ExperimentResult& res, const RunOptions& options) {
  if (!options.out_dir) return;
  std::filesystem::create_directories(*options.out_dir);
  const auto base = *options.out_dir / res.spec.name;
  {
    std::ofstream out(base.string() + ".csv", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + base.string() + ".csv");
    write_csv(out, res.table);
  }
  if (res.spec.output_cdf && !res.cdf.empty()) {
    std::ofstream out(base.string() + "_cdf.csv", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + base.string() + "_cdf.csv");
    write_cdf_csv(out, res.cdf);
  }
}

void aggregate(ExperimentResult& res, const std::vector<TrialOutcome>& trials,
               const std::optional<PredictionTrajectory>& pred, const SignalPrior& prior) {
  const ExperimentSpec& spec = res.spec;
  std::vector<const TrialOutcome*> done;
  for (const auto& t : trials) {
    if (t.done) done.push_back(&t);
  }
  const bool binary = prior.is_binary();
  if (!done.empty()) {
    for (int k = 1; k <= spec.iters; ++k) {
      std::vector<double> m, s;
      for (const auto* t : done) {
        m.push_back(t->mse[static_cast<std::size_t>(k - 1)]);
        if (binary) s.push_back(t->ser[static_cast<std::size_t>(k - 1)]);
      }
      const auto ms = mean_stderr(m);
      const auto ss = mean_stderr(s);
      res.table.rows.push_back({RowSource::Empirical, k, ms.mean, ms.stderr_, ss.mean, ss.stderr_,
                                kNaN, kNaN, 0, static_cast<long long>(done.size())});
    }
  }
  if (pred) {
    for (const auto& r : pred->records) {
      res.table.rows.push_back({RowSource::Prediction, r.k, r.mse_alpha, kNaN,
                                binary ? r.ser : kNaN, kNaN, r.alpha_star, r.beta_star,
                                pred->particles, 0});
    }
  }
  if (!spec.output_cdf || done.empty() || !pred) return;

  const auto grid = spec.cdf_grid.values();
  for (std::size_t j = 0; j < spec.cdf_k.size(); ++j) {
    const int k = spec.cdf_k[j];
    std::vector<double> pooled;
    for (const auto* t : done) {
      const Vector& v = t->snapshots[j];
      pooled.insert(pooled.end(), v.data(), v.data() + v.size());
    }
    const Vector* particles = find_snapshot(pred->snapshots, k);
    if (pooled.empty() || particles == nullptr) continue;
    const auto fe = empirical_cdf(pooled, grid);
    const auto fp = empirical_cdf(as_span(*particles), grid);
    for (std::size_t g = 0; g < grid.size(); ++g) res.cdf.push_back({k, grid[g], fe[g], fp[g]});
    res.ks[k] = ks_distance(pooled, std::vector<double>(particles->data(),
                                                        particles->data() + particles->size()));
    res.mass_near_pm1_empirical[k] = mass_near_pm1(pooled);
    res.mass_near_pm1_predicted[k] = mass_near_pm1(as_span(*particles));
  }
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec_in, const RunOptions& options) {
  spec_in.validate();
  ExperimentResult res;
  res.spec = spec_in;
  ExperimentSpec& spec = res.spec;

  const SignalPrior prior = spec.prior();
  const SeparableRegularizer reg = spec.regularizer();
  const int m = spec.measurements();
  const double delta = spec.effective_delta();

  double lambda = 1.0;  // the box prox ignores its scale
  if (spec.scenario == Scenario::SparseL1) {
    if (!spec.lambda) {
      spec.lambda = tune_lambda(prior, reg, delta, spec.sigma_v2, spec.rho, spec.seed);
    }
    lambda = *spec.lambda;
  }

  AdmmConfig acfg;
  acfg.rho = spec.rho;
  acfg.lambda = lambda;
  acfg.max_iter = spec.iters;
  acfg.record_estimates = spec.output_cdf;
  acfg.snapshot_iters = spec.cdf_k;

  PredictionConfig pcfg;
  pcfg.particles = spec.particles;
  pcfg.seed = spec.seed;
  pcfg.h_mode = spec.h_mode;
  pcfg.search_tol = spec.search_tol;
  pcfg.record_samples = spec.output_cdf;
  pcfg.snapshot_iters = spec.cdf_k;

  std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(spec.trials));
  std::optional<PredictionTrajectory> pred;
  std::mutex err_mutex;
  std::exception_ptr first_error;
  const auto record_error = [&] {
    std::lock_guard lock(err_mutex);
    if (!first_error) first_error = std::current_exception();
  };

  const auto run_trial = [&](int t) {
    RngStream rng(spec.seed, static_cast<std::uint64_t>(t));
    const ProblemInstance inst = generate_instance_m(prior, spec.matrix, spec.N, m,
                                                     spec.sigma_v2, rng);
    const Trajectory traj = run(inst, acfg, reg);
    TrialOutcome& out = outcomes[static_cast<std::size_t>(t)];
    for (const auto& r : traj.records) {
      out.mse.push_back(r.mse);
      out.ser.push_back(r.ser);
    }
    for (int k : spec.cdf_k) {
      const Vector* snap = spec.output_cdf ? find_snapshot(traj.snapshots, k) : nullptr;
      out.snapshots.push_back(snap ? *snap : Vector());
    }
    out.done = true;
  };
  const auto run_prediction = [&] {
    try {
      pred = predict_trajectory(prior, reg, lambda, delta, spec.sigma_v2, spec.rho, spec.iters,
                                pcfg);
    } catch (...) {
      record_error();
    }
  };

  std::atomic<int> next_trial{0};
  std::atomic<bool> stop{false};
  const auto worker = [&] {
    for (int t = next_trial++; t < spec.trials && !stop; t = next_trial++) {
      try {
        run_trial(t);
      } catch (...) {
        record_error();
        stop = true;
      }
    }
  };

  const int workers = std::max(1, options.workers);
  if (workers == 1) {
    run_prediction();
    if (!first_error) worker();
  } else {
    auto pred_future = std::async(std::launch::async, run_prediction);
    std::vector<std::thread> pool;
    for (int i = 0; i < std::max(1, workers - 1); ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    pred_future.get();
  }

  aggregate(res, outcomes, pred, prior);
  if (first_error) {
    ResultRow marker;
    marker.source = RowSource::Error;
    marker.k = -1;
    marker.mse_mean = marker.mse_stderr = marker.ser_mean = marker.ser_stderr = kNaN;
    marker.alpha_star = marker.beta_star = kNaN;
    res.table.rows.push_back(marker);
    try {
      write_outputs(res, options);
    } catch (...) {
    }
    std::rethrow_exception(first_error);
  }
  write_outputs(res, options);
  return res;
}

std::vector<ExperimentResult> sweep(const ExperimentSpec& base, const std::string& parameter,
                                    const std::vector<std::string>& values,
                                    const RunOptions& options) {
  if (!is_sweepable(parameter)) throw SpecError("parameter '" + parameter + "' is not sweepable");
  std::vector<ExperimentSpec> cells;
  for (const auto& v : values) {
    ExperimentSpec cell = base;
    apply_override(cell, parameter, v);
    cell.name = base.name + "_" + parameter + "-" + v;
    cell.validate();
    cells.push_back(std::move(cell));
  }
  std::vector<ExperimentResult> out;
  out.reserve(cells.size());
  for (const auto& cell : cells) out.push_back(run_experiment(cell, options));
  return out;
}

CompareReport compare_report(const ResultTable& table, const Tolerances& tol,
                             const std::map<int, double>& ks) {
  if (!table.has(RowSource::Empirical)) throw MissingSource("table has no empirical rows");
  if (!table.has(RowSource::Prediction)) throw MissingSource("table has no prediction rows");
  std::map<int, ResultRow> pred;
  for (const auto& r : table.select(RowSource::Prediction)) pred[r.k] = r;

  CompareReport rep;
  for (const auto& e : table.select(RowSource::Empirical)) {
    const auto it = pred.find(e.k);
    if (it == pred.end()) continue;
    const ResultRow& p = it->second;
    IterationGap g;
    g.k = e.k;
    if (e.mse_mean == p.mse_mean) {
      g.mse_gap_db = 0.0;
    } else if (e.mse_mean > 0.0 && p.mse_mean > 0.0) {
      g.mse_gap_db = 10.0 * std::log10(e.mse_mean / p.mse_mean);
    } else {
      g.mse_gap_db = std::numeric_limits<double>::infinity();
    }
    g.ser_gap = (std::isnan(e.ser_mean) || std::isnan(p.ser_mean)) ? kNaN
                                                                  : e.ser_mean - p.ser_mean;
    if (g.k >= tol.mse_k_min && !std::isnan(g.mse_gap_db)) {
      rep.worst_mse_db = std::max(rep.worst_mse_db, std::abs(g.mse_gap_db));
      if (!(std::abs(g.mse_gap_db) <= tol.mse_db)) {
        rep.failures.push_back("k=" + std::to_string(g.k) + " MSE gap " +
                               format_double(g.mse_gap_db) + " dB");
      }
    }
    if (g.k >= tol.ser_k_min && !std::isnan(g.ser_gap)) {
      rep.worst_ser = std::max(rep.worst_ser, std::abs(g.ser_gap));
      if (!(std::abs(g.ser_gap) <= tol.ser_abs)) {
        rep.failures.push_back("k=" + std::to_string(g.k) + " SER gap " +
                               format_double(g.ser_gap));
      }
    }
    rep.gaps.push_back(g);
  }
  rep.ks = ks;
  for (const auto& [k, d] : ks) {
    rep.worst_ks = std::max(rep.worst_ks, d);
    if (!(d <= tol.ks)) {
      rep.failures.push_back("k=" + std::to_string(k) + " KS " + format_double(d));
    }
  }
  rep.pass = rep.failures.empty();
  return rep;
}

std::map<int, double> grid_ks(const std::vector<CdfRow>& rows) {
  std::map<int, double> out;
  for (const auto& r : rows) {
    double& d = out[r.k];
    d = std::max(d, std::abs(r.cdf_empirical - r.cdf_predicted));
  }
  return out;
}

std::string format_report(const CompareReport& rep) {
  std::ostringstream os;
  os << "k,mse_gap_db,ser_gap\n";
  for (const auto& g : rep.gaps) {
    os << g.k << ',' << format_double(g.mse_gap_db) << ',' << format_double(g.ser_gap) << '\n';
  }
  for (const auto& [k, d] : rep.ks) os << "ks k=" << k << ' ' << format_double(d) << '\n';
  os << "worst |MSE gap| (dB): " << format_double(rep.worst_mse_db) << '\n';
  os << "worst |SER gap|: " << format_double(rep.worst_ser) << '\n';
  if (!rep.ks.empty()) os << "worst KS: " << format_double(rep.worst_ks) << '\n';
  for (const auto& f : rep.failures) os << "FAIL " << f << '\n';
  os << (rep.pass ? "PASS" : "FAIL") << '\n';
  return os.str();
}

}  // namespace admmlab
