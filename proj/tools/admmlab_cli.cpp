// admmlab: run ADMM compressed-sensing experiments next to their
// state-evolution prediction and compare the two.
//
//   admmlab gen --preset sparse > sparse.spec
//   admmlab run --spec sparse.spec --out results --workers 4
//   admmlab sweep --spec sparse_rho.spec --param rho --values 0.05,0.2,0.5
//   admmlab compare --table results/sparse.csv --spec sparse.spec
//
// Exit status: 0 pass, 2 tolerance failure, 1 error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "admmlab/experiment.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitError = 1;
constexpr int kExitTolerance = 2;

std::filesystem::path default_out_dir() {
  if (const char* env = std::getenv("ADMMLAB_OUT_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return "results";
}

struct CommonArgs {
  std::string spec_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  int workers = 1;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--spec", args.spec_path, "Experiment spec file (key = value)");
  cmd->add_option("--seed", args.seed, "Master seed (overrides the spec)");
  cmd->add_option("--out", args.out_dir, "Output directory (default $ADMMLAB_OUT_DIR or ./results)");
  cmd->add_option("--workers", args.workers, "Worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--override", args.overrides, "Override a spec field: key=value")
      ->allow_extra_args(false);
}

admmlab::ExperimentSpec resolve_spec(const CommonArgs& args) {
  admmlab::ExperimentSpec spec =
      args.spec_path.empty() ? admmlab::preset_spec("sparse") : admmlab::load_spec(args.spec_path);
  for (const auto& o : args.overrides) admmlab::apply_override(spec, o);
  if (args.seed) spec.seed = *args.seed;
  spec.validate();
  return spec;
}

admmlab::RunOptions resolve_options(const CommonArgs& args) {
  admmlab::RunOptions opt;
  opt.workers = args.workers;
  opt.out_dir = args.out_dir.empty() ? default_out_dir() : std::filesystem::path(args.out_dir);
  return opt;
}

bool report(const admmlab::ExperimentResult& res) {
  const auto rep = admmlab::compare_report(res.table, res.spec.tolerances, res.ks);
  std::cout << "# " << res.spec.name;
  if (res.spec.lambda) std::cout << " lambda=" << admmlab::format_double(*res.spec.lambda);
  std::cout << '\n' << admmlab::format_report(rep);
  return rep.pass;
}

std::vector<std::string> split_values(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ADMM compressed-sensing lab with state-evolution prediction"};
  app.require_subcommand(1);

  std::string preset = "sparse";
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "Emit a template experiment spec");
  gen->add_option("--preset", preset,
                  "Template: sparse, sparse_bernoulli, sparse_rho, binary_ser, binary_cdf");
  gen->add_option("--out", gen_out, "Write to this file instead of stdout");

  CommonArgs run_args;
  auto* run = app.add_subcommand("run", "Run one experiment cell");
  add_common(run, run_args);

  CommonArgs sweep_args;
  std::string sweep_param;
  std::string sweep_values;
  auto* sweep = app.add_subcommand("sweep", "Run one cell per parameter value");
  add_common(sweep, sweep_args);
  sweep->add_option("--param", sweep_param, "Parameter to sweep")->required();
  sweep->add_option("--values", sweep_values, "Comma-separated values")->required();

  std::string table_path;
  std::string cdf_path;
  CommonArgs cmp_args;
  auto* compare = app.add_subcommand("compare", "Check a result table against tolerances");
  compare->add_option("--table", table_path, "Result CSV")->required();
  compare->add_option("--cdf", cdf_path, "CDF CSV (KS distances on its grid)");
  compare->add_option("--spec", cmp_args.spec_path, "Spec supplying the tolerances");
  compare->add_option("--override", cmp_args.overrides, "Override a tolerance: key=value");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      const auto spec = admmlab::preset_spec(preset);
      if (gen_out.empty()) {
        admmlab::write_spec(std::cout, spec);
      } else {
        std::ofstream out(gen_out);
        if (!out) throw std::runtime_error("cannot write " + gen_out);
        admmlab::write_spec(out, spec);
      }
      return kExitPass;
    }
    if (*run) {
      const auto res = admmlab::run_experiment(resolve_spec(run_args), resolve_options(run_args));
      return report(res) ? kExitPass : kExitTolerance;
    }
    if (*sweep) {
      const auto results = admmlab::sweep(resolve_spec(sweep_args), sweep_param,
                                          split_values(sweep_values), resolve_options(sweep_args));
      bool pass = true;
      for (const auto& r : results) pass = report(r) && pass;
      return pass ? kExitPass : kExitTolerance;
    }
    if (*compare) {
      admmlab::ExperimentSpec spec = cmp_args.spec_path.empty()
                                         ? admmlab::ExperimentSpec{}
                                         : admmlab::load_spec(cmp_args.spec_path);
      for (const auto& o : cmp_args.overrides) admmlab::apply_override(spec, o);
      std::ifstream tin(table_path);
      if (!tin) throw std::runtime_error("cannot open " + table_path);
      const auto table = admmlab::read_csv(tin);
      std::map<int, double> ks;
      if (!cdf_path.empty()) {
        std::ifstream cdf_in(cdf_path);
        if (!cdf_in) throw std::runtime_error("cannot open " + cdf_path);
        ks = admmlab::grid_ks(admmlab::read_cdf_csv(cdf_in));
      }
      const auto rep = admmlab::compare_report(table, spec.tolerances, ks);
      std::cout << admmlab::format_report(rep);
      return rep.pass ? kExitPass : kExitTolerance;
    }
  } catch (const std::exception& e) {
    std::cerr << "admmlab: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
