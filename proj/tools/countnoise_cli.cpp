// Copyright 2026 The CountNoise Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// countnoise: design, verify, compare and sample the optimal integer-noise
// mechanism for count queries.
//
//   solve            closed-form optimum for one (eta, D, eps)
//   sweep-eps        event-level delta across an epsilon grid
//   sweep-eta        event-level delta across an eta grid
//   compare-gaussian matched-variance discrete Gaussian comparison
//   verify           closed form vs linear program, plus audit sandwich
//   sample           empirical audit of the sampler
//   figure-data      CSV bundle behind the standard four figures
//
// Every command is deterministic given its flags (including --seed); CSV
// output starts with a '#' provenance line recording the exact run.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "countnoise/gaussian.hpp"
#include "countnoise/json_io.hpp"
#include "countnoise/lp_oracle.hpp"
#include "countnoise/optimal.hpp"
#include "countnoise/sampler.hpp"
#include "countnoise/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerifyFailed = 2;

std::string fmt(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", value);
  return buf;
}

struct GridSpec {
  double start = 0.0;
  double stop = 1.0;
  int points = 2;
  std::string scale = "linear";

  void check() const {
    if (!(start < stop)) throw CLI::ValidationError("grid start must be < stop");
    if (points < 2) throw CLI::ValidationError("grid needs at least 2 points");
    if (scale != "linear" && scale != "log") {
      throw CLI::ValidationError("grid scale must be linear or log");
    }
    if (scale == "log" && !(start > 0.0)) {
      throw CLI::ValidationError("log grid needs start > 0");
    }
  }

  std::vector<double> values() const {
    std::vector<double> grid(static_cast<size_t>(points));
    for (int i = 0; i < points; ++i) {
      const double t = static_cast<double>(i) / static_cast<double>(points - 1);
      grid[static_cast<size_t>(i)] =
          scale == "log"
              ? std::exp(std::log(start) + t * (std::log(stop) - std::log(start)))
              : start + t * (stop - start);
    }
    return grid;
  }
};

// Runs f(i) for i in [0, n) on a few threads; each index writes its own slot,
// so assembly order never depends on scheduling.
void parallel_for(int n, const std::function<void(int)>& f) {
  const int workers =
      std::max(1, std::min(n, static_cast<int>(std::thread::hardware_concurrency())));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([w, workers, n, &f]() {
      for (int i = w; i < n; i += workers) f(i);
    });
  }
  for (std::thread& t : pool) t.join();
}

void write_output(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream file(out_path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open output file " + out_path);
  file << content;
}

std::string provenance(const std::string& command,
                       const std::vector<std::pair<std::string, std::string>>& args) {
  std::string line = "# countnoise " + command;
  for (const auto& [flag, value] : args) line += " --" + flag + " " + value;
  line += "\n";
  return line;
}

// Shared flag bundle; each subcommand registers the subset it uses.
struct Options {
  double eta = 0.5;
  std::vector<int> half_widths = {8};
  double epsilon = 1.1;
  int max_count = 0;
  GridSpec grid;
  long long trials = 1000000;
  int count = 0;
  int window = 3;
  int configs = 500;
  uint64_t seed = 0;
  std::string out;
  std::string format = "csv";
  bool corrupt = false;
};

int run_solve(const Options& opt) {
  countnoise::MechanismConfig config;
  config.eta = opt.eta;
  config.half_width = opt.half_widths.front();
  config.epsilon = opt.epsilon;
  if (opt.max_count > 0) config.max_count = opt.max_count;
  const countnoise::OptimalSolution solution = countnoise::optimal_alphas(config);
  const bool vacuous = solution.dp_delta >= 1.0;

  std::string body;
  if (opt.format == "json") {
    nlohmann::json j = solution;
    j["vacuous"] = vacuous;
    body = j.dump(2) + "\n";
  } else {
    body += provenance("solve", {{"eta", fmt(opt.eta)},
                                 {"D", std::to_string(config.half_width)},
                                 {"eps", fmt(opt.epsilon)}});
    body += "field,value\n";
    body += "eta," + fmt(config.eta) + "\n";
    body += "D," + std::to_string(config.half_width) + "\n";
    body += "epsilon," + fmt(config.epsilon) + "\n";
    body += "regime," + std::to_string(solution.regime) + "\n";
    body += "delta_star," + fmt(solution.delta_star) + "\n";
    body += "dp_delta," + fmt(solution.dp_delta) + "\n";
    for (size_t i = 0; i < solution.alphas.size(); ++i) {
      body += "alpha_" + std::to_string(i + 1) + "," + fmt(solution.alphas[i]) + "\n";
    }
    body += "variance," + fmt(solution.variance) + "\n";
    body += std::string("vacuous,") + (vacuous ? "true" : "false") + "\n";
  }
  write_output(opt.out, body);
  if (vacuous) {
    std::cerr << "note: dp_delta reached 1; this configuration is vacuous\n";
  }
  return kExitOk;
}

std::string joined_widths(const std::vector<int>& widths) {
  std::string out;
  for (size_t i = 0; i < widths.size(); ++i) {
    if (i > 0) out += " --D ";
    out += std::to_string(widths[i]);
  }
  return out;
}

int run_sweep_eps(const Options& opt) {
  opt.grid.check();
  const std::vector<double> grid = opt.grid.values();
  std::string body = provenance(
      "sweep-eps", {{"eta", fmt(opt.eta)},
                    {"D", joined_widths(opt.half_widths)},
                    {"grid-start", fmt(opt.grid.start)},
                    {"grid-stop", fmt(opt.grid.stop)},
                    {"grid-points", std::to_string(opt.grid.points)},
                    {"grid-scale", opt.grid.scale}});
  body += "epsilon,D,dp_delta\n";
  for (int d : opt.half_widths) {
    std::vector<std::string> rows(grid.size());
    parallel_for(static_cast<int>(grid.size()), [&](int i) {
      countnoise::MechanismConfig config;
      config.eta = opt.eta;
      config.half_width = d;
      config.epsilon = grid[static_cast<size_t>(i)];
      const countnoise::OptimalSolution s = countnoise::optimal_alphas(config);
      rows[static_cast<size_t>(i)] = fmt(config.epsilon) + "," +
                                     std::to_string(d) + "," +
                                     fmt(s.dp_delta) + "\n";
    });
    for (const std::string& row : rows) body += row;
  }
  write_output(opt.out, body);
  return kExitOk;
}

int run_sweep_eta(const Options& opt) {
  opt.grid.check();
  if (!(opt.grid.start > 0.0 && opt.grid.stop < 1.0)) {
    throw CLI::ValidationError("eta grid must stay inside (0, 1)");
  }
  const std::vector<double> grid = opt.grid.values();
  std::string body = provenance(
      "sweep-eta", {{"eps", fmt(opt.epsilon)},
                    {"D", joined_widths(opt.half_widths)},
                    {"grid-start", fmt(opt.grid.start)},
                    {"grid-stop", fmt(opt.grid.stop)},
                    {"grid-points", std::to_string(opt.grid.points)},
                    {"grid-scale", opt.grid.scale}});
  body += "eta,D,dp_delta\n";
  for (int d : opt.half_widths) {
    std::vector<std::string> rows(grid.size());
    parallel_for(static_cast<int>(grid.size()), [&](int i) {
      countnoise::MechanismConfig config;
      config.eta = grid[static_cast<size_t>(i)];
      config.half_width = d;
      config.epsilon = opt.epsilon;
      const countnoise::OptimalSolution s = countnoise::optimal_alphas(config);
      rows[static_cast<size_t>(i)] = fmt(config.eta) + "," +
                                     std::to_string(d) + "," +
                                     fmt(s.dp_delta) + "\n";
    });
    for (const std::string& row : rows) body += row;
  }
  write_output(opt.out, body);
  return kExitOk;
}

std::string comparison_csv(double eta, int half_width,
                           const std::vector<double>& grid,
                           const std::string& provenance_line) {
  std::vector<countnoise::ComparisonRow> rows(grid.size());
  parallel_for(static_cast<int>(grid.size()), [&](int i) {
    rows[static_cast<size_t>(i)] =
        countnoise::compare_mechanisms(eta, half_width,
                                       {grid[static_cast<size_t>(i)]})
            .front();
  });
  std::string body = provenance_line;
  body += "epsilon,our_dp_delta,gaussian_delta,sigma2,regime\n";
  for (const countnoise::ComparisonRow& row : rows) {
    body += fmt(row.epsilon) + "," + fmt(row.our_dp_delta) + "," +
            fmt(row.gaussian_delta) + "," + fmt(row.sigma2) + "," +
            std::to_string(row.regime) + "\n";
  }
  return body;
}

int run_compare_gaussian(const Options& opt) {
  opt.grid.check();
  const int d = opt.half_widths.front();
  const std::string head = provenance(
      "compare-gaussian", {{"eta", fmt(opt.eta)},
                           {"D", std::to_string(d)},
                           {"grid-start", fmt(opt.grid.start)},
                           {"grid-stop", fmt(opt.grid.stop)},
                           {"grid-points", std::to_string(opt.grid.points)},
                           {"grid-scale", opt.grid.scale}});
  write_output(opt.out, comparison_csv(opt.eta, d, opt.grid.values(), head));
  return kExitOk;
}

int run_verify(const Options& opt) {
  const countnoise::VerifyReport report =
      countnoise::run_verification(opt.configs, opt.seed, opt.corrupt);
  std::ostringstream out;
  out << "configs checked:        " << report.equivalence.configs << "\n";
  out << "max |closed - lp|:      " << fmt(report.equivalence.max_delta_gap)
      << "\n";
  out << "max coefficient gap:    " << fmt(report.equivalence.max_alpha_gap)
      << " (over " << report.equivalence.alpha_checked
      << " interior configs)\n";
  out << "max lp violation:       " << fmt(report.equivalence.max_lp_violation)
      << "\n";
  out << "sandwich audits:        " << report.sandwich.audits << "\n";
  out << "sandwich lower slack:   " << fmt(report.sandwich.worst_lower_slack)
      << "\n";
  out << "sandwich upper slack:   " << fmt(report.sandwich.worst_upper_slack)
      << "\n";
  out << "general program (N=3):  "
      << countnoise::to_string(report.general_scale_status)
      << ", delta = " << fmt(report.general_scale_delta) << "\n";
  out << (report.passed ? "VERIFY PASS\n" : "VERIFY FAIL\n");
  write_output(opt.out, out.str());
  return report.passed ? kExitOk : kExitVerifyFailed;
}

int run_sample(const Options& opt) {
  countnoise::MechanismConfig config;
  config.eta = opt.eta;
  config.half_width = opt.half_widths.front();
  config.epsilon = opt.epsilon;
  const int count = opt.count > 0 ? opt.count : config.half_width;
  const countnoise::AuditReport report = countnoise::empirical_audit(
      config, count, opt.trials, opt.window, opt.seed);

  std::string body;
  if (opt.format == "json") {
    nlohmann::json j = report;
    body = j.dump(2) + "\n";
  } else {
    body += provenance("sample", {{"eta", fmt(opt.eta)},
                                  {"D", std::to_string(config.half_width)},
                                  {"eps", fmt(opt.epsilon)},
                                  {"count", std::to_string(count)},
                                  {"trials", std::to_string(opt.trials)},
                                  {"window", std::to_string(opt.window)},
                                  {"seed", std::to_string(opt.seed)}});
    body += "offset,count\n";
    for (size_t i = 0; i < report.counts.size(); ++i) {
      body += std::to_string(report.support_lo + static_cast<int>(i)) + "," +
              std::to_string(report.counts[i]) + "\n";
    }
  }
  write_output(opt.out, body);
  return kExitOk;
}

int run_figure_data(const Options& opt) {
  const std::filesystem::path dir = opt.out.empty() ? "figures" : opt.out;
  std::filesystem::create_directories(dir);

  // Figure 1: our optimal noise pmf next to the matched-variance Gaussian.
  {
    countnoise::MechanismConfig config;
    config.eta = opt.eta;
    config.half_width = opt.half_widths.front();
    config.epsilon = opt.epsilon;
    const countnoise::OptimalSolution solution =
        countnoise::optimal_alphas(config);
    const countnoise::NoisePmf ours = countnoise::symmetric_noise_pmf(
        config.eta, config.half_width, solution.alphas, config.half_width);
    const countnoise::DiscreteGaussianPmf gaussian =
        countnoise::discrete_gaussian_pmf(solution.variance);

    std::string body = provenance(
        "figure-data fig1", {{"eta", fmt(config.eta)},
                             {"D", std::to_string(config.half_width)},
                             {"eps", fmt(config.epsilon)}});
    body += "# sigma2 " + fmt(solution.variance) + "\n";
    body += "# gaussian_realized_variance " +
            fmt(gaussian.realized_variance()) + "\n";
    body += "# gaussian_mass_outside_support " +
            fmt(gaussian.tail_outside(config.half_width)) + "\n";
    body += "z,ours,gaussian\n";
    for (int z = -config.half_width; z <= config.half_width; ++z) {
      body += std::to_string(z) + "," + fmt(ours.mass_at(z)) + "," +
              fmt(gaussian.mass_at(z)) + "\n";
    }
    write_output((dir / "fig1.csv").string(), body);
  }

  // Figure 2: dp_delta versus epsilon at eta = 0.5 for several D.
  {
    Options sweep = opt;
    sweep.eta = 0.5;
    sweep.half_widths = {2, 4, 6, 8};
    sweep.grid = {0.25, 3.0, 56, "linear"};
    sweep.out = (dir / "fig2.csv").string();
    run_sweep_eps(sweep);
  }

  // Figure 3: dp_delta versus eta at eps = 1.1 and 2.2 for several D.
  {
    std::string body = provenance("figure-data fig3", {});
    body += "eta,epsilon,D,dp_delta\n";
    const GridSpec eta_grid{0.05, 0.95, 91, "linear"};
    for (double eps : {1.1, 2.2}) {
      for (int d : {2, 4, 6, 8}) {
        const std::vector<double> grid = eta_grid.values();
        std::vector<std::string> rows(grid.size());
        parallel_for(static_cast<int>(grid.size()), [&](int i) {
          countnoise::MechanismConfig config;
          config.eta = grid[static_cast<size_t>(i)];
          config.half_width = d;
          config.epsilon = eps;
          const countnoise::OptimalSolution s =
              countnoise::optimal_alphas(config);
          rows[static_cast<size_t>(i)] = fmt(config.eta) + "," + fmt(eps) +
                                         "," + std::to_string(d) + "," +
                                         fmt(s.dp_delta) + "\n";
        });
        for (const std::string& row : rows) body += row;
      }
    }
    write_output((dir / "fig3.csv").string(), body);
  }

  // Figure 4: matched-variance Gaussian comparison at eta = 0.5, D = 6.
  {
    const GridSpec eps_grid{1.1, 3.0, 39, "linear"};
    const std::string head = provenance(
        "figure-data fig4",
        {{"eta", "0.5"}, {"D", "6"}, {"grid-points", "39"}});
    write_output((dir / "fig4.csv").string(),
                 comparison_csv(0.5, 6, eps_grid.values(), head));
  }

  std::cout << "wrote fig1.csv fig2.csv fig3.csv fig4.csv under " << dir
            << "\n";
  return kExitOk;
}

}  // namespace

struct GridFlagHandles {
  CLI::Option* start = nullptr;
  CLI::Option* stop = nullptr;
  CLI::Option* points = nullptr;
  CLI::Option* scale = nullptr;
};

int main(int argc, char** argv) {
  CLI::App app{"integer-noise mechanism designer for private count queries"};
  app.require_subcommand(1);

  Options opt;
  CLI::Option* eta_flag = nullptr;
  CLI::Option* d_flag = nullptr;
  CLI::Option* eps_flag = nullptr;

  auto add_config_flags = [&](CLI::App* cmd, bool many_d) {
    eta_flag =
        cmd->add_option("--eta", opt.eta, "correct-release probability in (0,1)");
    d_flag = many_d ? cmd->add_option("--D", opt.half_widths,
                                      "noise half-width(s)")
                    : cmd->add_option("--D", opt.half_widths, "noise half-width")
                          ->expected(1);
    eps_flag = cmd->add_option("--eps", opt.epsilon, "privacy parameter epsilon");
  };
  auto add_grid_flags = [&opt](CLI::App* cmd) {
    GridFlagHandles handles;
    handles.start = cmd->add_option("--grid-start", opt.grid.start, "grid start");
    handles.stop = cmd->add_option("--grid-stop", opt.grid.stop, "grid stop");
    handles.points =
        cmd->add_option("--grid-points", opt.grid.points, "grid points (>= 2)");
    handles.scale =
        cmd->add_option("--grid-scale", opt.grid.scale, "linear or log");
    return handles;
  };
  auto add_io_flags = [&opt](CLI::App* cmd) {
    cmd->add_option("--out", opt.out, "output path (default stdout)");
    cmd->add_option("--format", opt.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--seed", opt.seed, "rng seed");
  };
  // Fills in per-command grid defaults for flags the user did not pass.
  auto grid_defaults = [&opt](const GridFlagHandles& handles, GridSpec def) {
    if (handles.start->count() == 0) opt.grid.start = def.start;
    if (handles.stop->count() == 0) opt.grid.stop = def.stop;
    if (handles.points->count() == 0) opt.grid.points = def.points;
    if (handles.scale->count() == 0) opt.grid.scale = def.scale;
  };

  CLI::App* solve = app.add_subcommand("solve", "closed-form optimum");
  add_config_flags(solve, false);
  solve->add_option("--N", opt.max_count, "maximum true count (optional)");
  add_io_flags(solve);

  CLI::App* sweep_eps =
      app.add_subcommand("sweep-eps", "dp_delta across an epsilon grid");
  add_config_flags(sweep_eps, true);
  const GridFlagHandles sweep_eps_grid = add_grid_flags(sweep_eps);
  add_io_flags(sweep_eps);

  CLI::App* sweep_eta =
      app.add_subcommand("sweep-eta", "dp_delta across an eta grid");
  add_config_flags(sweep_eta, true);
  const GridFlagHandles sweep_eta_grid = add_grid_flags(sweep_eta);
  add_io_flags(sweep_eta);

  CLI::App* compare = app.add_subcommand(
      "compare-gaussian", "matched-variance Gaussian comparison");
  add_config_flags(compare, false);
  const GridFlagHandles compare_grid = add_grid_flags(compare);
  add_io_flags(compare);

  CLI::App* verify =
      app.add_subcommand("verify", "closed form vs linear program");
  verify->add_option("--configs", opt.configs, "random configs to check");
  verify->add_flag("--self-test-corrupt", opt.corrupt,
                   "corrupt one audit table; verification must fail");
  add_io_flags(verify);

  CLI::App* sample = app.add_subcommand("sample", "empirical audit");
  add_config_flags(sample, false);
  sample->add_option("--count", opt.count, "true count (default D)");
  sample->add_option("--trials", opt.trials, "number of draws");
  sample->add_option("--window", opt.window, "in-range window around n");
  add_io_flags(sample);

  CLI::App* figures =
      app.add_subcommand("figure-data", "CSV bundle for the four figures");
  add_config_flags(figures, false);
  figures->add_option("--out", opt.out, "output directory (default figures)");
  figures->add_option("--seed", opt.seed, "rng seed");
  CLI::Option* fig_eta = eta_flag;
  CLI::Option* fig_d = d_flag;
  CLI::Option* fig_eps = eps_flag;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (solve->parsed()) return run_solve(opt);
    if (sweep_eps->parsed()) {
      grid_defaults(sweep_eps_grid, {0.25, 3.0, 56, "linear"});
      return run_sweep_eps(opt);
    }
    if (sweep_eta->parsed()) {
      grid_defaults(sweep_eta_grid, {0.05, 0.95, 91, "linear"});
      return run_sweep_eta(opt);
    }
    if (compare->parsed()) {
      grid_defaults(compare_grid, {1.1, 3.0, 39, "linear"});
      return run_compare_gaussian(opt);
    }
    if (verify->parsed()) return run_verify(opt);
    if (sample->parsed()) return run_sample(opt);
    if (figures->parsed()) {
      // The reference single-point design used when no flags are given.
      if (fig_eta->count() == 0) opt.eta = 0.8;
      if (fig_d->count() == 0) opt.half_widths = {6};
      if (fig_eps->count() == 0) opt.epsilon = 2.18;
      return run_figure_data(opt);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
