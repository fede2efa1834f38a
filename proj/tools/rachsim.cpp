#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "rachsim/analytic.hpp"
#include "rachsim/engine.hpp"
#include "rachsim/plot.hpp"
#include "rachsim/results_io.hpp"
#include "rachsim/scenario_io.hpp"

namespace fs = std::filesystem;
using namespace rachsim;

namespace {

int cmd_run(const std::string& path, const std::string& out_dir,
            std::optional<std::uint64_t> seed, std::optional<int> reps, int workers) {
  SweepSpec spec = parse_scenario_file(path);
  if (seed) spec.base.seed = *seed;
  if (reps) spec.base.n_repetitions = *reps;

  const std::vector<Scenario> points = expand(spec);
  fs::create_directories(out_dir);

  const std::vector<BatchRecord> records =
      run_batch(points, spec.base.n_repetitions, spec.base.seed, workers);
  write_results_csv((fs::path(out_dir) / "results.csv").string(), records);
  write_manifest((fs::path(out_dir) / "manifest.txt").string(), spec.base.name,
                 spec.base.seed, static_cast<int>(points.size()), spec.base.n_repetitions);
  if (spec.write_traces) {
    for (const BatchRecord& rec : records) {
      // traces are not kept during the batch; replay the point with its seed
      const RunResult rr = run(rec.scenario);
      char name[64];
      std::snprintf(name, sizeof(name), "trace-%03d-%02d.csv", rec.point, rec.rep);
      write_trace_csv((fs::path(out_dir) / name).string(), rr.trace);
    }
  }
  std::cout << "wrote " << records.size() << " rows to " << out_dir << "/results.csv\n";
  return 0;
}

int cmd_plot(const std::string& csv, const std::string& kind, const std::string& out) {
  const std::vector<CsvRow> rows = read_results_csv(csv);
  write_plot(out, rows, kind);
  std::cout << "wrote " << out << "\n";
  return 0;
}

int cmd_presets(const std::string& name, const std::string& out) {
  const SweepSpec spec = make_preset(name);
  const std::string text = scenario_to_text(spec);
  const std::string path = out.empty() ? name + ".json" : out;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << text;
  std::cout << "wrote " << path << "\n";
  return 0;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(tok);
  }
  if (out.empty()) throw std::invalid_argument("empty numeric list");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LTE random-access simulator: slotted-Aloha baselines, 3GPP congestion "
               "controls, and tree-splitting collision resolution"};
  app.require_subcommand(1);

  // run
  auto* run_cmd = app.add_subcommand("run", "execute a scenario file sweep");
  std::string scenario_path, out_dir = "out";
  std::optional<std::uint64_t> seed_override;
  std::optional<int> reps_override;
  int workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  run_cmd->add_option("scenario", scenario_path, "scenario file (JSON)")->required();
  run_cmd->add_option("--out-dir", out_dir, "output directory");
  run_cmd->add_option("--seed", seed_override, "override the file's base seed");
  run_cmd->add_option("--reps", reps_override, "override repetitions per grid point");
  run_cmd->add_option("--workers", workers, "worker threads (results are order-stable)");

  // plot
  auto* plot_cmd = app.add_subcommand("plot", "render a results.csv as an SVG line chart");
  std::string csv_path, plot_kind = "outage", plot_out = "plot.svg";
  plot_cmd->add_option("csv", csv_path, "results.csv from a run")->required();
  plot_cmd->add_option("--kind", plot_kind, "retransmissions | outage");
  plot_cmd->add_option("--out", plot_out, "output SVG path");

  // analytic
  auto* an_cmd = app.add_subcommand("analytic", "closed-form calculators");
  auto* cp = an_cmd->add_subcommand("collision-prob", "1 - exp(-n / (R*T))");
  std::string cp_n;
  double cp_r = 0, cp_t = 0;
  cp->add_option("n", cp_n, "attempt count, or comma-separated sweep")->required();
  cp->add_option("R", cp_r, "RA opportunities per second")->required();
  cp->add_option("T", cp_t, "window in seconds")->required();
  auto* op = an_cmd->add_subcommand("opportunities", "preambles * slots * 100");
  double op_m = 0;
  int op_l = 0;
  op->add_option("M", op_m, "preambles per slot")->required();
  op->add_option("L", op_l, "RA slots per frame")->required();
  auto* cw = an_cmd->add_subcommand("codewords", "(M+1)^L - 1 access codewords");
  int cw_m = 0, cw_l = 0;
  cw->add_option("M", cw_m, "preambles per slot")->required();
  cw->add_option("L", cw_l, "slots per virtual frame")->required();
  auto* rv = an_cmd->add_subcommand("reserved", "worst-case reserved preambles m^d * q");
  int rv_m = 0, rv_q = 0;
  std::string rv_d;
  rv->add_option("m", rv_m, "split factor")->required();
  rv->add_option("d", rv_d, "tree level, or comma-separated sweep")->required();
  rv->add_option("q", rv_q, "root pool size")->required();
  an_cmd->require_subcommand(1);

  // presets
  auto* pre_cmd = app.add_subcommand("presets", "write a built-in scenario file");
  std::string preset_name, preset_out;
  pre_cmd->add_option("name", preset_name, "fig4 | fig5 | earthquake")->required();
  pre_cmd->add_option("--out", preset_out, "output path (default <name>.json)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      return cmd_run(scenario_path, out_dir, seed_override, reps_override, workers);
    }
    if (plot_cmd->parsed()) {
      return cmd_plot(csv_path, plot_kind, plot_out);
    }
    if (an_cmd->parsed()) {
      if (cp->parsed()) {
        std::printf("%-12s %-12s %-8s %s\n", "n", "R", "T", "p_collision");
        for (const std::string& tok : split_list(cp_n)) {
          const double n = std::stod(tok);
          std::printf("%-12g %-12g %-8g %.6f\n", n, cp_r, cp_t,
                      analytic::collision_probability(n, cp_r, cp_t));
        }
      } else if (op->parsed()) {
        std::printf("opportunities/s = %g\n",
                    analytic::ra_opportunities_per_second(op_m, op_l));
      } else if (cw->parsed()) {
        std::printf("codewords = %lld\n",
                    static_cast<long long>(analytic::codeword_count(cw_m, cw_l)));
      } else if (rv->parsed()) {
        std::printf("%-6s %-6s %-6s %s\n", "m", "d", "q", "worst_case");
        for (const std::string& tok : split_list(rv_d)) {
          const int d = std::stoi(tok);
          std::printf("%-6d %-6d %-6d %lld\n", rv_m, d, rv_q,
                      static_cast<long long>(analytic::worst_case_reserved(rv_m, d, rv_q)));
        }
      }
      return 0;
    }
    if (pre_cmd->parsed()) {
      return cmd_presets(preset_name, preset_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
