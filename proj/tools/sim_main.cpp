#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rofsim/harness.hpp"
#include "rofsim/scenario.hpp"

namespace {

void write_table(const rofsim::ResultTable& table, const std::string& path) {
  if (path.empty() || path == "-") {
    rofsim::emit_csv(table, std::cout);
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw rofsim::ConfigError("cannot open output file: " + path);
  rofsim::emit_csv(table, f);
}

void apply_overrides(rofsim::Scenario& s, double scale, const std::string& mode) {
  if (scale > 0.0) s.scale = scale;
  if (mode == "one_bit")
    s.mode = rofsim::QuantMode::one_bit;
  else if (mode == "inf_bit")
    s.mode = rofsim::QuantMode::inf_bit;
  else if (!mode.empty())
    throw rofsim::ConfigError("unknown mode: " + mode);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"link-level simulator for one-bit fiber-fed radio heads"};
  app.require_subcommand(1);

  std::string scenario_path, out_path, mode_override, preset;
  double scale = 0.0;
  std::uint64_t seed = 1;
  int threads = 1;

  CLI::App* run = app.add_subcommand("run", "simulate one configuration, one row per UE");
  run->add_option("--scenario", scenario_path, "scenario file")->required();
  run->add_option("--seed", seed, "master seed");
  run->add_option("--out", out_path, "output CSV path, '-' for stdout");
  run->add_option("--scale", scale, "rate-reduction factor override");
  run->add_option("--mode", mode_override, "one_bit or inf_bit");
  run->add_option("--threads", threads, "worker threads for per-head processing");

  CLI::App* sweep = app.add_subcommand("sweep", "run a named measurement sweep");
  sweep->add_option("--preset", preset, "fig8, fig9 or fig10")->required();
  sweep->add_option("--seed", seed, "master seed");
  sweep->add_option("--out", out_path, "output CSV path, '-' for stdout");
  sweep->add_option("--scale", scale, "rate-reduction factor override");
  sweep->add_option("--mode", mode_override, "one_bit or inf_bit");
  sweep->add_option("--threads", threads, "worker threads for per-head processing");

  CLI11_PARSE(app, argc, argv);

  try {
    rofsim::ResultTable table;
    if (run->parsed()) {
      rofsim::Scenario s = rofsim::scenario_from_file(scenario_path);
      apply_overrides(s, scale, mode_override);
      table = rofsim::run_point(s, seed, threads);
    } else {
      if (preset == "fig8") {
        rofsim::Scenario s = rofsim::preset_fig8();
        apply_overrides(s, scale, mode_override);
        std::vector<double> levels;
        for (double v = -75.0; v <= 5.0 + 1e-9; v += 5.0) levels.push_back(v);
        table = rofsim::sweep_received_power(s, levels, {75e6, 5e6}, seed, threads);
      } else if (preset == "fig9") {
        rofsim::Scenario s = rofsim::preset_fig9();
        apply_overrides(s, scale, mode_override);
        table = rofsim::run_point(s, seed, threads);
      } else if (preset == "fig10") {
        rofsim::Scenario s = rofsim::preset_fig10();
        apply_overrides(s, scale, mode_override);
        table = rofsim::sweep_ue_power(s, {0, 1, 2, 3}, 10.0, 0.0, 1.0, seed, threads);
      } else {
        throw rofsim::ConfigError("unknown preset: " + preset);
      }
    }
    write_table(table, out_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
