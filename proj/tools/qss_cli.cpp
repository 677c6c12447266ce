#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "qss/commands.hpp"

namespace {

int emit(const qss::CommandOutput& result) {
  std::cout << result.out;
  std::cerr << result.err;
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Single-qubit multiparty quantum secret sharing simulator"};
  app.require_subcommand(1);

  qss::SimulateOptions simulate;
  std::uint64_t sim_seed = 0;
  auto* sim_cmd = app.add_subcommand("simulate", "run a full protocol session");
  sim_cmd->add_option("--config", simulate.config_path, "key = value configuration file");
  auto* sim_seed_opt = sim_cmd->add_option("--seed", sim_seed, "random seed (overrides config)");
  sim_cmd->add_option("--override", simulate.overrides, "KEY=VALUE, applied after the config file")
      ->take_all();
  sim_cmd->add_option("--out", simulate.out_path, "write the session report here");
  sim_cmd->add_option("--trace", simulate.trace_path, "write the per-round trace CSV here");

  qss::CurveOptions curve;
  auto* curve_cmd = app.add_subcommand("curve", "tabulate Rec-1's error rate against mu*T");
  curve_cmd->add_option("--min", curve.min_mu_t, "first mu*T value")->capture_default_str();
  curve_cmd->add_option("--max", curve.max_mu_t, "last mu*T value")->capture_default_str();
  curve_cmd->add_option("--step", curve.step, "grid step")->capture_default_str();
  curve_cmd->add_option("--out", curve.out_path, "write the CSV here");

  std::optional<std::string> table_out;
  auto* table_cmd = app.add_subcommand("table", "print the two-receiver decode table");
  table_cmd->add_option("--out", table_out, "also write the table here");

  qss::AttackOptions attack;
  std::uint64_t attack_seed = 0;
  auto* attack_cmd = app.add_subcommand("attack", "measure what an eavesdropper learns");
  attack_cmd->add_option("strategy", attack.strategy, "pns | tag | impersonate")->required();
  attack_cmd->add_option("--config", attack.config_path, "key = value configuration file");
  auto* attack_seed_opt = attack_cmd->add_option("--seed", attack_seed, "random seed (overrides config)");
  attack_cmd->add_option("--override", attack.overrides, "KEY=VALUE, applied after the config file")
      ->take_all();
  attack_cmd->add_option("--trials", attack.trials, "rounds to simulate")->capture_default_str();
  attack_cmd->add_option("--out", attack.out_path, "write the summary CSV here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : qss::kExitConfig;
  }

  if (*sim_cmd) {
    if (*sim_seed_opt) simulate.seed = sim_seed;
    return emit(qss::cmd_simulate(simulate));
  }
  if (*curve_cmd) return emit(qss::cmd_curve(curve));
  if (*table_cmd) return emit(qss::cmd_table(table_out));
  if (*attack_seed_opt) attack.seed = attack_seed;
  return emit(qss::cmd_attack(attack));
}
