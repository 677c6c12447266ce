#include "qss/commands.hpp"

#include <algorithm>
#include <sstream>

#include "qss/analysis.hpp"
#include "qss/config.hpp"
#include "qss/report.hpp"
#include "qss/session.hpp"

namespace qss {

namespace {

SimConfig resolve_config(const std::optional<std::string>& path, const std::optional<std::uint64_t>& seed,
                         const std::vector<std::string>& overrides) {
  SimConfig config = path ? load_config(*path) : SimConfig{};
  for (const auto& o : overrides) apply_override(config, o);
  if (seed) config.seed = *seed;
  return config;
}

int exit_code_for(Verdict::Kind kind) {
  switch (kind) {
    case Verdict::Kind::Accept: return kExitAccept;
    case Verdict::Kind::AbortRetry: return kExitAbortRetry;
    case Verdict::Kind::DishonestFlag: return kExitDishonest;
  }
  return kExitFailure;
}

CommandOutput config_failure(const ConfigError& e) {
  return {kExitConfig, {}, "config error: " + std::string(e.what()) + "\n"};
}

// Transmission of the link Eve reads Alice's encoded pulse through.
double alice_link_transmission(const SessionConfig& config) {
  return config.topology().link_transmission(config.receivers);
}

std::optional<double> uniform_transmission(const SessionConfig& config) {
  const Topology topology = config.topology();
  const double first = topology.link_transmission(0);
  for (std::size_t i = 1; i < topology.link_count(); ++i) {
    if (topology.link_transmission(i) != first) return std::nullopt;
  }
  return first;
}

std::uint64_t worst_errors(const SessionResult& result) {
  return *std::max_element(result.receiver_errors.begin(), result.receiver_errors.end());
}

}  // namespace

CommandOutput cmd_simulate(const SimulateOptions& options) {
  SessionConfig session;
  try {
    session = to_session_config(resolve_config(options.config_path, options.seed, options.overrides));
  } catch (const ConfigError& e) {
    return config_failure(e);
  }
  session.record_rounds = options.trace_path.has_value();

  const SessionResult result = run_session(session);
  CommandOutput output;
  output.out = session_report(result);
  output.exit_code = exit_code_for(result.verdict.kind);
  try {
    if (options.out_path) write_file(*options.out_path, output.out);
    if (options.trace_path) write_file(*options.trace_path, trace_csv(result.records));
  } catch (const std::runtime_error& e) {
    return {kExitFailure, output.out, std::string(e.what()) + "\n"};
  }
  return output;
}

CommandOutput cmd_curve(const CurveOptions& options) {
  std::vector<double> grid;
  try {
    if (options.min_mu_t < 0.0) throw std::invalid_argument("mu*T range must be non-negative");
    grid = linear_grid(options.min_mu_t, options.max_mu_t, options.step);
  } catch (const std::invalid_argument& e) {
    return {kExitConfig, {}, std::string(e.what()) + "\n"};
  }
  CommandOutput output;
  output.out = curve_csv(error_curve(grid));
  if (options.out_path) {
    try {
      write_file(*options.out_path, output.out);
    } catch (const std::runtime_error& e) {
      return {kExitFailure, {}, std::string(e.what()) + "\n"};
    }
  }
  return output;
}

CommandOutput cmd_table(const std::optional<std::string>& out_path) {
  // Same row/column order as the usual printed layout.
  constexpr int kOrder[] = {0, 2, 1, 3};
  const auto table = decode_table();

  std::ostringstream out;
  out << "k = (l - s_1) - s_2\n";
  out << "rows: Rec-2 decision angle s_2; columns: Rec-1 decision angle l - s_1\n\n";
  out << "s_2 \\ l-s_1";
  for (int c : kOrder) out << " | " << std::string(6 - DecisionAngle(c).label().size(), ' ') << DecisionAngle(c).label();
  out << '\n';
  for (int r : kOrder) {
    const std::string row_label = DecisionAngle(r).label();
    out << std::string(11 - row_label.size(), ' ') << row_label;
    for (int c : kOrder) {
      const std::string cell = table[r][c].label();
      out << " | " << std::string(6 - cell.size(), ' ') << cell;
    }
    out << '\n';
  }
  out << "\nnote: some printed versions of this table list s_2 - (l - s_1); the two agree after\n"
         "exchanging +pi/4 and -pi/4 in every entry.\n";

  CommandOutput output{kExitAccept, out.str(), {}};
  if (out_path) {
    try {
      write_file(*out_path, output.out);
    } catch (const std::runtime_error& e) {
      return {kExitFailure, {}, std::string(e.what()) + "\n"};
    }
  }
  return output;
}

CommandOutput cmd_attack(const AttackOptions& options) {
  if (options.strategy != "pns" && options.strategy != "tag" && options.strategy != "impersonate") {
    return {kExitConfig, {},
            "unknown strategy '" + options.strategy + "'\nusage: attack <pns|tag|impersonate> [options]\n"};
  }
  if (options.trials < 1) return {kExitConfig, {}, "trials must be positive\n"};

  SimConfig sim;
  SessionConfig session;
  try {
    sim = resolve_config(options.config_path, options.seed, options.overrides);
    if (options.strategy == "pns") {
      if (!std::holds_alternative<PnsSplit>(sim.adversary)) sim.adversary = PnsSplit{1};
    } else if (options.strategy == "tag") {
      sim.adversary = TagPhoton{};
    } else {
      sim.adversary = Impersonate{};
    }
    sim.rounds = options.trials;
    sim.key_bits = 0;
    session = to_session_config(sim);
  } catch (const ConfigError& e) {
    return config_failure(e);
  }
  session.record_rounds = false;

  std::vector<AttackSummary> rows;
  const SessionResult result = run_session(session);
  const EveScore& eve = *result.eve;
  const std::string& name = options.strategy;

  if (name == "pns") {
    const auto est = bernoulli_estimate(eve.correct, eve.guessed);
    rows.push_back({name, "eve_bit_accuracy", est.mean, est.std_error, est.trials, 0.5});
    const std::size_t hop = std::get<PnsSplit>(session.adversary).hop;
    if (const auto t = uniform_transmission(session); t && (hop == 1 || hop == 3 || hop == 4)) {
      const double budget = eve_mean_photons(session.mean_photons, *t, static_cast<int>(hop));
      rows.push_back({name, "eve_mean_photons_closed_form", budget, 0.0, 0, std::nullopt});
    }
  } else if (name == "tag") {
    const auto est = bernoulli_estimate(eve.correct, eve.attempted);
    rows.push_back({name, "eve_recovery_rate", est.mean, est.std_error, est.trials,
                    session.countermeasure_ratio});
  } else {
    const double t = alice_link_transmission(session);
    const double reference = p_error_closed_form(session.mean_photons, t);
    if (options.trials >= 10'000) {
      Rng rng(session.seed);
      const auto mc = monte_carlo_p_error(session.mean_photons, t, options.trials, rng);
      rows.push_back({name, "rec1_error_rate", mc.mean, mc.std_error, mc.trials, reference});
    }
    const auto est = bernoulli_estimate(worst_errors(result), result.kept_rounds);
    rows.push_back({name, "session_qber", est.mean, est.std_error, est.trials, reference});
  }
  if (name != "impersonate") {
    const auto est = bernoulli_estimate(worst_errors(result), result.kept_rounds);
    rows.push_back({name, "session_qber", est.mean, est.std_error, est.trials, 0.0});
  }

  CommandOutput output{kExitAccept, attack_csv(rows), {}};
  if (options.out_path) {
    try {
      write_file(*options.out_path, output.out);
    } catch (const std::runtime_error& e) {
      return {kExitFailure, output.out, std::string(e.what()) + "\n"};
    }
  }
  return output;
}

}  // namespace qss
