// Acceptance checks, one line per criterion. Exit status is the number of
// failures.

#include <sys/wait.h>

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qss/adversary.hpp"
#include "qss/analysis.hpp"
#include "qss/config.hpp"
#include "qss/protocol.hpp"
#include "qss/session.hpp"

using namespace qss;
namespace fs = std::filesystem;
using Big = boost::multiprecision::cpp_dec_float_50;

namespace {

struct Check {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int failures = 0;

void criterion(int id, const std::string& title, const std::function<void(Check&)>& body) {
  Check c;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.require(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!c.pass) ++failures;
  std::printf("%s %2d %s (%.2fs)%s\n", c.pass ? "PASS" : "FAIL", id, title.c_str(), secs, c.detail.str().c_str());
  std::fflush(stdout);
}

double brute_p_error(double mu_t) {
  const Big lambda(mu_t);
  Big term = exp(-lambda);
  Big p_e = 0;
  Big half_power = 1;
  for (int n = 1; n <= 500; ++n) {
    term *= lambda / n;
    if (n >= 3 && (n - 1) % 2 == 0) half_power /= 2;
    if (n >= 3) p_e += term * (1 - half_power);
  }
  return ((1 - p_e) / 2).convert_to<double>();
}

bool within(double value, double reference, double sigma) { return std::abs(value - reference) <= 3.0 * sigma; }

std::string fmt(double x) { return format_double(x); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_cli(const std::string& args, const fs::path& stdout_file) {
  const std::string cmd = std::string(QSS_CLI_PATH) + " " + args + " >" + stdout_file.string() + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

int main() {
  criterion(1, "impersonation error rate at mu=6, T=0.5", [](Check& c) {
    const double p = p_error_closed_form(6.0, 0.5);
    const double oracle = brute_p_error(3.0);
    c.detail << " p_error=" << fmt(p) << " oracle=" << fmt(oracle);
    c.require(std::abs(p - 0.3) <= 0.05, "0.3 +- 0.05");
    c.require(std::abs(p - oracle) <= 1e-10, "oracle agreement 1e-10");
  });

  criterion(2, "error curve over mu*T in [0, 12]", [](Check& c) {
    const auto grid = linear_grid(0.0, 12.0, 0.1);
    const auto curve = error_curve(grid);
    bool monotone = true;
    for (std::size_t i = 1; i < curve.size(); ++i) monotone = monotone && curve[i].p_error <= curve[i - 1].p_error;
    c.detail << " points=" << curve.size() << " first=" << fmt(curve.front().p_error)
             << " at3=" << fmt(curve[30].p_error);
    c.require(monotone, "monotone non-increasing");
    c.require(curve.front().p_error == 0.5, "starts at 0.5");
    c.require(std::abs(curve[30].mu_t - 3.0) < 1e-12 &&
                  std::abs(curve[30].p_error - p_error_closed_form(6.0, 0.5)) < 1e-12,
              "mu*T=3 point");
  });

  criterion(3, "Monte Carlo impersonation vs closed form", [](Check& c) {
    Rng rng(2024);
    for (double mu_t : {0.5, 1.0, 3.0, 6.0}) {
      const auto est = monte_carlo_p_error(2.0 * mu_t, 0.5, 1'000'000, rng);
      const double ref = brute_p_error(mu_t);
      c.detail << " muT=" << fmt(mu_t) << ":" << fmt(est.sigmas_from(ref)).substr(0, 5) << "sigma";
      c.require(within(est.mean, ref, est.std_error), "muT=" + fmt(mu_t));
    }
  });

  criterion(4, "honest sessions: zero QBER and key agreement", [](Check& c) {
    for (std::size_t n : {2, 5}) {
      for (double t : {1.0, 0.5}) {
        SessionConfig cfg;
        cfg.receivers = n;
        if (t < 1.0) cfg.link_transmissions.assign(n + 1, t);
        cfg.rounds = 100'000;
        cfg.seed = 100 + n;
        cfg.record_rounds = false;
        const auto r = run_session(cfg);
        bool agree = r.verdict.kind == Verdict::Kind::Accept && !r.alice_final.empty();
        for (const auto& k : r.receiver_sifted) agree = agree && k == r.alice_sifted;
        for (const auto& k : r.receiver_final) agree = agree && k == r.alice_final;
        c.detail << " N=" << n << ",T=" << fmt(t) << ":kept=" << r.kept_rounds;
        c.require(r.qber == 0.0, "QBER N=" + std::to_string(n));
        c.require(agree, "agreement N=" + std::to_string(n));
        c.require(r.rounds_run >= 10'000 && r.kept_rounds > 0, "rounds >= 1e4");
      }
    }
  });

  criterion(5, "decode exhaustiveness and table", [](Check& c) {
    Rng rng(5);
    int recovered = 0;
    for (int s1 = 0; s1 < 4; ++s1) {
      for (int s2 = 0; s2 < 4; ++s2) {
        for (int bit : {0, 1}) {
          for (int j : {1, 2}) {
            SenderState alice;
            std::vector<ReceiverState> recs(2);
            recs[1].index = 2;
            const DecisionAngle shuffles[] = {DecisionAngle(s1), DecisionAngle(s2)};
            CoherentPulse p = alice_prepare(alice, 60.0, rng);
            for (int i = 0; i < 2; ++i) p = receiver_forward(recs[i], p, random_polarization(rng), shuffles[i]);
            p = alice_encode(alice, p, bit, j);
            p = receiver_backward(recs[1], p);
            p = receiver_backward(recs[0], p);
            const auto outcomes = rec1_measure(recs[0], p, rng);
            const auto d = sift_round(outcomes, j, shuffles[0] + shuffles[1]);
            if (d.status != SiftStatus::Kept) continue;
            const std::vector<DecisionAngle> others{shuffles[1]};
            recovered += angle_to_bit(cooperative_decode(*d.measured - shuffles[0], others)) == bit;
          }
        }
      }
    }
    // Both values of j for every (s_1, s_2, bit) triple.
    c.detail << " recovered=" << recovered << "/64";
    c.require(recovered == 64, "all cases");

    const auto table = decode_table();
    bool latin = true;
    for (int r = 0; r < 4; ++r) {
      std::set<int> row, col;
      for (int k = 0; k < 4; ++k) {
        row.insert(table[r][k].quarter_turns());
        col.insert(table[k][r].quarter_turns());
      }
      latin = latin && row.size() == 4 && col.size() == 4;
    }
    c.require(latin, "Latin square");

    // Transcribed layout: rows s_2, columns Rec-1, order 0, pi/2, pi/4, -pi/4.
    constexpr int order[] = {0, 2, 1, 3};
    const char* printed[4][4] = {{"0", "pi/2", "-pi/4", "pi/4"},
                                 {"pi/2", "0", "pi/4", "-pi/4"},
                                 {"pi/4", "-pi/4", "0", "pi/2"},
                                 {"-pi/4", "pi/4", "pi/2", "0"}};
    bool matches = true;
    for (int r = 0; r < 4; ++r) {
      for (int k = 0; k < 4; ++k) {
        // The printed entries carry the opposite sign, which swaps +pi/4 and -pi/4.
        matches = matches && (-table[order[r]][order[k]]).label() == printed[r][k];
      }
    }
    c.require(matches, "printed table up to sign convention");
  });

  criterion(6, "dishonest Rec-1 is flagged whenever keys diverge", [](Check& c) {
    int diverged = 0;
    int flagged = 0;
    int other = 0;
    for (int trial = 0; trial < 1000; ++trial) {
      SessionConfig cfg;
      cfg.rounds = 200;
      cfg.seed = 10'000 + trial;
      cfg.dishonest_receiver = 1;
      cfg.dishonest_rate = 0.05;
      cfg.record_rounds = false;
      const auto r = run_session(cfg);
      if (r.receiver_final.empty() || r.receiver_final[1] == r.alice_final) {
        ++other;
        continue;
      }
      ++diverged;
      flagged += r.verdict == Verdict{Verdict::Kind::DishonestFlag, 1};
    }
    c.detail << " diverged=" << diverged << " flagged=" << flagged << " converged_or_restart=" << other;
    c.require(diverged > 0, "some trials diverge");
    c.require(flagged == diverged, "flag on every divergence");
  });

  criterion(7, "tag attack and 50:50 countermeasure", [](Check& c) {
    SessionConfig cfg;
    cfg.adversary = TagPhoton{};
    cfg.rounds = 100'000;
    cfg.seed = 7;
    cfg.record_rounds = false;
    const auto open = run_session(cfg);
    const auto e1 = bernoulli_estimate(open.eve->correct, open.eve->attempted);
    cfg.countermeasure_ratio = 0.5;
    const auto guarded = run_session(cfg);
    const auto e2 = bernoulli_estimate(guarded.eve->correct, guarded.eve->attempted);
    c.detail << " open=" << fmt(e1.mean) << " (n=" << e1.trials << ") split=" << fmt(e2.mean) << " (n=" << e2.trials
             << ")";
    c.require(e1.trials > 0 && e1.mean == 1.0, "recovery 1.0 without splitter");
    c.require(within(e2.mean, 0.5, e2.std_error), "recovery 0.5 with splitter");
  });

  criterion(8, "PNS budget and bit-guess futility", [](Check& c) {
    bool exact = true;
    for (double mu : {0.5, 2.0, 6.0, 8.0}) {
      for (double t : {0.1, 0.25, 0.5, 0.9, 1.0}) {
        for (int ch : {1, 3, 4}) {
          double expect = mu * (1.0 - t);
          for (int k = 1; k < ch; ++k) expect *= t;
          exact = exact && std::abs(eve_mean_photons(mu, t, ch) - expect) <= 1e-15 * std::max(1.0, expect);
        }
      }
    }
    c.require(exact, "closed-form budget grid");

    SessionConfig cfg;
    cfg.adversary = PnsSplit{1};
    cfg.link_transmissions.assign(3, 0.5);
    cfg.rounds = 100'000;
    cfg.seed = 8;
    cfg.record_rounds = false;
    const auto r = run_session(cfg);
    const auto est = bernoulli_estimate(r.eve->correct, r.eve->guessed);
    c.detail << " accuracy=" << fmt(est.mean) << " (n=" << est.trials << ") qber=" << fmt(r.qber);
    c.require(est.trials > 1000 && within(est.mean, 0.5, est.std_error), "accuracy 0.5");
  });

  criterion(9, "discard fraction vs Poisson vacuum oracle", [](Check& c) {
    for (double mu_final : {0.5, 2.0, 4.0}) {
      SessionConfig cfg;
      cfg.mean_photons = mu_final;
      cfg.rounds = 100'000;
      cfg.seed = 9;
      cfg.record_rounds = false;
      const auto r = run_session(cfg);
      // Selected arm carries mu/2 photons aligned with its basis: no ambiguity.
      const double p = std::exp(-mu_final / 2.0);
      const double sigma = std::sqrt(p * (1 - p) / double(r.rounds_run));
      c.detail << " mu=" << fmt(mu_final) << ":" << fmt(r.discard_fraction).substr(0, 7) << "/"
               << fmt(p).substr(0, 7);
      c.require(within(r.discard_fraction, p, sigma), "mu_final=" + fmt(mu_final));
    }
  });

  criterion(10, "byte-identical CLI output for equal seeds", [](Check& c) {
    const fs::path dir = fs::temp_directory_path() / "qss_acceptance";
    fs::create_directories(dir);
    const std::vector<std::string> commands = {
        "simulate --seed 42 --trace " + (dir / "trace_%.csv").string(),
        "simulate --seed 42 --override adversary=impersonate --override transmission=0.5",
        "attack tag --seed 42 --trials 20000 --override bs_ratio=0.5",
        "curve",
        "table"};
    for (std::size_t i = 0; i < commands.size(); ++i) {
      std::string outputs[2];
      std::string traces[2];
      int codes[2];
      for (int run = 0; run < 2; ++run) {
        std::string cmd = commands[i];
        const auto mark = cmd.find('%');
        if (mark != std::string::npos) cmd.replace(mark, 1, std::to_string(run));
        const fs::path out = dir / ("out_" + std::to_string(i) + "_" + std::to_string(run));
        codes[run] = run_cli(cmd, out);
        outputs[run] = slurp(out);
        if (mark != std::string::npos) traces[run] = slurp(dir / ("trace_" + std::to_string(run) + ".csv"));
      }
      c.require(codes[0] == codes[1] && outputs[0] == outputs[1] && traces[0] == traces[1] && !outputs[0].empty(),
                "command " + std::to_string(i));
    }
    c.detail << " commands=" << commands.size();
  });

  std::printf("%d criteria failed\n", failures);
  return failures;
}
