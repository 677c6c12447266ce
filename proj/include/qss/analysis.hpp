#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qss/optics.hpp"

namespace qss {

/// e^-lambda lambda^n / n!. Exact products for n <= 20, log space above.
double poisson_pmf(std::uint64_t n, double lambda);

/// Last term needed before the Poisson tail drops below 1e-12:
/// ceil(lambda + 20 sqrt(lambda) + 20).
std::uint64_t poisson_cutoff(double lambda);

/// Probability that Eve identifies Alice's state without error when she
/// holds the pulse at mean mu*T: sum over n >= 3 of p(n; mu T) p_ok(n).
/// Throws std::invalid_argument unless mu > 0 and 0 < T <= 1.
double p_e_closed_form(double mu, double t);
/// Same series as a function of the product mu*T >= 0.
double p_e_at(double mu_t);

/// Rec-1's error rate under impersonation, (1 - P_E) / 2.
double p_error_closed_form(double mu, double t);
double p_error_at(double mu_t);

struct ErrorCurvePoint {
  double mu_t = 0.0;
  double p_e = 0.0;
  double p_error = 0.5;
};

std::vector<ErrorCurvePoint> error_curve(std::span<const double> mu_t_values);

/// Inclusive grid start, start+step, ... up to `stop` (with a half-step
/// tolerance against rounding).
std::vector<double> linear_grid(double start, double stop, double step);

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t trials = 0;

  /// |mean - reference| in units of std_error.
  double sigmas_from(double reference) const;
};

/// Bernoulli mean with std_error = sample std / sqrt(trials).
McEstimate bernoulli_estimate(std::uint64_t successes, std::uint64_t trials);

/// Rec-1's error rate from `trials` simulated impersonation rounds.
/// Throws std::invalid_argument if trials < 10^4.
McEstimate monte_carlo_p_error(double mu, double t, std::uint64_t trials, Rng& rng);

}  // namespace qss
