#include "qss/analysis.hpp"

#include <cmath>
#include <stdexcept>

#include "qss/adversary.hpp"

namespace qss {

double poisson_pmf(std::uint64_t n, double lambda) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("Poisson mean must be non-negative");
  if (lambda == 0.0) return n == 0 ? 1.0 : 0.0;
  if (n <= 20) {
    double term = std::exp(-lambda);
    for (std::uint64_t k = 1; k <= n; ++k) term *= lambda / static_cast<double>(k);
    return term;
  }
  const double nd = static_cast<double>(n);
  return std::exp(-lambda + nd * std::log(lambda) - std::lgamma(nd + 1.0));
}

std::uint64_t poisson_cutoff(double lambda) {
  return static_cast<std::uint64_t>(std::ceil(lambda + 20.0 * std::sqrt(lambda) + 20.0));
}

double p_e_at(double mu_t) {
  if (!(mu_t >= 0.0)) throw std::invalid_argument("mu*T must be non-negative");
  if (mu_t == 0.0) return 0.0;
  const std::uint64_t last = poisson_cutoff(mu_t);
  double sum = 0.0;
  for (std::uint64_t n = 3; n <= last; ++n) sum += poisson_pmf(n, mu_t) * usd_success(n);
  return sum;
}

double p_e_closed_form(double mu, double t) {
  if (!(mu > 0.0)) throw std::invalid_argument("mean photon number must be positive");
  if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("transmission must lie in (0, 1]");
  return p_e_at(mu * t);
}

double p_error_at(double mu_t) { return 0.5 * (1.0 - p_e_at(mu_t)); }

double p_error_closed_form(double mu, double t) { return 0.5 * (1.0 - p_e_closed_form(mu, t)); }

std::vector<ErrorCurvePoint> error_curve(std::span<const double> mu_t_values) {
  std::vector<ErrorCurvePoint> curve;
  curve.reserve(mu_t_values.size());
  for (double x : mu_t_values) {
    const double pe = p_e_at(x);
    curve.push_back({x, pe, 0.5 * (1.0 - pe)});
  }
  return curve;
}

std::vector<double> linear_grid(double start, double stop, double step) {
  if (!(step > 0.0) || !(stop >= start)) throw std::invalid_argument("grid needs step > 0 and stop >= start");
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 0.5)) + 1;
  std::vector<double> grid;
  grid.reserve(count);
  for (std::size_t i = 0; i < count; ++i) grid.push_back(start + static_cast<double>(i) * step);
  return grid;
}

double McEstimate::sigmas_from(double reference) const {
  const double diff = std::fabs(mean - reference);
  if (std_error == 0.0) return diff == 0.0 ? 0.0 : INFINITY;
  return diff / std_error;
}

McEstimate bernoulli_estimate(std::uint64_t successes, std::uint64_t trials) {
  if (trials == 0) return {};
  const double p = static_cast<double>(successes) / static_cast<double>(trials);
  // Unbiased sample variance of 0/1 data.
  const double variance = trials > 1 ? p * (1.0 - p) * static_cast<double>(trials) / static_cast<double>(trials - 1) : 0.0;
  return {p, std::sqrt(variance / static_cast<double>(trials)), trials};
}

McEstimate monte_carlo_p_error(double mu, double t, std::uint64_t trials, Rng& rng) {
  if (trials < 10'000) throw std::invalid_argument("Monte Carlo needs at least 10^4 trials");
  if (!(mu > 0.0)) throw std::invalid_argument("mean photon number must be positive");
  if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("transmission must lie in (0, 1]");
  std::uint64_t errors = 0;
  for (std::uint64_t i = 0; i < trials; ++i) {
    if (impersonate_round(mu, t, rng).bit_error) ++errors;
  }
  return bernoulli_estimate(errors, trials);
}

}  // namespace qss
