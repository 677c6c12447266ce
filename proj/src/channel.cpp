#include "qss/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace qss {

double transmission(const FiberLink& link) {
  if (!(link.length_km >= 0.0) || !(link.loss_db_per_km >= 0.0)) {
    throw std::invalid_argument("fiber length and loss must be non-negative");
  }
  return std::pow(10.0, -(link.loss_db_per_km * link.length_km) / 10.0);
}

CoherentPulse attenuate(const CoherentPulse& pulse, double t) {
  if (!(t > 0.0 && t <= 1.0)) {
    throw std::invalid_argument("transmission must lie in (0, 1]");
  }
  return {pulse.mean_photons * t, pulse.polarization};
}

Topology::Topology(std::vector<double> link_transmissions) : links_(std::move(link_transmissions)) {
  if (links_.size() < 2) {
    throw std::invalid_argument("topology needs at least one receiver (two links)");
  }
  for (double t : links_) {
    if (!(t > 0.0 && t <= 1.0)) {
      throw std::invalid_argument("link transmission must lie in (0, 1]");
    }
  }
}

Topology Topology::from_links(const std::vector<FiberLink>& links) {
  std::vector<double> t;
  t.reserve(links.size());
  for (const auto& link : links) t.push_back(transmission(link));
  return Topology(std::move(t));
}

Topology Topology::uniform(std::size_t receivers, double t) {
  return Topology(std::vector<double>(receivers + 1, t));
}

double Topology::round_trip_transmission() const {
  double product = 1.0;
  for (double t : links_) product *= t;
  return product;
}

}  // namespace qss
