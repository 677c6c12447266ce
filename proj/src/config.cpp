#include "qss/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace qss {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_real(const std::string& key, std::string_view text) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    throw ConfigError(key, "expected a number, got '" + std::string(text) + "'");
  }
  return value;
}

template <typename Int>
Int parse_integer(const std::string& key, std::string_view text) {
  Int value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    throw ConfigError(key, "expected a non-negative integer, got '" + std::string(text) + "'");
  }
  return value;
}

std::vector<double> parse_real_list(const std::string& key, std::string_view text) {
  std::vector<double> values;
  while (true) {
    const auto comma = text.find(',');
    values.push_back(parse_real(key, trim(text.substr(0, comma))));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return values;
}

std::string format_list(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_double(values[i]);
  }
  return out;
}

void assign(SimConfig& c, const std::string& key, std::string_view value) {
  if (key == "receivers") {
    c.receivers = parse_integer<std::size_t>(key, value);
  } else if (key == "mu") {
    c.mu = parse_real(key, value);
  } else if (key == "transmission") {
    c.transmission = parse_real_list(key, value);
  } else if (key == "link.length_km") {
    c.link_length_km = parse_real_list(key, value);
  } else if (key == "link.loss_db_per_km") {
    c.link_loss_db_per_km = parse_real_list(key, value);
  } else if (key == "rounds") {
    c.rounds = parse_integer<std::size_t>(key, value);
  } else if (key == "key_bits") {
    c.key_bits = parse_integer<std::size_t>(key, value);
  } else if (key == "adversary") {
    try {
      c.adversary = parse_strategy(value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(key, e.what());
    }
  } else if (key == "bs_ratio") {
    c.bs_ratio = parse_real(key, value);
  } else if (key == "parity_block") {
    c.parity_block = parse_integer<std::size_t>(key, value);
  } else if (key == "seed") {
    c.seed = parse_integer<std::uint64_t>(key, value);
  } else if (key == "dishonest") {
    c.dishonest = parse_integer<std::size_t>(key, value);
  } else if (key == "dishonest_rate") {
    c.dishonest_rate = parse_real(key, value);
  } else {
    throw ConfigError(key, "unknown key");
  }
}

std::pair<std::string, std::string_view> split_assignment(std::string_view line, std::size_t line_no) {
  const auto eq = line.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError(std::string(trim(line)), "line " + std::to_string(line_no) + " is not key = value");
  }
  return {std::string(trim(line.substr(0, eq))), trim(line.substr(eq + 1))};
}

std::vector<double> per_link(const std::string& key, const std::vector<double>& values, std::size_t links) {
  if (values.size() == 1) return std::vector<double>(links, values.front());
  if (values.size() != links) {
    throw ConfigError(key, "expected 1 or " + std::to_string(links) + " values");
  }
  return values;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

EveStrategy parse_strategy(std::string_view text) {
  if (text == "none") return NoEve{};
  if (text == "tag") return TagPhoton{};
  if (text == "impersonate") return Impersonate{};
  if (text == "pns") return PnsSplit{1};
  if (text.starts_with("pns:")) {
    std::size_t hop = 0;
    const auto digits = text.substr(4);
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), hop);
    if (ec == std::errc{} && ptr == digits.data() + digits.size() && hop >= 1) return PnsSplit{hop};
  }
  throw std::invalid_argument("unknown adversary '" + std::string(text) +
                              "' (expected none, pns:<hop>, tag or impersonate)");
}

std::string format_strategy(const EveStrategy& strategy) {
  if (const auto* pns = std::get_if<PnsSplit>(&strategy)) return "pns:" + std::to_string(pns->hop);
  return strategy_name(strategy);
}

SimConfig parse_config(std::string_view text) {
  SimConfig config;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    auto [key, value] = split_assignment(line, line_no);
    if (!seen.insert(key).second) throw ConfigError(key, "given more than once");
    assign(config, key, value);
  }
  if (config.transmission && (config.link_length_km || config.link_loss_db_per_km)) {
    throw ConfigError("transmission", "cannot be combined with link.length_km / link.loss_db_per_km");
  }
  return config;
}

SimConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config", "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void apply_override(SimConfig& config, std::string_view assignment) {
  auto [key, value] = split_assignment(trim(assignment), 0);
  assign(config, key, value);
  if (config.transmission && (config.link_length_km || config.link_loss_db_per_km)) {
    throw ConfigError(key, "transmission cannot be combined with link.length_km / link.loss_db_per_km");
  }
}

std::string serialize_config(const SimConfig& c) {
  std::ostringstream out;
  out << "receivers = " << c.receivers << '\n';
  out << "mu = " << format_double(c.mu) << '\n';
  if (c.transmission) out << "transmission = " << format_list(*c.transmission) << '\n';
  if (c.link_length_km) out << "link.length_km = " << format_list(*c.link_length_km) << '\n';
  if (c.link_loss_db_per_km) out << "link.loss_db_per_km = " << format_list(*c.link_loss_db_per_km) << '\n';
  out << "rounds = " << c.rounds << '\n';
  out << "key_bits = " << c.key_bits << '\n';
  out << "adversary = " << format_strategy(c.adversary) << '\n';
  out << "bs_ratio = " << format_double(c.bs_ratio) << '\n';
  out << "parity_block = " << c.parity_block << '\n';
  out << "seed = " << c.seed << '\n';
  out << "dishonest = " << c.dishonest << '\n';
  out << "dishonest_rate = " << format_double(c.dishonest_rate) << '\n';
  return out.str();
}

SessionConfig to_session_config(const SimConfig& c) {
  SessionConfig s;
  s.receivers = c.receivers;
  s.mean_photons = c.mu;
  s.rounds = c.rounds;
  s.target_key_bits = c.key_bits;
  s.adversary = c.adversary;
  s.countermeasure_ratio = c.bs_ratio;
  s.parity_block = c.parity_block;
  s.seed = c.seed;
  s.dishonest_receiver = c.dishonest;
  s.dishonest_rate = c.dishonest_rate;
  if (c.receivers < 1) throw ConfigError("receivers", "need at least one receiver");

  const std::size_t links = c.receivers + 1;
  if (c.transmission) {
    s.link_transmissions = per_link("transmission", *c.transmission, links);
  } else if (c.link_length_km || c.link_loss_db_per_km) {
    const auto lengths = per_link("link.length_km", c.link_length_km.value_or(std::vector<double>{0.0}), links);
    const auto losses =
        per_link("link.loss_db_per_km", c.link_loss_db_per_km.value_or(std::vector<double>{0.2}), links);
    for (std::size_t i = 0; i < links; ++i) {
      if (!(lengths[i] >= 0.0)) throw ConfigError("link.length_km", "must be non-negative");
      if (!(losses[i] >= 0.0)) throw ConfigError("link.loss_db_per_km", "must be non-negative");
      s.link_transmissions.push_back(transmission(FiberLink{lengths[i], losses[i]}));
    }
  }
  s.validate();
  return s;
}

}  // namespace qss
