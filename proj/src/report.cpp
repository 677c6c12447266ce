#include "qss/report.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "qss/config.hpp"

namespace qss {

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  while (true) {
    const auto pos = s.find(sep);
    parts.push_back(s.substr(0, pos));
    if (pos == std::string_view::npos) break;
    s.remove_prefix(pos + 1);
  }
  return parts;
}

// Data rows of a CSV after checking the header.
std::vector<std::vector<std::string_view>> csv_rows(std::string_view csv, std::string_view header,
                                                     std::size_t columns) {
  auto lines = split(csv, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty() || lines.front() != header) throw std::runtime_error("unexpected CSV header");
  std::vector<std::vector<std::string_view>> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto cells = split(lines[i], ',');
    if (cells.size() != columns) {
      throw std::runtime_error("CSV row " + std::to_string(i) + " has " + std::to_string(cells.size()) +
                               " cells, expected " + std::to_string(columns));
    }
    rows.push_back(std::move(cells));
  }
  return rows;
}

double to_real(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw std::runtime_error("bad number in CSV");
  return v;
}

std::uint64_t to_uint(std::string_view s) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw std::runtime_error("bad integer in CSV");
  return v;
}

DecisionAngle to_angle(std::string_view s) {
  const auto a = DecisionAngle::from_label(s);
  if (!a) throw std::runtime_error("bad decision angle in CSV");
  return *a;
}

MeasurementOutcome to_outcome(std::string_view s) {
  const auto o = MeasurementOutcome::from_label(s);
  if (!o) throw std::runtime_error("bad measurement outcome in CSV");
  return *o;
}

SiftStatus to_status(std::string_view s) {
  if (s == "kept") return SiftStatus::Kept;
  if (s == "vacuum") return SiftStatus::VacuumDiscard;
  if (s == "ambiguous") return SiftStatus::AmbiguousDiscard;
  throw std::runtime_error("bad sift status in CSV");
}

template <typename T, typename F>
std::string join(const std::vector<T>& values, F format) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ';';
    out += format(values[i]);
  }
  return out;
}

constexpr std::string_view kCurveHeader = "mu_t,p_e,p_error";
constexpr std::string_view kTraceHeader =
    "round,theta,phi,shuffles,bit,basis_choice,key_angle,hop_mean_photons,rec1_polarization,"
    "rect,diag,status,decoded_angle,decoded_bit";
constexpr std::string_view kAttackHeader = "strategy,metric,value,std_error,trials,reference";

}  // namespace

std::string to_string(SiftStatus status) {
  switch (status) {
    case SiftStatus::Kept: return "kept";
    case SiftStatus::VacuumDiscard: return "vacuum";
    case SiftStatus::AmbiguousDiscard: return "ambiguous";
  }
  return "unknown";
}

std::string curve_csv(std::span<const ErrorCurvePoint> points) {
  std::string out(kCurveHeader);
  out += '\n';
  for (const auto& p : points) {
    out += format_double(p.mu_t) + ',' + format_double(p.p_e) + ',' + format_double(p.p_error) + '\n';
  }
  return out;
}

std::vector<ErrorCurvePoint> parse_curve_csv(std::string_view csv) {
  std::vector<ErrorCurvePoint> points;
  for (const auto& row : csv_rows(csv, kCurveHeader, 3)) {
    points.push_back({to_real(row[0]), to_real(row[1]), to_real(row[2])});
  }
  return points;
}

std::string trace_csv(std::span<const RoundRecord> records) {
  std::string out(kTraceHeader);
  out += '\n';
  const auto radians = [](PolarizationAngle a) { return format_double(a.radians()); };
  const auto label = [](DecisionAngle a) { return a.label(); };
  for (const auto& r : records) {
    out += std::to_string(r.round) + ',';
    out += radians(r.theta) + ',';
    out += join(r.hide_angles, radians) + ',';
    out += join(r.shuffles, label) + ',';
    out += std::to_string(r.bit) + ',';
    out += std::to_string(r.basis_choice) + ',';
    out += r.key_angle.label() + ',';
    out += join(r.hop_mean_photons, [](double x) { return format_double(x); }) + ',';
    out += radians(r.rec1_polarization) + ',';
    out += r.rect.label() + ',';
    out += r.diag.label() + ',';
    out += to_string(r.status) + ',';
    out += (r.decoded_angle ? r.decoded_angle->label() : std::string()) + ',';
    out += (r.decoded_bit ? std::to_string(*r.decoded_bit) : std::string()) + '\n';
  }
  return out;
}

std::vector<RoundRecord> parse_trace_csv(std::string_view csv) {
  std::vector<RoundRecord> records;
  for (const auto& row : csv_rows(csv, kTraceHeader, 14)) {
    RoundRecord r;
    r.round = to_uint(row[0]);
    r.theta = PolarizationAngle(to_real(row[1]));
    for (auto cell : split(row[2], ';')) r.hide_angles.emplace_back(to_real(cell));
    for (auto cell : split(row[3], ';')) r.shuffles.push_back(to_angle(cell));
    r.bit = static_cast<int>(to_uint(row[4]));
    r.basis_choice = static_cast<int>(to_uint(row[5]));
    r.key_angle = to_angle(row[6]);
    for (auto cell : split(row[7], ';')) r.hop_mean_photons.push_back(to_real(cell));
    r.rec1_polarization = PolarizationAngle(to_real(row[8]));
    r.rect = to_outcome(row[9]);
    r.diag = to_outcome(row[10]);
    r.status = to_status(row[11]);
    if (!row[12].empty()) r.decoded_angle = to_angle(row[12]);
    if (!row[13].empty()) r.decoded_bit = static_cast<int>(to_uint(row[13]));
    records.push_back(std::move(r));
  }
  return records;
}

std::string attack_csv(std::span<const AttackSummary> rows) {
  std::string out(kAttackHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += r.strategy + ',' + r.metric + ',' + format_double(r.value) + ',' + format_double(r.std_error) +
           ',' + std::to_string(r.trials) + ',' + (r.reference ? format_double(*r.reference) : "") + '\n';
  }
  return out;
}

std::vector<AttackSummary> parse_attack_csv(std::string_view csv) {
  std::vector<AttackSummary> rows;
  for (const auto& row : csv_rows(csv, kAttackHeader, 6)) {
    AttackSummary s{std::string(row[0]), std::string(row[1]), to_real(row[2]), to_real(row[3]),
                    to_uint(row[4]), std::nullopt};
    if (!row[5].empty()) s.reference = to_real(row[5]);
    rows.push_back(std::move(s));
  }
  return rows;
}

std::string session_report(const SessionResult& r) {
  std::ostringstream out;
  out << "verdict = " << to_string(r.verdict.kind) << '\n';
  if (r.verdict.suspect) out << "suspect_receiver = " << *r.verdict.suspect << '\n';
  out << "rounds = " << r.rounds_run << '\n';
  out << "kept_rounds = " << r.kept_rounds << '\n';
  out << "vacuum_discards = " << r.vacuum_discards << '\n';
  out << "ambiguous_discards = " << r.ambiguous_discards << '\n';
  out << "discard_fraction = " << format_double(r.discard_fraction) << '\n';
  out << "key_shortfall = " << (r.key_shortfall ? "true" : "false") << '\n';
  out << "qber = " << format_double(r.qber) << '\n';
  for (std::size_t i = 0; i < r.receiver_qber.size(); ++i) {
    out << "qber.rec" << i + 1 << " = " << format_double(r.receiver_qber[i]) << '\n';
  }
  out << "sifted_key_bits = " << r.alice_sifted.size() << '\n';
  out << "reconciliation_discarded_blocks = " << r.reconciliation_discarded_blocks << '\n';
  out << "final_key_bits = " << r.alice_final.size() << '\n';
  if (!r.receiver_digests.empty()) {
    out << "hash.alice = " << to_hex(r.alice_digest) << '\n';
    for (std::size_t i = 0; i < r.receiver_digests.size(); ++i) {
      out << "hash.rec" << i + 1 << " = " << to_hex(r.receiver_digests[i]) << '\n';
    }
  }
  if (r.eve) {
    out << "eve.strategy = " << r.eve->strategy << '\n';
    out << "eve.attempted_rounds = " << r.eve->attempted << '\n';
    out << "eve.guesses = " << r.eve->guessed << '\n';
    out << "eve.correct = " << r.eve->correct << '\n';
    out << "eve.recovery_rate = " << format_double(r.eve->recovery_rate()) << '\n';
    out << "eve.accuracy = " << format_double(r.eve->accuracy()) << '\n';
  }
  return out.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace qss
