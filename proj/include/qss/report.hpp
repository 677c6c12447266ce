#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qss/analysis.hpp"
#include "qss/session.hpp"

namespace qss {

// CSV conventions: header row always present, ',' separator, '.' decimal
// point, '\n' line endings, lists inside a cell joined with ';'.

std::string curve_csv(std::span<const ErrorCurvePoint> points);
std::vector<ErrorCurvePoint> parse_curve_csv(std::string_view csv);

/// Per-round trace: round, theta, phi, shuffles, bit, basis_choice,
/// key_angle, hop_mean_photons, rec1_polarization, rect, diag, status,
/// decoded_angle, decoded_bit.
std::string trace_csv(std::span<const RoundRecord> records);
std::vector<RoundRecord> parse_trace_csv(std::string_view csv);

struct AttackSummary {
  std::string strategy;
  std::string metric;
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t trials = 0;
  std::optional<double> reference;

  bool operator==(const AttackSummary&) const = default;
};

std::string attack_csv(std::span<const AttackSummary> rows);
std::vector<AttackSummary> parse_attack_csv(std::string_view csv);

/// Human-readable `key = value` session report.
std::string session_report(const SessionResult& result);

std::string to_string(SiftStatus status);

/// Throws std::runtime_error if the file cannot be written.
void write_file(const std::string& path, std::string_view contents);

}  // namespace qss
