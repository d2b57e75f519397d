#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "unionbound/bounds_classic.hpp"

namespace unionbound {

// One row of a report. A bound that could not be evaluated for the chosen
// weights keeps value empty and says why in status.
struct ReportEntry {
  std::string name;
  std::string strategy;  // weight source, empty for weight-free bounds
  BoundKind kind = BoundKind::Lower;
  std::optional<double> value;
  std::string status = "ok";
  std::string weights_digest;
  std::optional<bool> valid;  // set when the exact union is known
  std::vector<std::string> notes;

  bool operator==(const ReportEntry&) const = default;
};

// Random-search statistics: how often the shared-atom class beats the
// plain class at the same weights, and by how much on average.
struct FamilyComparison {
  std::size_t trials = 0;
  std::size_t improved = 0;       // lnew4 > lnew3 + 1e-12
  double improved_percent = 0.0;
  std::size_t ratio_trials = 0;   // trials with lnew3 > 0
  double mean_ratio = 0.0;        // mean lnew4/lnew3 over ratio_trials

  bool operator==(const FamilyComparison&) const = default;
};

struct BoundReport {
  std::string label;
  std::size_t n = 0;
  std::string input_form;  // "atoms" or "partial"
  std::optional<double> exact_union;
  std::vector<ReportEntry> entries;
  std::optional<FamilyComparison> comparison;

  bool operator==(const BoundReport&) const = default;
};

ReportEntry make_entry(const BoundValue& b, std::string strategy = {});

// Marks each entry valid when it sits on the right side of exact (1e-9 slack).
void annotate_validity(BoundReport& report, double exact);

// 16 hex digits of FNV-1a over the IEEE bit patterns.
std::string weights_digest(std::span<const double> c);

// One JSON object per line, header first; doubles round-trip exactly.
std::string to_json_lines(const BoundReport& report);
BoundReport parse_json_lines(const std::string& text);

// Lower bounds descending, the exact union as separator when known, then
// upper bounds ascending. Six significant digits.
std::string to_table(const BoundReport& report);

}  // namespace unionbound
