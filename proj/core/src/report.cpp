#include "unionbound/report.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <json.hpp>
#include <sstream>

#include "unionbound/errors.hpp"

namespace unionbound {

using ojson = nlohmann::ordered_json;

ReportEntry make_entry(const BoundValue& b, std::string strategy) {
  ReportEntry e;
  e.name = b.name;
  e.strategy = std::move(strategy);
  e.kind = b.kind;
  e.value = b.value;
  e.notes = b.notes;
  if (b.weights) e.weights_digest = weights_digest(b.weights->values());
  return e;
}

void annotate_validity(BoundReport& report, double exact) {
  report.exact_union = exact;
  for (auto& e : report.entries) {
    if (!e.value) continue;
    e.valid = e.kind == BoundKind::Lower ? *e.value <= exact + 1e-9 : *e.value >= exact - 1e-9;
  }
}

std::string weights_digest(std::span<const double> c) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (double v : c) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, &v, sizeof bits);
    for (int k = 0; k < 8; ++k) {
      h ^= (bits >> (8 * k)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

template <class T>
ojson optional_json(const std::optional<T>& v) {
  return v ? ojson(*v) : ojson(nullptr);
}

template <class T>
std::optional<T> optional_from(const ojson& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

BoundKind parse_kind(const std::string& s) {
  if (s == "lower") return BoundKind::Lower;
  if (s == "upper") return BoundKind::Upper;
  throw ValidationError("unknown bound kind '" + s + "'");
}

std::string six(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%#.6g", v);
  return buf;
}

}  // namespace

std::string to_json_lines(const BoundReport& report) {
  std::string out;
  ojson header;
  header["type"] = "header";
  header["schema"] = "ub-v1";
  header["label"] = report.label;
  header["n"] = report.n;
  header["input_form"] = report.input_form;
  header["exact_union"] = optional_json(report.exact_union);
  out += header.dump() + "\n";
  for (const auto& e : report.entries) {
    ojson j;
    j["type"] = "bound";
    j["name"] = e.name;
    j["strategy"] = e.strategy;
    j["kind"] = to_string(e.kind);
    j["value"] = optional_json(e.value);
    j["status"] = e.status;
    j["weights_digest"] = e.weights_digest;
    j["valid"] = optional_json(e.valid);
    j["notes"] = e.notes;
    out += j.dump() + "\n";
  }
  if (report.comparison) {
    const FamilyComparison& c = *report.comparison;
    ojson j;
    j["type"] = "comparison";
    j["trials"] = c.trials;
    j["improved"] = c.improved;
    j["improved_percent"] = c.improved_percent;
    j["ratio_trials"] = c.ratio_trials;
    j["mean_ratio"] = c.mean_ratio;
    out += j.dump() + "\n";
  }
  return out;
}

BoundReport parse_json_lines(const std::string& text) {
  BoundReport report;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  bool seen_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const ojson j = ojson::parse(line);
      const std::string type = j.at("type").get<std::string>();
      if (type == "header") {
        if (j.at("schema").get<std::string>() != "ub-v1") throw ValidationError("unsupported schema");
        report.label = j.at("label").get<std::string>();
        report.n = j.at("n").get<std::size_t>();
        report.input_form = j.at("input_form").get<std::string>();
        report.exact_union = optional_from<double>(j, "exact_union");
        seen_header = true;
      } else if (type == "bound") {
        ReportEntry e;
        e.name = j.at("name").get<std::string>();
        e.strategy = j.at("strategy").get<std::string>();
        e.kind = parse_kind(j.at("kind").get<std::string>());
        e.value = optional_from<double>(j, "value");
        e.status = j.at("status").get<std::string>();
        e.weights_digest = j.at("weights_digest").get<std::string>();
        e.valid = optional_from<bool>(j, "valid");
        e.notes = j.at("notes").get<std::vector<std::string>>();
        report.entries.push_back(std::move(e));
      } else if (type == "comparison") {
        FamilyComparison c;
        c.trials = j.at("trials").get<std::size_t>();
        c.improved = j.at("improved").get<std::size_t>();
        c.improved_percent = j.at("improved_percent").get<double>();
        c.ratio_trials = j.at("ratio_trials").get<std::size_t>();
        c.mean_ratio = j.at("mean_ratio").get<double>();
        report.comparison = c;
      } else {
        throw ValidationError("unknown record type '" + type + "'");
      }
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("report line " + std::to_string(line_no) + ": " + e.what());
    } catch (const ValidationError& e) {
      throw ValidationError("report line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!seen_header) throw ValidationError("report has no header line");
  return report;
}

std::string to_table(const BoundReport& report) {
  std::vector<const ReportEntry*> lower, upper, failed;
  for (const auto& e : report.entries) {
    if (!e.value) {
      failed.push_back(&e);
    } else if (e.kind == BoundKind::Lower) {
      lower.push_back(&e);
    } else {
      upper.push_back(&e);
    }
  }
  std::stable_sort(lower.begin(), lower.end(), [](auto* a, auto* b) { return *a->value > *b->value; });
  std::stable_sort(upper.begin(), upper.end(), [](auto* a, auto* b) { return *a->value < *b->value; });

  std::ostringstream os;
  char buf[256];
  if (!report.label.empty()) os << "label: " << report.label << "\n";
  os << "events: " << report.n << " (" << report.input_form << " input)\n\n";
  std::snprintf(buf, sizeof buf, "%-10s %-8s %-6s %12s  %s\n", "bound", "weights", "kind", "value", "check");
  os << buf;
  os << std::string(48, '-') << "\n";
  auto row = [&](const ReportEntry& e) {
    const char* check = !e.valid ? "" : (*e.valid ? "ok" : "VIOLATED");
    std::snprintf(buf, sizeof buf, "%-10s %-8s %-6s %12s  %s\n", e.name.c_str(),
                  e.strategy.empty() ? "-" : e.strategy.c_str(), to_string(e.kind), six(*e.value).c_str(), check);
    os << buf;
  };
  for (const auto* e : lower) row(*e);
  if (report.exact_union) {
    std::snprintf(buf, sizeof buf, "%-10s %-8s %-6s %12s\n", "union", "", "exact", six(*report.exact_union).c_str());
    os << buf;
  } else {
    os << std::string(48, '-') << "\n";
  }
  for (const auto* e : upper) row(*e);
  for (const auto* e : failed) {
    std::snprintf(buf, sizeof buf, "%-10s %-8s %-6s %12s  ", e->name.c_str(),
                  e->strategy.empty() ? "-" : e->strategy.c_str(), to_string(e->kind), "n/a");
    os << buf << e->status << "\n";
  }
  if (report.comparison) {
    const FamilyComparison& c = *report.comparison;
    os << "\nrandom search over " << c.trials << " positive weight vectors\n";
    os << "  lnew4 > lnew3:      " << six(c.improved_percent) << " % of trials (" << c.improved << ")\n";
    os << "  mean lnew4/lnew3:   " << six(c.mean_ratio) << " over " << c.ratio_trials << " trials with lnew3 > 0\n";
  }
  return os.str();
}

}  // namespace unionbound
