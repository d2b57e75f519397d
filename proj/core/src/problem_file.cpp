#include "unionbound/problem_file.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "unionbound/errors.hpp"

namespace unionbound {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

PartialInfo ProblemFile::info() const {
  if (const auto* s = space()) return derive_partial_info(*s);
  return std::get<PartialInfo>(data);
}

namespace {

double number_field(const json& v, const std::string& where) {
  if (!v.is_number()) throw ValidationError(where + ": expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ValidationError(where + ": not finite");
  return d;
}

std::vector<double> number_array(const json& v, const std::string& where) {
  if (!v.is_array()) throw ValidationError(where + ": expected an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) out.push_back(number_field(v[k], where + "[" + std::to_string(k) + "]"));
  return out;
}

Mask parse_mask_key(const std::string& key, std::size_t n) {
  std::size_t used = 0;
  unsigned long long m = 0;
  try {
    m = std::stoull(key, &used, 10);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != key.size() || key[0] == '-' || key[0] == '+') {
    throw ValidationError("atoms: key '" + key + "' is not a decimal bitmask");
  }
  if (m == 0 || m > full_mask(n)) {
    throw ValidationError("atoms: key '" + key + "' is outside 1.." + std::to_string(full_mask(n)));
  }
  return m;
}

EventSpace parse_atoms(const json& doc, std::size_t max_events) {
  if (!doc.contains("n")) throw ValidationError("n: missing (required with atoms)");
  const json& nv = doc.at("n");
  if (!nv.is_number_integer() || nv.get<long long>() < 1) throw ValidationError("n: expected a positive integer");
  const auto n = static_cast<std::size_t>(nv.get<long long>());
  if (n > max_events || n >= 63) {
    throw ArgumentError("n: " + std::to_string(n) + " exceeds the atom-level cap of " + std::to_string(max_events));
  }
  const json& atoms = doc.at("atoms");
  if (!atoms.is_object()) throw ValidationError("atoms: expected an object keyed by bitmask");
  std::vector<double> table(std::size_t{1} << n, 0.0);
  for (const auto& [key, value] : atoms.items()) {
    const Mask m = parse_mask_key(key, n);
    table[m] = number_field(value, "atoms[\"" + key + "\"]");
  }
  return EventSpace(n, std::move(table), max_events);
}

PartialInfo parse_partial(const json& doc) {
  std::vector<double> alpha = number_array(doc.at("alpha"), "alpha");
  const json& rows = doc.at("pairwise");
  if (!rows.is_array() || rows.size() != alpha.size()) {
    throw ValidationError("pairwise: expected " + std::to_string(alpha.size()) + " rows");
  }
  std::vector<double> flat;
  flat.reserve(alpha.size() * alpha.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string where = "pairwise[" + std::to_string(i) + "]";
    std::vector<double> row = number_array(rows[i], where);
    if (row.size() != alpha.size()) {
      throw ValidationError(where + ": expected " + std::to_string(alpha.size()) + " entries");
    }
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return PartialInfo(std::move(alpha), std::move(flat));
}

}  // namespace

ProblemFile parse_problem(const std::string& text, std::size_t max_events) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("problem file must be a JSON object");
  if (!doc.contains("schema")) throw ValidationError("schema: missing (expected \"ub-v1\")");
  if (doc.at("schema") != "ub-v1") throw ValidationError("schema: unsupported version " + doc.at("schema").dump());

  std::string label;
  if (doc.contains("label")) {
    if (!doc.at("label").is_string()) throw ValidationError("label: expected a string");
    label = doc.at("label").get<std::string>();
  }
  const bool atoms = doc.contains("atoms");
  const bool partial = doc.contains("alpha") || doc.contains("pairwise");
  if (atoms == partial) throw ValidationError("exactly one of the atoms form or the alpha/pairwise form is required");
  if (partial && !(doc.contains("alpha") && doc.contains("pairwise"))) {
    throw ValidationError(doc.contains("alpha") ? "pairwise: missing" : "alpha: missing");
  }
  if (atoms) return {label, parse_atoms(doc, max_events)};
  return {label, parse_partial(doc)};
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

ProblemFile load_problem(const std::string& path, std::size_t max_events) {
  try {
    return parse_problem(read_text_file(path), max_events);
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

std::string serialize_atoms(const EventSpace& space, const std::string& label) {
  ojson doc;
  doc["schema"] = "ub-v1";
  if (!label.empty()) doc["label"] = label;
  doc["n"] = space.event_count();
  ojson atoms = ojson::object();
  const auto p = space.atoms();
  for (Mask m = 1; m < p.size(); ++m) {
    if (p[m] != 0.0) atoms[std::to_string(m)] = p[m];
  }
  doc["atoms"] = std::move(atoms);
  return doc.dump(2) + "\n";
}

std::string serialize_partial(const PartialInfo& info, const std::string& label) {
  ojson doc;
  doc["schema"] = "ub-v1";
  if (!label.empty()) doc["label"] = label;
  const std::size_t n = info.event_count();
  doc["alpha"] = std::vector<double>(info.alphas().begin(), info.alphas().end());
  ojson rows = ojson::array();
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = info.pairwise_row(i);
    rows.push_back(std::vector<double>(r.begin(), r.end()));
  }
  doc["pairwise"] = std::move(rows);
  return doc.dump(2) + "\n";
}

std::vector<double> parse_weights(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw ValidationError("weights: empty");
  if (text[first] == '[' || text[first] == '{') {
    json doc;
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ValidationError(std::string("weights: malformed JSON: ") + e.what());
    }
    if (doc.is_object()) {
      if (!doc.contains("weights")) throw ValidationError("weights: object needs a \"weights\" array");
      return number_array(doc.at("weights"), "weights");
    }
    return number_array(doc, "weights");
  }
  std::istringstream in(text);
  std::vector<double> out;
  std::string token;
  while (in >> token) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != token.size() || !std::isfinite(v)) {
      throw ValidationError("weights: '" + token + "' is not a finite number");
    }
    out.push_back(v);
  }
  return out;
}

std::vector<double> load_weights(const std::string& path) {
  try {
    return parse_weights(read_text_file(path));
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

}  // namespace unionbound
