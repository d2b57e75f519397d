#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "unionbound/space.hpp"

namespace unionbound {

// A problem is either a full atom distribution or partial information.
//   {"schema":"ub-v1","label":"...","n":2,"atoms":{"1":0.3,"2":0.2,"3":0.2}}
//   {"schema":"ub-v1","alpha":[0.5,0.4],"pairwise":[[0.5,0.2],[0.2,0.4]]}
// Atom keys are decimal bitmasks; absent atoms are zero.
struct ProblemFile {
  std::string label;
  std::variant<EventSpace, PartialInfo> data;

  bool has_atoms() const { return std::holds_alternative<EventSpace>(data); }
  const EventSpace* space() const { return std::get_if<EventSpace>(&data); }
  PartialInfo info() const;
};

// Throws ValidationError naming the offending line or field.
ProblemFile parse_problem(const std::string& text, std::size_t max_events = kDefaultMaxAtomEvents);
ProblemFile load_problem(const std::string& path, std::size_t max_events = kDefaultMaxAtomEvents);

std::string serialize_atoms(const EventSpace& space, const std::string& label = {});
std::string serialize_partial(const PartialInfo& info, const std::string& label = {});

// A JSON array, {"weights": [...]}, or whitespace-separated numbers.
std::vector<double> parse_weights(const std::string& text);
std::vector<double> load_weights(const std::string& path);

std::string read_text_file(const std::string& path);

}  // namespace unionbound
