#pragma once

// Report rendering for the command-line interface: human-readable text and
// machine-readable JSON. All output is deterministic for a given input
// (canonically ordered containers, no timestamps), see docs/report-format.md.

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "inframc/attack.hpp"
#include "inframc/kripke.hpp"
#include "inframc/state.hpp"

namespace inframc {

inline nlohmann::ordered_json datum_to_json(const LabeledDatum& datum) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  j["owner"] = datum.label.owner.name;
  nlohmann::ordered_json readers = nlohmann::ordered_json::array();
  for (const auto& reader : datum.label.readers) readers.push_back(reader.name);
  j["readers"] = std::move(readers);
  j["content"] = datum.content;
  return j;
}

inline nlohmann::ordered_json state_to_json(const InfrastructureState& state) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  nlohmann::ordered_json placement = nlohmann::ordered_json::object();
  for (const auto& [location, occupants] : state.graph.placement) {
    nlohmann::ordered_json names = nlohmann::ordered_json::array();
    for (const auto& id : occupants) names.push_back(id.name);
    placement[location.name] = std::move(names);
  }
  j["placement"] = std::move(placement);
  nlohmann::ordered_json stores = nlohmann::ordered_json::object();
  for (const auto& [location, store] : state.graph.stores) {
    nlohmann::ordered_json data = nlohmann::ordered_json::array();
    for (const auto& datum : store) data.push_back(datum_to_json(datum));
    stores[location.name] = std::move(data);
  }
  j["stores"] = std::move(stores);
  return j;
}

inline std::string describe_datum(const LabeledDatum& datum) {
  std::string out = "\"" + datum.content + "\" (owner " +
                    datum.label.owner.name + ", readers {";
  bool first = true;
  for (const auto& reader : datum.label.readers) {
    if (!first) out += ", ";
    out += reader.name;
    first = false;
  }
  return out + "})";
}

// One-line description of how a state differs from the initial state:
// placement changes and data added since the start.
inline std::string describe_state_diff(const InfrastructureState& initial,
                                       const InfrastructureState& state) {
  std::vector<std::string> parts;
  for (const auto& [who, disposition] : state.graph.dispositions) {
    auto was = location_of(initial.graph, who);
    auto now = location_of(state.graph, who);
    if (was && now && *was != *now)
      parts.push_back(who.name + ": " + was->name + " -> " + now->name);
  }
  for (const auto& [location, store] : state.graph.stores)
    for (const auto& datum : store)
      if (!store_at(initial.graph, location).count(datum))
        parts.push_back("+ " + describe_datum(datum) + " at " + location.name);
  if (parts.empty()) return "no change from initial state";
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i)
    out += (i ? "; " : "") + parts[i];
  return out;
}

inline std::string describe_state_full(const InfrastructureState& state) {
  std::string out;
  for (const auto& [location, occupants] : state.graph.placement) {
    out += "  " + location.name + ": {";
    bool first = true;
    for (const auto& id : occupants) {
      if (!first) out += ", ";
      out += id.name;
      first = false;
    }
    out += "}";
    const auto& store = store_at(state.graph, location);
    for (const auto& datum : store) out += "\n    " + describe_datum(datum);
    out += "\n";
  }
  return out;
}

inline void print_witness_text(std::ostream& out,
                               const InfrastructureState& initial,
                               const std::vector<InfrastructureState>& witness,
                               bool full_states) {
  out << "witness (" << witness.size() << " state"
      << (witness.size() == 1 ? "" : "s") << "):\n";
  for (std::size_t i = 0; i < witness.size(); ++i) {
    if (full_states) {
      out << "  step " << i << ":\n" << describe_state_full(witness[i]);
    } else {
      out << "  step " << i << ": "
          << describe_state_diff(initial, witness[i]) << "\n";
    }
  }
}

inline nlohmann::ordered_json witness_to_json(
    const std::vector<InfrastructureState>& witness) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& state : witness) j.push_back(state_to_json(state));
  return j;
}

inline std::size_t transition_count(const KripkeModel& model) {
  std::size_t count = 0;
  for (const auto& edges : model.transitions) count += edges.size();
  return count;
}

}  // namespace inframc
