#pragma once

// Infrastructure states: the location graph with actor placement,
// credentials, dispositions and labelled data stores, plus the immutable
// policy map. States are the nodes of the explored Kripke structure;
// everything here is an ordered-container value so that structural equality
// and ordering are canonical by construction.

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>

#include "inframc/core.hpp"
#include "inframc/policy.hpp"

namespace inframc {

struct InfrastructureGraph {
  std::set<std::pair<Location, Location>> edges;
  std::map<Location, std::set<Identity>> placement;
  std::map<Identity, std::set<std::string>> credentials;
  std::map<Identity, std::set<std::string>> roles;
  std::map<Identity, ActorState> dispositions;
  std::map<Location, std::set<LabeledDatum>> stores;

  auto operator<=>(const InfrastructureGraph&) const = default;
};

// Current location of an identity. Validation guarantees each identity is
// placed exactly once; on malformed graphs the first match wins.
inline std::optional<Location> location_of(const InfrastructureGraph& g,
                                           const Identity& who) {
  for (const auto& [location, occupants] : g.placement)
    if (occupants.count(who)) return location;
  return std::nullopt;
}

// Edges are traversed undirected.
inline bool has_edge(const InfrastructureGraph& g, const Location& a,
                     const Location& b) {
  return g.edges.count({a, b}) || g.edges.count({b, a});
}

inline const std::set<LabeledDatum>& store_at(const InfrastructureGraph& g,
                                              const Location& l) {
  static const std::set<LabeledDatum> empty;
  auto it = g.stores.find(l);
  return it == g.stores.end() ? empty : it->second;
}

inline const std::set<std::string>& credentials_of(
    const InfrastructureGraph& g, const Identity& who) {
  static const std::set<std::string> empty;
  auto it = g.credentials.find(who);
  return it == g.credentials.end() ? empty : it->second;
}

inline const ActorState* disposition_of(const InfrastructureGraph& g,
                                        const Identity& who) {
  auto it = g.dispositions.find(who);
  return it == g.dispositions.end() ? nullptr : &it->second;
}

// A full system snapshot. The policy map never changes across transitions,
// so successor states share it by pointer.
struct InfrastructureState {
  InfrastructureGraph graph;
  std::shared_ptr<const LocalPolicy> policy;
};

inline int compare(const InfrastructureState& a, const InfrastructureState& b) {
  if (auto c = a.graph <=> b.graph; c != 0) return c < 0 ? -1 : 1;
  if (a.policy == b.policy) return 0;
  if (!a.policy) return -1;
  if (!b.policy) return 1;
  return compare(*a.policy, *b.policy);
}

inline bool operator==(const InfrastructureState& a,
                       const InfrastructureState& b) {
  return compare(a, b) == 0;
}
inline bool operator!=(const InfrastructureState& a,
                       const InfrastructureState& b) {
  return compare(a, b) != 0;
}
inline bool operator<(const InfrastructureState& a,
                      const InfrastructureState& b) {
  return compare(a, b) < 0;
}

// Declares that, should the subject's disposition fire the insider trigger,
// the subject's actor role is identified with each alter's role.
struct InsiderDeclaration {
  Identity subject;
  std::set<Identity> alters;
  auto operator<=>(const InsiderDeclaration&) const = default;
};

// One element of the finite universe of data items that put actions may
// introduce. The owner of the datum is always the poster.
struct PostableItem {
  Identity poster;
  LabeledDatum datum;
  Location at;
  auto operator<=>(const PostableItem&) const = default;
};

}  // namespace inframc
