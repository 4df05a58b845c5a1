#pragma once

// Semantic validation of a raw model declaration. Checks every structural
// invariant and cross-reference, and builds the initial infrastructure
// state together with the insider declarations and the postable universe.

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "inframc/core.hpp"
#include "inframc/policy.hpp"
#include "inframc/state.hpp"

namespace inframc {

struct Diagnostic {
  std::string where;
  std::string message;
};

inline std::string to_string(const Diagnostic& d) {
  return d.where.empty() ? d.message : d.where + ": " + d.message;
}

struct ActorDecl {
  std::string name;
  std::string location;
  std::vector<std::string> credentials;
  std::vector<std::string> roles;
  PsyState psy = PsyState::happy;
  std::vector<Motivation> motivations;
  friend bool operator==(const ActorDecl&, const ActorDecl&) = default;
};

struct PolicyEntryDecl {
  PolicyCondition condition;
  std::vector<Action> actions;
};

struct LocationPolicyDecl {
  std::string location;
  std::vector<PolicyEntryDecl> entries;
};

struct InsiderDecl {
  std::string subject;
  std::vector<std::string> alters;
  friend bool operator==(const InsiderDecl&, const InsiderDecl&) = default;
};

struct PostableDecl {
  std::string poster;
  std::vector<std::string> readers;
  std::string content;
  std::string at;
  friend bool operator==(const PostableDecl&, const PostableDecl&) = default;
};

// Raw, unresolved model declaration as it comes out of a model file.
struct ModelDecl {
  std::vector<std::string> locations;
  std::vector<std::pair<std::string, std::string>> edges;
  std::vector<ActorDecl> actors;
  std::vector<LocationPolicyDecl> policies;
  std::vector<InsiderDecl> insiders;
  std::vector<PostableDecl> postables;
};

// A validated model: the initial state plus the scenario ingredients that
// drive transition generation.
struct Model {
  InfrastructureState initial;
  std::vector<InsiderDeclaration> insiders;
  std::vector<PostableItem> postables;
};

struct ValidationResult {
  std::optional<Model> model;
  std::vector<Diagnostic> errors;
  bool ok() const { return errors.empty() && model.has_value(); }
};

namespace detail {

// Collects identities referenced by a condition so dangling references can
// be diagnosed.
inline void check_condition_refs(const PolicyCondition& c,
                                 const std::set<std::string>& identities,
                                 const std::set<std::string>& credentials,
                                 const std::string& where,
                                 std::vector<Diagnostic>& errors) {
  const auto& n = c.node();
  if (const auto* has = std::get_if<PolicyCondition::HasCredential>(&n)) {
    if (!credentials.count(has->credential))
      errors.push_back({where, "unknown credential \"" + has->credential +
                                   "\" (no actor holds it)"});
  } else if (const auto* in = std::get_if<PolicyCondition::ActorIn>(&n)) {
    for (const auto& id : in->identities)
      if (!identities.count(id.name))
        errors.push_back({where, "unknown identity \"" + id.name + "\""});
  } else if (const auto* no = std::get_if<PolicyCondition::Not>(&n)) {
    check_condition_refs(*no->child, identities, credentials, where, errors);
  } else if (const auto* an = std::get_if<PolicyCondition::And>(&n)) {
    check_condition_refs(*an->lhs, identities, credentials, where, errors);
    check_condition_refs(*an->rhs, identities, credentials, where, errors);
  } else if (const auto* o = std::get_if<PolicyCondition::Or>(&n)) {
    check_condition_refs(*o->lhs, identities, credentials, where, errors);
    check_condition_refs(*o->rhs, identities, credentials, where, errors);
  }
}

}  // namespace detail

inline ValidationResult validate_model(const ModelDecl& decl) {
  ValidationResult result;
  auto& errors = result.errors;

  std::set<std::string> locations;
  for (std::size_t i = 0; i < decl.locations.size(); ++i) {
    const auto& name = decl.locations[i];
    const std::string where = "locations[" + std::to_string(i) + "]";
    if (name.empty()) {
      errors.push_back({where, "location name must be nonempty"});
      continue;
    }
    if (!locations.insert(name).second)
      errors.push_back({where, "duplicate location \"" + name + "\""});
  }

  for (std::size_t i = 0; i < decl.edges.size(); ++i) {
    const std::string where = "edges[" + std::to_string(i) + "]";
    for (const auto& endpoint : {decl.edges[i].first, decl.edges[i].second})
      if (!locations.count(endpoint))
        errors.push_back({where, "unknown location \"" + endpoint + "\""});
  }

  std::set<std::string> identities;
  std::set<std::string> credential_universe;
  std::map<std::string, std::string> placed_at;
  for (std::size_t i = 0; i < decl.actors.size(); ++i) {
    const auto& actor = decl.actors[i];
    const std::string where =
        "actors[" + std::to_string(i) + "] \"" + actor.name + "\"";
    if (actor.name.empty()) {
      errors.push_back({where, "identity name must be nonempty"});
      continue;
    }
    if (!identities.insert(actor.name).second) {
      if (placed_at.count(actor.name) &&
          placed_at[actor.name] != actor.location)
        errors.push_back({where, "identity placed at multiple locations"});
      else
        errors.push_back({where, "duplicate actor declaration"});
      continue;
    }
    if (!locations.count(actor.location))
      errors.push_back({where, "unknown location \"" + actor.location + "\""});
    else
      placed_at[actor.name] = actor.location;
    for (const auto& credential : actor.credentials)
      credential_universe.insert(credential);
  }

  std::set<std::string> policy_locations;
  for (std::size_t i = 0; i < decl.policies.size(); ++i) {
    const auto& policy = decl.policies[i];
    const std::string where =
        "policies[\"" + policy.location + "\"]";
    if (!locations.count(policy.location))
      errors.push_back({where, "unknown location \"" + policy.location + "\""});
    if (!policy_locations.insert(policy.location).second)
      errors.push_back({where, "duplicate policy section"});
    for (std::size_t j = 0; j < policy.entries.size(); ++j) {
      const std::string entry_where =
          where + ".entries[" + std::to_string(j) + "]";
      detail::check_condition_refs(policy.entries[j].condition, identities,
                                   credential_universe, entry_where, errors);
    }
  }

  for (std::size_t i = 0; i < decl.insiders.size(); ++i) {
    const auto& insider = decl.insiders[i];
    const std::string where = "insiders[" + std::to_string(i) + "]";
    if (!identities.count(insider.subject))
      errors.push_back({where, "unknown identity \"" + insider.subject + "\""});
    for (const auto& alter : insider.alters) {
      if (!identities.count(alter))
        errors.push_back({where, "unknown identity \"" + alter + "\""});
      if (alter == insider.subject)
        errors.push_back({where, "subject cannot be its own alter"});
    }
  }

  for (std::size_t i = 0; i < decl.postables.size(); ++i) {
    const auto& postable = decl.postables[i];
    const std::string where = "postables[" + std::to_string(i) + "]";
    if (!identities.count(postable.poster))
      errors.push_back({where, "unknown identity \"" + postable.poster + "\""});
    if (!locations.count(postable.at))
      errors.push_back({where, "unknown location \"" + postable.at + "\""});
    for (const auto& reader : postable.readers)
      if (!identities.count(reader))
        errors.push_back({where, "unknown identity \"" + reader + "\""});
    if (postable.content.empty())
      errors.push_back({where, "datum content must be nonempty"});
  }

  if (!errors.empty()) return result;

  // All references resolve; build the initial state. Every declared
  // location gets a placement and store entry (possibly empty) so the key
  // sets are stable across transitions.
  InfrastructureGraph graph;
  for (const auto& name : decl.locations) {
    graph.placement[Location{name}];
    graph.stores[Location{name}];
  }
  for (const auto& [a, b] : decl.edges)
    graph.edges.insert({Location{a}, Location{b}});
  for (const auto& actor : decl.actors) {
    Identity id{actor.name};
    graph.placement[Location{actor.location}].insert(id);
    graph.credentials[id] = {actor.credentials.begin(),
                             actor.credentials.end()};
    graph.roles[id] = {actor.roles.begin(), actor.roles.end()};
    graph.dispositions[id] =
        ActorState{actor.psy, {actor.motivations.begin(),
                               actor.motivations.end()}};
  }

  auto policy = std::make_shared<LocalPolicy>();
  for (const auto& location_policy : decl.policies) {
    LocalPolicy::EntryList entries;
    for (const auto& entry : location_policy.entries)
      entries.push_back(PolicyEntry{
          entry.condition, {entry.actions.begin(), entry.actions.end()}});
    policy->set_entries(Location{location_policy.location},
                        std::move(entries));
  }

  Model model;
  model.initial = InfrastructureState{std::move(graph), std::move(policy)};
  for (const auto& insider : decl.insiders) {
    std::set<Identity> alters;
    for (const auto& alter : insider.alters) alters.insert(Identity{alter});
    model.insiders.push_back(
        InsiderDeclaration{Identity{insider.subject}, std::move(alters)});
  }
  for (const auto& postable : decl.postables) {
    std::set<Identity> readers;
    for (const auto& reader : postable.readers) readers.insert(Identity{reader});
    model.postables.push_back(PostableItem{
        Identity{postable.poster},
        LabeledDatum{DlmLabel{Identity{postable.poster}, std::move(readers)},
                     postable.content},
        Location{postable.at}});
  }
  result.model = std::move(model);
  return result;
}

}  // namespace inframc
