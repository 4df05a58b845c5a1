#pragma once

// Policy evaluation and the state transition rules. Transitions never touch
// the policy map or the dispositions; put and get only add data, move only
// changes placement.

#include <optional>
#include <set>
#include <vector>

#include "inframc/core.hpp"
#include "inframc/policy.hpp"
#include "inframc/resolver.hpp"
#include "inframc/state.hpp"

namespace inframc {

inline bool eval_condition(const InfrastructureState& state,
                           const ActorResolver& resolver,
                           const PolicyCondition& condition,
                           const Identity& who) {
  const auto& n = condition.node();
  if (std::holds_alternative<PolicyCondition::AlwaysTrue>(n)) return true;
  if (const auto* has = std::get_if<PolicyCondition::HasCredential>(&n))
    return credentials_of(state.graph, who).count(has->credential) > 0;
  if (const auto* in = std::get_if<PolicyCondition::ActorIn>(&n)) {
    for (const auto& member : in->identities)
      if (actor_eq(resolver, who, member)) return true;
    return false;
  }
  if (const auto* no = std::get_if<PolicyCondition::Not>(&n))
    return !eval_condition(state, resolver, *no->child, who);
  if (const auto* an = std::get_if<PolicyCondition::And>(&n))
    return eval_condition(state, resolver, *an->lhs, who) &&
           eval_condition(state, resolver, *an->rhs, who);
  const auto& o = std::get<PolicyCondition::Or>(n);
  return eval_condition(state, resolver, *o.lhs, who) ||
         eval_condition(state, resolver, *o.rhs, who);
}

// An actor may perform an action at a location iff some policy entry there
// lists the action and its condition holds for the actor.
inline bool enables(const InfrastructureState& state,
                    const ActorResolver& resolver, const Location& location,
                    const Identity& who, Action action) {
  if (!state.policy) return false;
  for (const auto& entry : state.policy->entries_at(location)) {
    if (entry.actions.count(action) &&
        eval_condition(state, resolver, entry.condition, who))
      return true;
  }
  return false;
}

// The top-level security requirement: anyone outside the friends set must
// not be enabled to get data at the cloud location.
inline bool global_policy_holds(const InfrastructureState& state,
                                const ActorResolver& resolver,
                                const Identity& who,
                                const std::set<Identity>& friends,
                                const Location& cloud) {
  if (friends.count(who)) return true;
  return !enables(state, resolver, cloud, who, Action::get);
}

// put: an unaware poster standing at the item's location and enabled to put
// there adds the datum to that location's store.
inline std::optional<InfrastructureState> step_put(
    const InfrastructureState& state, const ActorResolver& resolver,
    const PostableItem& item) {
  auto at = location_of(state.graph, item.poster);
  if (!at || *at != item.at) return std::nullopt;
  if (!state.graph.stores.count(item.at)) return std::nullopt;
  if (!enables(state, resolver, item.at, item.poster, Action::put))
    return std::nullopt;
  const ActorState* disposition = disposition_of(state.graph, item.poster);
  if (!disposition || !unaware(*disposition)) return std::nullopt;
  InfrastructureState next = state;
  next.graph.stores[item.at].insert(item.datum);
  return next;
}

// get: an actor enabled to get at a (possibly remote) location copies a
// datum stored there into the store of its own location, provided the
// actor's role matches a reader or the owner.
inline std::optional<InfrastructureState> step_get(
    const InfrastructureState& state, const ActorResolver& resolver,
    const Identity& who, const Location& from, const LabeledDatum& datum) {
  auto at = location_of(state.graph, who);
  if (!at) return std::nullopt;
  if (!enables(state, resolver, from, who, Action::get)) return std::nullopt;
  if (!store_at(state.graph, from).count(datum)) return std::nullopt;
  bool readable = actor_eq(resolver, who, datum.label.owner);
  for (auto it = datum.label.readers.begin();
       !readable && it != datum.label.readers.end(); ++it)
    readable = actor_eq(resolver, who, *it);
  if (!readable) return std::nullopt;
  InfrastructureState next = state;
  next.graph.stores[*at].insert(datum);
  return next;
}

// move: an actor walks one (undirected) edge to a destination whose policy
// enables move. Self-moves generate no successor.
inline std::optional<InfrastructureState> step_move(
    const InfrastructureState& state, const ActorResolver& resolver,
    const Identity& who, const Location& to) {
  auto from = location_of(state.graph, who);
  if (!from || *from == to) return std::nullopt;
  if (!state.graph.placement.count(to)) return std::nullopt;
  if (!has_edge(state.graph, *from, to)) return std::nullopt;
  if (!enables(state, resolver, to, who, Action::move)) return std::nullopt;
  InfrastructureState next = state;
  next.graph.placement[*from].erase(who);
  next.graph.placement[to].insert(who);
  return next;
}

// All states reachable by one rule application, deduplicated, excluding
// states structurally equal to the input.
inline std::set<InfrastructureState> successors(
    const InfrastructureState& state,
    const std::vector<InsiderDeclaration>& insiders,
    const std::vector<PostableItem>& postables) {
  ActorResolver resolver = build_resolver(state, insiders);
  std::set<InfrastructureState> result;
  auto keep = [&](std::optional<InfrastructureState>&& next) {
    if (next && *next != state) result.insert(std::move(*next));
  };

  for (const auto& [who, disposition] : state.graph.dispositions)
    for (const auto& [to, occupants] : state.graph.placement)
      keep(step_move(state, resolver, who, to));

  for (const auto& item : postables) keep(step_put(state, resolver, item));

  for (const auto& [who, disposition] : state.graph.dispositions)
    for (const auto& [from, store] : state.graph.stores)
      for (const auto& datum : store)
        keep(step_get(state, resolver, who, from, datum));

  return result;
}

}  // namespace inframc
