#pragma once

// Explicit-state exploration of the reachable infrastructure states into a
// Kripke model, and EF reachability checking with witness traces.

#include <algorithm>
#include <cstddef>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "inframc/query.hpp"
#include "inframc/semantics.hpp"
#include "inframc/state.hpp"

namespace inframc {

struct ExploreLimits {
  std::size_t max_states = 100000;
  std::size_t max_depth = std::numeric_limits<std::size_t>::max();
};

struct KripkeModel {
  // States in BFS discovery order; index 0 is the initial state.
  std::vector<InfrastructureState> states;
  // Sorted successor indices per state.
  std::vector<std::vector<std::size_t>> transitions;
  std::vector<std::size_t> init;
  // Set when a limit cut off the fixpoint; negative verdicts on a truncated
  // model are not sound.
  bool truncated = false;

  // Scenario context carried along so queries and witness checks can
  // rebuild per-state resolvers and transitions.
  std::vector<InsiderDeclaration> insiders;
  std::vector<PostableItem> postables;

  std::map<InfrastructureState, std::size_t> index;

  std::optional<std::size_t> index_of(const InfrastructureState& s) const {
    auto it = index.find(s);
    if (it == index.end()) return std::nullopt;
    return it->second;
  }

  bool is_initial(const InfrastructureState& s) const {
    for (std::size_t i : init)
      if (states[i] == s) return true;
    return false;
  }
};

// BFS fixpoint of the transition relation from the initial state. Every
// stored state is fully expanded; a successor is dropped (and the model
// marked truncated) only when adding it would exceed a limit.
inline KripkeModel explore(const InfrastructureState& initial,
                           const std::vector<InsiderDeclaration>& insiders,
                           const std::vector<PostableItem>& postables,
                           ExploreLimits limits = {}) {
  if (limits.max_states == 0 || limits.max_depth == 0)
    throw std::invalid_argument("explore limits must be positive");

  KripkeModel model;
  model.insiders = insiders;
  model.postables = postables;
  model.states.push_back(initial);
  model.transitions.emplace_back();
  model.index.emplace(initial, 0);
  model.init.push_back(0);

  std::vector<std::size_t> depth{0};
  std::deque<std::size_t> queue{0};
  while (!queue.empty()) {
    std::size_t current = queue.front();
    queue.pop_front();
    for (const auto& next :
         successors(model.states[current], insiders, postables)) {
      if (auto known = model.index_of(next)) {
        model.transitions[current].push_back(*known);
        continue;
      }
      if (depth[current] + 1 > limits.max_depth ||
          model.states.size() >= limits.max_states) {
        model.truncated = true;
        continue;
      }
      std::size_t fresh = model.states.size();
      model.states.push_back(next);
      model.transitions.emplace_back();
      model.index.emplace(next, fresh);
      depth.push_back(depth[current] + 1);
      model.transitions[current].push_back(fresh);
      queue.push_back(fresh);
    }
  }
  for (auto& edges : model.transitions) std::sort(edges.begin(), edges.end());
  return model;
}

inline bool eval_query(const KripkeModel& model, const StateQuery& query,
                       const InfrastructureState& state) {
  const auto& n = query.node();
  if (const auto* v = std::get_if<StateQuery::PolicyViolatedBy>(&n)) {
    ActorResolver resolver = build_resolver(state, model.insiders);
    return !global_policy_holds(state, resolver, v->actor, v->friends,
                                v->cloud);
  }
  if (const auto* at = std::get_if<StateQuery::ActorAt>(&n)) {
    auto it = state.graph.placement.find(at->location);
    return it != state.graph.placement.end() && it->second.count(at->actor);
  }
  if (const auto* d = std::get_if<StateQuery::DataAt>(&n)) {
    for (const auto& datum : store_at(state.graph, d->location))
      if (datum.label.owner == d->owner && datum.content == d->content)
        return true;
    return false;
  }
  if (std::holds_alternative<StateQuery::InitialState>(n))
    return model.is_initial(state);
  if (const auto* no = std::get_if<StateQuery::Not>(&n))
    return !eval_query(model, *no->child, state);
  if (const auto* an = std::get_if<StateQuery::And>(&n))
    return eval_query(model, *an->lhs, state) &&
           eval_query(model, *an->rhs, state);
  const auto& o = std::get<StateQuery::Or>(n);
  return eval_query(model, *o.lhs, state) || eval_query(model, *o.rhs, state);
}

struct Verdict {
  bool holds = false;
  // Only meaningful when holds is false: the model was truncated, so the
  // negative answer may be an artifact of the missing states.
  bool inconclusive = false;
  std::optional<std::vector<InfrastructureState>> witness;
};

namespace detail {

// Indices of states satisfying the query.
inline std::vector<bool> satisfying_states(const KripkeModel& model,
                                           const StateQuery& query) {
  std::vector<bool> sat(model.states.size(), false);
  for (std::size_t i = 0; i < model.states.size(); ++i)
    sat[i] = eval_query(model, query, model.states[i]);
  return sat;
}

// States that can reach (in >= 0 steps) a state marked in `target`.
inline std::vector<bool> can_reach(const KripkeModel& model,
                                   const std::vector<bool>& target) {
  std::vector<std::vector<std::size_t>> reverse(model.states.size());
  for (std::size_t from = 0; from < model.transitions.size(); ++from)
    for (std::size_t to : model.transitions[from]) reverse[to].push_back(from);
  std::vector<bool> reach = target;
  std::deque<std::size_t> queue;
  for (std::size_t i = 0; i < reach.size(); ++i)
    if (reach[i]) queue.push_back(i);
  while (!queue.empty()) {
    std::size_t current = queue.front();
    queue.pop_front();
    for (std::size_t prev : reverse[current])
      if (!reach[prev]) {
        reach[prev] = true;
        queue.push_back(prev);
      }
  }
  return reach;
}

}  // namespace detail

// EF query: every initial state must be able to reach a satisfying state.
// On success the witness is a shortest trace from an initial state to a
// satisfying state, with ties broken by canonical state order.
inline Verdict check_ef(const KripkeModel& model, const StateQuery& query) {
  Verdict verdict;
  std::vector<bool> sat = detail::satisfying_states(model, query);
  std::vector<bool> reach = detail::can_reach(model, sat);
  verdict.holds = true;
  for (std::size_t i : model.init)
    if (!reach[i]) verdict.holds = false;
  if (!verdict.holds) {
    verdict.inconclusive = model.truncated;
    return verdict;
  }

  // Forward multi-source BFS for the shortest witness.
  constexpr std::size_t unseen = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> dist(model.states.size(), unseen);
  std::vector<std::size_t> parent(model.states.size(), unseen);
  std::deque<std::size_t> queue;
  for (std::size_t i : model.init) {
    dist[i] = 0;
    queue.push_back(i);
  }
  while (!queue.empty()) {
    std::size_t current = queue.front();
    queue.pop_front();
    for (std::size_t next : model.transitions[current])
      if (dist[next] == unseen) {
        dist[next] = dist[current] + 1;
        parent[next] = current;
        queue.push_back(next);
      }
  }
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < model.states.size(); ++i) {
    if (!sat[i] || dist[i] == unseen) continue;
    if (!best || dist[i] < dist[*best] ||
        (dist[i] == dist[*best] && model.states[i] < model.states[*best]))
      best = i;
  }
  if (!best) return verdict;  // vacuously holds on an empty init set
  std::vector<InfrastructureState> trace;
  for (std::size_t i = *best;; i = parent[i]) {
    trace.push_back(model.states[i]);
    if (dist[i] == 0) break;
  }
  verdict.witness.emplace(trace.rbegin(), trace.rend());
  return verdict;
}

}  // namespace inframc
