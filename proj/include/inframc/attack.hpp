#pragma once

// Attack trees over state queries and their validity calculus. A base
// attack (pre, post) claims that every reachable state satisfying pre can
// reach a state satisfying post; and/or nodes compose attacks sequentially
// and alternatively. A valid attack implies the corresponding EF statement,
// and conversely an EF witness can be folded back into a valid attack.

#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "inframc/kripke.hpp"
#include "inframc/query.hpp"

namespace inframc {

class AttackTree {
 public:
  struct Base {};
  struct AndAttack {
    std::vector<AttackTree> children;
  };
  struct OrAttack {
    std::vector<AttackTree> children;
  };
  using Node = std::variant<Base, AndAttack, OrAttack>;

  static AttackTree base(StateQuery pre, StateQuery post) {
    return AttackTree{std::move(pre), std::move(post), Base{}};
  }
  static AttackTree and_attack(std::vector<AttackTree> children,
                               StateQuery pre, StateQuery post) {
    if (children.empty())
      throw std::invalid_argument("and-attack requires at least one child");
    return AttackTree{std::move(pre), std::move(post),
                      AndAttack{std::move(children)}};
  }
  static AttackTree or_attack(std::vector<AttackTree> children, StateQuery pre,
                              StateQuery post) {
    if (children.empty())
      throw std::invalid_argument("or-attack requires at least one child");
    return AttackTree{std::move(pre), std::move(post),
                      OrAttack{std::move(children)}};
  }

  const StateQuery& pre() const { return pre_; }
  const StateQuery& post() const { return post_; }
  const Node& node() const { return node_; }

 private:
  AttackTree(StateQuery pre, StateQuery post, Node node)
      : pre_(std::move(pre)), post_(std::move(post)), node_(std::move(node)) {}

  StateQuery pre_;
  StateQuery post_;
  Node node_;
};

inline int compare(const AttackTree& a, const AttackTree& b) {
  if (int c = compare(a.pre(), b.pre()); c != 0) return c;
  if (int c = compare(a.post(), b.post()); c != 0) return c;
  const auto& na = a.node();
  const auto& nb = b.node();
  if (na.index() != nb.index()) return na.index() < nb.index() ? -1 : 1;
  auto compare_children = [](const std::vector<AttackTree>& x,
                             const std::vector<AttackTree>& y) {
    if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (int c = compare(x[i], y[i]); c != 0) return c;
    return 0;
  };
  if (const auto* an = std::get_if<AttackTree::AndAttack>(&na))
    return compare_children(an->children,
                            std::get<AttackTree::AndAttack>(nb).children);
  if (const auto* o = std::get_if<AttackTree::OrAttack>(&na))
    return compare_children(o->children,
                            std::get<AttackTree::OrAttack>(nb).children);
  return 0;
}

inline bool operator==(const AttackTree& a, const AttackTree& b) {
  return compare(a, b) == 0;
}

struct AttackCheck {
  bool valid = false;
  // Names the first failing clause when invalid.
  std::string reason;
};

namespace detail {

// q1 implies q2 on every explored state.
inline bool pointwise_implies(const KripkeModel& model, const StateQuery& q1,
                              const StateQuery& q2) {
  for (const auto& state : model.states)
    if (eval_query(model, q1, state) && !eval_query(model, q2, state))
      return false;
  return true;
}

inline AttackCheck check_attack_node(const KripkeModel& model,
                                     const AttackTree& tree,
                                     const std::string& path) {
  if (std::holds_alternative<AttackTree::Base>(tree.node())) {
    std::vector<bool> pre_sat = satisfying_states(model, tree.pre());
    bool any = false;
    for (bool b : pre_sat) any = any || b;
    if (!any)
      return {false, path + ": base attack precondition is unsatisfiable"};
    std::vector<bool> post_sat = satisfying_states(model, tree.post());
    std::vector<bool> reach = can_reach(model, post_sat);
    for (std::size_t i = 0; i < pre_sat.size(); ++i)
      if (pre_sat[i] && !reach[i])
        return {false, path + ": state #" + std::to_string(i) +
                           " satisfies the precondition but cannot reach the "
                           "postcondition"};
    return {true, {}};
  }

  if (const auto* an = std::get_if<AttackTree::AndAttack>(&tree.node())) {
    const auto& children = an->children;
    for (std::size_t i = 0; i < children.size(); ++i) {
      AttackCheck child = check_attack_node(
          model, children[i], path + ".and[" + std::to_string(i) + "]");
      if (!child.valid) return child;
    }
    if (!pointwise_implies(model, tree.pre(), children.front().pre()))
      return {false,
              path + ": precondition does not imply the first child's "
                     "precondition"};
    for (std::size_t i = 0; i + 1 < children.size(); ++i)
      if (!pointwise_implies(model, children[i].post(), children[i + 1].pre()))
        return {false, path + ": postcondition of child " + std::to_string(i) +
                           " does not imply precondition of child " +
                           std::to_string(i + 1)};
    if (!pointwise_implies(model, children.back().post(), tree.post()))
      return {false,
              path + ": last child's postcondition does not imply the "
                     "postcondition"};
    return {true, {}};
  }

  const auto& children = std::get<AttackTree::OrAttack>(tree.node()).children;
  for (std::size_t i = 0; i < children.size(); ++i) {
    AttackCheck child = check_attack_node(
        model, children[i], path + ".or[" + std::to_string(i) + "]");
    if (!child.valid) return child;
  }
  // pre must imply the disjunction of the children's preconditions.
  for (const auto& state : model.states) {
    if (!eval_query(model, tree.pre(), state)) continue;
    bool covered = false;
    for (const auto& child : children)
      covered = covered || eval_query(model, child.pre(), state);
    if (!covered)
      return {false,
              path + ": precondition is not covered by the children's "
                     "preconditions"};
  }
  for (std::size_t i = 0; i < children.size(); ++i)
    if (!pointwise_implies(model, children[i].post(), tree.post()))
      return {false, path + ": postcondition of child " + std::to_string(i) +
                         " does not imply the postcondition"};
  return {true, {}};
}

}  // namespace detail

// Validity of an attack tree on a completely explored model. Truncated
// models are refused outright: a missing transition could falsify any
// universal reachability clause.
inline AttackCheck check_attack_tree(const KripkeModel& model,
                                     const AttackTree& tree) {
  if (model.truncated)
    return {false,
            "model was truncated during exploration; attack validity cannot "
            "be decided"};
  return detail::check_attack_node(model, tree, "root");
}

inline bool is_attack_tree(const KripkeModel& model, const AttackTree& tree) {
  return check_attack_tree(model, tree).valid;
}

// Executable form of the correctness theorem bridging attack validity and
// EF reachability: a valid attack whose precondition covers the initial
// states forces the EF statement for its postcondition. Expected to return
// true for every model and tree.
inline bool attack_implies_ef(const KripkeModel& model,
                              const AttackTree& tree) {
  if (!is_attack_tree(model, tree)) return true;
  for (std::size_t i : model.init)
    if (!eval_query(model, tree.pre(), model.states[i])) return true;
  return check_ef(model, tree.post()).holds;
}

namespace detail {

// A conjunction of placement and data atoms that pins a single explored
// state: every identity's location, plus presence or absence of every datum
// the model ever stores anywhere. Distinct data items that collide on
// (location, owner, content) cannot be told apart by queries; model files
// with unique postable contents are unambiguous.
inline StateQuery exact_state_query(const KripkeModel& model,
                                    const InfrastructureState& state) {
  std::optional<StateQuery> query;
  auto add = [&](StateQuery q) {
    query = query ? StateQuery::conj(std::move(*query), std::move(q))
                  : std::move(q);
  };
  for (const auto& [who, disposition] : state.graph.dispositions) {
    auto location = location_of(state.graph, who);
    if (location) add(StateQuery::actor_at(who, *location));
  }
  std::map<Location, std::set<std::pair<Identity, std::string>>> universe;
  for (const auto& s : model.states)
    for (const auto& [location, store] : s.graph.stores)
      for (const auto& datum : store)
        universe[location].insert({datum.label.owner, datum.content});
  for (const auto& [location, data] : universe) {
    for (const auto& [owner, content] : data) {
      bool present = false;
      for (const auto& datum : store_at(state.graph, location))
        present = present ||
                  (datum.label.owner == owner && datum.content == content);
      StateQuery atom = StateQuery::data_at(location, owner, content);
      add(present ? std::move(atom) : StateQuery::negate(std::move(atom)));
    }
  }
  return query ? *query : StateQuery::initial_state();
}

}  // namespace detail

// Folds an EF witness back into an attack tree: one base attack per
// transition of the witness, chained by exact-state queries. Returns
// nothing when the EF query does not hold.
inline std::optional<AttackTree> synthesize_base_attack(
    const KripkeModel& model, const StateQuery& query) {
  Verdict verdict = check_ef(model, query);
  if (!verdict.holds || !verdict.witness) return std::nullopt;
  const auto& witness = *verdict.witness;
  if (witness.size() <= 1)
    return AttackTree::base(StateQuery::initial_state(), query);
  std::vector<StateQuery> pins;
  pins.reserve(witness.size());
  for (const auto& state : witness)
    pins.push_back(detail::exact_state_query(model, state));
  std::vector<AttackTree> steps;
  for (std::size_t i = 0; i + 1 < witness.size(); ++i)
    steps.push_back(AttackTree::base(pins[i], pins[i + 1]));
  return AttackTree::and_attack(std::move(steps), pins.front(), query);
}

}  // namespace inframc
