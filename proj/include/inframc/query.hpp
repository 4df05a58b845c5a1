#pragma once

// A small declarative predicate language over infrastructure states. Named
// queries stand in for state sets: the invalidated global policy, actor
// placement, data presence, and the initial-state set.

#include <memory>
#include <set>
#include <string>
#include <utility>
#include <variant>

#include "inframc/core.hpp"

namespace inframc {

class StateQuery {
 public:
  struct PolicyViolatedBy {
    Identity actor;
    std::set<Identity> friends;
    Location cloud;
  };
  struct ActorAt {
    Identity actor;
    Location location;
  };
  struct DataAt {
    Location location;
    Identity owner;
    std::string content;
  };
  struct InitialState {};
  struct Not {
    std::shared_ptr<const StateQuery> child;
  };
  struct And {
    std::shared_ptr<const StateQuery> lhs;
    std::shared_ptr<const StateQuery> rhs;
  };
  struct Or {
    std::shared_ptr<const StateQuery> lhs;
    std::shared_ptr<const StateQuery> rhs;
  };

  using Node =
      std::variant<PolicyViolatedBy, ActorAt, DataAt, InitialState, Not, And,
                   Or>;

  StateQuery() : node_(InitialState{}) {}
  explicit StateQuery(Node node) : node_(std::move(node)) {}

  static StateQuery policy_violated_by(Identity actor,
                                       std::set<Identity> friends,
                                       Location cloud) {
    return StateQuery{PolicyViolatedBy{std::move(actor), std::move(friends),
                                       std::move(cloud)}};
  }
  static StateQuery actor_at(Identity actor, Location location) {
    return StateQuery{ActorAt{std::move(actor), std::move(location)}};
  }
  static StateQuery data_at(Location location, Identity owner,
                            std::string content) {
    return StateQuery{
        DataAt{std::move(location), std::move(owner), std::move(content)}};
  }
  static StateQuery initial_state() { return StateQuery{InitialState{}}; }
  static StateQuery negate(StateQuery q) {
    return StateQuery{Not{std::make_shared<const StateQuery>(std::move(q))}};
  }
  static StateQuery conj(StateQuery a, StateQuery b) {
    return StateQuery{And{std::make_shared<const StateQuery>(std::move(a)),
                          std::make_shared<const StateQuery>(std::move(b))}};
  }
  static StateQuery disj(StateQuery a, StateQuery b) {
    return StateQuery{Or{std::make_shared<const StateQuery>(std::move(a)),
                         std::make_shared<const StateQuery>(std::move(b))}};
  }

  const Node& node() const { return node_; }

 private:
  Node node_;
};

inline int compare(const StateQuery& a, const StateQuery& b) {
  const auto& na = a.node();
  const auto& nb = b.node();
  if (na.index() != nb.index()) return na.index() < nb.index() ? -1 : 1;
  auto cmp3 = [](const auto& x, const auto& y) {
    auto c = x <=> y;
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
  };
  switch (na.index()) {
    case 0: {
      const auto& x = std::get<StateQuery::PolicyViolatedBy>(na);
      const auto& y = std::get<StateQuery::PolicyViolatedBy>(nb);
      if (int c = cmp3(x.actor, y.actor); c != 0) return c;
      if (int c = cmp3(x.friends, y.friends); c != 0) return c;
      return cmp3(x.cloud, y.cloud);
    }
    case 1: {
      const auto& x = std::get<StateQuery::ActorAt>(na);
      const auto& y = std::get<StateQuery::ActorAt>(nb);
      if (int c = cmp3(x.actor, y.actor); c != 0) return c;
      return cmp3(x.location, y.location);
    }
    case 2: {
      const auto& x = std::get<StateQuery::DataAt>(na);
      const auto& y = std::get<StateQuery::DataAt>(nb);
      if (int c = cmp3(x.location, y.location); c != 0) return c;
      if (int c = cmp3(x.owner, y.owner); c != 0) return c;
      return cmp3(x.content, y.content);
    }
    case 3:
      return 0;
    case 4:
      return compare(*std::get<StateQuery::Not>(na).child,
                     *std::get<StateQuery::Not>(nb).child);
    case 5: {
      const auto& x = std::get<StateQuery::And>(na);
      const auto& y = std::get<StateQuery::And>(nb);
      if (int c = compare(*x.lhs, *y.lhs); c != 0) return c;
      return compare(*x.rhs, *y.rhs);
    }
    case 6: {
      const auto& x = std::get<StateQuery::Or>(na);
      const auto& y = std::get<StateQuery::Or>(nb);
      if (int c = compare(*x.lhs, *y.lhs); c != 0) return c;
      return compare(*x.rhs, *y.rhs);
    }
  }
  return 0;
}

inline bool operator==(const StateQuery& a, const StateQuery& b) {
  return compare(a, b) == 0;
}
inline bool operator<(const StateQuery& a, const StateQuery& b) {
  return compare(a, b) < 0;
}

}  // namespace inframc
