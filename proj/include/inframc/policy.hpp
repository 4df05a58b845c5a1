#pragma once

// Access policy conditions and per-location policies. A condition is a small
// closed AST rather than an arbitrary predicate so it stays decidable and
// serializable.

#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "inframc/core.hpp"

namespace inframc {

class PolicyCondition {
 public:
  struct AlwaysTrue {};
  struct HasCredential {
    std::string credential;
  };
  struct ActorIn {
    std::set<Identity> identities;
  };
  struct Not {
    std::shared_ptr<const PolicyCondition> child;
  };
  struct And {
    std::shared_ptr<const PolicyCondition> lhs;
    std::shared_ptr<const PolicyCondition> rhs;
  };
  struct Or {
    std::shared_ptr<const PolicyCondition> lhs;
    std::shared_ptr<const PolicyCondition> rhs;
  };

  using Node = std::variant<AlwaysTrue, HasCredential, ActorIn, Not, And, Or>;

  PolicyCondition() : node_(AlwaysTrue{}) {}
  explicit PolicyCondition(Node node) : node_(std::move(node)) {}

  static PolicyCondition always_true() { return PolicyCondition{AlwaysTrue{}}; }
  static PolicyCondition has_credential(std::string credential) {
    return PolicyCondition{HasCredential{std::move(credential)}};
  }
  static PolicyCondition actor_in(std::set<Identity> identities) {
    return PolicyCondition{ActorIn{std::move(identities)}};
  }
  static PolicyCondition negate(PolicyCondition c) {
    return PolicyCondition{
        Not{std::make_shared<const PolicyCondition>(std::move(c))}};
  }
  static PolicyCondition conj(PolicyCondition a, PolicyCondition b) {
    return PolicyCondition{
        And{std::make_shared<const PolicyCondition>(std::move(a)),
            std::make_shared<const PolicyCondition>(std::move(b))}};
  }
  static PolicyCondition disj(PolicyCondition a, PolicyCondition b) {
    return PolicyCondition{
        Or{std::make_shared<const PolicyCondition>(std::move(a)),
           std::make_shared<const PolicyCondition>(std::move(b))}};
  }

  const Node& node() const { return node_; }

 private:
  Node node_;
};

// Structural three-way comparison; children are compared by value, not by
// pointer, so shared subtrees do not affect ordering.
inline int compare(const PolicyCondition& a, const PolicyCondition& b) {
  const auto& na = a.node();
  const auto& nb = b.node();
  if (na.index() != nb.index()) return na.index() < nb.index() ? -1 : 1;
  auto cmp3 = [](const auto& x, const auto& y) {
    auto c = x <=> y;
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
  };
  switch (na.index()) {
    case 0:
      return 0;
    case 1:
      return cmp3(std::get<PolicyCondition::HasCredential>(na).credential,
                  std::get<PolicyCondition::HasCredential>(nb).credential);
    case 2:
      return cmp3(std::get<PolicyCondition::ActorIn>(na).identities,
                  std::get<PolicyCondition::ActorIn>(nb).identities);
    case 3:
      return compare(*std::get<PolicyCondition::Not>(na).child,
                     *std::get<PolicyCondition::Not>(nb).child);
    case 4: {
      const auto& x = std::get<PolicyCondition::And>(na);
      const auto& y = std::get<PolicyCondition::And>(nb);
      if (int c = compare(*x.lhs, *y.lhs); c != 0) return c;
      return compare(*x.rhs, *y.rhs);
    }
    case 5: {
      const auto& x = std::get<PolicyCondition::Or>(na);
      const auto& y = std::get<PolicyCondition::Or>(nb);
      if (int c = compare(*x.lhs, *y.lhs); c != 0) return c;
      return compare(*x.rhs, *y.rhs);
    }
  }
  return 0;
}

inline bool operator==(const PolicyCondition& a, const PolicyCondition& b) {
  return compare(a, b) == 0;
}
inline bool operator<(const PolicyCondition& a, const PolicyCondition& b) {
  return compare(a, b) < 0;
}

// One atomic policy: a condition guarding a set of enabled actions.
struct PolicyEntry {
  PolicyCondition condition;
  std::set<Action> actions;
};

inline int compare(const PolicyEntry& a, const PolicyEntry& b) {
  if (int c = compare(a.condition, b.condition); c != 0) return c;
  auto c = a.actions <=> b.actions;
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

inline bool operator==(const PolicyEntry& a, const PolicyEntry& b) {
  return compare(a, b) == 0;
}

// Per-location policy map. Locations without an entry map to the empty
// entry list, so every location has a policy by default.
class LocalPolicy {
 public:
  using EntryList = std::vector<PolicyEntry>;

  void set_entries(Location location, EntryList entries) {
    entries_[std::move(location)] = std::move(entries);
  }

  const EntryList& entries_at(const Location& location) const {
    static const EntryList empty;
    auto it = entries_.find(location);
    return it == entries_.end() ? empty : it->second;
  }

  const std::map<Location, EntryList>& all() const { return entries_; }

 private:
  std::map<Location, EntryList> entries_;
};

inline int compare(const LocalPolicy& a, const LocalPolicy& b) {
  auto ia = a.all().begin(), ea = a.all().end();
  auto ib = b.all().begin(), eb = b.all().end();
  for (; ia != ea && ib != eb; ++ia, ++ib) {
    if (auto c = ia->first <=> ib->first; c != 0) return c < 0 ? -1 : 1;
    if (ia->second.size() != ib->second.size())
      return ia->second.size() < ib->second.size() ? -1 : 1;
    for (std::size_t i = 0; i < ia->second.size(); ++i)
      if (int c = compare(ia->second[i], ib->second[i]); c != 0) return c;
  }
  if (ia != ea) return 1;
  if (ib != eb) return -1;
  return 0;
}

inline bool operator==(const LocalPolicy& a, const LocalPolicy& b) {
  return compare(a, b) == 0;
}

}  // namespace inframc
