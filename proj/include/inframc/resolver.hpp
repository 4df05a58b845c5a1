#pragma once

// Actor role resolution. By default the identity-to-role map is injective:
// every identity forms its own singleton class. A fired insider declaration
// identifies the subject's role with each alter's role, merging their
// classes, and leaves the map injective everywhere else.

#include <map>
#include <set>
#include <vector>

#include "inframc/core.hpp"
#include "inframc/state.hpp"

namespace inframc {

class ActorResolver {
 public:
  ActorResolver() = default;

  static ActorResolver discrete(const std::vector<Identity>& identities) {
    ActorResolver r;
    for (const auto& id : identities) r.rep_.emplace(id, id);
    return r;
  }

  // Representative of an identity's role class: the lexicographically least
  // member. Unknown identities resolve to themselves.
  const Identity& representative(const Identity& who) const {
    auto it = rep_.find(who);
    return it == rep_.end() ? who : it->second;
  }

  bool same_actor(const Identity& a, const Identity& b) const {
    return representative(a) == representative(b);
  }

  void merge(const Identity& a, const Identity& b) {
    rep_.try_emplace(a, a);
    rep_.try_emplace(b, b);
    Identity ra = representative(a);
    Identity rb = representative(b);
    if (ra == rb) return;
    const Identity& keep = ra < rb ? ra : rb;
    const Identity& drop = ra < rb ? rb : ra;
    for (auto& [id, rep] : rep_)
      if (rep == drop) rep = keep;
  }

  // Partition view, each class sorted, classes ordered by representative.
  std::vector<std::vector<Identity>> classes() const {
    std::map<Identity, std::vector<Identity>> by_rep;
    for (const auto& [id, rep] : rep_) by_rep[rep].push_back(id);
    std::vector<std::vector<Identity>> out;
    out.reserve(by_rep.size());
    for (auto& [rep, members] : by_rep) out.push_back(std::move(members));
    return out;
  }

 private:
  std::map<Identity, Identity> rep_;
};

// An insider declaration fires when the subject's disposition satisfies the
// tipping point or the unawareness predicate; the subject is then merged
// with every declared alter.
inline ActorResolver build_resolver(
    const InfrastructureState& state,
    const std::vector<InsiderDeclaration>& declarations) {
  std::vector<Identity> identities;
  identities.reserve(state.graph.dispositions.size());
  for (const auto& [id, disposition] : state.graph.dispositions)
    identities.push_back(id);
  ActorResolver resolver = ActorResolver::discrete(identities);
  for (const auto& declaration : declarations) {
    const ActorState* disposition =
        disposition_of(state.graph, declaration.subject);
    if (!disposition) continue;
    if (tipping_point(*disposition) || unaware(*disposition))
      for (const auto& alter : declaration.alters)
        resolver.merge(declaration.subject, alter);
  }
  return resolver;
}

inline bool actor_eq(const ActorResolver& resolver, const Identity& a,
                     const Identity& b) {
  return resolver.same_actor(a, b);
}

}  // namespace inframc
