#include <catch2/catch_amalgamated.hpp>

#include "inframc/semantics.hpp"
#include "support/scenarios.hpp"

using namespace inframc;
using namespace inframc::test;

namespace {

struct SnFixture {
  Model model = sn_model();
  ActorResolver merged = build_resolver(model.initial, model.insiders);
  ActorResolver discrete = build_resolver(model.initial, {});
};

}  // namespace

TEST_CASE("condition evaluation") {
  SnFixture sn;
  const auto& initial = sn.model.initial;
  PolicyCondition has_apin = PolicyCondition::has_credential("aPIN");
  CHECK(eval_condition(initial, sn.discrete, has_apin, Identity{"Alice"}));
  CHECK_FALSE(eval_condition(initial, sn.discrete, has_apin, Identity{"Bob"}));
  // credentials are per identity; role merging does not leak them
  CHECK_FALSE(eval_condition(initial, sn.merged, has_apin, Identity{"Eve"}));

  PolicyCondition members =
      PolicyCondition::actor_in({Identity{"Alice"}, Identity{"Bob"}});
  CHECK_FALSE(eval_condition(initial, sn.discrete, members, Identity{"Eve"}));
  CHECK(eval_condition(initial, sn.merged, members, Identity{"Eve"}));

  CHECK(eval_condition(initial, sn.discrete,
                       PolicyCondition::always_true(), Identity{"Eve"}));
  CHECK(eval_condition(
      initial, sn.discrete,
      PolicyCondition::negate(PolicyCondition::has_credential("aPIN")),
      Identity{"Bob"}));
  CHECK(eval_condition(
      initial, sn.discrete,
      PolicyCondition::disj(PolicyCondition::has_credential("aPIN"),
                            PolicyCondition::has_credential("bPIN")),
      Identity{"Bob"}));
  CHECK_FALSE(eval_condition(
      initial, sn.discrete,
      PolicyCondition::conj(PolicyCondition::has_credential("aPIN"),
                            PolicyCondition::has_credential("bPIN")),
      Identity{"Bob"}));
}

TEST_CASE("enables consults the location's policy entries") {
  SnFixture sn;
  const auto& initial = sn.model.initial;
  const Location instagram{"instagram"};
  CHECK(enables(initial, sn.discrete, instagram, Identity{"Bob"}, Action::get));
  CHECK_FALSE(
      enables(initial, sn.discrete, instagram, Identity{"Eve"}, Action::get));
  CHECK(enables(initial, sn.merged, instagram, Identity{"Eve"}, Action::get));
  // locations without policy entries enable nothing
  ModelDecl bare = sn_decl();
  bare.policies.clear();
  Model bare_model = *validate_model(bare).model;
  ActorResolver r = build_resolver(bare_model.initial, {});
  for (Action action : all_actions)
    CHECK_FALSE(
        enables(bare_model.initial, r, instagram, Identity{"Bob"}, action));
}

TEST_CASE("global policy") {
  SnFixture sn;
  const auto& initial = sn.model.initial;
  const std::set<Identity> friends{Identity{"Alice"}, Identity{"Bob"}};
  const Location cloud{"instagram"};
  // friends pass trivially
  CHECK(global_policy_holds(initial, sn.merged, Identity{"Bob"}, friends,
                            cloud));
  // outsiders are fine as long as they are not enabled to get
  CHECK(global_policy_holds(initial, sn.discrete, Identity{"Eve"}, friends,
                            cloud));
  // the fired insider declaration makes Eve enabled, violating the policy
  CHECK_FALSE(global_policy_holds(initial, sn.merged, Identity{"Eve"}, friends,
                                  cloud));
}

TEST_CASE("put rule") {
  SnFixture sn;
  const PostableItem& diary = sn.model.postables[0];

  SECTION("requires the poster at the item's location") {
    CHECK_FALSE(step_put(sn.model.initial, sn.merged, diary).has_value());
  }

  InfrastructureState at_instagram =
      *step_move(sn.model.initial, sn.merged, Identity{"Alice"},
                 Location{"instagram"});

  SECTION("unaware poster adds the datum") {
    auto next = step_put(at_instagram, sn.merged, diary);
    REQUIRE(next.has_value());
    CHECK(store_at(next->graph, Location{"instagram"}).count(sn_diary()));
    // frame: only the target store changed
    CHECK(next->graph.placement == at_instagram.graph.placement);
    CHECK(next->graph.dispositions == at_instagram.graph.dispositions);
    CHECK(next->graph.credentials == at_instagram.graph.credentials);
    CHECK(next->policy == at_instagram.policy);
    CHECK(store_at(next->graph, Location{"aphone"}).empty());
    CHECK(store_at(next->graph, Location{"bphone"}).empty());
  }

  SECTION("aware poster generates no successor") {
    Model aware = sn_model(PsyState::suspicious);
    ActorResolver r = build_resolver(aware.initial, aware.insiders);
    auto moved = step_move(aware.initial, r, Identity{"Alice"},
                           Location{"instagram"});
    REQUIRE(moved.has_value());
    CHECK_FALSE(step_put(*moved, r, aware.postables[0]).has_value());
  }

  SECTION("putting an already-present datum is a no-op successor") {
    auto once = step_put(at_instagram, sn.merged, diary);
    auto twice = step_put(*once, sn.merged, diary);
    REQUIRE(twice.has_value());
    CHECK(*twice == *once);
  }
}

TEST_CASE("get rule") {
  SnFixture sn;
  // diary already posted at instagram, Alice back home
  InfrastructureState posted =
      sn_state(sn.model, "aphone", "bphone", {"instagram"});

  SECTION("a listed reader copies the datum to its own location") {
    auto next = step_get(posted, sn.merged, Identity{"Bob"},
                         Location{"instagram"}, sn_diary());
    REQUIRE(next.has_value());
    CHECK(store_at(next->graph, Location{"bphone"}).count(sn_diary()));
    CHECK(store_at(next->graph, Location{"instagram"}).count(sn_diary()));
  }

  SECTION("the owner may get her own datum") {
    auto next = step_get(posted, sn.merged, Identity{"Alice"},
                         Location{"instagram"}, sn_diary());
    REQUIRE(next.has_value());
    CHECK(store_at(next->graph, Location{"aphone"}).count(sn_diary()));
  }

  SECTION("non-reader without a merge cannot get") {
    CHECK_FALSE(step_get(posted, sn.discrete, Identity{"Eve"},
                         Location{"instagram"}, sn_diary())
                    .has_value());
  }

  SECTION("role merge passes the owner check for the insider") {
    // Eve lives on her own phone in this variant, so the copy is visible
    Model ephone = *validate_model(sn_ephone_decl()).model;
    ActorResolver r = build_resolver(ephone.initial, ephone.insiders);
    REQUIRE(actor_eq(r, Identity{"Eve"}, Identity{"Alice"}));
    InfrastructureState staged = ephone.initial;
    staged.graph.stores[Location{"instagram"}].insert(sn_diary());
    auto next =
        step_get(staged, r, Identity{"Eve"}, Location{"instagram"}, sn_diary());
    REQUIRE(next.has_value());
    CHECK(store_at(next->graph, Location{"ephone"}).count(sn_diary()));
  }

  SECTION("absent datum cannot be got") {
    CHECK_FALSE(step_get(posted, sn.merged, Identity{"Bob"},
                         Location{"aphone"}, sn_diary())
                    .has_value());
  }

  SECTION("get requires enablement at the datum's location") {
    // diary parked at aphone; Bob lacks aPIN
    InfrastructureState at_aphone =
        sn_state(sn.model, "aphone", "bphone", {"instagram", "aphone"});
    CHECK_FALSE(step_get(at_aphone, sn.merged, Identity{"Bob"},
                         Location{"aphone"}, sn_diary())
                    .has_value());
  }
}

TEST_CASE("move rule") {
  SnFixture sn;
  SECTION("along an edge into an enabling policy") {
    auto next = step_move(sn.model.initial, sn.merged, Identity{"Alice"},
                          Location{"instagram"});
    REQUIRE(next.has_value());
    CHECK(location_of(next->graph, Identity{"Alice"}) ==
          Location{"instagram"});
    CHECK(next->graph.stores == sn.model.initial.graph.stores);
  }
  SECTION("no edge, no move") {
    CHECK_FALSE(step_move(sn.model.initial, sn.merged, Identity{"Alice"},
                          Location{"bphone"})
                    .has_value());
  }
  SECTION("destination policy can refuse the move") {
    CHECK_FALSE(step_move(sn.model.initial, sn.merged, Identity{"Eve"},
                          Location{"aphone"})
                    .has_value());
  }
  SECTION("self-moves are excluded") {
    CHECK_FALSE(step_move(sn.model.initial, sn.merged, Identity{"Alice"},
                          Location{"aphone"})
                    .has_value());
  }
  SECTION("edges work in both directions") {
    InfrastructureState there =
        sn_state(sn.model, "instagram", "bphone", {});
    auto back =
        step_move(there, sn.merged, Identity{"Alice"}, Location{"aphone"});
    REQUIRE(back.has_value());
    CHECK(*back == sn.model.initial);
  }
}

TEST_CASE("successor enumeration on the initial scenario state") {
  SnFixture sn;
  auto next = successors(sn.model.initial, sn.model.insiders,
                         sn.model.postables);
  // exactly: Alice moves to instagram, Bob moves to instagram
  std::set<InfrastructureState> expected{
      sn_state(sn.model, "instagram", "bphone", {}),
      sn_state(sn.model, "aphone", "instagram", {})};
  CHECK(next == expected);

  SECTION("deterministic") {
    CHECK(next == successors(sn.model.initial, sn.model.insiders,
                             sn.model.postables));
  }
}

TEST_CASE("states with no enabled actions have no successors") {
  ModelDecl decl = sn_decl();
  decl.policies.clear();
  decl.insiders.clear();
  Model model = *validate_model(decl).model;
  CHECK(successors(model.initial, model.insiders, model.postables).empty());
}

TEST_CASE("transition invariants on every reachable scenario transition") {
  SnFixture sn;
  // walk the full reachable set and check framing on each transition
  std::set<InfrastructureState> seen{sn.model.initial};
  std::vector<InfrastructureState> frontier{sn.model.initial};
  std::size_t transitions_checked = 0;
  while (!frontier.empty()) {
    InfrastructureState current = frontier.back();
    frontier.pop_back();
    for (const auto& next :
         successors(current, sn.model.insiders, sn.model.postables)) {
      ++transitions_checked;
      // policy and dispositions are immutable
      CHECK(next.policy == current.policy);
      CHECK(next.graph.dispositions == current.graph.dispositions);
      CHECK(next.graph.credentials == current.graph.credentials);
      CHECK(next.graph.roles == current.graph.roles);
      CHECK(next.graph.edges == current.graph.edges);
      // data is monotone: no store ever loses a datum
      for (const auto& [location, store] : current.graph.stores) {
        const auto& after = store_at(next.graph, location);
        for (const auto& datum : store) CHECK(after.count(datum));
      }
      // placement moves identities around but never loses one
      std::size_t before = 0, after = 0;
      for (const auto& [l, occupants] : current.graph.placement)
        before += occupants.size();
      for (const auto& [l, occupants] : next.graph.placement)
        after += occupants.size();
      CHECK(before == after);
      if (seen.insert(next).second) frontier.push_back(next);
    }
  }
  CHECK(seen.size() == 20);  // cross-check with the exploration tests
  CHECK(transitions_checked > 0);
}

TEST_CASE("awareness intervention: no unaware actor, no new data anywhere") {
  Model aware = sn_model(PsyState::suspicious);
  std::set<InfrastructureState> seen{aware.initial};
  std::vector<InfrastructureState> frontier{aware.initial};
  while (!frontier.empty()) {
    InfrastructureState current = frontier.back();
    frontier.pop_back();
    for (const auto& next :
         successors(current, aware.insiders, aware.postables))
      if (seen.insert(next).second) frontier.push_back(next);
  }
  for (const auto& state : seen)
    for (const auto& [location, store] : state.graph.stores)
      CHECK(store.empty());
}
