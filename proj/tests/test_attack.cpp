#include <catch2/catch_amalgamated.hpp>

#include <variant>

#include "inframc/attack.hpp"
#include "support/scenarios.hpp"

using namespace inframc;
using namespace inframc::test;

namespace {

struct Explored {
  Model model;
  KripkeModel kripke;
  explicit Explored(Model m)
      : model(std::move(m)),
        kripke(explore(model.initial, model.insiders, model.postables)) {}
};

AttackTree sn_and_attack() {
  StateQuery isn = StateQuery::initial_state();
  return AttackTree::and_attack(
      {AttackTree::base(isn, q_sn_mid()),
       AttackTree::base(q_sn_mid(), q_ssn())},
      isn, q_ssn());
}

}  // namespace

TEST_CASE("the scenario and-attack is accepted") {
  Explored sn(sn_model());
  AttackCheck check = check_attack_tree(sn.kripke, sn_and_attack());
  CHECK(check.valid);
  CHECK(check.reason.empty());
}

TEST_CASE("a base attack on a satisfiable query is valid reflexively") {
  Explored sn(sn_model());
  CHECK(is_attack_tree(sn.kripke, AttackTree::base(q_ssn(), q_ssn())));
  CHECK(is_attack_tree(
      sn.kripke, AttackTree::base(q_diary_posted(), q_diary_posted())));
}

TEST_CASE("a base attack with unsatisfiable precondition is invalid") {
  Explored sn(sn_model());
  StateQuery impossible =
      StateQuery::actor_at(Identity{"Alice"}, Location{"bphone"});
  AttackCheck check = check_attack_tree(
      sn.kripke, AttackTree::base(impossible, q_ssn()));
  CHECK_FALSE(check.valid);
  CHECK(check.reason.find("unsatisfiable") != std::string::npos);
}

TEST_CASE("the diary attack is refused once Alice is aware") {
  Explored aware(sn_model(PsyState::suspicious));
  AttackCheck check = check_attack_tree(
      aware.kripke,
      AttackTree::base(StateQuery::initial_state(), q_diary_posted()));
  CHECK_FALSE(check.valid);
  CHECK(check.reason.find("cannot reach") != std::string::npos);
}

TEST_CASE("validity is refused on truncated models") {
  Model model = sn_model();
  ExploreLimits limits;
  limits.max_states = 2;
  KripkeModel truncated =
      explore(model.initial, model.insiders, model.postables, limits);
  AttackCheck check = check_attack_tree(
      truncated, AttackTree::base(q_ssn(), q_ssn()));
  CHECK_FALSE(check.valid);
  CHECK(check.reason.find("truncated") != std::string::npos);
}

TEST_CASE("failing and-attack clauses are named") {
  Explored sn(sn_model());
  // chaining breaks: the diary does not imply Alice still at instagram
  AttackTree broken = AttackTree::and_attack(
      {AttackTree::base(StateQuery::initial_state(), q_diary_posted()),
       AttackTree::base(q_sn_mid(), q_ssn())},
      StateQuery::initial_state(), q_ssn());
  AttackCheck check = check_attack_tree(sn.kripke, broken);
  CHECK_FALSE(check.valid);
  CHECK(check.reason.find("postcondition of child 0") != std::string::npos);
}

TEST_CASE("or-attacks require covered preconditions and implied posts") {
  Explored sn(sn_model());
  StateQuery isn = StateQuery::initial_state();

  AttackTree good = AttackTree::or_attack(
      {AttackTree::base(isn, q_diary_posted())}, isn, q_diary_posted());
  CHECK(is_attack_tree(sn.kripke, good));

  // the child's pre does not cover the or-attack's pre
  AttackTree uncovered = AttackTree::or_attack(
      {AttackTree::base(q_sn_mid(), q_diary_posted())}, isn,
      q_diary_posted());
  AttackCheck check = check_attack_tree(sn.kripke, uncovered);
  CHECK_FALSE(check.valid);
  CHECK(check.reason.find("covered") != std::string::npos);
}

TEST_CASE("single-child or and and attacks agree") {
  Explored sn(sn_model());
  std::vector<std::pair<StateQuery, StateQuery>> pairs{
      {StateQuery::initial_state(), q_diary_posted()},
      {q_sn_mid(), q_ssn()},
      {q_diary_posted(), q_sn_mid()},
      {StateQuery::actor_at(Identity{"Alice"}, Location{"bphone"}), q_ssn()},
  };
  for (const auto& [pre, post] : pairs) {
    AttackTree child = AttackTree::base(pre, post);
    bool as_and =
        is_attack_tree(sn.kripke, AttackTree::and_attack({child}, pre, post));
    bool as_or =
        is_attack_tree(sn.kripke, AttackTree::or_attack({child}, pre, post));
    CHECK(as_and == as_or);
  }
}

TEST_CASE("a valid and-attack survives child replacement with equal pre/post") {
  Explored sn(sn_model());
  AttackTree original = sn_and_attack();
  REQUIRE(is_attack_tree(sn.kripke, original));

  const auto& children =
      std::get<AttackTree::AndAttack>(original.node()).children;
  for (std::size_t i = 0; i < children.size(); ++i) {
    std::vector<AttackTree> replaced = children;
    // wrap the child: same pre/post, different shape, still valid
    replaced[i] = AttackTree::or_attack({children[i]}, children[i].pre(),
                                        children[i].post());
    REQUIRE(is_attack_tree(sn.kripke, replaced[i]));
    AttackTree modified = AttackTree::and_attack(
        std::move(replaced), original.pre(), original.post());
    CHECK(is_attack_tree(sn.kripke, modified));
  }
}

TEST_CASE("composite nodes need children") {
  CHECK_THROWS_AS(
      AttackTree::and_attack({}, StateQuery::initial_state(),
                             StateQuery::initial_state()),
      std::invalid_argument);
  CHECK_THROWS_AS(
      AttackTree::or_attack({}, StateQuery::initial_state(),
                            StateQuery::initial_state()),
      std::invalid_argument);
}

TEST_CASE("attack validity implies EF reachability") {
  Explored sn(sn_model());
  CHECK(attack_implies_ef(sn.kripke, sn_and_attack()));
  // invalid trees satisfy the implication vacuously
  AttackTree invalid = AttackTree::base(
      StateQuery::actor_at(Identity{"Alice"}, Location{"bphone"}), q_ssn());
  REQUIRE_FALSE(is_attack_tree(sn.kripke, invalid));
  CHECK(attack_implies_ef(sn.kripke, invalid));
}

TEST_CASE("witness synthesis folds EF answers into valid attacks") {
  Explored sn(sn_model());

  SECTION("multi-step witness becomes an and-attack of base steps") {
    auto attack = synthesize_base_attack(sn.kripke, q_diary_posted());
    REQUIRE(attack.has_value());
    const auto* node = std::get_if<AttackTree::AndAttack>(&attack->node());
    REQUIRE(node != nullptr);
    // witness has 3 states, so 2 base steps
    CHECK(node->children.size() == 2);
    CHECK(is_attack_tree(sn.kripke, *attack));
    CHECK(attack->post() == q_diary_posted());
  }

  SECTION("one-state witness becomes a single base attack") {
    auto attack = synthesize_base_attack(sn.kripke, q_ssn());
    REQUIRE(attack.has_value());
    CHECK(std::holds_alternative<AttackTree::Base>(attack->node()));
    CHECK(attack->pre() == StateQuery::initial_state());
    CHECK(is_attack_tree(sn.kripke, *attack));
  }

  SECTION("the initial-state query synthesizes the trivial base attack") {
    auto attack =
        synthesize_base_attack(sn.kripke, StateQuery::initial_state());
    REQUIRE(attack.has_value());
    CHECK(std::holds_alternative<AttackTree::Base>(attack->node()));
    CHECK(attack->pre() == StateQuery::initial_state());
    CHECK(attack->post() == StateQuery::initial_state());
    CHECK(is_attack_tree(sn.kripke, *attack));
  }

  SECTION("unsatisfiable queries synthesize nothing") {
    CHECK_FALSE(synthesize_base_attack(
                    sn.kripke, StateQuery::actor_at(Identity{"Alice"},
                                                    Location{"bphone"}))
                    .has_value());
  }

  SECTION("nothing is synthesized under the awareness intervention") {
    Explored aware(sn_model(PsyState::suspicious));
    CHECK_FALSE(
        synthesize_base_attack(aware.kripke, q_diary_posted()).has_value());
  }
}
