#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "inframc/model_file.hpp"
#include "support/scenarios.hpp"

using namespace inframc;
using namespace inframc::test;

namespace {

bool mentions(const std::vector<Diagnostic>& diagnostics,
              const std::string& needle) {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [&](const Diagnostic& d) {
                       return to_string(d).find(needle) != std::string::npos;
                     });
}

}  // namespace

TEST_CASE("the bundled scenario file parses") {
  ParseResult parsed = parse_model(model_path("sn_scenario.model"));
  REQUIRE(parsed.ok());
  const ModelFile& file = *parsed.file;
  CHECK(file.decl.locations.size() == 3);
  CHECK(file.decl.edges.size() == 2);
  CHECK(file.decl.actors.size() == 3);
  CHECK(file.decl.insiders.size() == 1);
  CHECK(file.decl.postables.size() == 1);
  CHECK(file.friends == std::vector<std::string>{"Alice", "Bob"});
  CHECK(file.cloud == "instagram");
  CHECK(file.queries.size() == 5);
  CHECK(file.attacks.size() == 1);

  // the parsed declaration matches the in-code fixture
  ValidationResult from_file = validate_model(file.decl);
  REQUIRE(from_file.ok());
  CHECK(from_file.model->initial == sn_model().initial);
}

TEST_CASE("empty input reports the missing locations section") {
  ParseResult parsed = parse_model_text("");
  CHECK_FALSE(parsed.ok());
  CHECK(mentions(parsed.errors, "missing required section: locations"));
  CHECK(mentions(parse_model_text("   \n \t ").errors,
                 "missing required section: locations"));
  CHECK(mentions(parse_model_text("{}").errors,
                 "missing required section: locations"));
}

TEST_CASE("syntax errors carry positions") {
  ParseResult parsed = parse_model_text("{\"locations\": [}");
  CHECK_FALSE(parsed.ok());
  CHECK(mentions(parsed.errors, "column"));
}

TEST_CASE("unknown keys are rejected") {
  CHECK(mentions(
      parse_model_text(R"({"locations": [], "moods": []})").errors,
      "unknown key \"moods\""));
  CHECK(mentions(
      parse_model_text(
          R"({"locations": ["x"],
              "actors": [{"name": "A", "location": "x", "hobby": "chess"}]})")
          .errors,
      "unknown key \"hobby\""));
}

TEST_CASE("duplicate declarations are rejected downstream of parsing") {
  ParseResult parsed = parse_model_text(
      R"({"locations": ["x", "x"], "actors": []})");
  REQUIRE(parsed.ok());
  CompileResult compiled = compile_model(*parsed.file);
  CHECK_FALSE(compiled.ok());
  CHECK(mentions(compiled.errors, "duplicate location"));
}

TEST_CASE("condition text parsing") {
  CHECK(parse_condition("has(\"aPIN\")") ==
        PolicyCondition::has_credential("aPIN"));
  CHECK(parse_condition("true") == PolicyCondition::always_true());
  CHECK(parse_condition("actor_in(\"Alice\", \"Bob\")") ==
        PolicyCondition::actor_in({Identity{"Alice"}, Identity{"Bob"}}));
  CHECK(parse_condition("not true") ==
        PolicyCondition::negate(PolicyCondition::always_true()));
  // precedence: not binds tightest, and binds tighter than or
  CHECK(parse_condition("not true and has(\"k\") or true") ==
        PolicyCondition::disj(
            PolicyCondition::conj(
                PolicyCondition::negate(PolicyCondition::always_true()),
                PolicyCondition::has_credential("k")),
            PolicyCondition::always_true()));
  CHECK(parse_condition("true and (true or has(\"k\"))") ==
        PolicyCondition::conj(
            PolicyCondition::always_true(),
            PolicyCondition::disj(PolicyCondition::always_true(),
                                  PolicyCondition::has_credential("k"))));
  CHECK_THROWS_AS(parse_condition("has(aPIN)"), ExprError);
  CHECK_THROWS_AS(parse_condition("actor_in()"), ExprError);
  CHECK_THROWS_AS(parse_condition("true true"), ExprError);
  CHECK_THROWS_AS(parse_condition(""), ExprError);
}

TEST_CASE("condition printing round-trips") {
  std::vector<PolicyCondition> conditions{
      PolicyCondition::always_true(),
      PolicyCondition::has_credential("aPIN"),
      PolicyCondition::has_credential("quote\"inside"),
      PolicyCondition::actor_in({Identity{"Alice"}, Identity{"Bob"}}),
      PolicyCondition::negate(PolicyCondition::conj(
          PolicyCondition::always_true(),
          PolicyCondition::has_credential("k"))),
      PolicyCondition::disj(
          PolicyCondition::conj(PolicyCondition::has_credential("a"),
                                PolicyCondition::has_credential("b")),
          PolicyCondition::negate(PolicyCondition::always_true())),
  };
  for (const auto& condition : conditions)
    CHECK(parse_condition(print_condition(condition)) == condition);
}

TEST_CASE("query text parsing and references") {
  QueryContext ctx;
  ctx.friends = {Identity{"Alice"}, Identity{"Bob"}};
  ctx.cloud = Location{"instagram"};

  CHECK(parse_query("initial", ctx) == StateQuery::initial_state());
  CHECK(parse_query("actor_at(\"Alice\", \"instagram\")", ctx) ==
        StateQuery::actor_at(Identity{"Alice"}, Location{"instagram"}));
  CHECK(parse_query("data_at(\"instagram\", \"Alice\", \"Alice's_diary\")",
                    ctx) == q_diary_posted());
  CHECK(parse_query("policy_violated(\"Eve\")", ctx) == q_ssn());
  // explicit friends/cloud form overrides the file context
  CHECK(parse_query("policy_violated(\"Eve\", friends(\"Bob\"), "
                    "cloud(\"aphone\"))",
                    ctx) ==
        StateQuery::policy_violated_by(Identity{"Eve"}, {Identity{"Bob"}},
                                       Location{"aphone"}));
  ctx.named.emplace("ssn", q_ssn());
  CHECK(parse_query("ssn and initial", ctx) ==
        StateQuery::conj(q_ssn(), StateQuery::initial_state()));
  CHECK_THROWS_AS(parse_query("no_such_query", ctx), ExprError);

  QueryContext no_cloud;
  CHECK_THROWS_AS(parse_query("policy_violated(\"Eve\")", no_cloud),
                  ExprError);
}

TEST_CASE("query printing round-trips") {
  QueryContext ctx;
  ctx.friends = {Identity{"Alice"}, Identity{"Bob"}};
  ctx.cloud = Location{"instagram"};
  std::vector<StateQuery> queries{
      StateQuery::initial_state(),
      q_ssn(),
      q_sn_mid(),
      q_diary_posted(),
      StateQuery::policy_violated_by(Identity{"Eve"}, {}, Location{"aphone"}),
      StateQuery::negate(StateQuery::disj(q_ssn(), q_diary_posted())),
  };
  for (const auto& query : queries)
    CHECK(parse_query(print_query(query, ctx), ctx) == query);
}

TEST_CASE("model files round-trip through canonical serialization") {
  for (const char* name :
       {"sn_scenario.model", "sn_aware.model", "sn_noreader.model"}) {
    ParseResult first = parse_model(model_path(name));
    REQUIRE(first.ok());
    std::string canonical = serialize_model(*first.file);
    ParseResult second = parse_model_text(canonical);
    REQUIRE(second.ok());
    CHECK(*second.file == *first.file);
    // canonical form is a fixpoint
    CHECK(serialize_model(*second.file) == canonical);
  }
}

TEST_CASE("compilation validates query and attack references") {
  ParseResult parsed = parse_model(model_path("sn_scenario.model"));
  REQUIRE(parsed.ok());

  SECTION("well-formed files compile") {
    CompileResult compiled = compile_model(*parsed.file);
    REQUIRE(compiled.ok());
    CHECK(compiled.model->find_query("ssn") != nullptr);
    CHECK(compiled.model->find_query("nope") == nullptr);
    CHECK(compiled.model->find_attack("eve_and_attack") != nullptr);
    CHECK(compiled.model->friends ==
          std::set<Identity>{Identity{"Alice"}, Identity{"Bob"}});
    CHECK(compiled.model->cloud == Location{"instagram"});
  }

  SECTION("queries naming unknown identities are rejected") {
    ModelFile file = *parsed.file;
    file.queries.emplace_back(
        "bad", StateQuery::actor_at(Identity{"Mallory"}, Location{"aphone"}));
    CompileResult compiled = compile_model(file);
    CHECK_FALSE(compiled.ok());
    CHECK(mentions(compiled.errors, "unknown identity \"Mallory\""));
  }

  SECTION("unknown friends are rejected") {
    ModelFile file = *parsed.file;
    file.friends.push_back("Mallory");
    CHECK(mentions(compile_model(file).errors,
                   "unknown identity \"Mallory\""));
  }

  SECTION("unknown cloud is rejected") {
    ModelFile file = *parsed.file;
    file.cloud = "tiktok";
    CHECK(mentions(compile_model(file).errors,
                   "unknown location \"tiktok\""));
  }
}

TEST_CASE("query parse errors are positioned") {
  ParseResult parsed = parse_model_text(
      R"json({"locations": ["x"], "queries": {"q": "actor_at(\"A\" \"x\")"}})json");
  CHECK_FALSE(parsed.ok());
  CHECK(mentions(parsed.errors, "queries[\"q\"]"));
  CHECK(mentions(parsed.errors, "col "));
}

TEST_CASE("attack nodes reject malformed structure") {
  std::string prefix = R"({"locations": ["x"], "attacks": )";
  CHECK(mentions(
      parse_model_text(prefix + R"({"a": {"pre": "initial"}}})").errors,
      "post"));
  CHECK(mentions(parse_model_text(
                     prefix +
                     R"({"a": {"pre": "initial", "post": "initial",
                               "and": [], "or": []}}})")
                     .errors,
                 "cannot be both"));
  CHECK(mentions(parse_model_text(
                     prefix +
                     R"({"a": {"pre": "initial", "post": "initial",
                               "and": []}}})")
                     .errors,
                 "nonempty"));
}
