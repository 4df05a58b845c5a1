#pragma once

// Text syntax for policy conditions and state queries, as embedded in model
// files. Small recursive-descent parsers with positioned errors, plus
// printers emitting the canonical form the parsers accept.
//
//   condition: true | has("aPIN") | actor_in("Alice", "Bob")
//              | not c | (c and c) | (c or c)
//   query:     initial | actor_at("Alice", "instagram")
//              | data_at("instagram", "Alice", "Alice's_diary")
//              | policy_violated("Eve")
//              | policy_violated("Eve", friends("Alice"), cloud("instagram"))
//              | <name of an earlier query> | not q | (q and q) | (q or q)

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "inframc/core.hpp"
#include "inframc/policy.hpp"
#include "inframc/query.hpp"

namespace inframc {

struct ExprError {
  std::size_t column = 0;  // 1-based
  std::string message;
};

namespace detail {

struct Token {
  enum class Kind { ident, str, lparen, rparen, comma, end };
  Kind kind = Kind::end;
  std::string text;
  std::size_t column = 0;
};

class ExprLexer {
 public:
  explicit ExprLexer(const std::string& input) : input_(input) { advance(); }

  const Token& peek() const { return current_; }

  Token take() {
    Token t = current_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < input_.size() &&
           std::isspace(static_cast<unsigned char>(input_[pos_])))
      ++pos_;
    current_.column = pos_ + 1;
    if (pos_ >= input_.size()) {
      current_.kind = Token::Kind::end;
      current_.text.clear();
      return;
    }
    char c = input_[pos_];
    if (c == '(') {
      current_ = {Token::Kind::lparen, "(", pos_ + 1};
      ++pos_;
    } else if (c == ')') {
      current_ = {Token::Kind::rparen, ")", pos_ + 1};
      ++pos_;
    } else if (c == ',') {
      current_ = {Token::Kind::comma, ",", pos_ + 1};
      ++pos_;
    } else if (c == '"') {
      std::size_t start = pos_++;
      std::string value;
      while (pos_ < input_.size() && input_[pos_] != '"') {
        if (input_[pos_] == '\\' && pos_ + 1 < input_.size()) ++pos_;
        value.push_back(input_[pos_++]);
      }
      if (pos_ >= input_.size())
        throw ExprError{start + 1, "unterminated string literal"};
      ++pos_;  // closing quote
      current_ = {Token::Kind::str, std::move(value), start + 1};
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < input_.size() &&
             (std::isalnum(static_cast<unsigned char>(input_[pos_])) ||
              input_[pos_] == '_'))
        ++pos_;
      current_ = {Token::Kind::ident, input_.substr(start, pos_ - start),
                  start + 1};
    } else {
      throw ExprError{pos_ + 1,
                      std::string("unexpected character '") + c + "'"};
    }
  }

  const std::string& input_;
  std::size_t pos_ = 0;
  Token current_;
};

inline std::string expect_string(ExprLexer& lex, const char* what) {
  Token t = lex.take();
  if (t.kind != Token::Kind::str)
    throw ExprError{t.column, std::string("expected ") + what};
  return t.text;
}

inline void expect(ExprLexer& lex, Token::Kind kind, const char* what) {
  Token t = lex.take();
  if (t.kind != kind)
    throw ExprError{t.column, std::string("expected ") + what};
}

inline bool peek_ident(const ExprLexer& lex, const char* word) {
  return lex.peek().kind == Token::Kind::ident && lex.peek().text == word;
}

inline std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

// ---- policy conditions ----

PolicyCondition parse_condition_expr(ExprLexer& lex);

inline PolicyCondition parse_condition_primary(ExprLexer& lex) {
  Token t = lex.take();
  if (t.kind == Token::Kind::lparen) {
    PolicyCondition inner = parse_condition_expr(lex);
    expect(lex, Token::Kind::rparen, "')'");
    return inner;
  }
  if (t.kind != Token::Kind::ident)
    throw ExprError{t.column, "expected a condition"};
  if (t.text == "true") return PolicyCondition::always_true();
  if (t.text == "not") return PolicyCondition::negate(parse_condition_primary(lex));
  if (t.text == "has") {
    expect(lex, Token::Kind::lparen, "'('");
    std::string credential = expect_string(lex, "a quoted credential");
    expect(lex, Token::Kind::rparen, "')'");
    return PolicyCondition::has_credential(std::move(credential));
  }
  if (t.text == "actor_in") {
    expect(lex, Token::Kind::lparen, "'('");
    std::set<Identity> identities;
    identities.insert(Identity{expect_string(lex, "a quoted identity")});
    while (lex.peek().kind == Token::Kind::comma) {
      lex.take();
      identities.insert(Identity{expect_string(lex, "a quoted identity")});
    }
    expect(lex, Token::Kind::rparen, "')'");
    return PolicyCondition::actor_in(std::move(identities));
  }
  throw ExprError{t.column, "unknown condition \"" + t.text + "\""};
}

inline PolicyCondition parse_condition_conjunct(ExprLexer& lex) {
  PolicyCondition lhs = parse_condition_primary(lex);
  while (peek_ident(lex, "and")) {
    lex.take();
    lhs = PolicyCondition::conj(std::move(lhs), parse_condition_primary(lex));
  }
  return lhs;
}

inline PolicyCondition parse_condition_expr(ExprLexer& lex) {
  PolicyCondition lhs = parse_condition_conjunct(lex);
  while (peek_ident(lex, "or")) {
    lex.take();
    lhs = PolicyCondition::disj(std::move(lhs), parse_condition_conjunct(lex));
  }
  return lhs;
}

}  // namespace detail

// Throws ExprError on malformed input.
inline PolicyCondition parse_condition(const std::string& text) {
  detail::ExprLexer lex(text);
  PolicyCondition c = detail::parse_condition_expr(lex);
  if (lex.peek().kind != detail::Token::Kind::end)
    throw ExprError{lex.peek().column, "trailing input after condition"};
  return c;
}

inline std::string print_condition(const PolicyCondition& c) {
  const auto& n = c.node();
  if (std::holds_alternative<PolicyCondition::AlwaysTrue>(n)) return "true";
  if (const auto* has = std::get_if<PolicyCondition::HasCredential>(&n))
    return "has(" + detail::quote(has->credential) + ")";
  if (const auto* in = std::get_if<PolicyCondition::ActorIn>(&n)) {
    std::string out = "actor_in(";
    bool first = true;
    for (const auto& id : in->identities) {
      if (!first) out += ", ";
      out += detail::quote(id.name);
      first = false;
    }
    return out + ")";
  }
  if (const auto* no = std::get_if<PolicyCondition::Not>(&n))
    return "not " + print_condition(*no->child);
  if (const auto* an = std::get_if<PolicyCondition::And>(&n))
    return "(" + print_condition(*an->lhs) + " and " +
           print_condition(*an->rhs) + ")";
  const auto& o = std::get<PolicyCondition::Or>(n);
  return "(" + print_condition(*o.lhs) + " or " + print_condition(*o.rhs) +
         ")";
}

// File-level context queries are parsed and printed against: the friends
// set and cloud location give policy_violated(...) its short form, and
// named earlier queries may be referenced by identifier.
struct QueryContext {
  std::set<Identity> friends;
  std::optional<Location> cloud;
  std::map<std::string, StateQuery> named;
};

namespace detail {

StateQuery parse_query_expr(ExprLexer& lex, const QueryContext& ctx);

inline StateQuery parse_query_primary(ExprLexer& lex,
                                      const QueryContext& ctx) {
  Token t = lex.take();
  if (t.kind == Token::Kind::lparen) {
    StateQuery inner = parse_query_expr(lex, ctx);
    expect(lex, Token::Kind::rparen, "')'");
    return inner;
  }
  if (t.kind != Token::Kind::ident)
    throw ExprError{t.column, "expected a query"};
  if (t.text == "initial") return StateQuery::initial_state();
  if (t.text == "not")
    return StateQuery::negate(parse_query_primary(lex, ctx));
  if (t.text == "actor_at") {
    expect(lex, Token::Kind::lparen, "'('");
    std::string actor = expect_string(lex, "a quoted identity");
    expect(lex, Token::Kind::comma, "','");
    std::string location = expect_string(lex, "a quoted location");
    expect(lex, Token::Kind::rparen, "')'");
    return StateQuery::actor_at(Identity{std::move(actor)},
                                Location{std::move(location)});
  }
  if (t.text == "data_at") {
    expect(lex, Token::Kind::lparen, "'('");
    std::string location = expect_string(lex, "a quoted location");
    expect(lex, Token::Kind::comma, "','");
    std::string owner = expect_string(lex, "a quoted identity");
    expect(lex, Token::Kind::comma, "','");
    std::string content = expect_string(lex, "a quoted content string");
    expect(lex, Token::Kind::rparen, "')'");
    return StateQuery::data_at(Location{std::move(location)},
                               Identity{std::move(owner)},
                               std::move(content));
  }
  if (t.text == "policy_violated") {
    expect(lex, Token::Kind::lparen, "'('");
    std::string actor = expect_string(lex, "a quoted identity");
    std::set<Identity> friends = ctx.friends;
    std::optional<Location> cloud = ctx.cloud;
    if (lex.peek().kind == Token::Kind::comma) {
      lex.take();
      Token f = lex.take();
      if (f.kind != Token::Kind::ident || f.text != "friends")
        throw ExprError{f.column, "expected friends(...)"};
      expect(lex, Token::Kind::lparen, "'('");
      friends.clear();
      if (lex.peek().kind == Token::Kind::str) {
        friends.insert(Identity{lex.take().text});
        while (lex.peek().kind == Token::Kind::comma) {
          lex.take();
          friends.insert(Identity{expect_string(lex, "a quoted identity")});
        }
      }
      expect(lex, Token::Kind::rparen, "')'");
      expect(lex, Token::Kind::comma, "','");
      Token cl = lex.take();
      if (cl.kind != Token::Kind::ident || cl.text != "cloud")
        throw ExprError{cl.column, "expected cloud(...)"};
      expect(lex, Token::Kind::lparen, "'('");
      cloud = Location{expect_string(lex, "a quoted location")};
      expect(lex, Token::Kind::rparen, "')'");
    }
    expect(lex, Token::Kind::rparen, "')'");
    if (!cloud)
      throw ExprError{t.column,
                      "policy_violated needs a cloud location: declare a "
                      "top-level \"cloud\" section or use the explicit form"};
    return StateQuery::policy_violated_by(Identity{std::move(actor)},
                                          std::move(friends), *cloud);
  }
  auto named = ctx.named.find(t.text);
  if (named != ctx.named.end()) return named->second;
  throw ExprError{t.column, "unknown query \"" + t.text + "\""};
}

inline StateQuery parse_query_conjunct(ExprLexer& lex,
                                       const QueryContext& ctx) {
  StateQuery lhs = parse_query_primary(lex, ctx);
  while (peek_ident(lex, "and")) {
    lex.take();
    lhs = StateQuery::conj(std::move(lhs), parse_query_primary(lex, ctx));
  }
  return lhs;
}

inline StateQuery parse_query_expr(ExprLexer& lex, const QueryContext& ctx) {
  StateQuery lhs = parse_query_conjunct(lex, ctx);
  while (peek_ident(lex, "or")) {
    lex.take();
    lhs = StateQuery::disj(std::move(lhs), parse_query_conjunct(lex, ctx));
  }
  return lhs;
}

}  // namespace detail

inline StateQuery parse_query(const std::string& text,
                              const QueryContext& ctx) {
  detail::ExprLexer lex(text);
  StateQuery q = detail::parse_query_expr(lex, ctx);
  if (lex.peek().kind != detail::Token::Kind::end)
    throw ExprError{lex.peek().column, "trailing input after query"};
  return q;
}

inline std::string print_query(const StateQuery& q, const QueryContext& ctx) {
  const auto& n = q.node();
  if (const auto* v = std::get_if<StateQuery::PolicyViolatedBy>(&n)) {
    if (ctx.cloud && v->friends == ctx.friends && v->cloud == *ctx.cloud)
      return "policy_violated(" + detail::quote(v->actor.name) + ")";
    std::string out = "policy_violated(" + detail::quote(v->actor.name) +
                      ", friends(";
    bool first = true;
    for (const auto& f : v->friends) {
      if (!first) out += ", ";
      out += detail::quote(f.name);
      first = false;
    }
    return out + "), cloud(" + detail::quote(v->cloud.name) + "))";
  }
  if (const auto* at = std::get_if<StateQuery::ActorAt>(&n))
    return "actor_at(" + detail::quote(at->actor.name) + ", " +
           detail::quote(at->location.name) + ")";
  if (const auto* d = std::get_if<StateQuery::DataAt>(&n))
    return "data_at(" + detail::quote(d->location.name) + ", " +
           detail::quote(d->owner.name) + ", " + detail::quote(d->content) +
           ")";
  if (std::holds_alternative<StateQuery::InitialState>(n)) return "initial";
  if (const auto* no = std::get_if<StateQuery::Not>(&n))
    return "not " + print_query(*no->child, ctx);
  if (const auto* an = std::get_if<StateQuery::And>(&n))
    return "(" + print_query(*an->lhs, ctx) + " and " +
           print_query(*an->rhs, ctx) + ")";
  const auto& o = std::get<StateQuery::Or>(n);
  return "(" + print_query(*o.lhs, ctx) + " or " + print_query(*o.rhs, ctx) +
         ")";
}

}  // namespace inframc
