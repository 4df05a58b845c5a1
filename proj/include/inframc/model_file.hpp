#pragma once

// Model file format: a JSON document with sections for locations, edges,
// actors, policies, insiders, postables, friends, cloud, queries and
// attacks. Unknown keys are rejected. See docs/model-format.md and
// schema/model.schema.json for the published schema.

#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "inframc/attack.hpp"
#include "inframc/query.hpp"
#include "inframc/text_expr.hpp"
#include "inframc/validate.hpp"

namespace inframc {

using Json = nlohmann::ordered_json;

// Parsed model document, prior to semantic validation.
struct ModelFile {
  ModelDecl decl;
  std::vector<std::string> friends;
  std::optional<std::string> cloud;
  std::vector<std::pair<std::string, StateQuery>> queries;
  std::vector<std::pair<std::string, AttackTree>> attacks;
};

inline bool operator==(const ModelFile& a, const ModelFile& b) {
  auto entries_eq = [](const std::vector<LocationPolicyDecl>& x,
                       const std::vector<LocationPolicyDecl>& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i].location != y[i].location ||
          x[i].entries.size() != y[i].entries.size())
        return false;
      for (std::size_t j = 0; j < x[i].entries.size(); ++j)
        if (x[i].entries[j].condition != y[i].entries[j].condition ||
            x[i].entries[j].actions != y[i].entries[j].actions)
          return false;
    }
    return true;
  };
  auto named_eq = [](const auto& x, const auto& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i].first != y[i].first || !(x[i].second == y[i].second))
        return false;
    return true;
  };
  return a.decl.locations == b.decl.locations && a.decl.edges == b.decl.edges &&
         a.decl.actors == b.decl.actors &&
         entries_eq(a.decl.policies, b.decl.policies) &&
         a.decl.insiders == b.decl.insiders &&
         a.decl.postables == b.decl.postables && a.friends == b.friends &&
         a.cloud == b.cloud && named_eq(a.queries, b.queries) &&
         named_eq(a.attacks, b.attacks);
}

struct ParseResult {
  std::optional<ModelFile> file;
  std::vector<Diagnostic> errors;
  bool ok() const { return errors.empty() && file.has_value(); }
};

namespace detail {

class ModelFileReader {
 public:
  explicit ModelFileReader(std::vector<Diagnostic>& errors)
      : errors_(errors) {}

  ModelFile read(const Json& root) {
    ModelFile file;
    check_keys(root, "document",
               {"locations", "edges", "actors", "policies", "insiders",
                "postables", "friends", "cloud", "queries", "attacks"});
    if (!root.contains("locations")) {
      errors_.push_back({"document", "missing required section: locations"});
      return file;
    }
    read_strings(root["locations"], "locations", file.decl.locations);
    if (root.contains("edges")) read_edges(root["edges"], file.decl.edges);
    if (root.contains("actors")) read_actors(root["actors"], file.decl.actors);
    if (root.contains("policies"))
      read_policies(root["policies"], file.decl.policies);
    if (root.contains("insiders"))
      read_insiders(root["insiders"], file.decl.insiders);
    if (root.contains("postables"))
      read_postables(root["postables"], file.decl.postables);
    if (root.contains("friends"))
      read_strings(root["friends"], "friends", file.friends);
    if (root.contains("cloud")) {
      if (!root["cloud"].is_string())
        errors_.push_back({"cloud", "must be a string"});
      else
        file.cloud = root["cloud"].get<std::string>();
    }
    QueryContext ctx;
    for (const auto& f : file.friends) ctx.friends.insert(Identity{f});
    if (file.cloud) ctx.cloud = Location{*file.cloud};
    if (root.contains("queries")) read_queries(root["queries"], ctx, file.queries);
    if (root.contains("attacks")) read_attacks(root["attacks"], ctx, file.attacks);
    return file;
  }

 private:
  void error(const std::string& where, const std::string& message) {
    errors_.push_back({where, message});
  }

  void check_keys(const Json& object, const std::string& where,
                  std::initializer_list<const char*> known) {
    if (!object.is_object()) {
      error(where, "must be an object");
      return;
    }
    for (const auto& [key, value] : object.items()) {
      bool ok = false;
      for (const char* k : known) ok = ok || key == k;
      if (!ok) error(where, "unknown key \"" + key + "\"");
    }
  }

  void read_strings(const Json& j, const std::string& where,
                    std::vector<std::string>& out) {
    if (!j.is_array()) {
      error(where, "must be an array of strings");
      return;
    }
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (!j[i].is_string())
        error(where + "[" + std::to_string(i) + "]", "must be a string");
      else
        out.push_back(j[i].get<std::string>());
    }
  }

  void read_edges(const Json& j,
                  std::vector<std::pair<std::string, std::string>>& out) {
    if (!j.is_array()) {
      error("edges", "must be an array of [from, to] pairs");
      return;
    }
    for (std::size_t i = 0; i < j.size(); ++i) {
      const std::string where = "edges[" + std::to_string(i) + "]";
      const auto& e = j[i];
      if (!e.is_array() || e.size() != 2 || !e[0].is_string() ||
          !e[1].is_string()) {
        error(where, "must be a [from, to] pair of strings");
        continue;
      }
      out.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
    }
  }

  void read_actors(const Json& j, std::vector<ActorDecl>& out) {
    if (!j.is_array()) {
      error("actors", "must be an array of actor objects");
      return;
    }
    for (std::size_t i = 0; i < j.size(); ++i) {
      const std::string where = "actors[" + std::to_string(i) + "]";
      const auto& a = j[i];
      check_keys(a, where,
                 {"name", "location", "credentials", "roles", "psy",
                  "motivations"});
      if (!a.is_object()) continue;
      ActorDecl actor;
      if (!read_required_string(a, where, "name", actor.name)) continue;
      if (!read_required_string(a, where, "location", actor.location))
        continue;
      if (a.contains("credentials"))
        read_strings(a["credentials"], where + ".credentials",
                     actor.credentials);
      if (a.contains("roles"))
        read_strings(a["roles"], where + ".roles", actor.roles);
      if (a.contains("psy")) {
        if (!a["psy"].is_string()) {
          error(where + ".psy", "must be a string");
        } else if (auto psy = parse_psy_state(a["psy"].get<std::string>())) {
          actor.psy = *psy;
        } else {
          error(where + ".psy",
                "unknown psychological state \"" +
                    a["psy"].get<std::string>() + "\"");
        }
      }
      if (a.contains("motivations")) {
        std::vector<std::string> names;
        read_strings(a["motivations"], where + ".motivations", names);
        for (const auto& name : names) {
          if (auto m = parse_motivation(name))
            actor.motivations.push_back(*m);
          else
            error(where + ".motivations", "unknown motivation \"" + name + "\"");
        }
      }
      out.push_back(std::move(actor));
    }
  }

  void read_policies(const Json& j, std::vector<LocationPolicyDecl>& out) {
    if (!j.is_object()) {
      error("policies", "must be an object mapping locations to entry lists");
      return;
    }
    for (const auto& [location, entries] : j.items()) {
      const std::string where = "policies[\"" + location + "\"]";
      LocationPolicyDecl policy;
      policy.location = location;
      if (!entries.is_array()) {
        error(where, "must be an array of policy entries");
        continue;
      }
      for (std::size_t i = 0; i < entries.size(); ++i) {
        const std::string entry_where =
            where + "[" + std::to_string(i) + "]";
        const auto& e = entries[i];
        check_keys(e, entry_where, {"condition", "actions"});
        if (!e.is_object()) continue;
        PolicyEntryDecl entry;
        std::string condition_text;
        if (!read_required_string(e, entry_where, "condition", condition_text))
          continue;
        try {
          entry.condition = parse_condition(condition_text);
        } catch (const ExprError& ex) {
          error(entry_where + ".condition",
                "col " + std::to_string(ex.column) + ": " + ex.message);
          continue;
        }
        if (!e.contains("actions") || !e["actions"].is_array()) {
          error(entry_where, "missing \"actions\" array");
          continue;
        }
        for (const auto& action : e["actions"]) {
          if (!action.is_string()) {
            error(entry_where + ".actions", "must be strings");
            continue;
          }
          if (auto parsed = parse_action(action.get<std::string>()))
            entry.actions.push_back(*parsed);
          else
            error(entry_where + ".actions",
                  "unknown action \"" + action.get<std::string>() + "\"");
        }
        policy.entries.push_back(std::move(entry));
      }
      out.push_back(std::move(policy));
    }
  }

  void read_insiders(const Json& j, std::vector<InsiderDecl>& out) {
    if (!j.is_array()) {
      error("insiders", "must be an array of insider declarations");
      return;
    }
    for (std::size_t i = 0; i < j.size(); ++i) {
      const std::string where = "insiders[" + std::to_string(i) + "]";
      const auto& d = j[i];
      check_keys(d, where, {"subject", "alters"});
      if (!d.is_object()) continue;
      InsiderDecl insider;
      if (!read_required_string(d, where, "subject", insider.subject))
        continue;
      if (d.contains("alters"))
        read_strings(d["alters"], where + ".alters", insider.alters);
      out.push_back(std::move(insider));
    }
  }

  void read_postables(const Json& j, std::vector<PostableDecl>& out) {
    if (!j.is_array()) {
      error("postables", "must be an array of postable items");
      return;
    }
    for (std::size_t i = 0; i < j.size(); ++i) {
      const std::string where = "postables[" + std::to_string(i) + "]";
      const auto& p = j[i];
      check_keys(p, where, {"poster", "readers", "content", "at"});
      if (!p.is_object()) continue;
      PostableDecl postable;
      if (!read_required_string(p, where, "poster", postable.poster)) continue;
      if (!read_required_string(p, where, "content", postable.content))
        continue;
      if (!read_required_string(p, where, "at", postable.at)) continue;
      if (p.contains("readers"))
        read_strings(p["readers"], where + ".readers", postable.readers);
      out.push_back(std::move(postable));
    }
  }

  void read_queries(const Json& j, QueryContext& ctx,
                    std::vector<std::pair<std::string, StateQuery>>& out) {
    if (!j.is_object()) {
      error("queries", "must be an object mapping names to query strings");
      return;
    }
    for (const auto& [name, text] : j.items()) {
      const std::string where = "queries[\"" + name + "\"]";
      if (!is_identifier(name)) {
        error(where, "query name must be an identifier");
        continue;
      }
      if (!text.is_string()) {
        error(where, "must be a query string");
        continue;
      }
      try {
        StateQuery q = parse_query(text.get<std::string>(), ctx);
        ctx.named.emplace(name, q);
        out.emplace_back(name, std::move(q));
      } catch (const ExprError& ex) {
        error(where, "col " + std::to_string(ex.column) + ": " + ex.message);
      }
    }
  }

  AttackTree read_attack_node(const Json& j, const QueryContext& ctx,
                              const std::string& where) {
    check_keys(j, where, {"pre", "post", "and", "or"});
    if (!j.is_object()) throw ExprError{0, "attack node must be an object"};
    std::string pre_text, post_text;
    if (!read_required_string(j, where, "pre", pre_text) ||
        !read_required_string(j, where, "post", post_text))
      throw ExprError{0, "attack node needs \"pre\" and \"post\""};
    StateQuery pre = parse_query(pre_text, ctx);
    StateQuery post = parse_query(post_text, ctx);
    if (j.contains("and") && j.contains("or"))
      throw ExprError{0, "attack node cannot be both \"and\" and \"or\""};
    for (const char* kind : {"and", "or"}) {
      if (!j.contains(kind)) continue;
      const auto& children_json = j[kind];
      if (!children_json.is_array() || children_json.empty())
        throw ExprError{0, std::string("\"") + kind +
                               "\" must be a nonempty array of attack nodes"};
      std::vector<AttackTree> children;
      for (std::size_t i = 0; i < children_json.size(); ++i)
        children.push_back(read_attack_node(
            children_json[i], ctx,
            where + "." + kind + "[" + std::to_string(i) + "]"));
      return kind == std::string("and")
                 ? AttackTree::and_attack(std::move(children), std::move(pre),
                                          std::move(post))
                 : AttackTree::or_attack(std::move(children), std::move(pre),
                                         std::move(post));
    }
    return AttackTree::base(std::move(pre), std::move(post));
  }

  void read_attacks(const Json& j, const QueryContext& ctx,
                    std::vector<std::pair<std::string, AttackTree>>& out) {
    if (!j.is_object()) {
      error("attacks", "must be an object mapping names to attack nodes");
      return;
    }
    for (const auto& [name, node] : j.items()) {
      const std::string where = "attacks[\"" + name + "\"]";
      if (!is_identifier(name)) {
        error(where, "attack name must be an identifier");
        continue;
      }
      try {
        out.emplace_back(name, read_attack_node(node, ctx, where));
      } catch (const ExprError& ex) {
        error(where, ex.column ? "col " + std::to_string(ex.column) + ": " +
                                     ex.message
                               : ex.message);
      }
    }
  }

  bool read_required_string(const Json& object, const std::string& where,
                            const char* key, std::string& out) {
    if (!object.contains(key)) {
      error(where, std::string("missing required key \"") + key + "\"");
      return false;
    }
    if (!object[key].is_string()) {
      error(where + "." + key, "must be a string");
      return false;
    }
    out = object[key].get<std::string>();
    return true;
  }

  static bool is_identifier(const std::string& s) {
    if (s.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_')
      return false;
    for (char c : s)
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
        return false;
    return true;
  }

  std::vector<Diagnostic>& errors_;
};

}  // namespace detail

inline ParseResult parse_model_text(const std::string& text,
                                    const std::string& source = "<input>") {
  ParseResult result;
  std::string stripped = text;
  if (stripped.find_first_not_of(" \t\r\n") == std::string::npos) {
    result.errors.push_back({source, "missing required section: locations"});
    return result;
  }
  Json root;
  try {
    root = Json::parse(text);
  } catch (const nlohmann::json::parse_error& ex) {
    result.errors.push_back({source, ex.what()});
    return result;
  }
  detail::ModelFileReader reader(result.errors);
  ModelFile file = reader.read(root);
  if (result.errors.empty()) result.file = std::move(file);
  return result;
}

inline ParseResult parse_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    ParseResult result;
    result.errors.push_back({path, "cannot open file"});
    return result;
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_model_text(buffer.str(), path);
}

inline Json attack_to_json(const AttackTree& tree, const QueryContext& ctx);

// Canonical serialization: fixed section and key order, queries and attacks
// rendered in the canonical expression syntax. Parsing the output yields a
// structurally equal ModelFile.
inline std::string serialize_model(const ModelFile& file) {
  QueryContext ctx;
  for (const auto& f : file.friends) ctx.friends.insert(Identity{f});
  if (file.cloud) ctx.cloud = Location{*file.cloud};

  Json root = Json::object();
  root["locations"] = file.decl.locations;
  if (!file.decl.edges.empty()) {
    Json edges = Json::array();
    for (const auto& [a, b] : file.decl.edges)
      edges.push_back(Json::array({a, b}));
    root["edges"] = std::move(edges);
  }
  if (!file.decl.actors.empty()) {
    Json actors = Json::array();
    for (const auto& actor : file.decl.actors) {
      Json a = Json::object();
      a["name"] = actor.name;
      a["location"] = actor.location;
      a["credentials"] = actor.credentials;
      a["roles"] = actor.roles;
      a["psy"] = std::string(to_string(actor.psy));
      Json motivations = Json::array();
      for (Motivation m : actor.motivations)
        motivations.push_back(std::string(to_string(m)));
      a["motivations"] = std::move(motivations);
      actors.push_back(std::move(a));
    }
    root["actors"] = std::move(actors);
  }
  if (!file.decl.policies.empty()) {
    Json policies = Json::object();
    for (const auto& policy : file.decl.policies) {
      Json entries = Json::array();
      for (const auto& entry : policy.entries) {
        Json e = Json::object();
        e["condition"] = print_condition(entry.condition);
        Json actions = Json::array();
        for (Action action : entry.actions)
          actions.push_back(std::string(to_string(action)));
        e["actions"] = std::move(actions);
        entries.push_back(std::move(e));
      }
      policies[policy.location] = std::move(entries);
    }
    root["policies"] = std::move(policies);
  }
  if (!file.decl.insiders.empty()) {
    Json insiders = Json::array();
    for (const auto& insider : file.decl.insiders) {
      Json d = Json::object();
      d["subject"] = insider.subject;
      d["alters"] = insider.alters;
      insiders.push_back(std::move(d));
    }
    root["insiders"] = std::move(insiders);
  }
  if (!file.decl.postables.empty()) {
    Json postables = Json::array();
    for (const auto& postable : file.decl.postables) {
      Json p = Json::object();
      p["poster"] = postable.poster;
      p["readers"] = postable.readers;
      p["content"] = postable.content;
      p["at"] = postable.at;
      postables.push_back(std::move(p));
    }
    root["postables"] = std::move(postables);
  }
  if (!file.friends.empty()) root["friends"] = file.friends;
  if (file.cloud) root["cloud"] = *file.cloud;
  if (!file.queries.empty()) {
    Json queries = Json::object();
    for (const auto& [name, query] : file.queries)
      queries[name] = print_query(query, ctx);
    root["queries"] = std::move(queries);
  }
  if (!file.attacks.empty()) {
    Json attacks = Json::object();
    for (const auto& [name, attack] : file.attacks)
      attacks[name] = attack_to_json(attack, ctx);
    root["attacks"] = std::move(attacks);
  }
  return root.dump(2) + "\n";
}

inline Json attack_to_json(const AttackTree& tree, const QueryContext& ctx) {
  Json node = Json::object();
  node["pre"] = print_query(tree.pre(), ctx);
  node["post"] = print_query(tree.post(), ctx);
  const auto* an = std::get_if<AttackTree::AndAttack>(&tree.node());
  const auto* o = std::get_if<AttackTree::OrAttack>(&tree.node());
  if (an || o) {
    Json children = Json::array();
    for (const auto& child : (an ? an->children : o->children))
      children.push_back(attack_to_json(child, ctx));
    node[an ? "and" : "or"] = std::move(children);
  }
  return node;
}

// A compiled model: the validated core plus query and attack definitions
// resolved against the declared identities and locations.
struct CompiledModel {
  Model core;
  std::set<Identity> friends;
  std::optional<Location> cloud;
  std::vector<std::pair<std::string, StateQuery>> queries;
  std::vector<std::pair<std::string, AttackTree>> attacks;

  const StateQuery* find_query(const std::string& name) const {
    for (const auto& [n, q] : queries)
      if (n == name) return &q;
    return nullptr;
  }
  const AttackTree* find_attack(const std::string& name) const {
    for (const auto& [n, a] : attacks)
      if (n == name) return &a;
    return nullptr;
  }
};

struct CompileResult {
  std::optional<CompiledModel> model;
  std::vector<Diagnostic> errors;
  bool ok() const { return errors.empty() && model.has_value(); }
};

namespace detail {

inline void check_query_refs(const StateQuery& q,
                             const std::set<std::string>& identities,
                             const std::set<std::string>& locations,
                             const std::string& where,
                             std::vector<Diagnostic>& errors) {
  const auto& n = q.node();
  auto check_identity = [&](const Identity& id) {
    if (!identities.count(id.name))
      errors.push_back({where, "unknown identity \"" + id.name + "\""});
  };
  auto check_location = [&](const Location& l) {
    if (!locations.count(l.name))
      errors.push_back({where, "unknown location \"" + l.name + "\""});
  };
  if (const auto* v = std::get_if<StateQuery::PolicyViolatedBy>(&n)) {
    check_identity(v->actor);
    for (const auto& f : v->friends) check_identity(f);
    check_location(v->cloud);
  } else if (const auto* at = std::get_if<StateQuery::ActorAt>(&n)) {
    check_identity(at->actor);
    check_location(at->location);
  } else if (const auto* d = std::get_if<StateQuery::DataAt>(&n)) {
    check_location(d->location);
    check_identity(d->owner);
  } else if (const auto* no = std::get_if<StateQuery::Not>(&n)) {
    check_query_refs(*no->child, identities, locations, where, errors);
  } else if (const auto* an = std::get_if<StateQuery::And>(&n)) {
    check_query_refs(*an->lhs, identities, locations, where, errors);
    check_query_refs(*an->rhs, identities, locations, where, errors);
  } else if (const auto* o = std::get_if<StateQuery::Or>(&n)) {
    check_query_refs(*o->lhs, identities, locations, where, errors);
    check_query_refs(*o->rhs, identities, locations, where, errors);
  }
}

inline void check_attack_refs(const AttackTree& t,
                              const std::set<std::string>& identities,
                              const std::set<std::string>& locations,
                              const std::string& where,
                              std::vector<Diagnostic>& errors) {
  check_query_refs(t.pre(), identities, locations, where, errors);
  check_query_refs(t.post(), identities, locations, where, errors);
  const auto* an = std::get_if<AttackTree::AndAttack>(&t.node());
  const auto* o = std::get_if<AttackTree::OrAttack>(&t.node());
  if (an || o)
    for (const auto& child : (an ? an->children : o->children))
      check_attack_refs(child, identities, locations, where, errors);
}

}  // namespace detail

inline CompileResult compile_model(const ModelFile& file) {
  CompileResult result;
  ValidationResult validation = validate_model(file.decl);
  result.errors = validation.errors;

  std::set<std::string> identities;
  for (const auto& actor : file.decl.actors) identities.insert(actor.name);
  std::set<std::string> locations(file.decl.locations.begin(),
                                  file.decl.locations.end());

  for (const auto& f : file.friends)
    if (!identities.count(f))
      result.errors.push_back({"friends", "unknown identity \"" + f + "\""});
  if (file.cloud && !locations.count(*file.cloud))
    result.errors.push_back({"cloud", "unknown location \"" + *file.cloud + "\""});
  for (const auto& [name, query] : file.queries)
    detail::check_query_refs(query, identities, locations,
                             "queries[\"" + name + "\"]", result.errors);
  for (const auto& [name, attack] : file.attacks)
    detail::check_attack_refs(attack, identities, locations,
                              "attacks[\"" + name + "\"]", result.errors);

  if (!result.errors.empty() || !validation.model) return result;

  CompiledModel compiled;
  compiled.core = std::move(*validation.model);
  for (const auto& f : file.friends) compiled.friends.insert(Identity{f});
  if (file.cloud) compiled.cloud = Location{*file.cloud};
  compiled.queries = file.queries;
  compiled.attacks = file.attacks;
  result.model = std::move(compiled);
  return result;
}

// One-stop load: read, parse, validate and compile a model file.
inline CompileResult load_model(const std::string& path) {
  ParseResult parsed = parse_model(path);
  if (!parsed.ok()) return CompileResult{std::nullopt, parsed.errors};
  return compile_model(*parsed.file);
}

}  // namespace inframc
