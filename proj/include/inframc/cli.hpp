#pragma once

// Command-line interface. Subcommands: validate, explore, check-ef,
// check-attack, trace. Exit codes: 0 = query holds / attack valid,
// 1 = does not hold / invalid, 2 = usage or validation error,
// 3 = inconclusive (exploration truncated).

#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "inframc/attack.hpp"
#include "inframc/kripke.hpp"
#include "inframc/model_file.hpp"
#include "inframc/report.hpp"

namespace inframc {

namespace exit_code {
constexpr int holds = 0;
constexpr int does_not_hold = 1;
constexpr int usage_error = 2;
constexpr int inconclusive = 3;
}  // namespace exit_code

namespace detail {

struct CommonOptions {
  std::string file;
  std::string format = "text";
  std::size_t max_states = 100000;
  std::size_t max_depth = 0;  // 0 = unlimited
  bool full_states = false;

  ExploreLimits limits() const {
    ExploreLimits limits;
    limits.max_states = max_states;
    limits.max_depth =
        max_depth == 0 ? std::numeric_limits<std::size_t>::max() : max_depth;
    return limits;
  }
};

inline void print_diagnostics(std::ostream& err,
                              const std::vector<Diagnostic>& diagnostics) {
  for (const auto& d : diagnostics) err << "error: " << to_string(d) << "\n";
}

inline std::optional<CompiledModel> load_or_report(const std::string& path,
                                                   std::ostream& err) {
  CompileResult loaded = load_model(path);
  if (!loaded.ok()) {
    print_diagnostics(err, loaded.errors);
    return std::nullopt;
  }
  return std::move(loaded.model);
}

inline int run_validate(const CommonOptions& options, std::ostream& out,
                        std::ostream& err) {
  CompileResult loaded = load_model(options.file);
  if (options.format == "json") {
    nlohmann::ordered_json report = nlohmann::ordered_json::object();
    report["command"] = "validate";
    report["file"] = options.file;
    report["valid"] = loaded.ok();
    nlohmann::ordered_json errors = nlohmann::ordered_json::array();
    for (const auto& d : loaded.errors) {
      nlohmann::ordered_json e = nlohmann::ordered_json::object();
      e["where"] = d.where;
      e["message"] = d.message;
      errors.push_back(std::move(e));
    }
    report["errors"] = std::move(errors);
    out << report.dump(2) << "\n";
  } else if (loaded.ok()) {
    out << "ok: model is valid\n";
  } else {
    print_diagnostics(err, loaded.errors);
  }
  return loaded.ok() ? 0 : 1;
}

inline int run_explore(const CommonOptions& options, std::ostream& out,
                       std::ostream& err) {
  auto model = load_or_report(options.file, err);
  if (!model) return exit_code::usage_error;
  KripkeModel kripke = explore(model->core.initial, model->core.insiders,
                               model->core.postables, options.limits());
  if (options.format == "json") {
    nlohmann::ordered_json report = nlohmann::ordered_json::object();
    report["command"] = "explore";
    report["file"] = options.file;
    report["states"] = kripke.states.size();
    report["transitions"] = transition_count(kripke);
    report["initial_states"] = kripke.init.size();
    report["truncated"] = kripke.truncated;
    out << report.dump(2) << "\n";
  } else {
    out << "states: " << kripke.states.size() << "\n"
        << "transitions: " << transition_count(kripke) << "\n"
        << "truncated: " << (kripke.truncated ? "yes" : "no") << "\n";
  }
  return kripke.truncated ? exit_code::inconclusive : exit_code::holds;
}

inline int ef_exit_code(const Verdict& verdict) {
  if (verdict.holds) return exit_code::holds;
  return verdict.inconclusive ? exit_code::inconclusive
                              : exit_code::does_not_hold;
}

inline int run_check_ef(const CommonOptions& options,
                        const std::string& query_name, bool witness_only,
                        std::ostream& out, std::ostream& err) {
  auto model = load_or_report(options.file, err);
  if (!model) return exit_code::usage_error;
  const StateQuery* query = model->find_query(query_name);
  if (!query) {
    err << "error: no query named \"" << query_name << "\" in "
        << options.file << "\n";
    return exit_code::usage_error;
  }
  KripkeModel kripke = explore(model->core.initial, model->core.insiders,
                               model->core.postables, options.limits());
  Verdict verdict = check_ef(kripke, *query);

  if (options.format == "json") {
    nlohmann::ordered_json report = nlohmann::ordered_json::object();
    report["command"] = witness_only ? "trace" : "check-ef";
    report["file"] = options.file;
    report["query"] = query_name;
    report["holds"] = verdict.holds;
    report["inconclusive"] = verdict.inconclusive;
    report["states"] = kripke.states.size();
    report["truncated"] = kripke.truncated;
    if (verdict.witness)
      report["witness"] = witness_to_json(*verdict.witness);
    else
      report["witness"] = nullptr;
    out << report.dump(2) << "\n";
    return ef_exit_code(verdict);
  }

  if (!witness_only) {
    out << "EF " << query_name << ": "
        << (verdict.holds
                ? "holds"
                : (verdict.inconclusive ? "inconclusive (truncated)"
                                        : "does not hold"))
        << "\n";
  }
  if (verdict.witness)
    print_witness_text(out, model->core.initial, *verdict.witness,
                       options.full_states);
  else if (witness_only)
    out << (verdict.inconclusive ? "no witness (inconclusive: truncated)\n"
                                 : "no witness\n");
  return ef_exit_code(verdict);
}

inline int run_check_attack(const CommonOptions& options,
                            const std::string& attack_name, std::ostream& out,
                            std::ostream& err) {
  auto model = load_or_report(options.file, err);
  if (!model) return exit_code::usage_error;
  const AttackTree* attack = model->find_attack(attack_name);
  if (!attack) {
    err << "error: no attack named \"" << attack_name << "\" in "
        << options.file << "\n";
    return exit_code::usage_error;
  }
  KripkeModel kripke = explore(model->core.initial, model->core.insiders,
                               model->core.postables, options.limits());
  AttackCheck check = check_attack_tree(kripke, *attack);

  if (options.format == "json") {
    nlohmann::ordered_json report = nlohmann::ordered_json::object();
    report["command"] = "check-attack";
    report["file"] = options.file;
    report["attack"] = attack_name;
    report["valid"] = check.valid;
    report["truncated"] = kripke.truncated;
    if (check.valid)
      report["reason"] = nullptr;
    else
      report["reason"] = check.reason;
    out << report.dump(2) << "\n";
  } else if (check.valid) {
    out << "attack " << attack_name << ": valid\n";
  } else {
    out << "attack " << attack_name << ": rejected\n";
    err << "error: " << check.reason << "\n";
  }
  if (check.valid) return exit_code::holds;
  return kripke.truncated ? exit_code::inconclusive
                          : exit_code::does_not_hold;
}

}  // namespace detail

// Entry point for the CLI; args excludes the program name. Returns the
// process exit code and writes reports to `out`, diagnostics to `err`.
inline int run_command(const std::vector<std::string>& args, std::ostream& out,
                       std::ostream& err) {
  CLI::App app{"explicit-state checker for insider-threat infrastructure "
               "models"};
  app.name("inframc");
  app.require_subcommand(1);

  detail::CommonOptions options;
  std::string query_name;
  std::string attack_name;

  auto add_common = [&](CLI::App* cmd, bool with_limits = true) {
    cmd->add_option("file", options.file, "model file")->required();
    cmd->add_option("--format", options.format, "output format")
        ->check(CLI::IsMember({"text", "json"}));
    if (with_limits) {
      cmd->add_option("--max-states", options.max_states,
                      "state budget for exploration");
      cmd->add_option("--max-depth", options.max_depth,
                      "depth budget for exploration (0 = unlimited)");
    }
  };

  CLI::App* validate = app.add_subcommand("validate", "parse and validate");
  add_common(validate, false);

  CLI::App* explore_cmd =
      app.add_subcommand("explore", "explore the reachable state space");
  add_common(explore_cmd);

  CLI::App* check_ef_cmd = app.add_subcommand(
      "check-ef", "check EF reachability of a named query");
  add_common(check_ef_cmd);
  check_ef_cmd->add_option("--query", query_name, "query name")->required();
  check_ef_cmd->add_flag("--full-states", options.full_states,
                         "print complete state dumps in witnesses");

  CLI::App* check_attack_cmd = app.add_subcommand(
      "check-attack", "check validity of a named attack tree");
  add_common(check_attack_cmd);
  check_attack_cmd->add_option("--attack", attack_name, "attack name")
      ->required();

  CLI::App* trace_cmd =
      app.add_subcommand("trace", "print the witness trace for a query");
  add_common(trace_cmd);
  trace_cmd->add_option("--query", query_name, "query name")->required();
  trace_cmd->add_flag("--full-states", options.full_states,
                      "print complete state dumps");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return exit_code::holds;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::usage_error;
  }

  try {
    if (app.got_subcommand(validate))
      return detail::run_validate(options, out, err);
    if (app.got_subcommand(explore_cmd))
      return detail::run_explore(options, out, err);
    if (app.got_subcommand(check_ef_cmd))
      return detail::run_check_ef(options, query_name, false, out, err);
    if (app.got_subcommand(check_attack_cmd))
      return detail::run_check_attack(options, attack_name, out, err);
    if (app.got_subcommand(trace_cmd))
      return detail::run_check_ef(options, query_name, true, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::usage_error;
  }
  return exit_code::usage_error;
}

}  // namespace inframc
