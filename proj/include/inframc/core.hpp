#pragma once

// Core value types of an infrastructure model: identities, locations,
// actions, actor dispositions, and owner/reader-labelled data.

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>

namespace inframc {

struct Identity {
  std::string name;
  auto operator<=>(const Identity&) const = default;
};

struct Location {
  std::string name;
  auto operator<=>(const Location&) const = default;
};

enum class Action : std::uint8_t { get, move, eval, put };

inline constexpr std::array<Action, 4> all_actions{Action::get, Action::move,
                                                   Action::eval, Action::put};

enum class PsyState : std::uint8_t {
  happy,
  suspicious,
  depressed,
  disgruntled,
  angry,
  stressed,
};

inline constexpr std::array<PsyState, 6> all_psy_states{
    PsyState::happy,     PsyState::suspicious, PsyState::depressed,
    PsyState::disgruntled, PsyState::angry,    PsyState::stressed};

enum class Motivation : std::uint8_t {
  approval_hungry,
  zen,
  financial,
  political,
  revenge,
  fun,
  competitive_advantage,
  power,
  peer_recognition,
};

inline constexpr std::array<Motivation, 9> all_motivations{
    Motivation::approval_hungry,
    Motivation::zen,
    Motivation::financial,
    Motivation::political,
    Motivation::revenge,
    Motivation::fun,
    Motivation::competitive_advantage,
    Motivation::power,
    Motivation::peer_recognition};

inline std::string_view to_string(Action a) {
  switch (a) {
    case Action::get: return "get";
    case Action::move: return "move";
    case Action::eval: return "eval";
    case Action::put: return "put";
  }
  return "?";
}

inline std::string_view to_string(PsyState p) {
  switch (p) {
    case PsyState::happy: return "happy";
    case PsyState::suspicious: return "suspicious";
    case PsyState::depressed: return "depressed";
    case PsyState::disgruntled: return "disgruntled";
    case PsyState::angry: return "angry";
    case PsyState::stressed: return "stressed";
  }
  return "?";
}

inline std::string_view to_string(Motivation m) {
  switch (m) {
    case Motivation::approval_hungry: return "approval_hungry";
    case Motivation::zen: return "zen";
    case Motivation::financial: return "financial";
    case Motivation::political: return "political";
    case Motivation::revenge: return "revenge";
    case Motivation::fun: return "fun";
    case Motivation::competitive_advantage: return "competitive_advantage";
    case Motivation::power: return "power";
    case Motivation::peer_recognition: return "peer_recognition";
  }
  return "?";
}

inline std::optional<Action> parse_action(std::string_view s) {
  for (Action a : all_actions)
    if (to_string(a) == s) return a;
  return std::nullopt;
}

inline std::optional<PsyState> parse_psy_state(std::string_view s) {
  for (PsyState p : all_psy_states)
    if (to_string(p) == s) return p;
  return std::nullopt;
}

inline std::optional<Motivation> parse_motivation(std::string_view s) {
  for (Motivation m : all_motivations)
    if (to_string(m) == s) return m;
  return std::nullopt;
}

// Psychological disposition of a single identity.
struct ActorState {
  PsyState psy = PsyState::happy;
  std::set<Motivation> motivations;
  auto operator<=>(const ActorState&) const = default;
};

// An actor is unaware when approval seeking is the sole motivation and the
// psychological state is the unalerted one.
inline bool unaware(const ActorState& a) {
  return a.psy == PsyState::happy &&
         a.motivations == std::set<Motivation>{Motivation::approval_hungry};
}

// The disposition threshold at which an actor turns malicious: some
// motivation beyond mere approval seeking, and a non-happy state of mind.
inline bool tipping_point(const ActorState& a) {
  return !a.motivations.empty() &&
         a.motivations != std::set<Motivation>{Motivation::approval_hungry} &&
         a.psy != PsyState::happy;
}

// Owner/reader label attached to a datum.
struct DlmLabel {
  Identity owner;
  std::set<Identity> readers;
  auto operator<=>(const DlmLabel&) const = default;
};

struct LabeledDatum {
  DlmLabel label;
  std::string content;
  auto operator<=>(const LabeledDatum&) const = default;
};

}  // namespace inframc
