#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "diegetic/diegetic.hpp"
#include "diegetic/errors.hpp"
#include "diegetic/para.hpp"

namespace diegetic {

inline constexpr std::size_t kDefaultMaxProfiles = 1'000'000;

/// A closed game: the set-valued self-map on strategy profiles whose
/// fixpoints (in the membership sense) are the Nash equilibria.
struct ClosedGame {
  FinSet profiles;
  std::vector<Subset> step;  // total over profiles

  const Subset& step_at(std::uint32_t i) const {
    if (i >= step.size()) throw element_error("step lookup out of range");
    return step[i];
  }
};

/// A strategic game in normal form: players plus one payoff table over
/// the full profile product.
struct NormalFormGame {
  std::vector<PlayerSpec> players;
  PayFn payoff;

  NormalFormGame(std::vector<PlayerSpec> ps, PayFn u)
      : players(std::move(ps)), payoff(std::move(u)) {
    if (players.empty()) throw boundary_error("normal form game: no players");
    if (payoff.dim() != players.size())
      throw boundary_error("normal form game: payoff dimension " +
                           std::to_string(payoff.dim()) + " for " +
                           std::to_string(players.size()) + " players");
    std::vector<FinSet> omegas;
    for (const auto& p : players) omegas.push_back(p.strategies);
    if (payoff.dom() != product_all(omegas))
      throw boundary_error("normal form game: payoff domain is not the profile product");
  }

  FinSet profile_set() const {
    std::vector<FinSet> omegas;
    for (const auto& p : players) omegas.push_back(p.strategies);
    return product_all(omegas);
  }
};

/// Closes an arena under a player system, an initial state and a costate,
/// and tabulates the resulting self-map exhaustively.
inline ClosedGame close_game(const ParaLens& arena, const Lens& players,
                             std::uint32_t initial_state, const Lens& costate,
                             std::size_t max_profiles = kDefaultMaxProfiles) {
  const FinSet& profiles = arena.param().pos;
  if (profiles.empty()) throw boundary_error("close_game: empty profile set");
  if (profiles.size() > max_profiles)
    throw cap_error("profile product of size " + std::to_string(profiles.size()) +
                    " exceeds the cap of " + std::to_string(max_profiles));
  ParaLens system = reparameterise(arena, players);
  std::size_t dim = 0;
  if (arena.dom().dir.kind() == ValueSpace::Kind::payfn) dim = arena.dom().dir.pay_dim();
  Lens st = state(arena.dom().pos, initial_state, dim);
  ResidualMap closed = close(system, st, costate);
  return ClosedGame{profiles, closed.tabulate_subsets()};
}

/// Profiles that are members of their own step image.
inline std::vector<std::uint32_t> nash_fixpoints(const ClosedGame& g) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = 0; i < g.profiles.size(); ++i)
    if (g.step_at(i).contains(i)) out.push_back(i);
  return out;
}

/// Classical brute force, straight from the definition: a profile is an
/// equilibrium when no player gains by a unilateral deviation. Kept free
/// of any lens machinery so it can stand as an independent cross-check.
inline std::vector<std::uint32_t> oracle_nash(const NormalFormGame& game) {
  const std::size_t n = game.players.size();
  const FinSet profiles = game.profile_set();
  std::vector<std::uint32_t> out;
  for (std::uint32_t w = 0; w < profiles.size(); ++w) {
    auto coords = split_index(profiles, w, n);
    bool equilibrium = true;
    for (std::size_t i = 0; i < n && equilibrium; ++i) {
      const std::size_t coordinate = game.players[i].payoff_coordinate;
      const Rational& own = game.payoff.at(w)[coordinate];
      auto deviated = coords;
      for (std::uint32_t alt = 0; alt < game.players[i].strategies.size(); ++alt) {
        deviated[i] = alt;
        if (game.payoff.at(join_index(profiles, deviated))[coordinate] > own) {
          equilibrium = false;
          break;
        }
      }
    }
    if (equilibrium) out.push_back(w);
  }
  return out;
}

/// One best-response trajectory under a deterministic tie-break rule.
struct Trajectory {
  enum class Terminal { fixpoint, cycle, max_steps };

  std::vector<std::uint32_t> states;
  Terminal terminal = Terminal::max_steps;
  std::size_t cycle_start = 0;  // meaningful when terminal == cycle

  static const char* terminal_name(Terminal t) {
    switch (t) {
      case Terminal::fixpoint: return "fixpoint";
      case Terminal::cycle: return "cycle";
      case Terminal::max_steps: return "max_steps";
    }
    return "?";
  }
};

using Chooser = std::function<std::uint32_t(const Subset&)>;

/// Default tie-break: first element in canonical profile order.
inline std::uint32_t first_element_chooser(const Subset& s) {
  if (s.members.empty()) throw boundary_error("chooser: empty step image");
  return s.members.front();
}

inline Trajectory best_response_iterate(const ClosedGame& g, std::uint32_t start,
                                        std::size_t max_steps,
                                        const Chooser& chooser = first_element_chooser) {
  if (start >= g.profiles.size())
    throw element_error("best_response_iterate: start profile out of range");
  Trajectory tr;
  std::unordered_map<std::uint32_t, std::size_t> seen;
  std::uint32_t cur = start;
  for (std::size_t k = 0;; ++k) {
    seen.emplace(cur, tr.states.size());
    tr.states.push_back(cur);
    if (g.step_at(cur).contains(cur)) {
      tr.terminal = Trajectory::Terminal::fixpoint;
      return tr;
    }
    if (k >= max_steps) {
      tr.terminal = Trajectory::Terminal::max_steps;
      return tr;
    }
    std::uint32_t next = chooser(g.step_at(cur));
    auto it = seen.find(next);
    if (it != seen.end()) {
      tr.states.push_back(next);
      tr.terminal = Trajectory::Terminal::cycle;
      tr.cycle_start = it->second;
      return tr;
    }
    cur = next;
  }
}

enum class CostateKind { constant, regret };

/// The full diegetic pipeline for a normal-form game: the trivial arena
/// (a lifted projection from a one-point state set), argmax selection
/// lenses assembled over the profile product, and the chosen costate.
inline ClosedGame normal_form_closed_game(const NormalFormGame& game, CostateKind costate,
                                          std::size_t max_profiles = kDefaultMaxProfiles) {
  const std::size_t n = game.players.size();
  FinSet profiles = game.profile_set();
  FinSet one = FinSet::unit();
  Table play = Table::from_function(product(profiles, one), profiles,
                                    [&](std::uint32_t i) { return i; }, "pi");
  ParaLens arena = para_lift(play, profiles, one, n);
  Lens system = assemble_players(game.players, n);
  Lens out = costate == CostateKind::constant ? costate_const(game.payoff)
                                              : costate_regret(game.payoff);
  return close_game(arena, system, 0, out, max_profiles);
}

}  // namespace diegetic
