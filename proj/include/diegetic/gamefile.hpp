#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "diegetic/analysis.hpp"
#include "diegetic/json_io.hpp"

namespace diegetic {

// ---- profile keys: delimiter-joined strategy labels in player order ----

inline std::string join_profile_key(const std::vector<std::string>& labels, char delim = '|') {
  std::string out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i) out += delim;
    for (char c : labels[i]) {
      if (c == delim || c == '\\') out += '\\';
      out += c;
    }
  }
  return out;
}

inline std::vector<std::string> split_profile_key(const std::string& key, char delim = '|') {
  std::vector<std::string> out;
  std::string cur;
  for (std::size_t i = 0; i < key.size(); ++i) {
    char c = key[i];
    if (c == '\\' && i + 1 < key.size()) {
      cur += key[++i];
    } else if (c == delim) {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

/// A validated game description file.
struct GameFile {
  enum class Kind { normal_form, arena };

  int version = 1;
  std::size_t payoff_dim = 0;
  char delimiter = '|';
  std::vector<PlayerSpec> players;
  Kind kind = Kind::normal_form;

  // kind == normal_form
  std::optional<NormalFormGame> normal;

  // kind == arena
  std::optional<ArenaSpec> arena;
  std::optional<PayFn> outcome_payoff;
  std::string initial_state_label;

  CostateKind costate = CostateKind::constant;
};

namespace detail {

inline const Json& require(const Json& j, const char* field, const std::string& at) {
  if (!j.is_object() || !j.contains(field))
    throw schema_error(at + ": missing field '" + field + "'");
  return j[field];
}

inline std::vector<PlayerSpec> parse_players(const Json& j, std::size_t dim) {
  if (!j.is_array() || j.empty()) throw schema_error("players: expected a nonempty array");
  std::vector<PlayerSpec> out;
  std::vector<bool> used(dim, false);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string at = "players[" + std::to_string(i) + "]";
    const Json& p = j[i];
    PlayerSpec spec;
    spec.name = require(p, "name", at).get<std::string>();
    auto strategies = require(p, "strategies", at).get<std::vector<std::string>>();
    if (strategies.empty()) throw schema_error(at + ".strategies: empty strategy list");
    try {
      spec.strategies = FinSet(spec.name, std::move(strategies));
    } catch (const element_error& e) {
      throw schema_error(at + ".strategies: " + e.what());
    }
    spec.payoff_coordinate = require(p, "coordinate", at).get<std::size_t>();
    if (spec.payoff_coordinate >= dim)
      throw schema_error(at + ".coordinate: " + std::to_string(spec.payoff_coordinate) +
                         " out of range for payoff_dim " + std::to_string(dim));
    if (used[spec.payoff_coordinate])
      throw schema_error(at + ".coordinate: duplicate coordinate " +
                         std::to_string(spec.payoff_coordinate));
    used[spec.payoff_coordinate] = true;
    for (const auto& other : out)
      if (other.name == spec.name)
        throw schema_error(at + ".name: duplicate player name '" + spec.name + "'");
    out.push_back(std::move(spec));
  }
  return out;
}

inline NormalFormGame parse_normal_form(const Json& game, std::vector<PlayerSpec> players,
                                        std::size_t dim, char delim) {
  const Json& payoffs = require(game, "payoffs", "game");
  if (!payoffs.is_object()) throw schema_error("game.payoffs: expected an object");
  std::vector<FinSet> omegas;
  for (const auto& p : players) omegas.push_back(p.strategies);
  FinSet profiles = product_all(omegas);
  const std::size_t n = players.size();

  std::vector<PayVec> values(profiles.size());
  std::vector<bool> seen(profiles.size(), false);
  for (const auto& [key, v] : payoffs.items()) {
    auto labels = split_profile_key(key, delim);
    if (labels.size() != n)
      throw schema_error("game.payoffs: key '" + key + "' has " +
                         std::to_string(labels.size()) + " parts, expected " +
                         std::to_string(n));
    std::vector<std::uint32_t> coords(n);
    for (std::size_t i = 0; i < n; ++i) {
      auto idx = players[i].strategies.find(labels[i]);
      if (!idx)
        throw schema_error("game.payoffs: key '" + key + "': '" + labels[i] +
                           "' is not a strategy of player '" + players[i].name + "'");
      coords[i] = *idx;
    }
    std::uint32_t w = join_index(profiles, coords);
    if (seen[w]) throw schema_error("game.payoffs: duplicate profile '" + key + "'");
    seen[w] = true;
    PayVec pv = payvec_from_json(v, "game.payoffs." + key);
    if (pv.size() != dim)
      throw schema_error("game.payoffs." + key + ": expected " + std::to_string(dim) +
                         " payoff coordinates, got " + std::to_string(pv.size()));
    values[w] = std::move(pv);
  }
  for (std::uint32_t w = 0; w < profiles.size(); ++w)
    if (!seen[w])
      throw schema_error("game.payoffs: missing profile '" +
                         join_profile_key(split_labels(profiles, w, n), delim) + "'");
  return NormalFormGame(std::move(players), PayFn(profiles, dim, std::move(values)));
}

// Distinct state labels in key order: the derived state set of a stage.
inline std::vector<std::string> derive_states(const Json& play, char delim,
                                              const std::string& at) {
  std::vector<std::string> states;
  for (const auto& [key, v] : play.items()) {
    (void)v;
    auto parts = split_profile_key(key, delim);
    if (parts.size() != 2)
      throw schema_error(at + ": key '" + key + "' is not 'strategy" + std::string(1, delim) +
                         "state'");
    if (std::find(states.begin(), states.end(), parts[1]) == states.end())
      states.push_back(parts[1]);
  }
  if (states.empty()) throw schema_error(at + ": empty play table");
  return states;
}

inline void parse_arena(const Json& game, GameFile& out) {
  const Json& stages = require(game, "stages", "game");
  if (!stages.is_array() || stages.empty())
    throw schema_error("game.stages: expected a nonempty array");
  const char delim = out.delimiter;

  // Wiring classes (first-occurrence order) are matched positionally to
  // the players list; each class carries that player's strategy set.
  std::vector<std::string> factor_names;
  for (std::size_t k = 0; k < stages.size(); ++k)
    factor_names.push_back(
        require(stages[k], "param_factor", "game.stages[" + std::to_string(k) + "]")
            .get<std::string>());

  std::vector<std::vector<std::string>> wiring;
  if (game.contains("wiring")) {
    if (!game["wiring"].is_array()) throw schema_error("game.wiring: expected an array");
    for (const auto& cls : game["wiring"])
      wiring.push_back(cls.get<std::vector<std::string>>());
    for (const auto& cls : wiring)
      for (const auto& f : cls)
        if (std::find(factor_names.begin(), factor_names.end(), f) == factor_names.end())
          throw schema_error("game.wiring: unknown factor '" + f + "'");
  }

  // Representative class name per factor.
  std::map<std::string, std::string> rep;
  for (const auto& cls : wiring) {
    if (cls.empty()) throw schema_error("game.wiring: empty class");
    for (const auto& f : cls) {
      if (rep.count(f)) throw schema_error("game.wiring: factor '" + f + "' in two classes");
      rep[f] = cls.front();
    }
  }
  std::vector<std::string> class_order;
  std::map<std::string, std::size_t> class_index;
  for (const auto& f : factor_names) {
    std::string c = rep.count(f) ? rep[f] : f;
    if (!class_index.count(c)) {
      class_index[c] = class_order.size();
      class_order.push_back(c);
    }
  }
  if (class_order.size() != out.players.size())
    throw schema_error("game.stages: " + std::to_string(class_order.size()) +
                       " wiring classes for " + std::to_string(out.players.size()) +
                       " players");

  out.initial_state_label = require(game, "initial_state", "game").get<std::string>();
  const Json& payoff = require(game, "outcome_payoff", "game");
  if (!payoff.is_object() || payoff.empty())
    throw schema_error("game.outcome_payoff: expected a nonempty object");
  std::vector<std::string> outcome_labels;
  for (const auto& [k, v] : payoff.items()) {
    (void)v;
    outcome_labels.push_back(k);
  }
  FinSet outcomes;
  try {
    outcomes = FinSet("Z", std::move(outcome_labels));
  } catch (const element_error& e) {
    throw schema_error(std::string("game.outcome_payoff: ") + e.what());
  }

  ArenaSpec spec;
  spec.initial_states = FinSet("X0", {out.initial_state_label});
  spec.outcomes = outcomes;
  spec.wiring = wiring;

  FinSet state_set = spec.initial_states;
  for (std::size_t k = 0; k < stages.size(); ++k) {
    const std::string at = "game.stages[" + std::to_string(k) + "]";
    const Json& play = require(stages[k], "play", at);
    if (!play.is_object()) throw schema_error(at + ".play: expected an object");
    const auto& player =
        out.players[class_index.at(rep.count(factor_names[k]) ? rep[factor_names[k]]
                                                              : factor_names[k])];
    FinSet factor(factor_names[k], player.strategies.elements());
    FinSet next =
        (k + 1 < stages.size())
            ? FinSet("Y" + std::to_string(k),
                     derive_states(require(stages[k + 1], "play",
                                           "game.stages[" + std::to_string(k + 1) + "]"),
                                   delim,
                                   "game.stages[" + std::to_string(k + 1) + "].play"))
            : outcomes;
    std::vector<std::pair<std::string, std::string>> entries;
    for (const auto& [key, v] : play.items()) {
      auto parts = split_profile_key(key, delim);
      if (parts.size() != 2)
        throw schema_error(at + ".play: key '" + key + "' is not 'strategy" +
                           std::string(1, delim) + "state'");
      entries.emplace_back(encode_pair_label(parts[0], parts[1]), v.get<std::string>());
    }
    Table table;
    try {
      table = Table::from_label_map(product(factor, state_set), next, entries,
                                    "stage" + std::to_string(k));
    } catch (const element_error& e) {
      throw schema_error(at + ".play: " + e.what());
    }
    spec.stages.push_back(ArenaSpec::Stage{factor_names[k], factor, std::move(table)});
    state_set = next;
  }

  std::vector<PayVec> values;
  for (const auto& [k, v] : payoff.items()) {
    PayVec pv = payvec_from_json(v, "game.outcome_payoff." + k);
    if (pv.size() != out.payoff_dim)
      throw schema_error("game.outcome_payoff." + k + ": expected " +
                         std::to_string(out.payoff_dim) + " coordinates");
    values.push_back(std::move(pv));
  }
  out.outcome_payoff = PayFn(spec.outcomes, out.payoff_dim, std::move(values));
  out.arena = std::move(spec);

  if (game.contains("costate")) {
    const std::string c = game["costate"].get<std::string>();
    if (c == "const")
      out.costate = CostateKind::constant;
    else if (c == "regret")
      out.costate = CostateKind::regret;
    else
      throw schema_error("game.costate: expected \"const\" or \"regret\", got \"" + c + "\"");
  }
}

}  // namespace detail

inline GameFile parse_game(const Json& j) {
  GameFile out;
  out.version = detail::require(j, "version", "$").get<int>();
  if (out.version != 1)
    throw schema_error("version: unsupported version " + std::to_string(out.version));
  out.payoff_dim = detail::require(j, "payoff_dim", "$").get<std::size_t>();
  if (out.payoff_dim == 0) throw schema_error("payoff_dim: must be at least 1");
  if (j.contains("delimiter")) {
    const std::string d = j["delimiter"].get<std::string>();
    if (d.size() != 1 || d[0] == '\\')
      throw schema_error("delimiter: expected a single character");
    out.delimiter = d[0];
  }
  out.players = detail::parse_players(detail::require(j, "players", "$"), out.payoff_dim);
  const Json& game = detail::require(j, "game", "$");
  const std::string kind = detail::require(game, "kind", "game").get<std::string>();
  if (kind == "normal_form") {
    out.kind = GameFile::Kind::normal_form;
    if (out.payoff_dim != out.players.size())
      throw schema_error("payoff_dim: normal-form games need one coordinate per player");
    out.normal = detail::parse_normal_form(game, out.players, out.payoff_dim, out.delimiter);
    if (game.contains("costate")) {
      const std::string c = game["costate"].get<std::string>();
      if (c == "const")
        out.costate = CostateKind::constant;
      else if (c == "regret")
        out.costate = CostateKind::regret;
      else
        throw schema_error("game.costate: expected \"const\" or \"regret\"");
    }
  } else if (kind == "arena") {
    out.kind = GameFile::Kind::arena;
    if (out.payoff_dim != out.players.size())
      throw schema_error("payoff_dim: arena games need one coordinate per player");
    detail::parse_arena(game, out);
  } else {
    throw schema_error("game.kind: expected \"normal_form\" or \"arena\", got \"" + kind +
                       "\"");
  }
  return out;
}

inline GameFile parse_game_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw schema_error(std::string("invalid JSON: ") + e.what());
  }
  return parse_game(j);
}

inline GameFile parse_game_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw schema_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_game_text(buf.str());
}

/// Canonical serialization: fixed field order, payoff keys in canonical
/// profile enumeration order. parse -> serialize -> parse is the identity.
inline Json serialize_game(const GameFile& g) {
  Json out;
  out["version"] = g.version;
  out["payoff_dim"] = g.payoff_dim;
  if (g.delimiter != '|') out["delimiter"] = std::string(1, g.delimiter);
  Json players = Json::array();
  for (const auto& p : g.players) {
    Json pj;
    pj["name"] = p.name;
    pj["strategies"] = p.strategies.elements();
    pj["coordinate"] = p.payoff_coordinate;
    players.push_back(std::move(pj));
  }
  out["players"] = std::move(players);

  Json game;
  if (g.kind == GameFile::Kind::normal_form) {
    game["kind"] = "normal_form";
    const NormalFormGame& nf = *g.normal;
    const FinSet profiles = nf.payoff.dom();
    Json payoffs = Json::object();
    for (std::uint32_t w = 0; w < profiles.size(); ++w)
      payoffs[join_profile_key(split_labels(profiles, w, nf.players.size()), g.delimiter)] =
          payvec_to_json(nf.payoff.at(w));
    game["payoffs"] = std::move(payoffs);
    if (g.costate == CostateKind::regret) game["costate"] = "regret";
  } else {
    game["kind"] = "arena";
    Json stages = Json::array();
    for (const auto& st : g.arena->stages) {
      Json sj;
      sj["param_factor"] = st.factor_name;
      Json play = Json::object();
      const FinSet& dom = st.play.dom();
      for (std::uint32_t i = 0; i < dom.size(); ++i) {
        auto [f, s] = dom.unpair_index(i);
        play[join_profile_key({dom.left_factor().label(f), dom.right_factor().label(s)},
                              g.delimiter)] = st.play.cod().label(st.play.apply(i));
      }
      sj["play"] = std::move(play);
      stages.push_back(std::move(sj));
    }
    game["stages"] = std::move(stages);
    if (!g.arena->wiring.empty()) game["wiring"] = g.arena->wiring;
    game["initial_state"] = g.initial_state_label;
    Json payoff = Json::object();
    const PayFn& u = *g.outcome_payoff;
    for (std::uint32_t i = 0; i < u.dom().size(); ++i)
      payoff[u.dom().label(i)] = payvec_to_json(u.at(i));
    game["outcome_payoff"] = std::move(payoff);
    game["costate"] = g.costate == CostateKind::regret ? "regret" : "const";
  }
  out["game"] = std::move(game);
  return out;
}

/// The normal form a game file induces: for arena games, payoffs are
/// tabulated by running the staged play forward from the initial state.
/// Forward evaluation only; no lens machinery.
inline NormalFormGame induced_normal_form(const GameFile& g) {
  if (g.kind == GameFile::Kind::normal_form) return *g.normal;
  const ArenaSpec& spec = *g.arena;
  std::vector<FinSet> omegas;
  for (const auto& p : g.players) omegas.push_back(p.strategies);
  FinSet profiles = product_all(omegas);
  // Player index owning each stage, via wiring classes in
  // first-occurrence order (the player order, validated at parse).
  std::map<std::string, std::string> rep;
  for (const auto& cls : spec.wiring)
    for (const auto& f : cls) rep[f] = cls.front();
  std::map<std::string, std::size_t> class_of;
  std::vector<std::size_t> player_of_stage;
  for (const auto& st : spec.stages) {
    std::string c = rep.count(st.factor_name) ? rep[st.factor_name] : st.factor_name;
    if (!class_of.count(c)) class_of[c] = class_of.size();
    player_of_stage.push_back(class_of[c]);
  }
  PayFn payoff = PayFn::tabulate(profiles, g.payoff_dim, [&](std::uint32_t w) {
    auto coords = split_index(profiles, w, g.players.size());
    std::uint32_t s = 0;  // the single initial state
    for (std::size_t k = 0; k < spec.stages.size(); ++k) {
      const Table& play = spec.stages[k].play;
      s = play.apply(play.dom().pair_index(coords[player_of_stage[k]], s));
    }
    return g.outcome_payoff->at(s);
  });
  return NormalFormGame(g.players, std::move(payoff));
}

/// The costate lens a game file asks for (override wins).
inline Lens costate_for(const GameFile& g, std::optional<CostateKind> costate_override = {}) {
  CostateKind ck = costate_override.value_or(g.costate);
  const PayFn& u =
      g.kind == GameFile::Kind::normal_form ? g.normal->payoff : *g.outcome_payoff;
  return ck == CostateKind::constant ? costate_const(u) : costate_regret(u);
}

/// Runs the full diegetic pipeline described by a game file.
inline ClosedGame closed_game_for(const GameFile& g,
                                  std::optional<CostateKind> costate_override = {},
                                  std::size_t max_profiles = kDefaultMaxProfiles) {
  CostateKind ck = costate_override.value_or(g.costate);
  if (g.kind == GameFile::Kind::normal_form)
    return normal_form_closed_game(*g.normal, ck, max_profiles);
  ParaLens arena = lift_arena(*g.arena, g.payoff_dim);
  Lens players = assemble_players(g.players, g.payoff_dim);
  Lens costate = ck == CostateKind::constant ? costate_const(*g.outcome_payoff)
                                             : costate_regret(*g.outcome_payoff);
  return close_game(arena, players, 0, costate, max_profiles);
}

/// The composed backward kernel of the closed system, for explain output.
inline Kernel system_kernel_for(const GameFile& g) {
  std::size_t dim = g.payoff_dim;
  ParaLens arena = [&] {
    if (g.kind == GameFile::Kind::arena) return lift_arena(*g.arena, dim);
    const NormalFormGame& nf = *g.normal;
    FinSet profiles = nf.payoff.dom();
    Table play = Table::from_function(product(profiles, FinSet::unit()), profiles,
                                      [](std::uint32_t i) { return i; }, "pi");
    return para_lift(play, profiles, FinSet::unit(), dim);
  }();
  ParaLens system = reparameterise(arena, assemble_players(g.players, dim));
  return system.body().backward();
}

}  // namespace diegetic
