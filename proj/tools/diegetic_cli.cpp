// Command-line front end: reads a JSON game description, assembles the
// arena and player system, and reports Nash equilibria as fixpoints of
// the closed game, optionally cross-checked against brute force.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "diegetic/gamefile.hpp"
#include "diegetic/sampling.hpp"

namespace {

using diegetic::ClosedGame;
using diegetic::CostateKind;
using diegetic::GameFile;
using diegetic::Json;

constexpr int kExitOk = 0;
constexpr int kExitSchema = 2;
constexpr int kExitSemantic = 3;
constexpr int kExitCap = 4;

std::string profile_label(const GameFile& g, const ClosedGame& cg, std::uint32_t w) {
  return diegetic::join_profile_key(
      diegetic::split_labels(cg.profiles, w, g.players.size()), g.delimiter);
}

std::uint32_t profile_index(const GameFile& g, const ClosedGame& cg, const std::string& key) {
  auto labels = diegetic::split_profile_key(key, g.delimiter);
  if (labels.size() != g.players.size())
    throw diegetic::element_error("profile '" + key + "' has " +
                                  std::to_string(labels.size()) + " parts, expected " +
                                  std::to_string(g.players.size()));
  std::vector<std::uint32_t> coords;
  for (std::size_t i = 0; i < labels.size(); ++i)
    coords.push_back(g.players[i].strategies.index_of(labels[i]));
  return diegetic::join_index(cg.profiles, coords);
}

std::size_t resolve_cap(std::optional<std::size_t> flag_value) {
  if (flag_value) return *flag_value;
  if (const char* env = std::getenv("DIEGETIC_MAX_PROFILES")) {
    try {
      return static_cast<std::size_t>(std::stoull(env));
    } catch (...) {
      throw diegetic::schema_error("DIEGETIC_MAX_PROFILES: not a number");
    }
  }
  return diegetic::kDefaultMaxProfiles;
}

int run_analyze(const std::string& path, bool oracle, std::optional<std::size_t> dynamics,
                const std::string& start, const std::string& costate_flag, bool explain,
                const std::string& json_out, std::optional<std::size_t> cap_flag) {
  GameFile g = diegetic::parse_game_file(path);

  std::optional<CostateKind> costate_override;
  if (costate_flag == "const") costate_override = CostateKind::constant;
  else if (costate_flag == "regret") costate_override = CostateKind::regret;
  else if (!costate_flag.empty())
    throw diegetic::schema_error("--costate: expected const or regret");

  const std::size_t cap = resolve_cap(cap_flag);
  ClosedGame closed = diegetic::closed_game_for(g, costate_override, cap);
  auto fixpoints = diegetic::nash_fixpoints(closed);

  Json report;
  Json fps = Json::array();
  for (auto w : fixpoints) fps.push_back(profile_label(g, closed, w));
  report["fixpoints"] = std::move(fps);

  std::cout << "equilibria (" << fixpoints.size() << "):";
  for (auto w : fixpoints) std::cout << " " << profile_label(g, closed, w);
  std::cout << "\n";

  if (oracle) {
    auto expected = diegetic::oracle_nash(diegetic::induced_normal_form(g));
    Json oj = Json::array();
    for (auto w : expected) oj.push_back(profile_label(g, closed, w));
    const bool agreement = expected == fixpoints;
    report["oracle"] = std::move(oj);
    report["agreement"] = agreement;
    std::cout << "oracle agreement: " << (agreement ? "true" : "false") << "\n";
  }

  Json trajectories = Json::array();
  if (dynamics) {
    std::uint32_t w0 = start.empty() ? 0 : profile_index(g, closed, start);
    auto tr = diegetic::best_response_iterate(closed, w0, *dynamics);
    Json tj;
    Json steps = Json::array();
    for (auto w : tr.states) steps.push_back(profile_label(g, closed, w));
    tj["steps"] = std::move(steps);
    tj["terminal"] = diegetic::Trajectory::terminal_name(tr.terminal);
    if (tr.terminal == diegetic::Trajectory::Terminal::cycle)
      tj["cycle_start"] = tr.cycle_start;
    std::cout << "dynamics:";
    for (auto w : tr.states) std::cout << " " << profile_label(g, closed, w);
    std::cout << " [" << diegetic::Trajectory::terminal_name(tr.terminal) << "]\n";
    trajectories.push_back(std::move(tj));
  }
  report["trajectories"] = std::move(trajectories);

  if (explain) {
    Json ej;
    ej["system"] = diegetic::kernel_to_json(diegetic::simplified(diegetic::system_kernel_for(g)));
    ej["costate"] =
        diegetic::kernel_to_json(diegetic::costate_for(g, costate_override).backward());
    if (json_out.empty()) std::cout << "explain: " << ej.dump() << "\n";
    report["explain"] = std::move(ej);
  }

  if (!json_out.empty()) {
    if (json_out == "-") {
      std::cout << report.dump(2) << "\n";
    } else {
      std::ofstream out(json_out);
      if (!out) throw diegetic::error("cannot write '" + json_out + "'");
      out << report.dump(2) << "\n";
    }
  }
  return kExitOk;
}

// Seeded random normal-form games: the fixpoint pipeline must agree with
// brute force on every instance, under both costates.
int run_selfcheck(std::uint64_t seed, std::size_t count) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> player_count(2, 3);
  std::uniform_int_distribution<int> strat_count(2, 4);
  std::uniform_int_distribution<int> pay(-9, 9);
  std::size_t failures = 0;
  for (std::size_t t = 0; t < count; ++t) {
    const std::size_t n = static_cast<std::size_t>(player_count(rng));
    std::vector<diegetic::PlayerSpec> players;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::string> labels;
      const int m = strat_count(rng);
      for (int s = 0; s < m; ++s) labels.push_back("s" + std::to_string(s));
      players.push_back({"P" + std::to_string(i),
                         diegetic::FinSet("P" + std::to_string(i), labels), i});
    }
    std::vector<diegetic::FinSet> omegas;
    for (const auto& p : players) omegas.push_back(p.strategies);
    diegetic::FinSet profiles = diegetic::product_all(omegas);
    diegetic::PayFn u = diegetic::PayFn::tabulate(profiles, n, [&](std::uint32_t) {
      diegetic::PayVec v(n);
      for (auto& r : v) r = diegetic::Rational(pay(rng));
      return v;
    });
    diegetic::NormalFormGame game(players, u);
    auto expected = diegetic::oracle_nash(game);
    auto via_const = diegetic::nash_fixpoints(
        diegetic::normal_form_closed_game(game, CostateKind::constant));
    auto via_regret = diegetic::nash_fixpoints(
        diegetic::normal_form_closed_game(game, CostateKind::regret));
    if (via_const != expected || via_regret != expected) {
      ++failures;
      std::cout << "instance " << t << ": MISMATCH\n";
    }
  }
  std::cout << (failures ? "selfcheck FAILED on " + std::to_string(failures) + " of "
                         : "selfcheck passed on all ")
            << "instances (" << count << " games)\n";
  return failures ? 1 : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"diegetic: compositional game engine"};
  app.require_subcommand(1);

  std::string path, start, costate_flag, json_out;
  bool oracle = false, explain = false;
  std::optional<std::size_t> dynamics, cap_flag;

  auto* analyze = app.add_subcommand("analyze", "analyze a game file");
  analyze->add_option("file", path, "game JSON file")->required();
  analyze->add_flag("--oracle", oracle, "cross-check against brute force");
  analyze->add_option("--dynamics", dynamics, "run best-response dynamics for N steps");
  analyze->add_option("--start", start, "start profile for --dynamics (e.g. \"C|D\")");
  analyze->add_option("--costate", costate_flag, "costate override: const or regret");
  analyze->add_flag("--explain", explain, "dump the composed backward kernel tree");
  analyze->add_option("--json", json_out, "write the JSON report here ('-' for stdout)");
  analyze->add_option("--max-profiles", cap_flag,
                      "profile cap (also env DIEGETIC_MAX_PROFILES)");

  std::uint64_t seed = 7;
  std::size_t games = 50;
  auto* selfcheck = app.add_subcommand("selfcheck", "fixpoints vs brute force on random games");
  selfcheck->add_option("--seed", seed, "RNG seed");
  selfcheck->add_option("--games", games, "number of random games");

  try {
    app.parse(argc, argv);
    if (analyze->parsed())
      return run_analyze(path, oracle, dynamics, start, costate_flag, explain, json_out,
                         cap_flag);
    return run_selfcheck(seed, games);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const diegetic::schema_error& e) {
    std::cerr << "error[schema] " << e.what() << "\n";
    return kExitSchema;
  } catch (const diegetic::cap_error& e) {
    std::cerr << "error[cap] " << e.what() << "\n";
    return kExitCap;
  } catch (const diegetic::error& e) {
    std::cerr << "error[semantic] " << e.what() << "\n";
    return kExitSemantic;
  }
}
