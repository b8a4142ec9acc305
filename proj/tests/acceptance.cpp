// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Everything is exact rational arithmetic; the only tolerances are the
// stated runtime budgets.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "diegetic/gamefile.hpp"
#include "diegetic/sampling.hpp"

using namespace diegetic;

namespace {

int g_failures = 0;

struct Criterion {
  int number;
  std::string label;
  double budget_seconds;
  std::chrono::steady_clock::time_point started;
  bool ok = true;
  std::string detail;

  Criterion(int n, std::string lbl, double budget)
      : number(n), label(std::move(lbl)), budget_seconds(budget),
        started(std::chrono::steady_clock::now()) {}

  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }

  void finish() {
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    if (ok && budget_seconds > 0 && secs > budget_seconds) {
      ok = false;
      detail = "runtime " + std::to_string(secs) + "s over budget of " +
               std::to_string(budget_seconds) + "s";
    }
    char line[512];
    std::snprintf(line, sizeof(line), "[%s] criterion %d: %s (%.3fs)%s%s",
                  ok ? "PASS" : "FAIL", number, label.c_str(), secs,
                  ok ? "" : " -- ", ok ? "" : detail.c_str());
    std::cout << line << std::endl;
    if (!ok) ++g_failures;
  }
};

NormalFormGame random_game(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> player_count(2, 3);
  std::uniform_int_distribution<int> strat_count(2, 4);
  std::uniform_int_distribution<int> pay(-9, 9);
  const std::size_t n = static_cast<std::size_t>(player_count(rng));
  std::vector<PlayerSpec> players;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::string> labels;
    const int m = strat_count(rng);
    for (int s = 0; s < m; ++s) labels.push_back("s" + std::to_string(s));
    players.push_back({"P" + std::to_string(i), FinSet("P" + std::to_string(i), labels), i});
  }
  std::vector<FinSet> omegas;
  for (const auto& p : players) omegas.push_back(p.strategies);
  FinSet profiles = product_all(omegas);
  PayFn u = PayFn::tabulate(profiles, n, [&](std::uint32_t) {
    PayVec v(n);
    for (auto& r : v) r = Rational(pay(rng));
    return v;
  });
  return NormalFormGame(players, u);
}

constexpr std::uint64_t kFamilySeed = 424242;
constexpr int kFamilySize = 50;

Table random_table(const FinSet& dom, const FinSet& cod, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint32_t> d(0, static_cast<std::uint32_t>(cod.size()) - 1);
  return Table::from_function(dom, cod, [&](std::uint32_t) { return d(rng); });
}

// ---- criteria ----

void criterion1_theorem_equivalence() {
  Criterion c(1, "fixpoints of the diegetic pipeline equal brute force on 50 seeded games",
              5.0);
  std::mt19937_64 rng(kFamilySeed);
  for (int t = 0; t < kFamilySize; ++t) {
    NormalFormGame game = random_game(rng);
    auto expected = oracle_nash(game);
    auto got = nash_fixpoints(normal_form_closed_game(game, CostateKind::constant));
    if (got != expected) {
      c.fail("instance " + std::to_string(t) + " disagrees with the oracle");
      break;
    }
  }
  c.finish();
}

void criterion2_classic_fixtures() {
  Criterion c(2, "prisoner's dilemma yields {(D,D)}; matching pennies yields {}", 0.1);
  {
    FinSet s("S", {"C", "D"});
    FinSet prod = product(s, s);
    NormalFormGame pd({{"row", s, 0}, {"col", s, 1}},
                      PayFn(prod, 2,
                            {{Rational(2), Rational(2)},
                             {Rational(0), Rational(3)},
                             {Rational(3), Rational(0)},
                             {Rational(1), Rational(1)}}));
    ClosedGame g = normal_form_closed_game(pd, CostateKind::constant);
    auto fps = nash_fixpoints(g);
    if (fps.size() != 1 || g.profiles.label(fps[0]) != "(D,D)")
      c.fail("prisoner's dilemma equilibria are not exactly {(D,D)}");
  }
  {
    FinSet s("S", {"H", "T"});
    FinSet prod = product(s, s);
    NormalFormGame mp({{"even", s, 0}, {"odd", s, 1}},
                      PayFn(prod, 2,
                            {{Rational(1), Rational(-1)},
                             {Rational(-1), Rational(1)},
                             {Rational(-1), Rational(1)},
                             {Rational(1), Rational(-1)}}));
    if (!nash_fixpoints(normal_form_closed_game(mp, CostateKind::constant)).empty())
      c.fail("matching pennies has a spurious pure equilibrium");
  }
  c.finish();
}

void criterion3_lax_coherence() {
  Criterion c(3, "Nashator-reparameterised monolithic lift equals the piecewise composite",
              10.0);
  std::mt19937_64 rng(kFamilySeed + 3);
  DirectionSampler cfg;
  cfg.sample_count = 20;
  std::uniform_int_distribution<std::size_t> size(1, 3);
  for (int t = 0; t < 30 && c.ok; ++t) {
    auto make = [&](const std::string& n) {
      std::vector<std::string> labels;
      std::size_t m = size(rng);
      for (std::size_t i = 0; i < m; ++i) labels.push_back(n + std::to_string(i));
      return FinSet(n, labels);
    };
    FinSet omega = make("w"), xi = make("t"), x = make("x"), y = make("y"), z = make("z");
    Table play_g = random_table(product(omega, x), y, rng);
    Table play_h = random_table(product(xi, y), z, rng);

    ParaLens piecewise =
        para_compose(para_lift(play_g, omega, x, 1), para_lift(play_h, xi, y, 1));
    FinSet xo = product(xi, omega);
    FinSet dom = product(xo, x);
    Table joint = Table::from_function(dom, z, [&](std::uint32_t i) {
      auto [pp, xx] = dom.unpair_index(i);
      auto [ti, wi] = xo.unpair_index(pp);
      return play_h.apply(
          play_h.dom().pair_index(ti, play_g.apply(play_g.dom().pair_index(wi, xx))));
    });
    ParaLens broken = reparameterise(para_lift(joint, xo, x, 1), nashator(xi, omega, 1));
    auto rep = lens_extensional_eq(broken.body(), piecewise.body(), cfg);
    if (!rep.equal) c.fail("pair " + std::to_string(t) + ": " + rep.witness);
  }
  c.finish();
}

void criterion4_sequential_game() {
  Criterion c(4, "two-stage sequential game reproduces the closed-form residual tables", 0.1);
  FinSet omega("O", {"w0", "w1"});
  FinSet xi("Xi", {"t0", "t1"});
  FinSet x("X", {"x0"});
  FinSet y("Y", {"y0", "y1"});
  FinSet z("Z", {"z0", "z1", "z2"});
  Table play_g = Table::from_label_map(product(omega, x), y,
                                       {{"(w0,x0)", "y0"}, {"(w1,x0)", "y1"}}, "g");
  Table play_h = Table::from_label_map(
      product(xi, y), z,
      {{"(t0,y0)", "z0"}, {"(t0,y1)", "z2"}, {"(t1,y0)", "z1"}, {"(t1,y1)", "z0"}}, "h");
  PayFn u(z, 1, {{Rational(1)}, {Rational(5)}, {Rational(-2)}});

  ParaLens arena =
      para_compose(para_lift(play_g, omega, x, 1), para_lift(play_h, xi, y, 1));
  ResidualMap closed = close(arena, state(x, std::uint32_t{0}, 1), costate_const(u));
  const FinSet& params = closed.param_set();
  for (std::uint32_t pi = 0; pi < params.size() && c.ok; ++pi) {
    auto [ti, wi] = params.unpair_index(pi);
    Value out = closed.eval(pi);
    PayFn u_xi = PayFn::tabulate(xi, 1, [&](std::uint32_t t) {
      return u.at(play_h.apply(
          play_h.dom().pair_index(t, play_g.apply(play_g.dom().pair_index(wi, 0)))));
    });
    PayFn u_omega = PayFn::tabulate(omega, 1, [&](std::uint32_t w) {
      return u.at(play_h.apply(
          play_h.dom().pair_index(ti, play_g.apply(play_g.dom().pair_index(w, 0)))));
    });
    if (!(out.first().as_payfn() == u_xi) || !(out.second().as_payfn() == u_omega))
      c.fail("residuals differ at " + params.label(pi));
  }
  c.finish();
}

void criterion5_costate_equivalence() {
  Criterion c(5, "const and regret costates give identical fixpoint sets; regret "
                 "vanishes at its basepoint", 0);
  std::mt19937_64 rng(kFamilySeed);
  for (int t = 0; t < kFamilySize && c.ok; ++t) {
    NormalFormGame game = random_game(rng);
    auto via_const = nash_fixpoints(normal_form_closed_game(game, CostateKind::constant));
    auto via_regret = nash_fixpoints(normal_form_closed_game(game, CostateKind::regret));
    if (via_const != via_regret) c.fail("instance " + std::to_string(t) + " differs");

    Lens regret = costate_regret(game.payoff);
    const FinSet& dom = game.payoff.dom();
    const PayVec zero(game.payoff.dim(), Rational(0));
    for (std::uint32_t i = 0; i < dom.size(); ++i)
      if (regret.backward_at(i, Value(UnitValue{})).as_payfn().at(i) != zero)
        c.fail("regret does not vanish at its basepoint");
  }
  c.finish();
}

void criterion6_category_laws() {
  Criterion c(6, "identity, associativity, interchange and reparameterisation laws", 0);
  std::mt19937_64 rng(kFamilySeed + 6);
  DirectionSampler cfg;
  cfg.sample_count = 8;
  FinSet a("A", {"a0", "a1"});
  FinSet b("B", {"b0", "b1", "b2"});
  FinSet d("D", {"d0", "d1"});

  auto check = [&](const ExtEqReport& rep, const char* what) {
    if (!rep.equal) c.fail(std::string(what) + ": " + rep.witness);
  };

  for (int t = 0; t < 4 && c.ok; ++t) {
    Lens f = p_star(random_table(a, b, rng), 1);
    Lens g = p_star(random_table(b, d, rng), 1);
    Lens h = p_star(random_table(d, a, rng), 1);
    check(lens_extensional_eq(lens_compose(identity_lens(f.dom()), f), f, cfg),
          "left identity");
    check(lens_extensional_eq(lens_compose(f, identity_lens(f.cod())), f, cfg),
          "right identity");
    check(lens_extensional_eq(lens_compose(lens_compose(f, g), h),
                              lens_compose(f, lens_compose(g, h)), cfg),
          "associativity");
    Lens f2 = p_star(random_table(b, a, rng), 1);
    Lens g2 = p_star(random_table(a, b, rng), 1);
    check(lens_extensional_eq(
              lens_compose(lens_tensor(f, f2), lens_tensor(g, g2)),
              lens_tensor(lens_compose(f, g), lens_compose(f2, g2)), cfg),
          "tensor interchange");
  }

  // Parametric side: associativity up to re-association, and
  // reparameterisation along a composite.
  FinSet x1("X1", {"x"});
  for (int t = 0; t < 2 && c.ok; ++t) {
    ParaLens pf = para_lift(random_table(product(a, x1), b, rng), a, x1, 1);
    ParaLens pg = para_lift(random_table(product(d, b), a, rng), d, b, 1);
    ParaLens ph = para_lift(random_table(product(a, a), b, rng), a, a, 1);
    ParaLens left = para_compose(para_compose(pf, pg), ph);
    ParaLens right = para_compose(pf, para_compose(pg, ph));
    Lens assoc = assoc_right_lens(ph.param(), pg.param(), pf.param());
    check(lens_extensional_eq(reparameterise(left, assoc).body(), right.body(), cfg),
          "para associativity");

    Lens r = p_star(random_table(b, a, rng), 1);
    Lens s = p_star(random_table(d, b, rng), 1);
    check(lens_extensional_eq(reparameterise(pf, lens_compose(s, r)).body(),
                              reparameterise(reparameterise(pf, r), s).body(), cfg),
          "reparameterisation functoriality");
    check(lens_extensional_eq(reparameterise(pf, identity_lens(pf.param())).body(),
                              pf.body(), cfg),
          "identity reparameterisation");
  }
  c.finish();
}

struct CliResult {
  int exit_code = -1;
  std::string output;
};

CliResult run_shell(const std::string& cmd) {
  CliResult res;
  FILE* pipe = popen((cmd + " 2>&1").c_str(), "r");
  if (!pipe) return res;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof(buf), pipe)) res.output.append(buf, n);
  int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

CliResult run_cli(const std::string& args) {
  return run_shell(std::string(DIEGETIC_CLI_BIN) + " " + args);
}

void criterion7_cli_contract() {
  Criterion c(7, "CLI round-trips fixtures, agrees with the oracle, honors exit codes", 0);
  namespace fs = std::filesystem;
  const std::string fixtures = DIEGETIC_FIXTURES_DIR;
  fs::path tmp = fs::temp_directory_path() / "diegetic_acceptance";
  fs::create_directories(tmp);

  // Fixture round-trip through parse/serialize.
  for (const char* name : {"pd.json", "pennies.json", "seqgame.json"}) {
    GameFile g = parse_game_file(fixtures + "/" + name);
    std::string canonical = serialize_game(g).dump(2);
    if (serialize_game(parse_game_text(canonical)).dump(2) != canonical)
      c.fail(std::string(name) + " does not round-trip");
  }

  // analyze --oracle on the seeded family, via temporary files.
  std::mt19937_64 rng(kFamilySeed);
  for (int t = 0; t < 10 && c.ok; ++t) {
    NormalFormGame game = random_game(rng);
    GameFile gf;
    gf.payoff_dim = game.players.size();
    gf.players = game.players;
    gf.kind = GameFile::Kind::normal_form;
    gf.normal = game;
    fs::path file = tmp / ("family" + std::to_string(t) + ".json");
    std::ofstream(file) << serialize_game(gf).dump(2);
    fs::path report = tmp / ("report" + std::to_string(t) + ".json");
    CliResult res = run_cli("analyze " + file.string() + " --oracle --json " + report.string());
    if (res.exit_code != 0) {
      c.fail("analyze exited " + std::to_string(res.exit_code) + ": " + res.output);
      break;
    }
    Json rj = Json::parse(std::ifstream(report));
    if (!rj.contains("agreement") || rj["agreement"] != true) {
      c.fail("oracle agreement flag is not true on instance " + std::to_string(t));
      break;
    }
  }

  // Exit codes: 0 on success including empty equilibria.
  if (c.ok) {
    CliResult ok = run_cli("analyze " + fixtures + "/pennies.json");
    if (ok.exit_code != 0) c.fail("pennies analysis should exit 0");

    CliResult pd = run_cli("analyze " + fixtures + "/pd.json --oracle");
    if (pd.exit_code != 0 || pd.output.find("D|D") == std::string::npos)
      c.fail("pd analysis should report D|D and exit 0");

    fs::path bad = tmp / "bad.json";
    std::ofstream(bad) << R"({"version": 1, "payoff_dim": 2,
      "players": [
        {"name": "row", "strategies": ["C", "D"], "coordinate": 0},
        {"name": "col", "strategies": ["C", "D"], "coordinate": 1}],
      "game": {"kind": "normal_form",
               "payoffs": {"C|C": [2, 2], "C|D": [0, 3], "D|C": [3, 0]}}})";
    if (run_cli("analyze " + bad.string()).exit_code != 2)
      c.fail("schema errors should exit 2");

    if (run_cli("analyze " + fixtures + "/pd.json --dynamics 5 --start 'X|Y'").exit_code != 3)
      c.fail("semantic errors should exit 3");

    if (run_cli("analyze " + fixtures + "/pd.json --max-profiles 2").exit_code != 4)
      c.fail("cap overruns should exit 4");

    if (run_cli("analyze " + fixtures + "/pd.json --costate regret --oracle").output.find(
            "agreement: true") == std::string::npos)
      c.fail("regret costate should agree with the oracle on the fixture");

    CliResult env = run_shell("DIEGETIC_MAX_PROFILES=2 " + std::string(DIEGETIC_CLI_BIN) +
                              " analyze " + fixtures + "/pd.json");
    if (env.exit_code != 4) c.fail("DIEGETIC_MAX_PROFILES should mirror --max-profiles");

    CliResult sc = run_cli("selfcheck --seed 5 --games 8");
    if (sc.exit_code != 0 || sc.output.find("passed") == std::string::npos)
      c.fail("selfcheck subcommand failed");

    // --explain output names the composed kernel nodes.
    CliResult ex = run_cli("analyze " + fixtures + "/seqgame.json --explain");
    if (ex.exit_code != 0 || ex.output.find("argmax") == std::string::npos ||
        ex.output.find("partial_") == std::string::npos ||
        ex.output.find("precompose") == std::string::npos)
      c.fail("--explain output lacks the expected kernel nodes");
  }
  c.finish();
}

}  // namespace

int main() {
  criterion1_theorem_equivalence();
  criterion2_classic_fixtures();
  criterion3_lax_coherence();
  criterion4_sequential_game();
  criterion5_costate_equivalence();
  criterion6_category_laws();
  criterion7_cli_contract();

  if (g_failures) {
    std::cout << g_failures << " criterion(s) failed" << std::endl;
    return 1;
  }
  std::cout << "all criteria passed" << std::endl;
  return 0;
}
