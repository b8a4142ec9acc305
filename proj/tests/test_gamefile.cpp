#include <catch2/catch_amalgamated.hpp>

#include "diegetic/gamefile.hpp"

using namespace diegetic;

namespace {

const char* kMinimal = R"({
  "version": 1,
  "payoff_dim": 1,
  "players": [{"name": "only", "strategies": ["go"], "coordinate": 0}],
  "game": {"kind": "normal_form", "payoffs": {"go": [0]}}
})";

const char* kPd = R"({
  "version": 1,
  "payoff_dim": 2,
  "players": [
    {"name": "row", "strategies": ["C", "D"], "coordinate": 0},
    {"name": "col", "strategies": ["C", "D"], "coordinate": 1}
  ],
  "game": {
    "kind": "normal_form",
    "payoffs": {"C|C": [2, 2], "C|D": [0, 3], "D|C": [3, 0], "D|D": [1, 1]}
  }
})";

}  // namespace

TEST_CASE("profile keys escape the delimiter") {
  CHECK(join_profile_key({"C", "D"}) == "C|D");
  CHECK(split_profile_key("C|D") == std::vector<std::string>{"C", "D"});
  CHECK(split_profile_key(join_profile_key({"a|b", "c\\d"})) ==
        std::vector<std::string>{"a|b", "c\\d"});
  CHECK(join_profile_key({"x", "y"}, ';') == "x;y");
}

TEST_CASE("a minimal one-player file parses to a unique profile") {
  GameFile g = parse_game_text(kMinimal);
  REQUIRE(g.kind == GameFile::Kind::normal_form);
  CHECK(g.normal->payoff.dom().size() == 1);
  CHECK(g.players.size() == 1);
}

TEST_CASE("the prisoners dilemma fixture parses and round-trips") {
  GameFile g = parse_game_text(kPd);
  REQUIRE(g.normal.has_value());
  CHECK(g.normal->payoff.at_label("(C,D)") == PayVec{Rational(0), Rational(3)});

  std::string canonical = serialize_game(g).dump(2);
  GameFile again = parse_game_text(canonical);
  CHECK(serialize_game(again).dump(2) == canonical);
  CHECK(again.normal->payoff == g.normal->payoff);
}

TEST_CASE("schema violations carry field paths") {
  auto expect_schema_error = [](const std::string& text, const std::string& needle) {
    try {
      parse_game_text(text);
      FAIL("expected schema_error for " + needle);
    } catch (const schema_error& e) {
      INFO(e.what());
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };

  SECTION("missing profile") {
    expect_schema_error(R"({
      "version": 1, "payoff_dim": 2,
      "players": [
        {"name": "row", "strategies": ["C", "D"], "coordinate": 0},
        {"name": "col", "strategies": ["C", "D"], "coordinate": 1}
      ],
      "game": {"kind": "normal_form",
               "payoffs": {"C|C": [2, 2], "C|D": [0, 3], "D|C": [3, 0]}}
    })", "missing profile 'D|D'");
  }

  SECTION("duplicate strategy labels") {
    expect_schema_error(R"({
      "version": 1, "payoff_dim": 1,
      "players": [{"name": "p", "strategies": ["x", "x"], "coordinate": 0}],
      "game": {"kind": "normal_form", "payoffs": {"x": [0]}}
    })", "players[0].strategies");
  }

  SECTION("bad rational literal") {
    expect_schema_error(R"({
      "version": 1, "payoff_dim": 1,
      "players": [{"name": "p", "strategies": ["x"], "coordinate": 0}],
      "game": {"kind": "normal_form", "payoffs": {"x": ["1.5"]}}
    })", "bad rational literal");
  }

  SECTION("floats are rejected") {
    expect_schema_error(R"({
      "version": 1, "payoff_dim": 1,
      "players": [{"name": "p", "strategies": ["x"], "coordinate": 0}],
      "game": {"kind": "normal_form", "payoffs": {"x": [1.5]}}
    })", "expected an integer");
  }

  SECTION("unknown strategy in a key") {
    expect_schema_error(R"({
      "version": 1, "payoff_dim": 1,
      "players": [{"name": "p", "strategies": ["x"], "coordinate": 0}],
      "game": {"kind": "normal_form", "payoffs": {"y": [1]}}
    })", "not a strategy");
  }

  SECTION("coordinate out of range") {
    expect_schema_error(R"({
      "version": 1, "payoff_dim": 1,
      "players": [{"name": "p", "strategies": ["x"], "coordinate": 3}],
      "game": {"kind": "normal_form", "payoffs": {"x": [1]}}
    })", "coordinate");
  }

  SECTION("invalid JSON") {
    expect_schema_error("{nope", "invalid JSON");
  }
}

TEST_CASE("rationals accept p/q strings and big integers") {
  GameFile g = parse_game_text(R"({
    "version": 1, "payoff_dim": 1,
    "players": [{"name": "p", "strategies": ["x", "y"], "coordinate": 0}],
    "game": {"kind": "normal_form",
             "payoffs": {"x": ["2/4"], "y": ["123456789012345678901234567890"]}}
  })");
  CHECK(g.normal->payoff.at_label("x") == PayVec{Rational(1, 2)});
  CHECK(rational_to_string(g.normal->payoff.at_label("y")[0]) ==
        "123456789012345678901234567890");

  // Canonical serialization keeps exactness: big ints stay strings.
  Json out = serialize_game(g);
  CHECK(out["game"]["payoffs"]["y"][0].is_string());
  CHECK(out["game"]["payoffs"]["x"][0] == Json("1/2"));
}

TEST_CASE("arena files parse, derive stage sets, and round-trip") {
  GameFile g = parse_game_file(std::string(DIEGETIC_FIXTURES_DIR) + "/seqgame.json");
  REQUIRE(g.kind == GameFile::Kind::arena);
  REQUIRE(g.arena->stages.size() == 3);
  CHECK(g.arena->stages[1].play.dom().right_factor().elements() ==
        std::vector<std::string>{"m0", "m1"});
  CHECK(g.arena->outcomes.size() == 4);
  CHECK(g.initial_state_label == "x0");

  std::string canonical = serialize_game(g).dump(2);
  GameFile again = parse_game_text(canonical);
  CHECK(serialize_game(again).dump(2) == canonical);

  SECTION("the induced normal form runs the stages forward") {
    NormalFormGame nf = induced_normal_form(g);
    // (b, r): m1 -> n0 -> z2.
    CHECK(nf.payoff.at_label("(b,r)") == PayVec{Rational(2), Rational(3)});
    CHECK(nf.payoff.at_label("(a,l)") == PayVec{Rational(3), Rational(1)});
  }

  SECTION("the full pipeline finds the backward-induction equilibrium") {
    ClosedGame cg = closed_game_for(g);
    auto fps = nash_fixpoints(cg);
    REQUIRE(fps.size() == 1);
    CHECK(cg.profiles.label(fps[0]) == "(b,r)");
    CHECK(fps == oracle_nash(induced_normal_form(g)));

    // Same answer under the regret costate.
    ClosedGame cg2 = closed_game_for(g, CostateKind::regret);
    CHECK(nash_fixpoints(cg2) == fps);
  }

  SECTION("stage keys must cover the factor-state product") {
    try {
      parse_game_text(R"({
        "version": 1, "payoff_dim": 1,
        "players": [{"name": "p", "strategies": ["a", "b"], "coordinate": 0}],
        "game": {"kind": "arena",
                 "stages": [{"param_factor": "f", "play": {"a|x": "z0"}}],
                 "initial_state": "x",
                 "outcome_payoff": {"z0": [1]}}
      })");
      FAIL("expected schema_error");
    } catch (const schema_error& e) {
      CHECK(std::string(e.what()).find("missing entry") != std::string::npos);
    }
  }

  SECTION("wiring classes must match the player count") {
    try {
      parse_game_text(R"({
        "version": 1, "payoff_dim": 1,
        "players": [{"name": "p", "strategies": ["a"], "coordinate": 0}],
        "game": {"kind": "arena",
                 "stages": [{"param_factor": "f1", "play": {"a|x": "y0"}},
                             {"param_factor": "f2", "play": {"a|y0": "z0"}}],
                 "initial_state": "x",
                 "outcome_payoff": {"z0": [1]}}
      })");
      FAIL("expected schema_error");
    } catch (const schema_error& e) {
      CHECK(std::string(e.what()).find("wiring classes") != std::string::npos);
    }
  }
}

TEST_CASE("explain kernels contain the advertised node kinds") {
  GameFile g = parse_game_text(kPd);
  std::string tree = kernel_to_json(system_kernel_for(g)).dump();
  CHECK(tree.find("\"argmax\"") != std::string::npos);
  CHECK(tree.find("\"precompose\"") != std::string::npos);
  CHECK(tree.find("partial_") != std::string::npos);
  CHECK(tree.find("\"subset_product\"") != std::string::npos);
}
