#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "diegetic/diegetic.hpp"
#include "diegetic/sampling.hpp"

using namespace diegetic;

namespace {

// Random lifted lenses give a cheap supply of composable test subjects.
Table random_table(const FinSet& dom, const FinSet& cod, std::mt19937& rng) {
  std::uniform_int_distribution<std::uint32_t> d(0, static_cast<std::uint32_t>(cod.size()) - 1);
  return Table::from_function(dom, cod, [&](std::uint32_t) { return d(rng); });
}

}  // namespace

TEST_CASE("lens category laws hold extensionally") {
  FinSet x("X", {"x0", "x1"});
  FinSet y("Y", {"y0", "y1", "y2"});
  FinSet z("Z", {"z0", "z1"});
  std::mt19937 rng(41);
  DirectionSampler cfg;

  for (int trial = 0; trial < 5; ++trial) {
    Lens f = p_star(random_table(x, y, rng), 2);
    Lens g = p_star(random_table(y, z, rng), 2);
    Lens h = p_star(random_table(z, x, rng), 2);

    CHECK(lens_extensional_eq(lens_compose(identity_lens(f.dom()), f), f, cfg));
    CHECK(lens_extensional_eq(lens_compose(f, identity_lens(f.cod())), f, cfg));
    CHECK(lens_extensional_eq(lens_compose(lens_compose(f, g), h),
                              lens_compose(f, lens_compose(g, h)), cfg));
  }
}

TEST_CASE("lifting is functorial: P*(f);P*(g) equals P*(f;g)") {
  FinSet x("X", {"x0", "x1"});
  FinSet y("Y", {"y0", "y1", "y2"});
  FinSet z("Z", {"z0", "z1"});
  std::mt19937 rng(43);
  DirectionSampler cfg;

  for (int trial = 0; trial < 10; ++trial) {
    Table f = random_table(x, y, rng);
    Table g = random_table(y, z, rng);
    Lens piecewise = lens_compose(p_star(f, 1), p_star(g, 1));
    Lens joint = p_star(table_compose(f, g), 1);
    auto rep = lens_extensional_eq(piecewise, joint, cfg);
    INFO(rep.witness);
    REQUIRE(rep.equal);
  }
}

TEST_CASE("composite backward precomposes through both stages") {
  // f: a->d, b->c ; g maps into a payoff-bearing set; the composed
  // backward pass must be u . g . f pointwise.
  FinSet x("X", {"a", "b"});
  FinSet y("Y", {"c", "d"});
  FinSet z("Z", {"e", "f"});
  Table f = Table::from_label_map(x, y, {{"a", "d"}, {"b", "c"}}, "f");
  Table g = Table::from_label_map(y, z, {{"c", "f"}, {"d", "e"}}, "g");

  Lens comp = lens_compose(p_star(f, 1), p_star(g, 1));
  std::mt19937 rng(47);
  std::uniform_int_distribution<int> num(-9, 9);
  for (int trial = 0; trial < 20; ++trial) {
    PayFn u = PayFn::tabulate(z, 1, [&](std::uint32_t) { return PayVec{Rational(num(rng))}; });
    for (std::uint32_t pos = 0; pos < x.size(); ++pos) {
      PayFn got = comp.backward_at(pos, Value(u)).as_payfn();
      PayFn want = precompose(u, table_compose(f, g));
      REQUIRE(got == want);
    }
  }
}

TEST_CASE("tensor acts componentwise and satisfies interchange") {
  FinSet a("A", {"a0", "a1"});
  FinSet b("B", {"b0", "b1"});
  std::mt19937 rng(53);
  DirectionSampler cfg;
  cfg.sample_count = 10;

  SECTION("tensor of selection lenses returns paired argmax subsets") {
    PlayerSpec p1{"P1", a, 0};
    PlayerSpec p2{"P2", b, 1};
    Lens t = lens_tensor(selection_argmax(p1, 2), selection_argmax(p2, 2));
    PayFn ua(a, 2, {{Rational(0), Rational(0)}, {Rational(3), Rational(0)}});
    PayFn ub(b, 2, {{Rational(0), Rational(5)}, {Rational(0), Rational(5)}});
    Value out = t.backward_at(0, Value::make_pair(Value(ua), Value(ub)));
    CHECK(out.first().as_subset().labels() == std::vector<std::string>{"a1"});
    CHECK(out.second().as_subset() == Subset::full(b));
  }

  SECTION("tensor with the unit-object identity only relabels positions") {
    Lens l = p_star(random_table(a, b, rng), 1);
    Lens t = lens_tensor(l, identity_lens(unit_obj()));
    REQUIRE(t.dom().pos.size() == l.dom().pos.size());
    PayFn u = PayFn::tabulate(b, 1, [&](std::uint32_t i) { return PayVec{Rational(i)}; });
    for (std::uint32_t pos = 0; pos < a.size(); ++pos) {
      REQUIRE(t.forward_at(pos) == l.forward_at(pos));
      Value out = t.backward_at(pos, Value::make_pair(Value(u), Value(UnitValue{})));
      REQUIRE(out.first() == l.backward_at(pos, Value(u)));
      REQUIRE(out.second().is_unit());
    }
  }

  SECTION("interchange: (l tensor m);(l' tensor m') = (l;l') tensor (m;m')") {
    FinSet y("Y", {"y0", "y1", "y2"});
    for (int trial = 0; trial < 5; ++trial) {
      Lens l = p_star(random_table(a, y, rng), 1);
      Lens lp = p_star(random_table(y, b, rng), 1);
      Lens m = p_star(random_table(b, y, rng), 1);
      Lens mp = p_star(random_table(y, a, rng), 1);
      Lens lhs = lens_compose(lens_tensor(l, m), lens_tensor(lp, mp));
      Lens rhs = lens_tensor(lens_compose(l, lp), lens_compose(m, mp));
      auto rep = lens_extensional_eq(lhs, rhs, cfg);
      INFO(rep.witness);
      REQUIRE(rep.equal);
    }
  }
}

TEST_CASE("a discarding backward pass absorbs downstream contributions") {
  FinSet x("X", {"x0", "x1"});
  FinSet y("Y", {"y0", "y1"});
  Table f = Table::from_label_map(x, y, {{"x0", "y1"}, {"x1", "y0"}}, "f");

  // l discards its residual into Unit; whatever m contributes backward,
  // the composite output stays the unit value at every input.
  LensObj dom{x, ValueSpace::unit_space()};
  Lens l(dom, {y, ValueSpace::payfn(y, 1)}, f,
         k_discard(bwd_input_space(dom, {y, ValueSpace::payfn(y, 1)})));
  Lens m = p_star(Table::identity(y), 1);
  Lens comp = lens_compose(l, m);
  DirectionSampler cfg;
  for (const auto& dir : sample_directions(comp.cod().dir, cfg))
    for (std::uint32_t pos = 0; pos < x.size(); ++pos)
      CHECK(comp.backward_at(pos, dir).is_unit());
}

TEST_CASE("extensional equality reports witnesses") {
  FinSet x("X", {"x0", "x1"});
  FinSet y("Y", {"y0", "y1"});
  Table f = Table::from_label_map(x, y, {{"x0", "y0"}, {"x1", "y1"}}, "f");
  Table g = Table::from_label_map(x, y, {{"x0", "y0"}, {"x1", "y0"}}, "g");

  SECTION("reflexivity") { CHECK(lens_extensional_eq(p_star(f, 1), p_star(f, 1))); }

  SECTION("differing forward tables") {
    auto rep = lens_extensional_eq(p_star(f, 1), p_star(g, 1));
    CHECK(!rep.equal);
    CHECK(rep.witness == "forward tables differ");
  }

  SECTION("differing backward kernels name a witness position") {
    LensObj dom{x, ValueSpace::payfn(x, 1)};
    LensObj cod{x, ValueSpace::payfn(x, 1)};
    Lens ident = identity_lens(dom);
    // Same forward, different backward: precompose with a swap.
    Table swap = Table::from_label_map(x, x, {{"x0", "x1"}, {"x1", "x0"}}, "swap");
    Lens twisted(dom, cod, Table::identity(x),
                 k_compose(k_proj2(bwd_input_space(dom, cod)), k_precompose(swap, 1)));
    auto rep = lens_extensional_eq(ident, twisted);
    CHECK(!rep.equal);
    CHECK(rep.witness.find("position") != std::string::npos);
  }

  SECTION("boundary mismatch throws") {
    CHECK_THROWS_AS(lens_extensional_eq(p_star(f, 1), identity_lens(LensObj{x, ValueSpace::payfn(x, 1)})),
                    boundary_error);
  }
}

TEST_CASE("direction sampling is deterministic and exhaustive on finite spaces") {
  FinSet x("X", {"x0", "x1", "x2"});
  DirectionSampler cfg;

  auto subsets = sample_directions(ValueSpace::subsets(x), cfg);
  CHECK(subsets.size() == 8);

  auto elems = sample_directions(ValueSpace::elem(x), cfg);
  CHECK(elems.size() == 3);

  auto pays = sample_directions(ValueSpace::pay(2), cfg);
  auto pays2 = sample_directions(ValueSpace::pay(2), cfg);
  REQUIRE(pays.size() == cfg.sample_count);
  for (std::size_t i = 0; i < pays.size(); ++i) REQUIRE(pays[i] == pays2[i]);

  cfg.seed ^= 1;
  auto pays3 = sample_directions(ValueSpace::pay(2), cfg);
  bool any_differ = false;
  for (std::size_t i = 0; i < pays.size(); ++i)
    if (!(pays[i] == pays3[i])) any_differ = true;
  CHECK(any_differ);
}
