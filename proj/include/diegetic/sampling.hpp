#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "diegetic/lens.hpp"
#include "diegetic/value.hpp"

namespace diegetic {

/// Deterministic direction sampling for extensional tests. Finite spaces
/// (Unit, Elem, Subsets, and pairs of finite spaces) are enumerated
/// exhaustively up to max_enumeration; payoff vectors and payoff tables
/// are sampled as small-denominator rationals from the seeded engine.
struct DirectionSampler {
  std::uint64_t seed = 0xd1e6e71cULL;
  std::size_t sample_count = 20;
  std::size_t max_enumeration = 4096;
  int numerator_bound = 9;   // numerators drawn from [-bound, bound]
  int denominator_bound = 4; // denominators drawn from [1, bound]
};

namespace detail {

inline bool space_is_finite(const ValueSpace& sp) {
  switch (sp.kind()) {
    case ValueSpace::Kind::unit:
    case ValueSpace::Kind::elem:
    case ValueSpace::Kind::subsets:
    case ValueSpace::Kind::pay_endo:  // only the identity is represented
      return true;
    case ValueSpace::Kind::pay:
    case ValueSpace::Kind::payfn:
      return false;
    case ValueSpace::Kind::pair:
      return space_is_finite(sp.first()) && space_is_finite(sp.second());
  }
  return false;
}

inline Rational sample_rational(std::mt19937_64& rng, const DirectionSampler& cfg) {
  std::uniform_int_distribution<int> num(-cfg.numerator_bound, cfg.numerator_bound);
  std::uniform_int_distribution<int> den(1, cfg.denominator_bound);
  return Rational(num(rng), den(rng));
}

inline PayVec sample_payvec(std::mt19937_64& rng, const DirectionSampler& cfg, std::size_t n) {
  PayVec v(n);
  for (auto& r : v) r = sample_rational(rng, cfg);
  return v;
}

inline std::vector<Value> enumerate_finite(const ValueSpace& sp, const DirectionSampler& cfg) {
  std::vector<Value> out;
  switch (sp.kind()) {
    case ValueSpace::Kind::unit:
      out.emplace_back(UnitValue{});
      break;
    case ValueSpace::Kind::pay_endo:
      out.emplace_back(PayEndoIdentity{sp.pay_dim()});
      break;
    case ValueSpace::Kind::elem:
      for (std::uint32_t i = 0; i < sp.set().size(); ++i)
        out.emplace_back(FinElem(sp.set(), i));
      break;
    case ValueSpace::Kind::subsets: {
      const std::size_t n = sp.set().size();
      if (n >= 64 || (std::uint64_t{1} << n) > cfg.max_enumeration)
        throw cap_error("subset enumeration over '" + sp.set().name() + "' exceeds cap");
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        std::vector<std::uint32_t> members;
        for (std::uint32_t i = 0; i < n; ++i)
          if (mask & (std::uint64_t{1} << i)) members.push_back(i);
        out.emplace_back(Subset::of(sp.set(), std::move(members)));
      }
      break;
    }
    case ValueSpace::Kind::pair: {
      auto firsts = enumerate_finite(sp.first(), cfg);
      auto seconds = enumerate_finite(sp.second(), cfg);
      if (firsts.size() * seconds.size() > cfg.max_enumeration)
        throw cap_error("pair enumeration exceeds cap");
      for (const auto& a : firsts)
        for (const auto& b : seconds) out.push_back(Value::make_pair(a, b));
      break;
    }
    default:
      throw boundary_error("enumerate_finite: infinite space " + sp.describe());
  }
  return out;
}

inline Value sample_one(const ValueSpace& sp, std::mt19937_64& rng,
                        const DirectionSampler& cfg) {
  switch (sp.kind()) {
    case ValueSpace::Kind::unit:
      return Value(UnitValue{});
    case ValueSpace::Kind::pay_endo:
      return Value(PayEndoIdentity{sp.pay_dim()});
    case ValueSpace::Kind::pay:
      return Value(sample_payvec(rng, cfg, sp.pay_dim()));
    case ValueSpace::Kind::payfn:
      return Value(PayFn::tabulate(sp.set(), sp.pay_dim(), [&](std::uint32_t) {
        return sample_payvec(rng, cfg, sp.pay_dim());
      }));
    case ValueSpace::Kind::elem: {
      std::uniform_int_distribution<std::uint32_t> d(
          0, static_cast<std::uint32_t>(sp.set().size()) - 1);
      return Value(FinElem(sp.set(), d(rng)));
    }
    case ValueSpace::Kind::subsets: {
      std::vector<std::uint32_t> members;
      std::uniform_int_distribution<int> coin(0, 1);
      for (std::uint32_t i = 0; i < sp.set().size(); ++i)
        if (coin(rng)) members.push_back(i);
      return Value(Subset::of(sp.set(), std::move(members)));
    }
    case ValueSpace::Kind::pair:
      return Value::make_pair(sample_one(sp.first(), rng, cfg),
                              sample_one(sp.second(), rng, cfg));
  }
  throw boundary_error("sample_one: unreachable");
}

}  // namespace detail

/// All test directions for a space: exhaustive when finite, seeded samples
/// otherwise. The result depends only on the space and the sampler.
inline std::vector<Value> sample_directions(const ValueSpace& sp, const DirectionSampler& cfg) {
  if (detail::space_is_finite(sp)) return detail::enumerate_finite(sp, cfg);
  std::mt19937_64 rng(cfg.seed);
  std::vector<Value> out;
  out.reserve(cfg.sample_count);
  for (std::size_t i = 0; i < cfg.sample_count; ++i)
    out.push_back(detail::sample_one(sp, rng, cfg));
  return out;
}

/// Outcome of an extensional comparison. When unequal, `witness` holds a
/// human-readable description of one disagreeing input.
struct ExtEqReport {
  bool equal = true;
  std::string witness;

  explicit operator bool() const { return equal; }
};

/// Extensional lens equality: identical forward tables, and backward
/// agreement on every position paired with every sampled direction.
inline ExtEqReport lens_extensional_eq(const Lens& l, const Lens& m,
                                       const DirectionSampler& cfg = {}) {
  if (l.dom() != m.dom() || l.cod() != m.cod())
    throw boundary_error("lens_extensional_eq: boundaries differ: " + l.dom().describe() +
                         "->" + l.cod().describe() + " vs " + m.dom().describe() + "->" +
                         m.cod().describe());
  if (l.forward() != m.forward())
    return {false, "forward tables differ"};
  auto dirs = sample_directions(l.cod().dir, cfg);
  for (std::uint32_t x = 0; x < l.dom().pos.size(); ++x) {
    for (const auto& r : dirs) {
      Value a = l.backward_at(x, r);
      Value b = m.backward_at(x, r);
      if (a != b)
        return {false, "at position '" + l.dom().pos.label(x) + "', direction " +
                           r.describe() + ": " + a.describe() + " vs " + b.describe()};
    }
  }
  return {true, ""};
}

}  // namespace diegetic
