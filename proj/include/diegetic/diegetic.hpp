#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "diegetic/errors.hpp"
#include "diegetic/lens.hpp"
#include "diegetic/para.hpp"

namespace diegetic {

/// One player: a named strategy set and the payoff coordinate the player
/// maximizes.
struct PlayerSpec {
  std::string name;
  FinSet strategies;
  std::size_t payoff_coordinate = 0;
};

/// A staged play description. Stage k maps (factor_k x state_k) to the
/// next state set; wiring classes identify parameter factors that are
/// copies of one strategy space (the same player moving again).
struct ArenaSpec {
  struct Stage {
    std::string factor_name;
    FinSet factor;  // the stage's parameter factor
    Table play;     // domain: product(factor, states_k)
  };

  std::vector<Stage> stages;
  std::vector<std::vector<std::string>> wiring;  // classes of factor names
  FinSet initial_states;
  FinSet outcomes;
};

/// Lifts a plain function to the lens whose backward pass precomposes
/// payoff functions with it.
inline Lens p_star(const Table& f, std::size_t dim) {
  LensObj dom{f.dom(), ValueSpace::payfn(f.dom(), dim)};
  LensObj cod{f.cod(), ValueSpace::payfn(f.cod(), dim)};
  ValueSpace in = bwd_input_space(dom, cod);
  Kernel bwd = k_compose(k_proj2(in), k_precompose(f, dim));
  return Lens(std::move(dom), std::move(cod), f, std::move(bwd));
}

/// (1, Unit) -> (1, Pay): forward is the identity on the unit position,
/// backward discards the payoff vector.
inline Lens unitor(std::size_t dim) {
  LensObj dom = unit_obj();
  LensObj cod{FinSet::unit(), ValueSpace::pay(dim)};
  ValueSpace in = bwd_input_space(dom, cod);
  return Lens(dom, cod, Table::identity(FinSet::unit()), k_discard(in));
}

/// The laxator of the lifting: forward identity on X x Y, backward splits
/// a joint payoff function into its two partial evaluations at the
/// residual position. Received by players, these are exactly the
/// unilateral-deviation payoff functions.
inline Lens nashator(const FinSet& x, const FinSet& y, std::size_t dim) {
  FinSet xy = product(x, y);
  LensObj dom{xy, ValueSpace::pair(ValueSpace::payfn(x, dim), ValueSpace::payfn(y, dim))};
  LensObj cod{xy, ValueSpace::payfn(xy, dim)};
  ValueSpace in = bwd_input_space(dom, cod);
  Kernel pos = k_proj1(in);
  Kernel u = k_proj2(in);
  Kernel xbar = k_compose(pos, k_map_elem(Table::proj_left(xy)));
  Kernel ybar = k_compose(pos, k_map_elem(Table::proj_right(xy)));
  Kernel bwd = k_pair(k_compose(k_pair(u, std::move(ybar)), k_partial_right(xy, dim)),
                      k_compose(k_pair(u, std::move(xbar)), k_partial_left(xy, dim)));
  return Lens(std::move(dom), std::move(cod), Table::identity(xy), std::move(bwd));
}

namespace detail {

// Backward kernel of the n-ary Nashator over the right-nested product:
// component i is the unilateral-deviation function in coordinate i.
inline Kernel nashator_n_kernel(const FinSet& prod, std::size_t count, std::size_t dim) {
  ValueSpace in = ValueSpace::pair(ValueSpace::elem(prod), ValueSpace::payfn(prod, dim));
  if (count == 1) return k_proj2(in);
  Kernel pos = k_proj1(in);
  Kernel u = k_proj2(in);
  Kernel head_bar = k_compose(pos, k_map_elem(Table::proj_left(prod)));
  Kernel rest_bar = k_compose(pos, k_map_elem(Table::proj_right(prod)));
  Kernel head = k_compose(k_pair(u, std::move(rest_bar)), k_partial_right(prod, dim));
  Kernel rest_fn = k_compose(k_pair(u, std::move(head_bar)), k_partial_left(prod, dim));
  Kernel rest_in = k_pair(k_compose(pos, k_map_elem(Table::proj_right(prod))), rest_fn);
  Kernel rest = k_compose(std::move(rest_in),
                          nashator_n_kernel(prod.right_factor(), count - 1, dim));
  return k_pair(std::move(head), std::move(rest));
}

inline ValueSpace payfn_tuple_space(const std::vector<FinSet>& sets, std::size_t dim) {
  ValueSpace acc = ValueSpace::payfn(sets.back(), dim);
  for (std::size_t i = sets.size() - 1; i-- > 0;)
    acc = ValueSpace::pair(ValueSpace::payfn(sets[i], dim), std::move(acc));
  return acc;
}

inline ValueSpace subsets_tuple_space(const std::vector<FinSet>& sets) {
  ValueSpace acc = ValueSpace::subsets(sets.back());
  for (std::size_t i = sets.size() - 1; i-- > 0;)
    acc = ValueSpace::pair(ValueSpace::subsets(sets[i]), std::move(acc));
  return acc;
}

}  // namespace detail

/// Right-nested fold of binary Nashators: the i-th backward component is
/// the payoff function of unilateral deviations in slot i.
inline Lens nashator_n(const std::vector<FinSet>& omegas, std::size_t dim) {
  if (omegas.empty()) throw boundary_error("nashator_n: empty factor list");
  FinSet prod = product_all(omegas);
  LensObj dom{prod, detail::payfn_tuple_space(omegas, dim)};
  LensObj cod{prod, ValueSpace::payfn(prod, dim)};
  Kernel bwd = detail::nashator_n_kernel(prod, omegas.size(), dim);
  return Lens(std::move(dom), std::move(cod), Table::identity(prod), std::move(bwd));
}

/// The workhorse: lifts a play function with its parameter boundary split
/// out. Backward sends (omega, x, u) to the pair of payoff functions
/// u(play(-, x)) over the parameter and u(play(omega, -)) over the state;
/// each slot varies while the other stays fixed at the residual.
inline ParaLens para_lift(const Table& play, const FinSet& omega, const FinSet& x,
                          std::size_t dim) {
  if (omega.empty()) throw boundary_error("para_lift: empty parameter set");
  FinSet ox = play.dom();
  if (!ox.is_product() || ox.left_factor() != omega || ox.right_factor() != x)
    throw boundary_error("para_lift: play domain '" + ox.name() +
                         "' is not the product of the declared parameter and state sets");
  LensObj param{omega, ValueSpace::payfn(omega, dim)};
  LensObj dom{x, ValueSpace::payfn(x, dim)};
  LensObj cod{play.cod(), ValueSpace::payfn(play.cod(), dim)};
  ValueSpace in = bwd_input_space(tensor_obj(param, dom), cod);
  Kernel pos = k_proj1(in);
  Kernel composed = k_compose(k_proj2(in), k_precompose(play, dim));
  Kernel omega_bar = k_compose(pos, k_map_elem(Table::proj_left(ox)));
  Kernel x_bar = k_compose(pos, k_map_elem(Table::proj_right(ox)));
  Kernel bwd =
      k_pair(k_compose(k_pair(composed, std::move(x_bar)), k_partial_right(ox, dim)),
             k_compose(k_pair(composed, std::move(omega_bar)), k_partial_left(ox, dim)));
  Lens body(tensor_obj(param, dom), cod, play, std::move(bwd));
  return ParaLens(std::move(param), std::move(dom), std::move(cod), std::move(body));
}

namespace detail {

// Wiring classes in order of first occurrence; unlisted factors become
// singleton classes.
inline std::vector<std::vector<std::size_t>> wiring_classes(const ArenaSpec& spec) {
  std::map<std::string, std::size_t> class_of;
  std::vector<std::vector<std::size_t>> classes;
  auto class_for = [&](const std::string& name) -> std::size_t {
    auto it = class_of.find(name);
    if (it != class_of.end()) return it->second;
    std::size_t id = classes.size();
    classes.emplace_back();
    class_of.emplace(name, id);
    return id;
  };
  std::map<std::string, std::string> rep;  // factor name -> class name
  for (const auto& group : spec.wiring) {
    if (group.empty()) throw schema_error("empty wiring class");
    for (const auto& f : group) {
      if (rep.count(f)) throw schema_error("factor '" + f + "' appears in two wiring classes");
      bool known = false;
      for (const auto& st : spec.stages) known = known || st.factor_name == f;
      if (!known) throw schema_error("wired factor '" + f + "' is not a stage factor");
      rep[f] = group.front();
    }
  }
  for (std::size_t k = 0; k < spec.stages.size(); ++k) {
    const std::string& f = spec.stages[k].factor_name;
    auto it = rep.find(f);
    classes[class_for(it == rep.end() ? f : it->second)].push_back(k);
  }
  return classes;
}

}  // namespace detail

/// Builds the arena of a staged game: tabulates the monolithic play
/// function over the product of all stage factors, lifts it once, and
/// merges cloned factors by reparameterising along the lifted copy map.
/// The parameter direction stays a joint payoff table (coalition form);
/// splitting into per-player feedback happens in assemble_players.
inline ParaLens lift_arena(const ArenaSpec& spec, std::size_t dim) {
  if (spec.stages.empty()) throw boundary_error("lift_arena: no stages");
  // Validate the stage chain.
  FinSet state = spec.initial_states;
  for (std::size_t k = 0; k < spec.stages.size(); ++k) {
    const auto& st = spec.stages[k];
    const FinSet& d = st.play.dom();
    if (!d.is_product() || d.left_factor() != st.factor || d.right_factor() != state)
      throw boundary_error("lift_arena: stage " + std::to_string(k) + " play domain '" +
                           d.name() + "' does not chain from the previous stage");
    state = st.play.cod();
  }
  if (state != spec.outcomes)
    throw boundary_error("lift_arena: final stage lands in '" + state.name() +
                         "', declared outcomes are '" + spec.outcomes.name() + "'");

  auto classes = detail::wiring_classes(spec);
  for (const auto& cls : classes) {
    const FinSet& first = spec.stages[cls.front()].factor;
    for (std::size_t k : cls)
      if (spec.stages[k].factor != first)
        throw boundary_error("lift_arena: wired factors '" +
                             spec.stages[cls.front()].factor_name + "' and '" +
                             spec.stages[k].factor_name + "' have different strategy sets");
  }

  std::vector<FinSet> stage_factors;
  for (const auto& st : spec.stages) stage_factors.push_back(st.factor);
  FinSet full = product_all(stage_factors);

  // Monolithic play over the full factor product.
  FinSet dom = product(full, spec.initial_states);
  Table mono = Table::from_function(dom, spec.outcomes, [&](std::uint32_t i) {
    auto [p, x] = dom.unpair_index(i);
    auto coords = split_index(full, p, stage_factors.size());
    std::uint32_t s = x;
    for (std::size_t k = 0; k < spec.stages.size(); ++k)
      s = spec.stages[k].play.apply(spec.stages[k].play.dom().pair_index(coords[k], s));
    return s;
  }, "play");
  ParaLens lifted = para_lift(mono, full, spec.initial_states, dim);

  // Copy map: one coordinate per wiring class, duplicated into the stages.
  std::vector<FinSet> class_sets;
  for (const auto& cls : classes) class_sets.push_back(spec.stages[cls.front()].factor);
  FinSet reduced = product_all(class_sets);
  std::vector<std::size_t> class_of_stage(spec.stages.size());
  for (std::size_t c = 0; c < classes.size(); ++c)
    for (std::size_t k : classes[c]) class_of_stage[k] = c;
  Table copy = Table::from_function(reduced, full, [&](std::uint32_t i) {
    auto picks = split_index(reduced, i, class_sets.size());
    std::vector<std::uint32_t> coords(spec.stages.size());
    for (std::size_t k = 0; k < spec.stages.size(); ++k) coords[k] = picks[class_of_stage[k]];
    return join_index(full, coords);
  }, "copy");
  if (copy.is_identity()) return lifted;
  return reparameterise(lifted, p_star(copy, dim));
}

/// Costate returning the fixed payoff function, ignoring the outcome.
inline Lens costate_const(const PayFn& u) {
  LensObj dom{u.dom(), ValueSpace::payfn(u.dom(), u.dim())};
  LensObj cod = unit_obj();
  ValueSpace in = bwd_input_space(dom, cod);
  Kernel bwd = k_compose(k_const_idfn(in, u.dim()), k_precompose(u));
  return Lens(std::move(dom), cod, Table::constant(u.dom(), FinSet::unit(), 0),
              std::move(bwd));
}

/// Regret costate: returns z |-> u(z) - u(outcome), the payoff increment
/// available from deviating.
inline Lens costate_regret(const PayFn& u) {
  LensObj dom{u.dom(), ValueSpace::payfn(u.dom(), u.dim())};
  LensObj cod = unit_obj();
  ValueSpace in = bwd_input_space(dom, cod);
  Kernel const_u = k_compose(k_const_idfn(in, u.dim()), k_precompose(u));
  Kernel bwd = k_compose(k_pair(std::move(const_u), k_proj1(in)),
                         k_subtract_at(u.dom(), u.dim()));
  return Lens(std::move(dom), cod, Table::constant(u.dom(), FinSet::unit(), 0),
              std::move(bwd));
}

/// The trivially parameterised state lens picking one initial position.
inline Lens state(const FinSet& x, std::uint32_t point, std::size_t dim) {
  if (point >= x.size())
    throw element_error("state: index " + std::to_string(point) + " outside '" + x.name() +
                        "'");
  LensObj cod{x, ValueSpace::payfn(x, dim)};
  ValueSpace in = bwd_input_space(unit_obj(), cod);
  return Lens(unit_obj(), std::move(cod), Table::constant(FinSet::unit(), x, point),
              k_discard(in));
}

inline Lens state(const FinSet& x, const std::string& label, std::size_t dim) {
  return state(x, x.index_of(label), dim);
}

/// Argmax selection lens for one player: backward returns the full set of
/// maximizers of the player's payoff coordinate. The current strategy is
/// ignored (non-parametric selection).
inline Lens selection_argmax(const PlayerSpec& p, std::size_t dim) {
  if (p.strategies.empty())
    throw boundary_error("selection_argmax: player '" + p.name + "' has no strategies");
  if (p.payoff_coordinate >= dim)
    throw boundary_error("selection_argmax: coordinate " +
                         std::to_string(p.payoff_coordinate) + " out of range for '" +
                         p.name + "'");
  LensObj dom{p.strategies, ValueSpace::subsets(p.strategies)};
  LensObj cod{p.strategies, ValueSpace::payfn(p.strategies, dim)};
  ValueSpace in = bwd_input_space(dom, cod);
  Kernel bwd = k_compose(k_proj2(in), k_argmax(p.strategies, dim, p.payoff_coordinate));
  return Lens(std::move(dom), std::move(cod), Table::identity(p.strategies), std::move(bwd));
}

namespace detail {

// Backward kernel turning a tuple of per-factor subsets into the subset
// of the right-nested product.
inline Kernel subsets_product_kernel(const FinSet& prod, const ValueSpace& in,
                                     std::size_t count) {
  Kernel dirs = k_proj2(in);
  if (count == 1) return dirs;
  Kernel head = k_compose(dirs, k_proj1(dirs.cod()));
  Kernel rest_in = k_pair(k_compose(k_proj1(in), k_map_elem(Table::proj_right(prod))),
                          k_compose(dirs, k_proj2(dirs.cod())));
  Kernel rest = k_compose(rest_in, subsets_product_kernel(prod.right_factor(),
                                                          rest_in.cod(), count - 1));
  return k_compose(k_pair(std::move(head), std::move(rest)), k_subset_product(prod));
}

}  // namespace detail

/// The powerset-product lens: identity forward, backward takes a tuple of
/// per-player strategy subsets to their product inside the joint space.
inline Lens subsets_product(const std::vector<FinSet>& omegas) {
  if (omegas.empty()) throw boundary_error("subsets_product: empty factor list");
  FinSet prod = product_all(omegas);
  LensObj dom{prod, ValueSpace::subsets(prod)};
  LensObj cod{prod, detail::subsets_tuple_space(omegas)};
  ValueSpace in = bwd_input_space(dom, cod);
  Kernel bwd = detail::subsets_product_kernel(prod, in, omegas.size());
  return Lens(std::move(dom), std::move(cod), Table::identity(prod), std::move(bwd));
}

/// The full player system over a joint strategy space:
/// subsets_product ; (tensor of selection lenses) ; nashator_n.
/// Backward sends (profile, U) to the product over players of the argmax
/// of U's unilateral-deviation function in that player's coordinate.
inline Lens assemble_players(const std::vector<PlayerSpec>& players, std::size_t dim) {
  if (players.empty()) throw boundary_error("assemble_players: no players");
  std::vector<bool> seen(dim, false);
  std::vector<FinSet> omegas;
  for (const auto& p : players) {
    if (p.payoff_coordinate >= dim)
      throw boundary_error("assemble_players: coordinate " +
                           std::to_string(p.payoff_coordinate) + " out of range");
    if (seen[p.payoff_coordinate])
      throw boundary_error("assemble_players: players share coordinate " +
                           std::to_string(p.payoff_coordinate));
    seen[p.payoff_coordinate] = true;
    omegas.push_back(p.strategies);
  }
  Lens sel = selection_argmax(players.back(), dim);
  for (std::size_t i = players.size() - 1; i-- > 0;)
    sel = lens_tensor(selection_argmax(players[i], dim), sel);
  return lens_compose(lens_compose(subsets_product(omegas), sel), nashator_n(omegas, dim));
}

}  // namespace diegetic
