#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "diegetic/errors.hpp"
#include "diegetic/lens.hpp"

namespace diegetic {

/// Parameter-and-domain boundary of a parametric lens body.
inline LensObj tensor_obj(const LensObj& a, const LensObj& b) {
  return {product(a.pos, b.pos), ValueSpace::pair(a.dir, b.dir)};
}

/// A parametric lens: a lens from (param (x) dom) to cod, with the
/// parameter boundary singled out for composition, tensoring and
/// reparameterisation.
class ParaLens {
public:
  ParaLens(LensObj param, LensObj dom, LensObj cod, Lens body)
      : param_(std::move(param)), dom_(std::move(dom)), cod_(std::move(cod)),
        body_(std::move(body)) {
    LensObj want = tensor_obj(param_, dom_);
    if (body_.dom() != want)
      throw boundary_error("para lens: body domain " + body_.dom().describe() +
                           ", expected " + want.describe());
    if (body_.cod() != cod_)
      throw boundary_error("para lens: body codomain " + body_.cod().describe() +
                           ", expected " + cod_.describe());
  }

  const LensObj& param() const { return param_; }
  const LensObj& dom() const { return dom_; }
  const LensObj& cod() const { return cod_; }
  const Lens& body() const { return body_; }

private:
  LensObj param_, dom_, cod_;
  Lens body_;
};

namespace detail {

// Direction re-pairing kernels are built against the backward input space
// Pair(Elem(pos), cod.dir); `sel` picks into the direction component.
inline Kernel dir_component(const ValueSpace& in, std::initializer_list<int> path) {
  Kernel k = k_proj2(in);
  for (int step : path) k = k_compose(std::move(k), step == 0 ? k_proj1(k.cod()) : k_proj2(k.cod()));
  return k;
}

}  // namespace detail

/// Relabeling lens ((A (x) B) (x) C) -> (A (x) (B (x) C)): a product
/// re-association on positions with the matching direction re-pairing.
inline Lens assoc_right_lens(const LensObj& a, const LensObj& b, const LensObj& c) {
  LensObj dom = tensor_obj(tensor_obj(a, b), c);
  LensObj cod = tensor_obj(a, tensor_obj(b, c));
  Table fwd = Table::from_function(dom.pos, cod.pos, [&](std::uint32_t i) {
    auto [ab, ci] = dom.pos.unpair_index(i);
    auto [ai, bi] = dom.pos.left_factor().unpair_index(ab);
    return cod.pos.pair_index(ai, cod.pos.right_factor().pair_index(bi, ci));
  });
  ValueSpace in = bwd_input_space(dom, cod);
  // (da, (db, dc))  ->  ((da, db), dc)
  Kernel da = detail::dir_component(in, {0});
  Kernel db = detail::dir_component(in, {1, 0});
  Kernel dc = detail::dir_component(in, {1, 1});
  Kernel bwd = k_pair(k_pair(std::move(da), std::move(db)), std::move(dc));
  return Lens(dom, cod, std::move(fwd), std::move(bwd));
}

/// Relabeling lens ((A (x) B) (x) (C (x) D)) -> ((A (x) C) (x) (B (x) D)).
inline Lens interchange_lens(const LensObj& a, const LensObj& b, const LensObj& c,
                             const LensObj& d) {
  LensObj dom = tensor_obj(tensor_obj(a, b), tensor_obj(c, d));
  LensObj cod = tensor_obj(tensor_obj(a, c), tensor_obj(b, d));
  Table fwd = Table::from_function(dom.pos, cod.pos, [&](std::uint32_t i) {
    auto [ab, cd] = dom.pos.unpair_index(i);
    auto [ai, bi] = dom.pos.left_factor().unpair_index(ab);
    auto [ci, di] = dom.pos.right_factor().unpair_index(cd);
    return cod.pos.pair_index(cod.pos.left_factor().pair_index(ai, ci),
                              cod.pos.right_factor().pair_index(bi, di));
  });
  ValueSpace in = bwd_input_space(dom, cod);
  // ((da, dc), (db, dd))  ->  ((da, db), (dc, dd))
  Kernel da = detail::dir_component(in, {0, 0});
  Kernel db = detail::dir_component(in, {1, 0});
  Kernel dc = detail::dir_component(in, {0, 1});
  Kernel dd = detail::dir_component(in, {1, 1});
  Kernel bwd = k_pair(k_pair(std::move(da), std::move(db)),
                      k_pair(std::move(dc), std::move(dd)));
  return Lens(dom, cod, std::move(fwd), std::move(bwd));
}

/// Relabeling lens (1 (x) X) -> X.
inline Lens unit_intro_lens(const LensObj& x) {
  LensObj dom = tensor_obj(unit_obj(), x);
  Table fwd = Table::proj_right(dom.pos);
  ValueSpace in = bwd_input_space(dom, x);
  Kernel bwd = k_pair(k_discard(in), k_proj2(in));
  return Lens(dom, x, std::move(fwd), std::move(bwd));
}

/// Wraps a plain lens as a parametric lens with the trivial parameter.
inline ParaLens trivially_parameterised(const Lens& l) {
  Lens body = lens_compose(unit_intro_lens(l.dom()), l);
  return ParaLens(unit_obj(), l.dom(), l.cod(), std::move(body));
}

/// Composite parameter is (Xi x Omega): the second stage's parameter
/// first. Residuals thread through the second stage, then the first.
inline ParaLens para_compose(const ParaLens& g, const ParaLens& h) {
  if (g.cod() != h.dom())
    throw boundary_error("para_compose: " + g.cod().describe() + " against " +
                         h.dom().describe());
  LensObj param = tensor_obj(h.param(), g.param());
  Lens assoc = assoc_right_lens(h.param(), g.param(), g.dom());
  Lens stage1 = lens_tensor(identity_lens(h.param()), g.body());
  Lens body = lens_compose(lens_compose(assoc, stage1), h.body());
  return ParaLens(std::move(param), g.dom(), h.cod(), std::move(body));
}

/// Side-by-side players: parameters, domains and codomains multiply.
inline ParaLens para_tensor(const ParaLens& g, const ParaLens& h) {
  LensObj param = tensor_obj(g.param(), h.param());
  LensObj dom = tensor_obj(g.dom(), h.dom());
  LensObj cod = tensor_obj(g.cod(), h.cod());
  Lens shuffle = interchange_lens(g.param(), h.param(), g.dom(), h.dom());
  Lens body = lens_compose(shuffle, lens_tensor(g.body(), h.body()));
  return ParaLens(std::move(param), std::move(dom), std::move(cod), std::move(body));
}

/// Rewires the parameter boundary along a lens r with cod(r) = param(g).
inline ParaLens reparameterise(const ParaLens& g, const Lens& r) {
  if (r.cod() != g.param())
    throw boundary_error("reparameterise: lens into " + r.cod().describe() +
                         " against parameter " + g.param().describe());
  Lens body = lens_compose(lens_tensor(r, identity_lens(g.dom())), g.body());
  return ParaLens(r.dom(), g.dom(), g.cod(), std::move(body));
}

/// A closed parametric lens: parameter position to parameter direction.
/// Evaluation runs the forward pass from the state, feeds the costate's
/// backward output into the body, and keeps the parameter residual.
class ResidualMap {
public:
  ResidualMap(ParaLens game, Lens state, Lens costate)
      : game_(std::move(game)), state_(std::move(state)), costate_(std::move(costate)) {
    if (state_.dom() != unit_obj())
      throw boundary_error("close: state must start at the unit object");
    if (state_.cod() != game_.dom())
      throw boundary_error("close: state into " + state_.cod().describe() +
                           " against game domain " + game_.dom().describe());
    if (costate_.dom() != game_.cod())
      throw boundary_error("close: costate from " + costate_.dom().describe() +
                           " against game codomain " + game_.cod().describe());
    if (costate_.cod() != unit_obj())
      throw boundary_error("close: costate must end at the unit object");
  }

  const FinSet& param_set() const { return game_.param().pos; }
  const ValueSpace& param_dir() const { return game_.param().dir; }
  const ParaLens& game() const { return game_; }

  Value eval(std::uint32_t param_index) const {
    const std::uint32_t x = state_.forward_at(0);
    // Body positions enumerate param-major over (param.pos x dom.pos).
    const std::uint32_t pos =
        param_index * static_cast<std::uint32_t>(game_.dom().pos.size()) + x;
    const std::uint32_t y = game_.body().forward_at(pos);
    Value r = costate_.backward_at(y, Value(UnitValue{}));
    Value q = game_.body().backward_at(pos, r);
    return q.first();
  }

  /// Total tabulation as subsets; requires a SubsetsOf parameter direction.
  std::vector<Subset> tabulate_subsets() const {
    if (param_dir().kind() != ValueSpace::Kind::subsets)
      throw boundary_error("tabulate_subsets: parameter direction is " +
                           param_dir().describe());
    std::vector<Subset> out;
    out.reserve(param_set().size());
    for (std::uint32_t i = 0; i < param_set().size(); ++i)
      out.push_back(eval(i).as_subset());
    return out;
  }

private:
  ParaLens game_;
  Lens state_;
  Lens costate_;
};

inline ResidualMap close(const ParaLens& g, const Lens& state, const Lens& costate) {
  return ResidualMap(g, state, costate);
}

}  // namespace diegetic
