#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "diegetic/errors.hpp"
#include "diegetic/finset.hpp"
#include "diegetic/table.hpp"
#include "diegetic/value.hpp"

namespace diegetic {

/// A backward map between value spaces, represented as a finite
/// composition tree over primitive constructors. Every node is
/// boundary-typed at construction; evaluation is total on well-typed
/// inputs and deterministic.
///
/// precompose carries either a Table (u |-> u . f on payoff tables) or a
/// PayFn (w |-> w . u, consuming the symbolic payoff-endomap space).
class Kernel {
public:
  enum class Tag {
    id,
    compose,
    pair,
    proj1,
    proj2,
    const_pay,
    precompose,
    partial_left,
    partial_right,
    subtract_at,
    const_idfn,
    argmax,
    subset_product,
    discard,
    map_elem,
  };

  Kernel() = default;

  Tag tag() const { return node_->tag; }
  const ValueSpace& dom() const { return node_->dom; }
  const ValueSpace& cod() const { return node_->cod; }

  std::size_t child_count() const { return node_->kids.size(); }
  const Kernel& child(std::size_t i) const { return node_->kids.at(i); }

  const Table& table() const { return *node_->table; }
  const PayFn& payfn() const { return *node_->payfn; }
  const PayVec& payvec() const { return *node_->payvec; }
  std::size_t coord() const { return node_->coord; }
  std::size_t pay_dim() const { return node_->dim; }
  const FinSet& carrier() const { return *node_->set; }

  /// Evaluates the kernel on a value of its domain space.
  Value operator()(const Value& v) const { return eval(v); }

  Value eval(const Value& v) const {
    switch (node_->tag) {
      case Tag::id:
        return v;
      case Tag::compose:
        return node_->kids[1].eval(node_->kids[0].eval(v));
      case Tag::pair:
        return Value::make_pair(node_->kids[0].eval(v), node_->kids[1].eval(v));
      case Tag::proj1:
        return v.first();
      case Tag::proj2:
        return v.second();
      case Tag::const_pay:
        return Value(*node_->payvec);
      case Tag::precompose:
        if (node_->table) return Value(precompose(v.as_payfn(), *node_->table));
        // Symbolic endomap input: the only inhabitant is the identity.
        v.as_pay_endo();
        return Value(*node_->payfn);
      case Tag::partial_left:
        return Value(partial_eval_left(v.first().as_payfn(), v.second().as_elem()));
      case Tag::partial_right:
        return Value(partial_eval_right(v.first().as_payfn(), v.second().as_elem()));
      case Tag::subtract_at:
        return Value(subtract_at(v.first().as_payfn(), v.second().as_elem()));
      case Tag::const_idfn:
        return Value(PayEndoIdentity{node_->dim});
      case Tag::argmax:
        return Value(argmax_coord(v.as_payfn(), node_->coord));
      case Tag::subset_product:
        return Value(subset_product(*node_->set, v.first().as_subset(), v.second().as_subset()));
      case Tag::discard:
        return Value(UnitValue{});
      case Tag::map_elem:
        return Value(FinElem(node_->table->cod(), node_->table->apply(v.as_elem().index)));
    }
    throw boundary_error("kernel: unreachable tag");
  }

  static const char* tag_name(Tag t) {
    switch (t) {
      case Tag::id: return "id";
      case Tag::compose: return "compose";
      case Tag::pair: return "pair";
      case Tag::proj1: return "proj1";
      case Tag::proj2: return "proj2";
      case Tag::const_pay: return "const_pay";
      case Tag::precompose: return "precompose";
      case Tag::partial_left: return "partial_left";
      case Tag::partial_right: return "partial_right";
      case Tag::subtract_at: return "subtract_at";
      case Tag::const_idfn: return "const_idfn";
      case Tag::argmax: return "argmax";
      case Tag::subset_product: return "subset_product";
      case Tag::discard: return "discard";
      case Tag::map_elem: return "map_elem";
    }
    return "?";
  }

  struct Node {
    Tag tag;
    ValueSpace dom, cod;
    std::vector<Kernel> kids;
    std::optional<Table> table;
    std::optional<PayFn> payfn;
    std::optional<PayVec> payvec;
    std::optional<FinSet> set;
    std::size_t coord = 0;
    std::size_t dim = 0;
  };

  explicit Kernel(Node n) : node_(std::make_shared<const Node>(std::move(n))) {}

private:
  std::shared_ptr<const Node> node_;
};

// ---- smart constructors (each validates its boundary) ----

inline Kernel k_identity(ValueSpace sp) {
  Kernel::Node n{Kernel::Tag::id, sp, sp, {}, {}, {}, {}, {}, 0, 0};
  return Kernel(std::move(n));
}

inline Kernel k_compose(Kernel a, Kernel b) {
  if (a.cod() != b.dom())
    throw boundary_error("kernel compose: " + a.cod().describe() + " then " +
                         b.dom().describe());
  Kernel::Node n{Kernel::Tag::compose, a.dom(), b.cod(), {std::move(a), std::move(b)},
                 {},                   {},      {},      {},
                 0,                    0};
  return Kernel(std::move(n));
}

/// Fan-out: both children consume the same input.
inline Kernel k_pair(Kernel a, Kernel b) {
  if (a.dom() != b.dom())
    throw boundary_error("kernel pair: domains " + a.dom().describe() + " vs " +
                         b.dom().describe());
  ValueSpace cod = ValueSpace::pair(a.cod(), b.cod());
  Kernel::Node n{Kernel::Tag::pair, a.dom(), cod, {std::move(a), std::move(b)},
                 {},                {},      {},  {},
                 0,                 0};
  return Kernel(std::move(n));
}

inline Kernel k_proj1(const ValueSpace& pair_space) {
  ValueSpace cod = pair_space.first();
  Kernel::Node n{Kernel::Tag::proj1, pair_space, cod, {}, {}, {}, {}, {}, 0, 0};
  return Kernel(std::move(n));
}

inline Kernel k_proj2(const ValueSpace& pair_space) {
  ValueSpace cod = pair_space.second();
  Kernel::Node n{Kernel::Tag::proj2, pair_space, cod, {}, {}, {}, {}, {}, 0, 0};
  return Kernel(std::move(n));
}

inline Kernel k_const_pay(ValueSpace dom, PayVec v) {
  ValueSpace cod = ValueSpace::pay(v.size());
  Kernel::Node n{Kernel::Tag::const_pay, std::move(dom), cod, {}, {}, {}, std::move(v),
                 {},                     0,              0};
  return Kernel(std::move(n));
}

/// u |-> u . f, on tabulated payoff functions.
inline Kernel k_precompose(Table f, std::size_t dim) {
  ValueSpace dom = ValueSpace::payfn(f.cod(), dim);
  ValueSpace cod = ValueSpace::payfn(f.dom(), dim);
  Kernel::Node n{Kernel::Tag::precompose, dom, cod, {}, std::move(f), {}, {}, {}, 0, dim};
  return Kernel(std::move(n));
}

/// w |-> w . u, consuming the symbolic endomap space. With the identity
/// endomap this returns u itself.
inline Kernel k_precompose(PayFn u) {
  ValueSpace dom = ValueSpace::pay_endo(u.dim());
  ValueSpace cod = ValueSpace::payfn(u.dom(), u.dim());
  Kernel::Node n{Kernel::Tag::precompose, dom, cod, {}, {}, std::move(u), {}, {}, 0, 0};
  return Kernel(std::move(n));
}

inline Kernel k_partial_left(const FinSet& prod, std::size_t dim) {
  ValueSpace dom = ValueSpace::pair(ValueSpace::payfn(prod, dim),
                                    ValueSpace::elem(prod.left_factor()));
  ValueSpace cod = ValueSpace::payfn(prod.right_factor(), dim);
  Kernel::Node n{Kernel::Tag::partial_left, dom, cod, {}, {}, {}, {}, prod, 0, dim};
  return Kernel(std::move(n));
}

inline Kernel k_partial_right(const FinSet& prod, std::size_t dim) {
  ValueSpace dom = ValueSpace::pair(ValueSpace::payfn(prod, dim),
                                    ValueSpace::elem(prod.right_factor()));
  ValueSpace cod = ValueSpace::payfn(prod.left_factor(), dim);
  Kernel::Node n{Kernel::Tag::partial_right, dom, cod, {}, {}, {}, {}, prod, 0, dim};
  return Kernel(std::move(n));
}

inline Kernel k_subtract_at(const FinSet& z, std::size_t dim) {
  ValueSpace dom =
      ValueSpace::pair(ValueSpace::payfn(z, dim), ValueSpace::elem(z));
  ValueSpace cod = ValueSpace::payfn(z, dim);
  Kernel::Node n{Kernel::Tag::subtract_at, dom, cod, {}, {}, {}, {}, z, 0, dim};
  return Kernel(std::move(n));
}

inline Kernel k_const_idfn(ValueSpace dom, std::size_t dim) {
  ValueSpace cod = ValueSpace::pay_endo(dim);
  Kernel::Node n{Kernel::Tag::const_idfn, std::move(dom), cod, {}, {}, {}, {}, {}, 0, dim};
  return Kernel(std::move(n));
}

inline Kernel k_argmax(const FinSet& x, std::size_t dim, std::size_t coord) {
  if (coord >= dim)
    throw boundary_error("argmax coordinate " + std::to_string(coord) +
                         " out of range for dimension " + std::to_string(dim));
  ValueSpace dom = ValueSpace::payfn(x, dim);
  ValueSpace cod = ValueSpace::subsets(x);
  Kernel::Node n{Kernel::Tag::argmax, dom, cod, {}, {}, {}, {}, x, coord, dim};
  return Kernel(std::move(n));
}

inline Kernel k_subset_product(const FinSet& prod) {
  ValueSpace dom = ValueSpace::pair(ValueSpace::subsets(prod.left_factor()),
                                    ValueSpace::subsets(prod.right_factor()));
  ValueSpace cod = ValueSpace::subsets(prod);
  Kernel::Node n{Kernel::Tag::subset_product, dom, cod, {}, {}, {}, {}, prod, 0, 0};
  return Kernel(std::move(n));
}

inline Kernel k_discard(ValueSpace dom) {
  Kernel::Node n{Kernel::Tag::discard, std::move(dom), ValueSpace::unit_space(),
                 {},                   {},             {},
                 {},                   {},             0,
                 0};
  return Kernel(std::move(n));
}

/// Applies a total table to a point. This is how transported positions
/// reach downstream backward passes inside composite kernels.
inline Kernel k_map_elem(Table f) {
  ValueSpace dom = ValueSpace::elem(f.dom());
  ValueSpace cod = ValueSpace::elem(f.cod());
  Kernel::Node n{Kernel::Tag::map_elem, dom, cod, {}, std::move(f), {}, {}, {}, 0, 0};
  return Kernel(std::move(n));
}

/// Structure-preserving cleanup used for printable output: drops identity
/// composites, beta-reduces projections of pairs, and removes identity
/// table applications. Evaluation semantics are unchanged.
inline Kernel simplified(const Kernel& k) {
  switch (k.tag()) {
    case Kernel::Tag::compose: {
      Kernel a = simplified(k.child(0));
      Kernel b = simplified(k.child(1));
      if (a.tag() == Kernel::Tag::id) return b;
      if (b.tag() == Kernel::Tag::id) return a;
      if (b.tag() == Kernel::Tag::proj1 && a.tag() == Kernel::Tag::pair) return a.child(0);
      if (b.tag() == Kernel::Tag::proj2 && a.tag() == Kernel::Tag::pair) return a.child(1);
      return k_compose(std::move(a), std::move(b));
    }
    case Kernel::Tag::pair:
      return k_pair(simplified(k.child(0)), simplified(k.child(1)));
    case Kernel::Tag::map_elem:
      if (k.table().is_identity()) return k_identity(k.dom());
      return k;
    default:
      return k;
  }
}

}  // namespace diegetic
