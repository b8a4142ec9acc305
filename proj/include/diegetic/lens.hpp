#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "diegetic/errors.hpp"
#include "diegetic/finset.hpp"
#include "diegetic/kernel.hpp"
#include "diegetic/table.hpp"
#include "diegetic/value.hpp"

namespace diegetic {

/// A lens boundary: a finite position set paired with a direction space.
struct LensObj {
  FinSet pos;
  ValueSpace dir;

  friend bool operator==(const LensObj& a, const LensObj& b) {
    return a.pos == b.pos && a.dir == b.dir;
  }
  friend bool operator!=(const LensObj& a, const LensObj& b) { return !(a == b); }

  std::string describe() const { return "(" + pos.name() + ", " + dir.describe() + ")"; }
};

inline LensObj unit_obj() { return {FinSet::unit(), ValueSpace::unit_space()}; }

/// The expected domain space of a backward kernel: the lens position
/// paired with the codomain direction.
inline ValueSpace bwd_input_space(const LensObj& dom, const LensObj& cod) {
  return ValueSpace::pair(ValueSpace::elem(dom.pos), cod.dir);
}

/// A simple lens: a forward table on positions and a backward kernel that
/// turns a position and an incoming direction into an outgoing direction.
class Lens {
public:
  Lens(LensObj dom, LensObj cod, Table fwd, Kernel bwd)
      : dom_(std::move(dom)), cod_(std::move(cod)), fwd_(std::move(fwd)), bwd_(std::move(bwd)) {
    if (fwd_.dom() != dom_.pos || fwd_.cod() != cod_.pos)
      throw boundary_error("lens: forward table " + fwd_.dom().name() + "->" +
                           fwd_.cod().name() + " does not match boundaries " +
                           dom_.describe() + " -> " + cod_.describe());
    ValueSpace want = bwd_input_space(dom_, cod_);
    if (bwd_.dom() != want)
      throw boundary_error("lens: backward kernel domain " + bwd_.dom().describe() +
                           ", expected " + want.describe());
    if (bwd_.cod() != dom_.dir)
      throw boundary_error("lens: backward kernel codomain " + bwd_.cod().describe() +
                           ", expected " + dom_.dir.describe());
  }

  const LensObj& dom() const { return dom_; }
  const LensObj& cod() const { return cod_; }
  const Table& forward() const { return fwd_; }
  const Kernel& backward() const { return bwd_; }

  std::uint32_t forward_at(std::uint32_t pos) const { return fwd_.apply(pos); }

  Value backward_at(std::uint32_t pos, const Value& dir) const {
    return bwd_(Value::make_pair(Value(FinElem(dom_.pos, pos)), dir));
  }

private:
  LensObj dom_, cod_;
  Table fwd_;
  Kernel bwd_;
};

inline Lens identity_lens(const LensObj& x) {
  return Lens(x, x, Table::identity(x.pos), k_proj2(bwd_input_space(x, x)));
}

/// Diagrammatic composition. Backward pass: bwd(x, r) =
/// bwd_l(x, bwd_m(fwd_l(x), r)).
inline Lens lens_compose(const Lens& l, const Lens& m) {
  if (l.cod() != m.dom())
    throw boundary_error("lens_compose: " + l.cod().describe() + " against " +
                         m.dom().describe());
  Table fwd = table_compose(l.forward(), m.forward());
  ValueSpace in = bwd_input_space(l.dom(), m.cod());
  Kernel x = k_proj1(in);
  Kernel r = k_proj2(in);
  Kernel mid = k_compose(k_pair(k_compose(x, k_map_elem(l.forward())), r), m.backward());
  Kernel bwd = k_compose(k_pair(std::move(x), std::move(mid)), l.backward());
  return Lens(l.dom(), m.cod(), std::move(fwd), std::move(bwd));
}

/// Monoidal product: positions multiply, directions pair, backward acts
/// componentwise.
inline Lens lens_tensor(const Lens& l, const Lens& m) {
  LensObj dom{product(l.dom().pos, m.dom().pos),
              ValueSpace::pair(l.dom().dir, m.dom().dir)};
  LensObj cod{product(l.cod().pos, m.cod().pos),
              ValueSpace::pair(l.cod().dir, m.cod().dir)};
  Table fwd = Table::tensor(l.forward(), m.forward());
  ValueSpace in = bwd_input_space(dom, cod);
  Kernel pos = k_proj1(in);
  Kernel dirs = k_proj2(in);
  Kernel left_in = k_pair(k_compose(pos, k_map_elem(Table::proj_left(dom.pos))),
                          k_compose(dirs, k_proj1(dirs.cod())));
  Kernel right_in = k_pair(k_compose(pos, k_map_elem(Table::proj_right(dom.pos))),
                           k_compose(dirs, k_proj2(dirs.cod())));
  Kernel bwd = k_pair(k_compose(std::move(left_in), l.backward()),
                      k_compose(std::move(right_in), m.backward()));
  return Lens(std::move(dom), std::move(cod), std::move(fwd), std::move(bwd));
}

}  // namespace diegetic
