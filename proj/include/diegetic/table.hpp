#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "diegetic/errors.hpp"
#include "diegetic/finset.hpp"

namespace diegetic {

/// A total function between finite sets, tabulated over the domain order.
class Table {
public:
  Table() : Table(FinSet(), FinSet(), {}, "") {}

  Table(FinSet dom, FinSet cod, std::vector<std::uint32_t> images, std::string name = "") {
    if (images.size() != dom.size())
      throw boundary_error("table '" + name + "': " + std::to_string(images.size()) +
                           " entries for a domain of size " + std::to_string(dom.size()));
    for (auto img : images)
      if (img >= cod.size())
        throw element_error("table '" + name + "': image index " + std::to_string(img) +
                            " outside codomain '" + cod.name() + "'");
    auto data = std::make_shared<Data>();
    data->dom = std::move(dom);
    data->cod = std::move(cod);
    data->images = std::move(images);
    data->name = std::move(name);
    data_ = std::move(data);
  }

  static Table from_function(FinSet dom, FinSet cod,
                             const std::function<std::uint32_t(std::uint32_t)>& f,
                             std::string name = "") {
    std::vector<std::uint32_t> images(dom.size());
    for (std::uint32_t i = 0; i < dom.size(); ++i) images[i] = f(i);
    return Table(std::move(dom), std::move(cod), std::move(images), std::move(name));
  }

  /// Builds from label pairs; every domain label must appear exactly once.
  static Table from_label_map(FinSet dom, FinSet cod,
                              const std::vector<std::pair<std::string, std::string>>& entries,
                              std::string name = "") {
    std::vector<std::uint32_t> images(dom.size(), UINT32_MAX);
    for (const auto& [k, v] : entries) {
      auto ki = dom.find(k);
      if (!ki)
        throw element_error("table '" + name + "': key '" + k + "' is not in domain '" +
                            dom.name() + "'");
      if (images[*ki] != UINT32_MAX)
        throw element_error("table '" + name + "': duplicate entry for '" + k + "'");
      images[*ki] = cod.index_of(v);
    }
    for (std::uint32_t i = 0; i < dom.size(); ++i)
      if (images[i] == UINT32_MAX)
        throw element_error("table '" + name + "': missing entry for '" + dom.label(i) + "'");
    return Table(std::move(dom), std::move(cod), std::move(images), std::move(name));
  }

  static Table identity(const FinSet& x) {
    return from_function(x, x, [](std::uint32_t i) { return i; }, "id_" + x.name());
  }

  static Table constant(const FinSet& dom, const FinSet& cod, std::uint32_t y) {
    if (y >= cod.size()) throw element_error("constant table image out of range");
    return from_function(dom, cod, [y](std::uint32_t) { return y; });
  }

  static Table proj_left(const FinSet& prod) {
    return from_function(prod, prod.left_factor(),
                         [&prod](std::uint32_t i) { return prod.unpair_index(i).first; },
                         "pi1");
  }

  static Table proj_right(const FinSet& prod) {
    return from_function(prod, prod.right_factor(),
                         [&prod](std::uint32_t i) { return prod.unpair_index(i).second; },
                         "pi2");
  }

  /// Copy map X -> X x X.
  static Table diagonal(const FinSet& x) {
    FinSet xx = product(x, x);
    return from_function(x, xx, [&xx](std::uint32_t i) { return xx.pair_index(i, i); },
                         "copy_" + x.name());
  }

  /// Fan-out <f,g>: Z -> A x B.
  static Table pairing(const Table& f, const Table& g) {
    if (f.dom() != g.dom())
      throw boundary_error("pairing: domains of '" + f.name() + "' and '" + g.name() +
                           "' differ");
    FinSet cod = product(f.cod(), g.cod());
    return from_function(f.dom(), cod, [&](std::uint32_t i) {
      return cod.pair_index(f.apply(i), g.apply(i));
    });
  }

  /// f x g : A x C -> B x D (domains taken as a fresh registered product).
  static Table tensor(const Table& f, const Table& g) {
    FinSet dom = product(f.dom(), g.dom());
    FinSet cod = product(f.cod(), g.cod());
    return from_function(dom, cod, [&](std::uint32_t i) {
      auto [a, c] = dom.unpair_index(i);
      return cod.pair_index(f.apply(a), g.apply(c));
    });
  }

  const FinSet& dom() const { return data_->dom; }
  const FinSet& cod() const { return data_->cod; }
  const std::string& name() const { return data_->name; }
  const std::vector<std::uint32_t>& images() const { return data_->images; }

  std::uint32_t apply(std::uint32_t i) const {
    if (i >= data_->images.size())
      throw element_error("table '" + name() + "': argument index out of range");
    return data_->images[i];
  }

  const std::string& apply_label(const std::string& lbl) const {
    return cod().label(apply(dom().index_of(lbl)));
  }

  bool is_identity() const {
    if (dom() != cod()) return false;
    for (std::uint32_t i = 0; i < dom().size(); ++i)
      if (data_->images[i] != i) return false;
    return true;
  }

  friend bool operator==(const Table& a, const Table& b) {
    return a.dom() == b.dom() && a.cod() == b.cod() && a.images() == b.images();
  }
  friend bool operator!=(const Table& a, const Table& b) { return !(a == b); }

private:
  struct Data {
    FinSet dom, cod;
    std::vector<std::uint32_t> images;
    std::string name;
  };
  std::shared_ptr<const Data> data_;
};

/// Diagrammatic composition: (f;g)(x) = g(f(x)).
inline Table table_compose(const Table& f, const Table& g) {
  if (f.cod() != g.dom())
    throw boundary_error("table_compose: codomain of '" + f.name() + "' (" +
                         f.cod().name() + ") does not match domain of '" + g.name() +
                         "' (" + g.dom().name() + ")");
  return Table::from_function(f.dom(), g.cod(),
                              [&](std::uint32_t i) { return g.apply(f.apply(i)); },
                              f.name() + ";" + g.name());
}

/// Partial evaluation at a left-factor element: b |-> f(a,b).
inline Table fix_left(const Table& f, std::uint32_t a) {
  const FinSet& d = f.dom();
  if (!d.is_product())
    throw boundary_error("fix_left: domain of '" + f.name() + "' is not a registered product");
  if (a >= d.left_factor().size())
    throw element_error("fix_left: index " + std::to_string(a) + " not in '" +
                        d.left_factor().name() + "'");
  return Table::from_function(d.right_factor(), f.cod(), [&, a](std::uint32_t b) {
    return f.apply(d.pair_index(a, b));
  });
}

/// Partial evaluation at a right-factor element: a |-> f(a,b).
inline Table fix_right(const Table& f, std::uint32_t b) {
  const FinSet& d = f.dom();
  if (!d.is_product())
    throw boundary_error("fix_right: domain of '" + f.name() + "' is not a registered product");
  if (b >= d.right_factor().size())
    throw element_error("fix_right: index " + std::to_string(b) + " not in '" +
                        d.right_factor().name() + "'");
  return Table::from_function(d.left_factor(), f.cod(), [&, b](std::uint32_t a) {
    return f.apply(d.pair_index(a, b));
  });
}

inline Table fix_left(const Table& f, const std::string& label) {
  return fix_left(f, f.dom().left_factor().index_of(label));
}

inline Table fix_right(const Table& f, const std::string& label) {
  return fix_right(f, f.dom().right_factor().index_of(label));
}

}  // namespace diegetic
