#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "diegetic/errors.hpp"
#include "diegetic/finset.hpp"
#include "diegetic/rational.hpp"
#include "diegetic/table.hpp"

namespace diegetic {

/// Semantic direction space of a lens boundary. Positions are always
/// finite sets, but directions range over payoff vectors and whole payoff
/// functions, which are not enumerable; they are typed here and handled
/// symbolically by kernels.
///
/// pay_endo is the space of payoff-to-payoff maps. Only its identity
/// element is ever represented (it appears between a const_idfn node and
/// the precomposition that consumes it); the full function space is never
/// materialized.
class ValueSpace {
public:
  enum class Kind { unit, pay, payfn, subsets, elem, pair, pay_endo };

  ValueSpace() : ValueSpace(unit_space()) {}

  static ValueSpace unit_space() { return ValueSpace(Kind::unit, 0, {}, nullptr, nullptr); }
  static ValueSpace pay(std::size_t n) { return ValueSpace(Kind::pay, n, {}, nullptr, nullptr); }
  static ValueSpace payfn(FinSet over, std::size_t n) {
    return ValueSpace(Kind::payfn, n, std::move(over), nullptr, nullptr);
  }
  static ValueSpace subsets(FinSet of) {
    return ValueSpace(Kind::subsets, 0, std::move(of), nullptr, nullptr);
  }
  static ValueSpace elem(FinSet of) {
    return ValueSpace(Kind::elem, 0, std::move(of), nullptr, nullptr);
  }
  static ValueSpace pair(ValueSpace first, ValueSpace second) {
    auto a = std::make_shared<ValueSpace>(std::move(first));
    auto b = std::make_shared<ValueSpace>(std::move(second));
    return ValueSpace(Kind::pair, 0, {}, std::move(a), std::move(b));
  }
  static ValueSpace pay_endo(std::size_t n) {
    return ValueSpace(Kind::pay_endo, n, {}, nullptr, nullptr);
  }

  Kind kind() const { return kind_; }
  bool is(Kind k) const { return kind_ == k; }

  std::size_t pay_dim() const { return dim_; }

  const FinSet& set() const {
    if (kind_ != Kind::payfn && kind_ != Kind::subsets && kind_ != Kind::elem)
      throw boundary_error("value space " + describe() + " has no carrier set");
    return set_;
  }

  const ValueSpace& first() const { return component(first_); }
  const ValueSpace& second() const { return component(second_); }

  friend bool operator==(const ValueSpace& a, const ValueSpace& b) {
    if (a.kind_ != b.kind_) return false;
    switch (a.kind_) {
      case Kind::unit: return true;
      case Kind::pay:
      case Kind::pay_endo: return a.dim_ == b.dim_;
      case Kind::payfn: return a.dim_ == b.dim_ && a.set_ == b.set_;
      case Kind::subsets:
      case Kind::elem: return a.set_ == b.set_;
      case Kind::pair: return *a.first_ == *b.first_ && *a.second_ == *b.second_;
    }
    return false;
  }
  friend bool operator!=(const ValueSpace& a, const ValueSpace& b) { return !(a == b); }

  std::string describe() const {
    switch (kind_) {
      case Kind::unit: return "Unit";
      case Kind::pay: return "Pay^" + std::to_string(dim_);
      case Kind::payfn: return "PayFn(" + set_.name() + ")";
      case Kind::subsets: return "Subsets(" + set_.name() + ")";
      case Kind::elem: return "Elem(" + set_.name() + ")";
      case Kind::pair: return "(" + first_->describe() + " x " + second_->describe() + ")";
      case Kind::pay_endo: return "PayEndo^" + std::to_string(dim_);
    }
    return "?";
  }

private:
  ValueSpace(Kind k, std::size_t dim, FinSet set, std::shared_ptr<const ValueSpace> a,
             std::shared_ptr<const ValueSpace> b)
      : kind_(k), dim_(dim), set_(std::move(set)), first_(std::move(a)), second_(std::move(b)) {}

  const ValueSpace& component(const std::shared_ptr<const ValueSpace>& p) const {
    if (kind_ != Kind::pair || !p)
      throw boundary_error("value space " + describe() + " is not a pair");
    return *p;
  }

  Kind kind_;
  std::size_t dim_;
  FinSet set_;
  std::shared_ptr<const ValueSpace> first_, second_;
};

struct UnitValue {
  friend bool operator==(const UnitValue&, const UnitValue&) { return true; }
};

/// The identity element of the symbolic payoff-endomap space.
struct PayEndoIdentity {
  std::size_t dim = 0;
  friend bool operator==(const PayEndoIdentity& a, const PayEndoIdentity& b) {
    return a.dim == b.dim;
  }
};

/// One element of a finite set, carried with its set.
struct FinElem {
  FinSet set;
  std::uint32_t index = 0;

  FinElem() = default;
  FinElem(FinSet s, std::uint32_t i) : set(std::move(s)), index(i) {
    if (index >= set.size())
      throw element_error("element index " + std::to_string(index) + " outside '" +
                          set.name() + "'");
  }
  static FinElem of(const FinSet& s, const std::string& label) {
    return FinElem(s, s.index_of(label));
  }

  const std::string& label() const { return set.label(index); }

  friend bool operator==(const FinElem& a, const FinElem& b) {
    return a.set == b.set && a.index == b.index;
  }
};

/// A canonically sorted subset of a finite set.
struct Subset {
  FinSet set;
  std::vector<std::uint32_t> members;  // strictly increasing

  Subset() = default;

  static Subset of(FinSet s, std::vector<std::uint32_t> idxs) {
    std::sort(idxs.begin(), idxs.end());
    idxs.erase(std::unique(idxs.begin(), idxs.end()), idxs.end());
    if (!idxs.empty() && idxs.back() >= s.size())
      throw element_error("subset member outside '" + s.name() + "'");
    Subset out;
    out.set = std::move(s);
    out.members = std::move(idxs);
    return out;
  }

  static Subset empty(FinSet s) { return of(std::move(s), {}); }

  static Subset full(FinSet s) {
    std::vector<std::uint32_t> all(s.size());
    for (std::uint32_t i = 0; i < s.size(); ++i) all[i] = i;
    return of(std::move(s), std::move(all));
  }

  bool contains(std::uint32_t i) const {
    return std::binary_search(members.begin(), members.end(), i);
  }
  std::size_t size() const { return members.size(); }

  std::vector<std::string> labels() const {
    std::vector<std::string> out;
    out.reserve(members.size());
    for (auto i : members) out.push_back(set.label(i));
    return out;
  }

  friend bool operator==(const Subset& a, const Subset& b) {
    return a.set == b.set && a.members == b.members;
  }
};

/// A finitely tabulated payoff function: a total map from a finite set to
/// payoff vectors of a fixed dimension.
class PayFn {
public:
  PayFn() : dim_(0) {}

  PayFn(FinSet dom, std::size_t dim, std::vector<PayVec> values)
      : dom_(std::move(dom)), dim_(dim), values_(std::move(values)) {
    if (values_.size() != dom_.size())
      throw boundary_error("payoff table over '" + dom_.name() + "': " +
                           std::to_string(values_.size()) + " rows for " +
                           std::to_string(dom_.size()) + " elements");
    for (const auto& v : values_)
      if (v.size() != dim_)
        throw boundary_error("payoff vector of length " + std::to_string(v.size()) +
                             " in a table of dimension " + std::to_string(dim_));
  }

  static PayFn tabulate(FinSet dom, std::size_t dim,
                        const std::function<PayVec(std::uint32_t)>& f) {
    std::vector<PayVec> values;
    values.reserve(dom.size());
    for (std::uint32_t i = 0; i < dom.size(); ++i) values.push_back(f(i));
    return PayFn(std::move(dom), dim, std::move(values));
  }

  static PayFn constant(FinSet dom, PayVec v) {
    const std::size_t n = v.size();
    return tabulate(std::move(dom), n, [&v](std::uint32_t) { return v; });
  }

  const FinSet& dom() const { return dom_; }
  std::size_t dim() const { return dim_; }

  const PayVec& at(std::uint32_t i) const {
    if (i >= values_.size()) throw element_error("payoff lookup out of range");
    return values_[i];
  }
  const PayVec& at_label(const std::string& lbl) const { return at(dom_.index_of(lbl)); }

  friend bool operator==(const PayFn& a, const PayFn& b) {
    return a.dom_ == b.dom_ && a.dim_ == b.dim_ && a.values_ == b.values_;
  }

private:
  FinSet dom_;
  std::size_t dim_;
  std::vector<PayVec> values_;
};

// Pointwise operations used by kernel primitives.

/// u |-> u . f
inline PayFn precompose(const PayFn& u, const Table& f) {
  if (f.cod() != u.dom())
    throw boundary_error("precompose: table into '" + f.cod().name() +
                         "' against payoff table over '" + u.dom().name() + "'");
  return PayFn::tabulate(f.dom(), u.dim(), [&](std::uint32_t i) { return u.at(f.apply(i)); });
}

/// u over A x B, a in A  |->  b in B |-> u(a,b)
inline PayFn partial_eval_left(const PayFn& u, const FinElem& a) {
  const FinSet& d = u.dom();
  if (!d.is_product()) throw boundary_error("partial_eval_left: domain is not a product");
  if (a.set != d.left_factor())
    throw boundary_error("partial_eval_left: element of '" + a.set.name() +
                         "' against left factor '" + d.left_factor().name() + "'");
  return PayFn::tabulate(d.right_factor(), u.dim(),
                         [&](std::uint32_t b) { return u.at(d.pair_index(a.index, b)); });
}

/// u over A x B, b in B  |->  a in A |-> u(a,b)
inline PayFn partial_eval_right(const PayFn& u, const FinElem& b) {
  const FinSet& d = u.dom();
  if (!d.is_product()) throw boundary_error("partial_eval_right: domain is not a product");
  if (b.set != d.right_factor())
    throw boundary_error("partial_eval_right: element of '" + b.set.name() +
                         "' against right factor '" + d.right_factor().name() + "'");
  return PayFn::tabulate(d.left_factor(), u.dim(),
                         [&](std::uint32_t a) { return u.at(d.pair_index(a, b.index)); });
}

/// The regret shift: z |-> u(z) - u(base), componentwise.
inline PayFn subtract_at(const PayFn& u, const FinElem& base) {
  if (base.set != u.dom())
    throw boundary_error("subtract_at: basepoint is not in the payoff table's domain");
  const PayVec& ref = u.at(base.index);
  return PayFn::tabulate(u.dom(), u.dim(), [&](std::uint32_t i) {
    PayVec out = u.at(i);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] -= ref[k];
    return out;
  });
}

/// All elements achieving the maximum of coordinate `coord`. Multi-valued:
/// ties are never broken. Empty domain yields the empty subset.
inline Subset argmax_coord(const PayFn& u, std::size_t coord) {
  if (coord >= u.dim())
    throw boundary_error("argmax coordinate " + std::to_string(coord) +
                         " out of range for dimension " + std::to_string(u.dim()));
  std::vector<std::uint32_t> best;
  for (std::uint32_t i = 0; i < u.dom().size(); ++i) {
    if (best.empty()) {
      best.push_back(i);
      continue;
    }
    const Rational& cur = u.at(i)[coord];
    const Rational& top = u.at(best.front())[coord];
    if (cur > top) {
      best.clear();
      best.push_back(i);
    } else if (cur == top) {
      best.push_back(i);
    }
  }
  return Subset::of(u.dom(), std::move(best));
}

/// S x T as a subset of the registered product of their carriers.
inline Subset subset_product(const FinSet& prod, const Subset& s, const Subset& t) {
  if (s.set != prod.left_factor() || t.set != prod.right_factor())
    throw boundary_error("subset_product: factor sets do not match '" + prod.name() + "'");
  std::vector<std::uint32_t> out;
  out.reserve(s.size() * t.size());
  for (auto a : s.members)
    for (auto b : t.members) out.push_back(prod.pair_index(a, b));
  return Subset::of(prod, std::move(out));
}

/// A runtime value belonging to some ValueSpace. Immutable.
class Value {
public:
  Value() : v_(UnitValue{}) {}
  Value(UnitValue u) : v_(u) {}
  Value(PayVec p) : v_(std::move(p)) {}
  Value(PayFn f) : v_(std::move(f)) {}
  Value(Subset s) : v_(std::move(s)) {}
  Value(FinElem e) : v_(std::move(e)) {}
  Value(PayEndoIdentity e) : v_(e) {}

  static Value make_pair(Value a, Value b) {
    PairBox box{std::make_shared<const Value>(std::move(a)),
                std::make_shared<const Value>(std::move(b))};
    return Value(std::move(box));
  }

  bool is_unit() const { return std::holds_alternative<UnitValue>(v_); }
  bool is_pay() const { return std::holds_alternative<PayVec>(v_); }
  bool is_payfn() const { return std::holds_alternative<PayFn>(v_); }
  bool is_subset() const { return std::holds_alternative<Subset>(v_); }
  bool is_elem() const { return std::holds_alternative<FinElem>(v_); }
  bool is_pair() const { return std::holds_alternative<PairBox>(v_); }
  bool is_pay_endo() const { return std::holds_alternative<PayEndoIdentity>(v_); }

  const PayVec& as_pay() const { return get<PayVec>("a payoff vector"); }
  const PayFn& as_payfn() const { return get<PayFn>("a payoff table"); }
  const Subset& as_subset() const { return get<Subset>("a subset"); }
  const FinElem& as_elem() const { return get<FinElem>("a set element"); }
  const PayEndoIdentity& as_pay_endo() const { return get<PayEndoIdentity>("a payoff endomap"); }

  const Value& first() const { return *get<PairBox>("a pair").a; }
  const Value& second() const { return *get<PairBox>("a pair").b; }

  friend bool operator==(const Value& a, const Value& b) {
    if (a.v_.index() != b.v_.index()) return false;
    if (a.is_pair()) return a.first() == b.first() && a.second() == b.second();
    return a.v_ == b.v_;
  }
  friend bool operator!=(const Value& a, const Value& b) { return !(a == b); }

  std::string describe() const {
    if (is_unit()) return "*";
    if (is_pay()) return payvec_to_string(as_pay());
    if (is_elem()) return as_elem().label();
    if (is_pay_endo()) return "id_P";
    if (is_subset()) {
      std::string s = "{";
      bool sep = false;
      for (const auto& l : as_subset().labels()) {
        if (sep) s += ",";
        s += l;
        sep = true;
      }
      return s + "}";
    }
    if (is_payfn()) {
      const PayFn& f = as_payfn();
      std::string s = "[";
      for (std::uint32_t i = 0; i < f.dom().size(); ++i) {
        if (i) s += ", ";
        s += f.dom().label(i) + ":" + payvec_to_string(f.at(i));
      }
      return s + "]";
    }
    return "<" + first().describe() + ", " + second().describe() + ">";
  }

private:
  struct PairBox {
    std::shared_ptr<const Value> a, b;
    friend bool operator==(const PairBox& x, const PairBox& y) {
      return *x.a == *y.a && *x.b == *y.b;
    }
  };

  explicit Value(PairBox box) : v_(std::move(box)) {}

  template <class T>
  const T& get(const char* what) const {
    const T* p = std::get_if<T>(&v_);
    if (!p) throw boundary_error(std::string("value is not ") + what + ": " + describe());
    return *p;
  }

  std::variant<UnitValue, PayVec, PayFn, Subset, FinElem, PayEndoIdentity, PairBox> v_;
};

}  // namespace diegetic
