#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "diegetic/errors.hpp"

namespace diegetic {

namespace detail {

// Pair labels are "(left,right)" with '\' escaping of '(' ')' ',' '\'
// inside the component labels, so nested products round-trip.
inline std::string escape_label(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '(' || c == ')' || c == ',' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

inline std::string unescape_label(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\' && i + 1 < s.size()) ++i;
    out += s[i];
  }
  return out;
}

}  // namespace detail

inline std::string encode_pair_label(const std::string& l, const std::string& r) {
  return "(" + detail::escape_label(l) + "," + detail::escape_label(r) + ")";
}

/// Inverse of encode_pair_label. Splits at the single top-level comma.
inline std::pair<std::string, std::string> decode_pair_label(const std::string& s) {
  if (s.size() < 3 || s.front() != '(' || s.back() != ')')
    throw element_error("not a pair label: '" + s + "'");
  int depth = 0;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    char c = s[i];
    if (c == '\\') {
      ++i;
      continue;
    }
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0)
      return {detail::unescape_label(s.substr(1, i - 1)),
              detail::unescape_label(s.substr(i + 1, s.size() - i - 2))};
  }
  throw element_error("not a pair label: '" + s + "'");
}

/// An enumerated finite set. Element labels are pairwise distinct and the
/// enumeration order is fixed at construction. Values are immutable and
/// cheaply shareable. Sets built by product() remember their factors.
class FinSet {
public:
  FinSet() : FinSet("", {}) {}

  FinSet(std::string name, std::vector<std::string> elems) {
    auto data = std::make_shared<Data>();
    data->name = std::move(name);
    data->elems = std::move(elems);
    data->index.reserve(data->elems.size());
    for (std::uint32_t i = 0; i < data->elems.size(); ++i) {
      auto [it, fresh] = data->index.emplace(data->elems[i], i);
      if (!fresh)
        throw element_error("duplicate label '" + data->elems[i] + "' in set '" +
                            data->name + "'");
    }
    data_ = std::move(data);
  }

  /// The unit set: one element, canonical label "*".
  static FinSet unit() {
    static const FinSet u("1", {"*"});
    return u;
  }

  const std::string& name() const { return data_->name; }
  std::size_t size() const { return data_->elems.size(); }
  bool empty() const { return data_->elems.empty(); }
  const std::vector<std::string>& elements() const { return data_->elems; }

  const std::string& label(std::uint32_t idx) const {
    if (idx >= size())
      throw element_error("index " + std::to_string(idx) + " out of range for set '" +
                          name() + "'");
    return data_->elems[idx];
  }

  std::optional<std::uint32_t> find(const std::string& lbl) const {
    auto it = data_->index.find(lbl);
    if (it == data_->index.end()) return std::nullopt;
    return it->second;
  }

  std::uint32_t index_of(const std::string& lbl) const {
    auto idx = find(lbl);
    if (!idx) throw element_error("'" + lbl + "' is not an element of set '" + name() + "'");
    return *idx;
  }

  bool is_product() const { return data_->factors != nullptr; }
  const FinSet& left_factor() const;
  const FinSet& right_factor() const;

  std::uint32_t pair_index(std::uint32_t l, std::uint32_t r) const;
  std::pair<std::uint32_t, std::uint32_t> unpair_index(std::uint32_t idx) const;

  /// Equality is extensional: same labels in the same order. Names and
  /// product registration do not participate.
  friend bool operator==(const FinSet& a, const FinSet& b) {
    return a.data_ == b.data_ || a.data_->elems == b.data_->elems;
  }
  friend bool operator!=(const FinSet& a, const FinSet& b) { return !(a == b); }

  friend FinSet product(const FinSet& a, const FinSet& b);

private:
  struct Factors;

  struct Data {
    std::string name;
    std::vector<std::string> elems;
    std::unordered_map<std::string, std::uint32_t> index;
    std::shared_ptr<const Factors> factors;
  };

  const Factors& require_factors() const;

  std::shared_ptr<const Data> data_;
};

struct FinSet::Factors {
  FinSet left, right;
};

inline const FinSet::Factors& FinSet::require_factors() const {
  if (!data_->factors)
    throw boundary_error("set '" + name() + "' is not a registered product");
  return *data_->factors;
}

inline const FinSet& FinSet::left_factor() const { return require_factors().left; }
inline const FinSet& FinSet::right_factor() const { return require_factors().right; }

inline std::uint32_t FinSet::pair_index(std::uint32_t l, std::uint32_t r) const {
  const auto& f = require_factors();
  return l * static_cast<std::uint32_t>(f.right.size()) + r;
}

inline std::pair<std::uint32_t, std::uint32_t> FinSet::unpair_index(std::uint32_t idx) const {
  const auto& f = require_factors();
  const auto w = static_cast<std::uint32_t>(f.right.size());
  return {idx / w, idx % w};
}

/// Cartesian product, enumerated lexicographically (left index major).
/// The result remembers its factors, which partial evaluation needs.
inline FinSet product(const FinSet& a, const FinSet& b) {
  std::vector<std::string> elems;
  elems.reserve(a.size() * b.size());
  for (const auto& x : a.elements())
    for (const auto& y : b.elements()) elems.push_back(encode_pair_label(x, y));
  FinSet out("(" + a.name() + "*" + b.name() + ")", std::move(elems));
  auto data = std::make_shared<FinSet::Data>(*out.data_);
  data->factors = std::make_shared<const FinSet::Factors>(FinSet::Factors{a, b});
  out.data_ = std::move(data);
  return out;
}

/// Right-nested fold: product_all([A,B,C]) = A x (B x C).
inline FinSet product_all(const std::vector<FinSet>& sets) {
  if (sets.empty()) throw boundary_error("product_all: empty factor list");
  FinSet acc = sets.back();
  for (std::size_t i = sets.size() - 1; i-- > 0;) acc = product(sets[i], acc);
  return acc;
}

/// The n leaf factors of a right-nested product (n == 1 returns {s}).
inline std::vector<FinSet> leaf_factors(const FinSet& s, std::size_t n) {
  std::vector<FinSet> out;
  out.reserve(n);
  FinSet cur = s;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    out.push_back(cur.left_factor());
    cur = cur.right_factor();
  }
  out.push_back(cur);
  return out;
}

/// Coordinates of one element of a right-nested n-fold product.
inline std::vector<std::uint32_t> split_index(const FinSet& prod, std::uint32_t idx,
                                              std::size_t n) {
  std::vector<std::uint32_t> out;
  out.reserve(n);
  FinSet cur = prod;
  std::uint32_t rest = idx;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    auto [l, r] = cur.unpair_index(rest);
    out.push_back(l);
    rest = r;
    cur = cur.right_factor();
  }
  out.push_back(rest);
  return out;
}

/// Inverse of split_index.
inline std::uint32_t join_index(const FinSet& prod, std::span<const std::uint32_t> coords) {
  if (coords.empty()) throw boundary_error("join_index: empty coordinate list");
  if (coords.size() == 1) return coords[0];
  FinSet rest = prod.right_factor();
  std::uint32_t tail = join_index(rest, coords.subspan(1));
  return prod.pair_index(coords[0], tail);
}

/// Flat per-leaf labels of one element of a right-nested n-fold product.
inline std::vector<std::string> split_labels(const FinSet& prod, std::uint32_t idx,
                                             std::size_t n) {
  auto coords = split_index(prod, idx, n);
  auto leaves = leaf_factors(prod, n);
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(leaves[i].label(coords[i]));
  return out;
}

}  // namespace diegetic
