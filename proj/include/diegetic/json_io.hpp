#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "diegetic/analysis.hpp"
#include "diegetic/kernel.hpp"
#include "diegetic/value.hpp"

namespace diegetic {

/// Key-order-preserving JSON; canonical output depends on insertion order.
using Json = nlohmann::ordered_json;

// ---- rationals ----

/// Canonical form: a JSON integer when the value is an integer that fits
/// in 64 bits, otherwise the string "p/q".
inline Json rational_to_json(const Rational& r) {
  if (denominator(r) == 1) {
    const auto& n = numerator(r);
    if (n >= std::numeric_limits<std::int64_t>::min() &&
        n <= std::numeric_limits<std::int64_t>::max())
      return Json(static_cast<std::int64_t>(n));
  }
  return Json(rational_to_string(r));
}

inline Rational rational_from_json(const Json& j, const std::string& at) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw schema_error(at + ": expected an integer or a \"p/q\" string");
}

inline Json payvec_to_json(const PayVec& v) {
  Json out = Json::array();
  for (const auto& r : v) out.push_back(rational_to_json(r));
  return out;
}

inline PayVec payvec_from_json(const Json& j, const std::string& at) {
  if (!j.is_array()) throw schema_error(at + ": expected an array of rationals");
  PayVec out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(rational_from_json(j[i], at + "[" + std::to_string(i) + "]"));
  return out;
}

// ---- finite sets and tables ----

inline Json finset_to_json(const FinSet& s) {
  Json out;
  out["name"] = s.name();
  out["elems"] = s.elements();
  return out;
}

inline FinSet finset_from_json(const Json& j, const std::string& at) {
  if (!j.is_object() || !j.contains("name") || !j.contains("elems"))
    throw schema_error(at + ": expected {\"name\", \"elems\"}");
  return FinSet(j["name"].get<std::string>(), j["elems"].get<std::vector<std::string>>());
}

inline Json table_to_json(const Table& t) {
  Json out;
  out["dom"] = finset_to_json(t.dom());
  out["cod"] = finset_to_json(t.cod());
  Json map = Json::object();
  for (std::uint32_t i = 0; i < t.dom().size(); ++i)
    map[t.dom().label(i)] = t.cod().label(t.apply(i));
  out["map"] = std::move(map);
  return out;
}

inline Table table_from_json(const Json& j, const std::string& at) {
  if (!j.is_object() || !j.contains("dom") || !j.contains("cod") || !j.contains("map"))
    throw schema_error(at + ": expected {\"dom\", \"cod\", \"map\"}");
  FinSet dom = finset_from_json(j["dom"], at + ".dom");
  FinSet cod = finset_from_json(j["cod"], at + ".cod");
  std::vector<std::pair<std::string, std::string>> entries;
  for (const auto& [k, v] : j["map"].items()) entries.emplace_back(k, v.get<std::string>());
  return Table::from_label_map(std::move(dom), std::move(cod), entries);
}

inline Json payfn_to_json(const PayFn& u) {
  Json out;
  out["dom"] = finset_to_json(u.dom());
  out["dim"] = u.dim();
  Json values = Json::object();
  for (std::uint32_t i = 0; i < u.dom().size(); ++i)
    values[u.dom().label(i)] = payvec_to_json(u.at(i));
  out["values"] = std::move(values);
  return out;
}

inline PayFn payfn_from_json(const Json& j, const std::string& at) {
  FinSet dom = finset_from_json(j.at("dom"), at + ".dom");
  std::size_t dim = j.at("dim").get<std::size_t>();
  std::vector<PayVec> values(dom.size());
  std::vector<bool> seen(dom.size(), false);
  for (const auto& [k, v] : j.at("values").items()) {
    auto idx = dom.find(k);
    if (!idx) throw schema_error(at + ".values: unknown element '" + k + "'");
    values[*idx] = payvec_from_json(v, at + ".values." + k);
    seen[*idx] = true;
  }
  for (std::uint32_t i = 0; i < dom.size(); ++i)
    if (!seen[i]) throw schema_error(at + ".values: missing element '" + dom.label(i) + "'");
  return PayFn(std::move(dom), dim, std::move(values));
}

// ---- value spaces ----

inline Json space_to_json(const ValueSpace& sp) {
  Json out;
  switch (sp.kind()) {
    case ValueSpace::Kind::unit:
      out["kind"] = "unit";
      break;
    case ValueSpace::Kind::pay:
      out["kind"] = "pay";
      out["dim"] = sp.pay_dim();
      break;
    case ValueSpace::Kind::payfn:
      out["kind"] = "payfn";
      out["set"] = finset_to_json(sp.set());
      out["dim"] = sp.pay_dim();
      break;
    case ValueSpace::Kind::subsets:
      out["kind"] = "subsets";
      out["set"] = finset_to_json(sp.set());
      break;
    case ValueSpace::Kind::elem:
      out["kind"] = "elem";
      out["set"] = finset_to_json(sp.set());
      break;
    case ValueSpace::Kind::pair:
      out["kind"] = "pair";
      out["first"] = space_to_json(sp.first());
      out["second"] = space_to_json(sp.second());
      break;
    case ValueSpace::Kind::pay_endo:
      out["kind"] = "pay_endo";
      out["dim"] = sp.pay_dim();
      break;
  }
  return out;
}

inline ValueSpace space_from_json(const Json& j, const std::string& at) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "unit") return ValueSpace::unit_space();
  if (kind == "pay") return ValueSpace::pay(j.at("dim").get<std::size_t>());
  if (kind == "payfn")
    return ValueSpace::payfn(finset_from_json(j.at("set"), at + ".set"),
                             j.at("dim").get<std::size_t>());
  if (kind == "subsets")
    return ValueSpace::subsets(finset_from_json(j.at("set"), at + ".set"));
  if (kind == "elem") return ValueSpace::elem(finset_from_json(j.at("set"), at + ".set"));
  if (kind == "pair")
    return ValueSpace::pair(space_from_json(j.at("first"), at + ".first"),
                            space_from_json(j.at("second"), at + ".second"));
  if (kind == "pay_endo") return ValueSpace::pay_endo(j.at("dim").get<std::size_t>());
  throw schema_error(at + ": unknown value-space kind '" + kind + "'");
}

// ---- kernels ----

inline Json kernel_to_json(const Kernel& k) {
  Json out;
  out["tag"] = Kernel::tag_name(k.tag());
  switch (k.tag()) {
    case Kernel::Tag::id:
    case Kernel::Tag::discard:
      out["dom"] = space_to_json(k.dom());
      break;
    case Kernel::Tag::compose:
    case Kernel::Tag::pair:
      out["first"] = kernel_to_json(k.child(0));
      out["second"] = kernel_to_json(k.child(1));
      break;
    case Kernel::Tag::proj1:
    case Kernel::Tag::proj2:
      out["dom"] = space_to_json(k.dom());
      break;
    case Kernel::Tag::const_pay:
      out["dom"] = space_to_json(k.dom());
      out["value"] = payvec_to_json(k.payvec());
      break;
    case Kernel::Tag::precompose:
      if (k.cod().kind() == ValueSpace::Kind::payfn &&
          k.dom().kind() == ValueSpace::Kind::payfn) {
        out["table"] = table_to_json(k.table());
        out["dim"] = k.pay_dim();
      } else {
        out["payfn"] = payfn_to_json(k.payfn());
      }
      break;
    case Kernel::Tag::partial_left:
    case Kernel::Tag::partial_right:
      out["left"] = finset_to_json(k.carrier().left_factor());
      out["right"] = finset_to_json(k.carrier().right_factor());
      out["dim"] = k.pay_dim();
      break;
    case Kernel::Tag::subtract_at:
      out["set"] = finset_to_json(k.carrier());
      out["dim"] = k.pay_dim();
      break;
    case Kernel::Tag::const_idfn:
      out["dom"] = space_to_json(k.dom());
      out["dim"] = k.pay_dim();
      break;
    case Kernel::Tag::argmax:
      out["set"] = finset_to_json(k.carrier());
      out["dim"] = k.pay_dim();
      out["coord"] = k.coord();
      break;
    case Kernel::Tag::subset_product:
      out["left"] = finset_to_json(k.carrier().left_factor());
      out["right"] = finset_to_json(k.carrier().right_factor());
      break;
    case Kernel::Tag::map_elem:
      out["table"] = table_to_json(k.table());
      break;
  }
  return out;
}

inline Kernel kernel_from_json(const Json& j, const std::string& at) {
  const std::string tag = j.at("tag").get<std::string>();
  if (tag == "id") return k_identity(space_from_json(j.at("dom"), at + ".dom"));
  if (tag == "discard") return k_discard(space_from_json(j.at("dom"), at + ".dom"));
  if (tag == "compose")
    return k_compose(kernel_from_json(j.at("first"), at + ".first"),
                     kernel_from_json(j.at("second"), at + ".second"));
  if (tag == "pair")
    return k_pair(kernel_from_json(j.at("first"), at + ".first"),
                  kernel_from_json(j.at("second"), at + ".second"));
  if (tag == "proj1") return k_proj1(space_from_json(j.at("dom"), at + ".dom"));
  if (tag == "proj2") return k_proj2(space_from_json(j.at("dom"), at + ".dom"));
  if (tag == "const_pay")
    return k_const_pay(space_from_json(j.at("dom"), at + ".dom"),
                       payvec_from_json(j.at("value"), at + ".value"));
  if (tag == "precompose") {
    if (j.contains("table"))
      return k_precompose(table_from_json(j.at("table"), at + ".table"),
                          j.at("dim").get<std::size_t>());
    return k_precompose(payfn_from_json(j.at("payfn"), at + ".payfn"));
  }
  if (tag == "partial_left" || tag == "partial_right" || tag == "subset_product") {
    FinSet prod = product(finset_from_json(j.at("left"), at + ".left"),
                          finset_from_json(j.at("right"), at + ".right"));
    if (tag == "subset_product") return k_subset_product(prod);
    std::size_t dim = j.at("dim").get<std::size_t>();
    return tag == "partial_left" ? k_partial_left(prod, dim) : k_partial_right(prod, dim);
  }
  if (tag == "subtract_at")
    return k_subtract_at(finset_from_json(j.at("set"), at + ".set"),
                         j.at("dim").get<std::size_t>());
  if (tag == "const_idfn")
    return k_const_idfn(space_from_json(j.at("dom"), at + ".dom"),
                        j.at("dim").get<std::size_t>());
  if (tag == "argmax")
    return k_argmax(finset_from_json(j.at("set"), at + ".set"),
                    j.at("dim").get<std::size_t>(), j.at("coord").get<std::size_t>());
  if (tag == "map_elem") return k_map_elem(table_from_json(j.at("table"), at + ".table"));
  throw schema_error(at + ": unknown kernel tag '" + tag + "'");
}

}  // namespace diegetic
