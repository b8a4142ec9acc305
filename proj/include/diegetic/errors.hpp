#pragma once

#include <stdexcept>
#include <string>

namespace diegetic {

/// Base class for all engine errors. Subclasses map onto the CLI exit
/// codes: schema_error -> 2, element/boundary errors -> 3, cap_error -> 4.
class error : public std::runtime_error {
public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input data (bad JSON shape, bad rational literal, partial
/// payoff table, duplicate labels in a file).
class schema_error : public error {
public:
  explicit schema_error(const std::string& what) : error("schema: " + what) {}
};

/// A label or element that does not belong to the set it was used with.
class element_error : public error {
public:
  explicit element_error(const std::string& what) : error("element: " + what) {}
};

/// Composition or typing mismatch between tables, kernels, lenses or
/// parametric lenses.
class boundary_error : public error {
public:
  explicit boundary_error(const std::string& what) : error("boundary: " + what) {}
};

/// Exhaustive tabulation would exceed the configured profile cap.
class cap_error : public error {
public:
  explicit cap_error(const std::string& what) : error("cap: " + what) {}
};

}  // namespace diegetic
