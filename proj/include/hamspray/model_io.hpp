#pragma once

/// \file
/// JSON model documents: an algebroid chart with optional Lagrangian, closed
/// 2-section, extra potential and sampling settings. Index keys are 1-based
/// ("k,i,j" for C with i < j, "i,j" for Theta with i < j).

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hamspray/algebroid.hpp"

namespace hamspray {

struct Tolerances {
  std::optional<double> tol;
  std::optional<int> trials;
};

struct Model {
  AlgebroidChart chart;
  std::optional<Expr> L;
  std::optional<AForm> theta;
  std::optional<Expr> f;
  /// Named constants, substituted into every expression on load.
  std::vector<std::pair<std::string, Rational>> params;
  Box box;
  std::optional<std::uint64_t> seed;
  Tolerances tolerances;

  /// Names of x, y and params, in that order.
  std::vector<Symbol> alphabet() const;
  AForm theta_or_zero() const { return theta ? *theta : AForm(chart.r(), 2); }
};

/// Throws SchemaError naming the offending field.
Model read_model(const nlohmann::json& doc);
Model parse_model(std::string_view text);
Model read_model_file(const std::string& path);

/// Parses an expression over the model alphabet with params substituted.
/// Throws SchemaError at `path`.
Expr parse_expr(const Model& m, std::string_view text, const std::string& path);

/// Canonical document; expressions go through the canonical printer.
nlohmann::json write_model(const Model& m);
std::string dump_model(const Model& m);

/// Model for a catalog fixture.
Model model_from_fixture(const Fixture& f);

}  // namespace hamspray
