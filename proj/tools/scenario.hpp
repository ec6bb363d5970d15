#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json_writer.hpp"
#include "toricwall/cohomology_k.hpp"
#include "toricwall/lg_model.hpp"

namespace twcli {

using tw::cplx;

struct KTerm {
  tw::Q coef = 1;
  std::vector<long> bundle;  // coefficients over S of the divisor
};

struct KSpec {
  std::string label;
  std::vector<KTerm> terms;
  bool shift = false;
  std::optional<cplx> marking;
};

struct PathSpec {
  std::string variable = "l";
  cplx from, to;
  int steps = 200;
  std::vector<std::string> q;
  std::string basis = "L";  // "L" or the name of a fan whose Lambda basis is used
  std::vector<cplx> chi;
};

struct Scenario {
  std::string file;
  std::string name;
  tw::VectorSet S;
  std::vector<std::pair<std::string, std::vector<std::vector<int>>>> named_fans;
  std::optional<std::pair<std::string, std::string>> wall;
  std::optional<PathSpec> path;
  double phase = 0;
  std::vector<KSpec> k_basis;
  std::string k_fan;
  tw::Tolerances tol;
  json raw;  // the whole document, for command-specific sections

  // section of the document, or an empty object
  json section(const std::string& key) const;
};

// Throws tw::Error("SchemaError", "cli", ...) with the JSON pointer of the
// offending field.
Scenario load_scenario(const std::string& path);

cplx parse_complex(const json& j, const std::string& where);
std::vector<long> parse_longs(const json& j, const std::string& where);

// Fans of the scenario: the named ones if given, otherwise all adapted fans
// (named Sigma1, Sigma2, ... in enumeration order).
std::vector<tw::StackyFan> scenario_fans(const Scenario& sc);
const tw::StackyFan& fan_by_name(const std::vector<tw::StackyFan>& fans, const std::string& name);
tw::WallCrossing scenario_wall(const Scenario& sc, const std::vector<tw::StackyFan>& fans);

tw::LGFamily scenario_family(const Scenario& sc, const std::vector<tw::StackyFan>& fans);
tw::KClass build_class(const tw::ChowRing& ring, const KSpec& k);

}  // namespace twcli
