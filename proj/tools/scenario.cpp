#include "scenario.hpp"

#include <fstream>
#include <sstream>

namespace twcli {

namespace {

[[noreturn]] void schema(const std::string& where, const std::string& what) {
  throw tw::Error("SchemaError", "cli", where + ": " + what);
}

tw::Q parse_q(const json& j, const std::string& where) {
  if (j.is_number_integer()) return tw::Q(j.get<long>());
  if (j.is_string()) {
    try {
      tw::Q q(j.get<std::string>());
      q.canonicalize();
      return q;
    } catch (const std::exception&) {
      schema(where, "not a rational number");
    }
  }
  schema(where, "expected an integer or a rational string such as \"-3/2\"");
}

KSpec parse_k(const json& j, const std::string& where) {
  KSpec k;
  if (!j.is_object()) schema(where, "expected an object");
  k.label = j.value("label", std::string());
  if (j.contains("bundle")) {
    k.terms.push_back({tw::Q(1), parse_longs(j["bundle"], where + "/bundle")});
  } else if (j.contains("combination")) {
    const auto& c = j["combination"];
    if (!c.is_array() || c.empty()) schema(where + "/combination", "expected a non-empty array");
    for (size_t i = 0; i < c.size(); ++i) {
      std::string w = where + "/combination/" + std::to_string(i);
      if (!c[i].contains("bundle")) schema(w, "missing 'bundle'");
      k.terms.push_back({c[i].contains("coef") ? parse_q(c[i]["coef"], w + "/coef") : tw::Q(1),
                         parse_longs(c[i]["bundle"], w + "/bundle")});
    }
  } else {
    schema(where, "needs 'bundle' or 'combination'");
  }
  k.shift = j.value("shift", false);
  if (j.contains("marking")) k.marking = parse_complex(j["marking"], where + "/marking");
  return k;
}

}  // namespace

cplx parse_complex(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  schema(where, "expected a number or [re, im]");
}

std::vector<long> parse_longs(const json& j, const std::string& where) {
  if (!j.is_array()) schema(where, "expected an array of integers");
  std::vector<long> v;
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number_integer()) schema(where + "/" + std::to_string(i), "expected an integer");
    v.push_back(j[i].get<long>());
  }
  return v;
}

json Scenario::section(const std::string& key) const { return raw.contains(key) ? raw[key] : json::object(); }

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw tw::Error("SchemaError", "cli", "cannot open scenario file " + path);
  Scenario sc;
  sc.file = path;
  try {
    sc.raw = json::parse(in);
  } catch (const json::parse_error& e) {
    throw tw::Error("SchemaError", "cli", path + ": " + e.what());
  }
  const json& j = sc.raw;
  if (!j.is_object()) schema("", "scenario must be a JSON object");
  sc.name = j.value("name", std::string("scenario"));

  if (!j.contains("lattice")) schema("/lattice", "missing");
  tw::AbelianLattice lat;
  const auto& L = j["lattice"];
  if (!L.contains("rank") || !L["rank"].is_number_integer()) schema("/lattice/rank", "missing integer");
  lat.rank = L["rank"].get<int>();
  if (L.contains("torsion")) lat.torsion = parse_longs(L["torsion"], "/lattice/torsion");

  if (!j.contains("S") || !j["S"].is_array() || j["S"].empty()) schema("/S", "expected a non-empty array of vectors");
  std::vector<tw::LatticeElem> vs;
  for (size_t i = 0; i < j["S"].size(); ++i) vs.push_back(parse_longs(j["S"][i], "/S/" + std::to_string(i)));
  std::vector<std::string> labels;
  if (j.contains("labels"))
    for (const auto& x : j["labels"]) labels.push_back(x.get<std::string>());
  sc.S = tw::VectorSet::make(lat, vs, labels);

  if (j.contains("fans")) {
    if (!j["fans"].is_object()) schema("/fans", "expected an object of named cone lists");
    for (auto it = j["fans"].begin(); it != j["fans"].end(); ++it) {
      std::vector<std::vector<int>> cones;
      for (size_t c = 0; c < it.value().size(); ++c) {
        auto l = parse_longs(it.value()[c], "/fans/" + it.key() + "/" + std::to_string(c));
        cones.emplace_back(l.begin(), l.end());
      }
      sc.named_fans.emplace_back(it.key(), cones);
    }
  }
  if (j.contains("wall")) {
    const auto& w = j["wall"];
    if (!w.is_array() || w.size() != 2 || !w[0].is_string() || !w[1].is_string())
      schema("/wall", "expected a pair of fan names");
    sc.wall = std::make_pair(w[0].get<std::string>(), w[1].get<std::string>());
  }
  if (j.contains("path")) {
    const auto& p = j["path"];
    PathSpec ps;
    ps.variable = p.value("variable", std::string("l"));
    if (!p.contains("from") || !p.contains("to")) schema("/path", "needs 'from' and 'to'");
    ps.from = parse_complex(p["from"], "/path/from");
    ps.to = parse_complex(p["to"], "/path/to");
    ps.steps = p.value("steps", 200);
    if (ps.steps < 1) schema("/path/steps", "must be positive");
    if (!p.contains("q") || !p["q"].is_array()) schema("/path/q", "expected an array of expressions");
    for (const auto& e : p["q"]) ps.q.push_back(e.get<std::string>());
    ps.basis = p.value("basis", std::string("L"));
    if (p.contains("chi"))
      for (size_t i = 0; i < p["chi"].size(); ++i) ps.chi.push_back(parse_complex(p["chi"][i], "/path/chi/" + std::to_string(i)));
    sc.path = ps;
  }
  sc.phase = j.value("phase", 0.0);
  if (j.contains("k_basis")) {
    if (!j["k_basis"].is_array()) schema("/k_basis", "expected an array");
    for (size_t i = 0; i < j["k_basis"].size(); ++i)
      sc.k_basis.push_back(parse_k(j["k_basis"][i], "/k_basis/" + std::to_string(i)));
  }
  sc.k_fan = j.value("k_fan", std::string());
  if (j.contains("tolerances")) {
    const auto& t = j["tolerances"];
    sc.tol.newton = t.value("newton", sc.tol.newton);
    sc.tol.hess = t.value("hess", sc.tol.hess);
    sc.tol.collide = t.value("collide", sc.tol.collide);
    sc.tol.dedupe = t.value("dedupe", sc.tol.dedupe);
    sc.tol.budget_factor = t.value("budget_factor", sc.tol.budget_factor);
  }
  return sc;
}

std::vector<tw::StackyFan> scenario_fans(const Scenario& sc) {
  std::vector<tw::StackyFan> out;
  if (!sc.named_fans.empty()) {
    for (const auto& [name, cones] : sc.named_fans) out.push_back(tw::validate_stacky_fan(sc.S, cones, name));
    return out;
  }
  out = tw::enumerate_adapted_fans(sc.S);
  for (size_t i = 0; i < out.size(); ++i) out[i].name = "Sigma" + std::to_string(i + 1);
  return out;
}

const tw::StackyFan& fan_by_name(const std::vector<tw::StackyFan>& fans, const std::string& name) {
  for (const auto& f : fans)
    if (f.name == name) return f;
  throw tw::Error("SchemaError", "cli", "unknown fan name '" + name + "'");
}

tw::WallCrossing scenario_wall(const Scenario& sc, const std::vector<tw::StackyFan>& fans) {
  if (sc.wall) return tw::wall_between(fan_by_name(fans, sc.wall->first), fan_by_name(fans, sc.wall->second));
  if (fans.size() == 2) return tw::wall_between(fans[0], fans[1]);
  throw tw::Error("SchemaError", "cli", "/wall: needed when the scenario has other than two fans");
}

tw::LGFamily scenario_family(const Scenario& sc, const std::vector<tw::StackyFan>& fans) {
  if (!sc.path) throw tw::Error("SchemaError", "cli", "/path: missing");
  const auto& p = *sc.path;
  tw::QMat basis;
  if (p.basis == "L") {
    for (const auto& r : tw::extended_sequences(sc.S).L) basis.push_back(tw::to_q(r));
  } else {
    basis = tw::extended_mori_cones(fan_by_name(fans, p.basis)).lambda_basis;
  }
  if (p.q.size() != basis.size())
    throw tw::Error("SchemaError", "cli",
                    "/path/q: expected " + std::to_string(basis.size()) + " expressions, one per basis element");
  std::vector<tw::Expr> q;
  for (size_t i = 0; i < p.q.size(); ++i) {
    try {
      q.push_back(tw::Expr::parse(p.q[i], p.variable));
    } catch (const tw::Error& e) {
      throw tw::Error(e.kind(), e.module(), "/path/q/" + std::to_string(i) + ": " + e.what());
    }
  }
  return tw::LGFamily::chart(sc.S, basis, q, p.chi);
}

tw::KClass build_class(const tw::ChowRing& ring, const KSpec& k) {
  tw::KClass c = tw::line_bundle(ring, k.terms[0].bundle);
  c.ch = tw::scale(c.ch, k.terms[0].coef);
  for (size_t i = 1; i < k.terms.size(); ++i) {
    auto t = tw::line_bundle(ring, k.terms[i].bundle);
    c = tw::combine(c, 1, t, k.terms[i].coef);
  }
  if (k.shift) c = tw::shift(c);
  c.label = k.label;
  return c;
}

}  // namespace twcli
