#include "stlnav/world/scenario.hpp"

#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "stlnav/errors.hpp"

namespace stlnav::world {

using nlohmann::json;

namespace {

const char* kRoleNames[] = {"goal", "target", "obstacle", "nofly", "gate", "auth", "search"};

Eigen::VectorXd vec_from(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) throw SchemaError(field, "expected a nonempty array of numbers");
  Eigen::VectorXd v(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw SchemaError(field, "expected a number");
    v[i] = j[i].get<double>();
  }
  return v;
}

json vec_to(const Eigen::VectorXd& v) {
  json j = json::array();
  for (int i = 0; i < v.size(); ++i) j.push_back(v[i]);
  return j;
}

const json& need(const json& j, const char* key) {
  if (!j.contains(key)) throw SchemaError(key, "missing field");
  return j.at(key);
}

}  // namespace

const char* role_name(RegionRole r) { return kRoleNames[static_cast<int>(r)]; }

RegionRole role_from_name(const std::string& s) {
  for (int i = 0; i < 7; ++i)
    if (s == kRoleNames[i]) return static_cast<RegionRole>(i);
  throw SchemaError("role", "unknown role '" + s + "'");
}

const Region* Scenario::find_region(const std::string& name) const {
  for (const auto& r : regions)
    if (r.name == name) return &r;
  return nullptr;
}

stl::RegionTable Scenario::region_table() const {
  stl::RegionTable t;
  t.dims = dims();
  for (const auto& r : regions) t.names.insert(r.name);
  return t;
}

stl::RegionMap Scenario::region_map() const {
  stl::RegionMap m;
  for (const auto& r : regions) m[r.name] = stl::BoxRegion{r.lo, r.hi};
  return m;
}

void validate(const Scenario& sc) {
  const int d = sc.dims();
  if (d < 1 || d > 3) throw InvariantViolation("workspace dimension must be 1, 2 or 3");
  if (sc.ws_hi.size() != d) throw InvariantViolation("workspace min/max dimension mismatch");
  for (int i = 0; i < d; ++i)
    if (!(sc.ws_lo[i] < sc.ws_hi[i])) throw InvariantViolation("workspace min must be below max");
  if (!(sc.dt > 0)) throw InvariantViolation("dt must be positive");
  if (sc.horizon < 1) throw InvariantViolation("horizon must be at least 1");
  if (!(sc.vmax > 0) || !(sc.amax > 0)) throw InvariantViolation("vmax and amax must be positive");
  if (sc.x0.size() != 2 * d) throw InvariantViolation("x0 must stack position and velocity");
  for (int i = 0; i < d; ++i) {
    if (sc.x0[i] < sc.ws_lo[i] || sc.x0[i] > sc.ws_hi[i])
      throw InvariantViolation("initial position outside the workspace");
    if (std::abs(sc.x0[d + i]) > sc.vmax)
      throw InvariantViolation("initial velocity exceeds vmax");
  }
  std::set<std::string> names;
  for (const auto& r : sc.regions) {
    if (r.name.empty()) throw InvariantViolation("region with empty name");
    if (!names.insert(r.name).second)
      throw InvariantViolation("duplicate region name '" + r.name + "'");
    if (r.dims() != d || r.hi.size() != d)
      throw InvariantViolation("region '" + r.name + "' dimension mismatch");
    for (int i = 0; i < d; ++i) {
      if (!(r.lo[i] < r.hi[i]))
        throw InvariantViolation("region '" + r.name + "' min must be below max");
      if (r.lo[i] < sc.ws_lo[i] || r.hi[i] > sc.ws_hi[i])
        throw InvariantViolation("region '" + r.name + "' extends outside the workspace");
    }
  }
}

Scenario scenario_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw SchemaError("document", e.what());
  }
  Scenario sc;
  const json& ws = need(j, "workspace");
  sc.ws_lo = vec_from(need(ws, "min"), "workspace.min");
  sc.ws_hi = vec_from(need(ws, "max"), "workspace.max");
  if (!need(j, "dt").is_number()) throw SchemaError("dt", "expected a number");
  sc.dt = j["dt"].get<double>();
  if (!need(j, "horizon").is_number_integer()) throw SchemaError("horizon", "expected an integer");
  sc.horizon = j["horizon"].get<int>();
  sc.vmax = need(j, "vmax").get<double>();
  sc.amax = need(j, "amax").get<double>();
  const json& x0 = need(j, "x0");
  Eigen::VectorXd p = vec_from(need(x0, "p"), "x0.p");
  Eigen::VectorXd v = vec_from(need(x0, "v"), "x0.v");
  if (p.size() != v.size()) throw SchemaError("x0", "p and v dimension mismatch");
  sc.x0.resize(p.size() + v.size());
  sc.x0 << p, v;
  for (const json& rj : need(j, "regions")) {
    Region r;
    r.name = need(rj, "name").get<std::string>();
    r.role = role_from_name(need(rj, "role").get<std::string>());
    r.lo = vec_from(need(rj, "min"), "region.min");
    r.hi = vec_from(need(rj, "max"), "region.max");
    sc.regions.push_back(std::move(r));
  }
  if (j.contains("nl_instruction") && !j["nl_instruction"].is_null())
    sc.nl_instruction = j["nl_instruction"].get<std::string>();
  validate(sc);
  return sc;
}

std::string scenario_to_json_text(const Scenario& sc) {
  json j;
  j["workspace"] = {{"min", vec_to(sc.ws_lo)}, {"max", vec_to(sc.ws_hi)}};
  j["dt"] = sc.dt;
  j["horizon"] = sc.horizon;
  j["vmax"] = sc.vmax;
  j["amax"] = sc.amax;
  const int d = sc.dims();
  j["x0"] = {{"p", vec_to(sc.x0.head(d))}, {"v", vec_to(sc.x0.tail(d))}};
  j["regions"] = json::array();
  for (const auto& r : sc.regions) {
    j["regions"].push_back({{"name", r.name},
                            {"role", role_name(r.role)},
                            {"min", vec_to(r.lo)},
                            {"max", vec_to(r.hi)}});
  }
  if (sc.nl_instruction) j["nl_instruction"] = *sc.nl_instruction;
  return j.dump(2) + "\n";
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("file", "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return scenario_from_json_text(ss.str());
}

void save_scenario(const Scenario& sc, const std::string& path) {
  validate(sc);
  std::ofstream out(path);
  if (!out) throw SchemaError("file", "cannot write '" + path + "'");
  out << scenario_to_json_text(sc);
}

std::vector<stl::AtomicPredicate> membership_atoms(const Region& r) {
  const int d = r.dims();
  std::vector<stl::AtomicPredicate> atoms;
  atoms.reserve(2 * d);
  for (int i = 0; i < d; ++i) {
    stl::AtomicPredicate lo;  // p_i - lo_i >= 0
    lo.coeffs = Eigen::VectorXd::Zero(2 * d);
    lo.coeffs[i] = 1.0;
    lo.offset = -r.lo[i];
    atoms.push_back(std::move(lo));
    stl::AtomicPredicate hi;  // hi_i - p_i >= 0
    hi.coeffs = Eigen::VectorXd::Zero(2 * d);
    hi.coeffs[i] = -1.0;
    hi.offset = r.hi[i];
    atoms.push_back(std::move(hi));
  }
  return atoms;
}

std::vector<stl::AtomicPredicate> complement_atoms(const Region& r, double strict_eps) {
  auto atoms = membership_atoms(r);
  for (auto& a : atoms) {
    a.coeffs = -a.coeffs;
    a.offset = -a.offset - strict_eps;
  }
  return atoms;
}

stl::Formula avoidance_formula(const Region& r, stl::FormulaBuilder& b, double strict_eps) {
  std::vector<stl::Formula> faces;
  for (auto& a : complement_atoms(r, strict_eps)) faces.push_back(b.atom(std::move(a)));
  return b.disj(std::move(faces));
}

}  // namespace stlnav::world
