#include "relpower/scenario.hpp"

#include "relpower/error.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <regex>
#include <set>
#include <sstream>

namespace relpower {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::ConfigInvalid, path + ": " + what);
}

const json& object_at(const json& j, const std::string& path) {
  if (!j.is_object()) invalid(path, "expected an object");
  return j;
}

void allow_keys(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
  object_at(j, path);
  for (const auto& [key, value] : j.items()) {
    (void)value;
    bool known = false;
    for (const char* k : keys) known = known || key == k;
    if (!known) invalid(path, "unknown key '" + key + "'");
  }
}

const json& member(const json& j, const std::string& path, const char* key) {
  if (!j.contains(key)) invalid(path, std::string("missing required key '") + key + "'");
  return j.at(key);
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) invalid(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) invalid(path, "expected a finite number");
  return v;
}

double positive(const json& j, const std::string& path) {
  const double v = number(j, path);
  if (!(v > 0.0)) invalid(path, "expected a positive number");
  return v;
}

int integer(const json& j, const std::string& path, int lo, int hi) {
  if (!j.is_number_integer()) invalid(path, "expected an integer");
  const auto v = j.get<long long>();
  if (v < lo || v > hi) invalid(path, "expected an integer in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return static_cast<int>(v);
}

Vector3 vec3(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3) invalid(path, "expected an array of 3 numbers");
  return {number(j[0], path + "[0]"), number(j[1], path + "[1]"), number(j[2], path + "[2]")};
}

Tensor33 mat33(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3) invalid(path, "expected a 3x3 array");
  return Tensor33::from_rows(vec3(j[0], path + "[0]"), vec3(j[1], path + "[1]"), vec3(j[2], path + "[2]"));
}

std::string choice(const json& j, const std::string& path, std::initializer_list<const char*> options) {
  if (!j.is_string()) invalid(path, "expected a string");
  const auto s = j.get<std::string>();
  std::string listing;
  for (const char* o : options) {
    if (s == o) return s;
    listing += listing.empty() ? o : std::string(", ") + o;
  }
  invalid(path, "'" + s + "' is not one of: " + listing);
}

Vector3 vec3_or(const json& j, const char* key, const std::string& path, Vector3 fallback) {
  return j.contains(key) ? vec3(j.at(key), path + "." + key) : fallback;
}

const std::vector<std::string> kChecks = {
    "pointwise",  "integral_balances", "inner_power", "invariance",        "grouping",
    "surface_independence", "noether", "constitutive", "torque_identities", "standard_power"};

// ---------------------------------------------------------------------------

ModulusField parse_modulus(const json& j, const std::string& path) {
  if (j.is_number()) return ModulusField::constant(number(j, path));
  allow_keys(j, path, {"base", "gradient", "amplitude", "wavevector"});
  const double base = number(member(j, path, "base"), path + ".base");
  const bool affine = j.contains("gradient");
  const bool wave = j.contains("amplitude") || j.contains("wavevector");
  if (affine && wave) invalid(path, "'gradient' cannot be combined with 'amplitude'/'wavevector'");
  if (affine) return ModulusField::affine(base, vec3(j.at("gradient"), path + ".gradient"));
  if (wave)
    return ModulusField::sinusoidal(base, number(member(j, path, "amplitude"), path + ".amplitude"),
                                    vec3(member(j, path, "wavevector"), path + ".wavevector"));
  return ModulusField::constant(base);
}

MaterialModel parse_material(const json& j, const std::string& path) {
  allow_keys(j, path, {"model", "lambda", "mu"});
  const auto model = choice(member(j, path, "model"), path + ".model", {"stvk", "neo-hookean", "quadratic"});
  const ModulusField mu = parse_modulus(member(j, path, "mu"), path + ".mu");
  if (model == "quadratic") {
    if (j.contains("lambda")) invalid(path, "the quadratic model takes no 'lambda'");
    return MaterialModel::quadratic(mu);
  }
  const ModulusField lambda = parse_modulus(member(j, path, "lambda"), path + ".lambda");
  return model == "stvk" ? MaterialModel::st_venant_kirchhoff(lambda, mu) : MaterialModel::neo_hookean(lambda, mu);
}

Tensor33 parse_rotation(const json& j, const std::string& path) {
  allow_keys(j, path, {"axis", "angle"});
  return rotation_matrix(vec3(member(j, path, "axis"), path + ".axis"),
                         number(member(j, path, "angle"), path + ".angle"));
}

Motion parse_motion(const json& j, const std::string& path) {
  object_at(j, path);
  const auto preset = choice(member(j, path, "preset"), path + ".preset",
                             {"identity", "homogeneous", "rigid_rotation", "simple_shear", "harmonic", "sinusoidal"});
  auto finish = [&](Motion m) {
    if (j.contains("rotation")) m = motions::rotated(m, parse_rotation(j.at("rotation"), path + ".rotation"));
    return m;
  };
  if (preset == "identity") {
    allow_keys(j, path, {"preset", "rotation"});
    return finish(motions::identity());
  }
  if (preset == "homogeneous") {
    allow_keys(j, path, {"preset", "F", "rotation"});
    return finish(motions::homogeneous(mat33(member(j, path, "F"), path + ".F")));
  }
  if (preset == "rigid_rotation") {
    allow_keys(j, path, {"preset", "axis", "angle", "center", "rotation"});
    const Tensor33 r = rotation_matrix(vec3(member(j, path, "axis"), path + ".axis"),
                                       number(member(j, path, "angle"), path + ".angle"));
    return finish(motions::rigid_rotation(r, vec3_or(j, "center", path, {})));
  }
  if (preset == "simple_shear") {
    allow_keys(j, path, {"preset", "gamma", "rotation"});
    return finish(motions::simple_shear(number(member(j, path, "gamma"), path + ".gamma")));
  }
  if (preset == "harmonic") {
    allow_keys(j, path, {"preset", "alpha", "source", "gamma", "rotation"});
    const double source = j.contains("source") ? number(j.at("source"), path + ".source") : 0.0;
    const double gamma = j.contains("gamma") ? number(j.at("gamma"), path + ".gamma") : 0.0;
    return finish(motions::harmonic(number(member(j, path, "alpha"), path + ".alpha"), source, gamma));
  }
  allow_keys(j, path, {"preset", "amplitude", "wavevector", "direction", "rotation"});
  return finish(motions::sinusoidal(number(member(j, path, "amplitude"), path + ".amplitude"),
                                    vec3(member(j, path, "wavevector"), path + ".wavevector"),
                                    vec3(member(j, path, "direction"), path + ".direction")));
}

VectorField parse_field(const json& j, const std::string& path) {
  object_at(j, path);
  const auto preset = choice(member(j, path, "preset"), path + ".preset",
                             {"zero", "constant", "rigid", "linear", "sinusoidal", "sum"});
  if (preset == "zero") {
    allow_keys(j, path, {"preset"});
    return fields::zero();
  }
  if (preset == "constant") {
    allow_keys(j, path, {"preset", "value"});
    return fields::constant(vec3(member(j, path, "value"), path + ".value"));
  }
  if (preset == "rigid") {
    allow_keys(j, path, {"preset", "translation", "rotation", "pivot"});
    return fields::rigid(vec3_or(j, "translation", path, {}), vec3_or(j, "rotation", path, {}),
                         vec3_or(j, "pivot", path, {}));
  }
  if (preset == "linear") {
    allow_keys(j, path, {"preset", "matrix", "offset"});
    return fields::linear(mat33(member(j, path, "matrix"), path + ".matrix"), vec3_or(j, "offset", path, {}));
  }
  if (preset == "sinusoidal") {
    allow_keys(j, path, {"preset", "amplitude", "wavevector", "direction"});
    return fields::sinusoidal(number(member(j, path, "amplitude"), path + ".amplitude"),
                              vec3(member(j, path, "wavevector"), path + ".wavevector"),
                              vec3(member(j, path, "direction"), path + ".direction"));
  }
  allow_keys(j, path, {"preset", "terms"});
  const json& terms = member(j, path, "terms");
  if (!terms.is_array() || terms.empty()) invalid(path + ".terms", "expected a non-empty array");
  VectorField sum = parse_field(terms[0], path + ".terms[0]");
  for (std::size_t i = 1; i < terms.size(); ++i)
    sum = sum + parse_field(terms[i], path + ".terms[" + std::to_string(i) + "]");
  return sum;
}

QuadratureSpec parse_quadrature(const json& d) {
  QuadratureSpec q;
  if (!d.contains("quadrature")) return q;
  const std::string path = "quadrature";
  const json& j = d.at("quadrature");
  allow_keys(j, path, {"order", "angular", "angular_order"});
  if (j.contains("order")) q.order = integer(j.at("order"), path + ".order", 1, 64);
  if (j.contains("angular"))
    q.angular = choice(j.at("angular"), path + ".angular", {"lebedev26", "product"}) == "product"
                    ? AngularRule::Product
                    : AngularRule::Lebedev26;
  if (j.contains("angular_order")) q.angular_order = integer(j.at("angular_order"), path + ".angular_order", 1, 64);
  return q;
}

BodyPart parse_geometry(const json& j, QuadratureSpec q) {
  const std::string path = "geometry";
  object_at(j, path);
  const auto shape = choice(member(j, path, "shape"), path + ".shape", {"box", "ball", "shell"});
  const Vector3 center = vec3_or(j, "center", path, {});
  if (shape == "box") {
    allow_keys(j, path, {"shape", "center", "half_extents"});
    const Vector3 h = vec3(member(j, path, "half_extents"), path + ".half_extents");
    for (std::size_t i = 0; i < 3; ++i)
      if (!(h[i] > 0.0)) invalid(path + ".half_extents", "entries must be positive");
    return BodyPart::box(center, h, q);
  }
  if (shape == "ball") {
    allow_keys(j, path, {"shape", "center", "radius"});
    return BodyPart::ball(center, positive(member(j, path, "radius"), path + ".radius"), q);
  }
  allow_keys(j, path, {"shape", "center", "inner_radius", "outer_radius"});
  const double r0 = positive(member(j, path, "inner_radius"), path + ".inner_radius");
  const double r1 = positive(member(j, path, "outer_radius"), path + ".outer_radius");
  if (!(r1 > r0)) invalid(path, "outer_radius must exceed inner_radius");
  return BodyPart::shell(center, r0, r1, q);
}

struct DerivativeSpec {
  std::string mode = "auto";
  double h_motion = 1e-5;
  double h_second = 1e-4;
};

DerivativeSpec parse_derivatives(const json& d) {
  DerivativeSpec s;
  if (!d.contains("derivatives")) return s;
  const std::string path = "derivatives";
  const json& j = d.at("derivatives");
  allow_keys(j, path, {"mode", "h_motion", "h_second"});
  if (j.contains("mode")) s.mode = choice(j.at("mode"), path + ".mode", {"analytic", "fd", "auto"});
  if (j.contains("h_motion")) s.h_motion = positive(j.at("h_motion"), path + ".h_motion");
  if (j.contains("h_second")) s.h_second = positive(j.at("h_second"), path + ".h_second");
  return s;
}

BodyPotential parse_potential(const json& j, const std::string& path) {
  object_at(j, path);
  const auto kind = choice(member(j, path, "kind"), path + ".kind", {"zero", "uniform", "spring"});
  if (kind == "zero") {
    allow_keys(j, path, {"kind"});
    return BodyPotential::zero();
  }
  if (kind == "uniform") {
    allow_keys(j, path, {"kind", "force"});
    return BodyPotential::uniform(vec3(member(j, path, "force"), path + ".force"));
  }
  allow_keys(j, path, {"kind", "stiffness", "anchor"});
  return BodyPotential::spring(number(member(j, path, "stiffness"), path + ".stiffness"),
                               vec3_or(j, "anchor", path, {}));
}

void parse_sources(const json& d, SourceMode& mode, PresetSources& preset) {
  mode = SourceMode::Closure;
  if (!d.contains("sources")) return;
  const std::string path = "sources";
  const json& j = d.at("sources");
  object_at(j, path);
  const auto m = choice(member(j, path, "mode"), path + ".mode", {"closure", "preset"});
  if (m == "closure") {
    allow_keys(j, path, {"mode"});
    return;
  }
  allow_keys(j, path, {"mode", "body_force", "driving_force", "couple", "potential"});
  mode = SourceMode::Preset;
  if (j.contains("body_force") && j.contains("potential"))
    invalid(path, "'body_force' and 'potential' are mutually exclusive");
  auto constant = [](Vector3 c) { return PointMap([c](const Vector3&) { return c; }); };
  preset.body_force = constant(vec3_or(j, "body_force", path, {}));
  preset.driving_force = constant(vec3_or(j, "driving_force", path, {}));
  preset.couple = constant(vec3_or(j, "couple", path, {}));
  if (j.contains("potential")) preset.potential = parse_potential(j.at("potential"), path + ".potential");
}

std::optional<ObserverChange> parse_observer(const json& d, const Vector3& x0, const Vector3& y0) {
  if (!d.contains("observer")) return std::nullopt;
  const std::string path = "observer";
  const json& j = d.at("observer");
  if (j.is_string()) {
    choice(j, path, {"sweep-unit-generators"});
    return std::nullopt;
  }
  allow_keys(j, path, {"ambient_translation", "ambient_rotation", "material_translation", "material_rotation"});
  ObserverChange c;
  c.ambient_translation = vec3_or(j, "ambient_translation", path, {});
  c.ambient_rotation = vec3_or(j, "ambient_rotation", path, {});
  c.material_translation = vec3_or(j, "material_translation", path, {});
  c.material_rotation = vec3_or(j, "material_rotation", path, {});
  c.ambient_pivot = y0;
  c.material_pivot = x0;
  return c;
}

void validate_extras(const json& d) {
  if (d.contains("sampling")) {
    allow_keys(d.at("sampling"), "sampling", {"points", "seed"});
  }
  if (d.contains("surfaces")) {
    const json& j = d.at("surfaces");
    allow_keys(j, "surfaces", {"center", "inner_radius", "outer_radius", "expect"});
    const double r0 = positive(member(j, "surfaces", "inner_radius"), "surfaces.inner_radius");
    const double r1 = positive(member(j, "surfaces", "outer_radius"), "surfaces.outer_radius");
    if (!(r1 > r0)) invalid("surfaces", "outer_radius must exceed inner_radius");
    vec3_or(j, "center", "surfaces", {});
    if (j.contains("expect")) choice(j.at("expect"), "surfaces.expect", {"invariant", "inhomogeneity"});
  }
  if (d.contains("expect")) {
    const json& j = d.at("expect");
    allow_keys(j, "expect", {"eshelby"});
    if (j.contains("eshelby")) {
      const json& e = j.at("eshelby");
      allow_keys(e, "expect.eshelby", {"point", "value", "tolerance"});
      vec3(member(e, "expect.eshelby", "point"), "expect.eshelby.point");
      mat33(member(e, "expect.eshelby", "value"), "expect.eshelby.value");
      if (e.contains("tolerance")) positive(e.at("tolerance"), "expect.eshelby.tolerance");
    }
  }
  if (d.contains("sweep")) {
    const json& j = d.at("sweep");
    allow_keys(j, "sweep", {"orders", "fd_steps"});
    if (j.contains("orders")) {
      const json& o = j.at("orders");
      if (!o.is_array() || o.empty()) invalid("sweep.orders", "expected a non-empty array");
      for (std::size_t i = 0; i < o.size(); ++i) integer(o[i], "sweep.orders[" + std::to_string(i) + "]", 1, 64);
    }
    if (j.contains("fd_steps")) {
      const json& h = j.at("fd_steps");
      if (!h.is_array() || h.empty()) invalid("sweep.fd_steps", "expected a non-empty array");
      for (std::size_t i = 0; i < h.size(); ++i) positive(h[i], "sweep.fd_steps[" + std::to_string(i) + "]");
    }
  }
  if (d.contains("description") && !d.at("description").is_string())
    invalid("description", "expected a string");
}

}  // namespace

// ---------------------------------------------------------------------------

ScenarioSetup build_setup(const ScenarioConfig& config, const BuildOverrides& overrides) {
  const json& d = config.document;
  QuadratureSpec q = parse_quadrature(d);
  if (overrides.quadrature_order) q.order = *overrides.quadrature_order;
  BodyPart part = parse_geometry(member(d, "scenario", "geometry"), q);
  const double length = part.length_scale();

  const DerivativeSpec ds = parse_derivatives(d);
  const FiniteDifferenceSteps steps =
      overrides.steps ? *overrides.steps : FiniteDifferenceSteps{ds.h_motion * length, ds.h_second * length};
  Motion motion = parse_motion(member(d, "scenario", "motion"), "motion").with_steps(steps);
  MaterialModel material = parse_material(member(d, "scenario", "material"), "material");

  DerivativeMode mode = Scenario::preferred_mode(motion);
  if (ds.mode == "analytic") mode = DerivativeMode::Analytic;
  if (ds.mode == "fd") mode = DerivativeMode::FiniteDifference;
  if (overrides.mode) mode = *overrides.mode;
  if (mode == DerivativeMode::Analytic && !motion.has_analytic_second_derivatives())
    invalid("derivatives.mode", "motion '" + motion.name() + "' has no analytic second derivatives");

  SourceMode source_mode;
  PresetSources preset;
  parse_sources(d, source_mode, preset);

  Vector3 x0 = part.center(), y0 = part.center();
  if (d.contains("pivots")) {
    const json& j = d.at("pivots");
    allow_keys(j, "pivots", {"material", "ambient"});
    x0 = vec3_or(j, "material", "pivots", x0);
    y0 = vec3_or(j, "ambient", "pivots", y0);
  }

  const json& vf = member(d, "scenario", "virtual_fields");
  allow_keys(vf, "virtual_fields", {"v", "w"});
  VirtualFieldPair pair{parse_field(member(vf, "virtual_fields", "v"), "virtual_fields.v"),
                        parse_field(member(vf, "virtual_fields", "w"), "virtual_fields.w")};

  auto observer = parse_observer(d, x0, y0);
  Scenario scenario(std::move(motion), std::move(material), mode, source_mode, std::move(preset), x0, y0);
  return {std::move(scenario), std::move(part), std::move(pair), observer, steps};
}

void validate_kinematics(const ScenarioSetup& setup) {
  const Motion& m = setup.scenario.motion();
  auto check = [&](const Vector3& x) {
    if (!m.in_domain(x))
      throw Error(ErrorCode::EvaluationOutOfDomain, "quadrature node outside the motion's domain");
    const Tensor33 f = m.has_analytic_gradient() ? m.deformation_gradient(x) : m.deformation_gradient_fd(x);
    if (!(determinant(f) > 0.0)) {
      std::ostringstream os;
      os << "det F = " << determinant(f) << " <= 0 at x = " << x;
      throw Error(ErrorCode::NonPositiveJacobian, os.str());
    }
  };
  for (const auto& n : setup.part.volume_nodes()) check(n.x);
  for (const auto& n : setup.part.surface_nodes()) check(n.x);
}

ScenarioConfig parse_scenario(const json& document) {
  allow_keys(document, "scenario",
             {"name", "description", "checks", "geometry", "material", "motion", "virtual_fields", "observer",
              "sources", "pivots", "quadrature", "derivatives", "sampling", "surfaces", "expect", "sweep",
              "output"});
  ScenarioConfig c;
  c.document = document;
  const json& name = member(document, "scenario", "name");
  if (!name.is_string()) invalid("name", "expected a string");
  c.name = name.get<std::string>();
  static const std::regex name_pattern("[A-Za-z0-9_-]{1,64}");
  if (!std::regex_match(c.name, name_pattern)) invalid("name", "must match [A-Za-z0-9_-]{1,64}");

  const json& checks = member(document, "scenario", "checks");
  if (!checks.is_array() || checks.empty()) invalid("checks", "expected a non-empty array");
  std::set<std::string> seen;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const std::string path = "checks[" + std::to_string(i) + "]";
    if (!checks[i].is_string()) invalid(path, "expected a string");
    const auto s = checks[i].get<std::string>();
    if (std::find(kChecks.begin(), kChecks.end(), s) == kChecks.end()) invalid(path, "unknown check '" + s + "'");
    if (!seen.insert(s).second) invalid(path, "duplicate check '" + s + "'");
    c.checks.push_back(s);
  }
  if (document.contains("sampling")) {
    const json& s = document.at("sampling");
    allow_keys(s, "sampling", {"points", "seed"});
    if (s.contains("points")) c.sample_points = integer(s.at("points"), "sampling.points", 1, 100000);
    if (s.contains("seed")) {
      if (!s.at("seed").is_number_unsigned()) invalid("sampling.seed", "expected a non-negative integer");
      c.seed = s.at("seed").get<std::uint64_t>();
    }
  }
  if (document.contains("output")) {
    if (!document.at("output").is_string() || document.at("output").get<std::string>().empty())
      invalid("output", "expected a non-empty string");
    c.output = document.at("output").get<std::string>();
  }
  validate_extras(document);
  if (seen.count("surface_independence") && !document.contains("surfaces"))
    invalid("surfaces", "required by the surface_independence check");
  if (seen.count("grouping") && member(document, "scenario", "geometry").value("shape", "") != "box")
    invalid("geometry", "the grouping check needs a box geometry");

  try {
    (void)build_setup(c);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigInvalid) throw;
    throw Error(ErrorCode::ConfigInvalid, std::string("scenario: ") + e.what());
  }
  return c;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  json document;
  try {
    document = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ConfigInvalid, path.string() + ": " + e.what());
  }
  return parse_scenario(document);
}

std::string config_hash(const json& document) {
  const std::string text = document.dump();  // object keys are kept sorted
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---------------------------------------------------------------------------

namespace {

struct Param {
  const char* name;
  const char* type;
  const char* doc;
};

struct Preset {
  const char* name;
  const char* doc;
  std::vector<Param> params;
};

struct PresetGroup {
  const char* group;
  std::vector<Preset> presets;
};

const std::vector<PresetGroup>& preset_catalog() {
  static const std::vector<PresetGroup> catalog = {
      {"motions",
       {{"identity", "y = x", {}},
        {"homogeneous", "y = F x", {{"F", "mat3", "constant deformation gradient"}}},
        {"rigid_rotation",
         "y = R (x - c) + c",
         {{"axis", "vec3", "rotation axis"}, {"angle", "number", "radians"}, {"center", "vec3", "fixed point"}}},
        {"simple_shear", "y = x + gamma x2 e1", {{"gamma", "number", "shear amount"}}},
        {"harmonic",
         "y = x + alpha (x1^2 - x2^2, -2 x1 x2, 0) + gamma x1 x2 e1 + source x/|x|^3",
         {{"alpha", "number", "polynomial amplitude"},
          {"gamma", "number", "x1 x2 e1 amplitude"},
          {"source", "number", "point-source strength"}}},
        {"sinusoidal",
         "y = x + a sin(k.x) d",
         {{"amplitude", "number", "a"}, {"wavevector", "vec3", "k"}, {"direction", "vec3", "d"}}}}},
      {"materials",
       {{"stvk", "(lambda/2)(tr E)^2 + mu tr(E^2)", {{"lambda", "modulus", ""}, {"mu", "modulus", ""}}},
        {"neo-hookean",
         "(mu/2)(tr C - 3) - mu ln J + (lambda/2)(ln J)^2",
         {{"lambda", "modulus", ""}, {"mu", "modulus", ""}}},
        {"quadratic", "(mu/2)|F - I|^2, not frame-indifferent", {{"mu", "modulus", ""}}}}},
      {"moduli",
       {{"constant", "plain number", {}},
        {"affine", "base + g.x", {{"base", "number", ""}, {"gradient", "vec3", "g"}}},
        {"sinusoidal",
         "base + a sin(k.x)",
         {{"base", "number", ""}, {"amplitude", "number", "a"}, {"wavevector", "vec3", "k"}}}}},
      {"fields",
       {{"zero", "0", {}},
        {"constant", "c", {{"value", "vec3", "c"}}},
        {"rigid",
         "c + q x (x - p)",
         {{"translation", "vec3", "c"}, {"rotation", "vec3", "q"}, {"pivot", "vec3", "p"}}},
        {"linear", "c + A x", {{"matrix", "mat3", "A"}, {"offset", "vec3", "c"}}},
        {"sinusoidal",
         "a sin(k.x) d",
         {{"amplitude", "number", "a"}, {"wavevector", "vec3", "k"}, {"direction", "vec3", "d"}}},
        {"sum", "sum of fields", {{"terms", "array", "fields to add"}}}}},
      {"geometries",
       {{"box", "axis-aligned box", {{"center", "vec3", ""}, {"half_extents", "vec3", ""}}},
        {"ball", "ball", {{"center", "vec3", ""}, {"radius", "number", ""}}},
        {"shell",
         "spherical shell",
         {{"center", "vec3", ""}, {"inner_radius", "number", ""}, {"outer_radius", "number", ""}}}}},
      {"checks",
       {{"pointwise", "pointwise balances and Eshelby stress at sample points (balances.csv)", {}},
        {"integral_balances", "force, torque, configurational force and torque over the part (balances.csv)", {}},
        {"inner_power", "relative power against its inner form (power.csv)", {}},
        {"invariance", "brute-force observer-change coefficients (invariance.csv)", {}},
        {"grouping", "coefficients against the integral balance groupings (grouping.csv)", {}},
        {"surface_independence", "Eshelby flux through nested spheres (surface.csv)", {}},
        {"noether", "Noether conditions and flux divergence (noether.csv)", {}},
        {"constitutive", "analytic derivatives against finite differences (constitutive.csv)", {}},
        {"torque_identities", "Skw(P F^T) and Skw of the Eshelby stress (torque.csv)", {}},
        {"standard_power", "w = 0 degeneracy (standard_power.csv)", {}}}},
  };
  return catalog;
}

}  // namespace

std::string list_presets_text() {
  std::ostringstream os;
  for (const auto& g : preset_catalog()) {
    os << g.group << ":\n";
    for (const auto& p : g.presets) {
      os << "  " << p.name << "  " << p.doc << "\n";
      for (const auto& a : p.params) {
        os << "      " << a.name << " (" << a.type << ")";
        if (*a.doc) os << "  " << a.doc;
        os << "\n";
      }
    }
  }
  return os.str();
}

json list_presets_json() {
  json out = json::object();
  for (const auto& g : preset_catalog()) {
    json arr = json::array();
    for (const auto& p : g.presets) {
      json params = json::array();
      for (const auto& a : p.params) params.push_back({{"name", a.name}, {"type", a.type}, {"doc", a.doc}});
      arr.push_back({{"name", p.name}, {"doc", p.doc}, {"parameters", params}});
    }
    out[g.group] = arr;
  }
  return out;
}

}  // namespace relpower
