#include "efk/config.hpp"

#include <fstream>

#include "efk/error.hpp"

namespace efk {

namespace {

template <class T>
T get_or(const Json& j, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Schema, std::string("bad value for '") + key + "': " + e.what());
  }
}

const Json& need(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(ErrorKind::Schema, std::string("missing key '") + key + "'");
  return j.at(key);
}

InitSpec init_from_json(const Json& j) {
  InitSpec s;
  const std::string kind = j.is_string() ? j.get<std::string>() : need(j, "kind").get<std::string>();
  if (kind == "zero") {
    s.kind = InitKind::Zero;
  } else if (kind == "delta_phi1") {
    s.kind = InitKind::DeltaPhi1;
  } else if (kind == "random") {
    s.kind = InitKind::Random;
  } else if (kind == "file") {
    s.kind = InitKind::File;
  } else {
    fail(ErrorKind::Schema, "unknown init kind '" + kind + "'");
  }
  if (j.is_object()) {
    s.delta = get_or(j, "delta", s.delta);
    s.seed = get_or<std::uint64_t>(j, "seed", s.seed);
    s.amplitude = get_or(j, "amplitude", s.amplitude);
    s.positive = get_or(j, "positive", s.positive);
    s.path = get_or<std::string>(j, "path", s.path);
  }
  if (s.kind == InitKind::File && s.path.empty()) fail(ErrorKind::Schema, "file init needs a path");
  return s;
}

Json init_to_json(const InitSpec& s) {
  Json j;
  switch (s.kind) {
    case InitKind::Zero: j["kind"] = "zero"; break;
    case InitKind::DeltaPhi1: j["kind"] = "delta_phi1"; j["delta"] = s.delta; break;
    case InitKind::Random:
      j["kind"] = "random";
      j["seed"] = s.seed;
      j["amplitude"] = s.amplitude;
      j["positive"] = s.positive;
      break;
    case InitKind::File: j["kind"] = "file"; j["path"] = s.path; break;
  }
  return j;
}

}  // namespace

DomainSpec domain_from_json(const Json& j) {
  const std::string kind = need(j, "kind").get<std::string>();
  DomainSpec d;
  try {
    if (kind == "hyperrectangle" || kind == "interval" || kind == "rectangle") {
      d = DomainSpec::hyperrectangle(need(j, "lengths").get<std::vector<double>>());
    } else if (kind == "square") {
      d = DomainSpec::square(need(j, "side").get<double>());
    } else if (kind == "ball") {
      d = DomainSpec::ball(need(j, "radius").get<double>(), get_or(j, "dim", 2));
    } else if (kind == "annulus") {
      d = DomainSpec::annulus(need(j, "inner").get<double>(), need(j, "outer").get<double>(), get_or(j, "dim", 2));
    } else if (kind == "quadrant") {
      d = DomainSpec::quadrant_square(need(j, "side").get<double>());
    } else {
      fail(ErrorKind::Schema, "unknown domain kind '" + kind + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Schema, std::string("bad domain: ") + e.what());
  }
  return d;
}

Json domain_to_json(const DomainSpec& d) {
  Json j;
  switch (d.kind) {
    case DomainKind::Hyperrectangle: j["kind"] = "hyperrectangle"; j["lengths"] = d.lengths; break;
    case DomainKind::Ball: j["kind"] = "ball"; j["radius"] = d.radius; j["dim"] = d.dim; break;
    case DomainKind::Annulus:
      j["kind"] = "annulus";
      j["inner"] = d.inner_radius;
      j["outer"] = d.radius;
      j["dim"] = d.dim;
      break;
    case DomainKind::QuadrantSquare: j["kind"] = "quadrant"; j["side"] = d.radius; break;
  }
  return j;
}

RunConfig run_config_from_json(const Json& j) {
  RunConfig c;
  c.domain = domain_from_json(need(j, "domain"));
  auto& m = c.minimize;
  m.beta = get_or(j, "beta", m.beta);
  m.nonlinearity = nonlinearity_from_string(get_or<std::string>(j, "nonlinearity", "cubic"));
  if (j.contains("init")) m.init = init_from_json(j.at("init"));
  m.grad_tol = get_or(j, "grad_tol", m.grad_tol);
  m.max_iters = get_or(j, "max_iters", m.max_iters);
  m.multistart = get_or(j, "multistart", m.multistart);
  if (j.contains("gamma") && !j.at("gamma").is_null()) m.gamma = j.at("gamma").get<double>();
  m.modes = get_or(j, "modes", m.modes);
  m.n_points = get_or(j, "n_points", m.n_points);
  require(m.max_iters > 0 && m.multistart > 0, "max_iters and multistart must be positive");
  return c;
}

Json run_config_to_json(const RunConfig& c) {
  const auto& m = c.minimize;
  Json j;
  j["domain"] = domain_to_json(c.domain);
  j["beta"] = m.beta;
  j["nonlinearity"] = to_string(m.nonlinearity);
  j["init"] = init_to_json(m.init);
  j["grad_tol"] = m.grad_tol;
  j["max_iters"] = m.max_iters;
  j["multistart"] = m.multistart;
  j["gamma"] = m.gamma ? Json(*m.gamma) : Json(nullptr);
  j["modes"] = m.modes;
  j["n_points"] = m.n_points;
  return j;
}

BranchConfig branch_config_from_json(const Json& j) {
  BranchConfig c;
  c.domain = domain_from_json(need(j, "domain"));
  require(c.domain.rectangular(), "branches are traced on rectangles");
  c.modes = get_or(j, "modes", std::vector<int>(c.domain.dim, kDefaultModes1D));
  c.epsilon = get_or(j, "epsilon", c.epsilon);
  auto& k = c.continuation;
  k.ds = get_or(j, "ds", k.ds);
  k.ds_min = get_or(j, "ds_min", k.ds_min);
  k.ds_max = get_or(j, "ds_max", k.ds_max);
  k.max_steps = get_or(j, "max_steps", k.max_steps);
  k.newton_tol = get_or(j, "newton_tol", k.newton_tol);
  k.max_newton = get_or(j, "max_newton", k.max_newton);
  const std::string dir = get_or<std::string>(j, "direction", "decreasing");
  if (dir == "decreasing") {
    k.direction = Direction::DecreasingBeta;
  } else if (dir == "increasing") {
    k.direction = Direction::IncreasingBeta;
  } else {
    fail(ErrorKind::Schema, "direction must be 'decreasing' or 'increasing'");
  }
  k.beta_stop = get_or(j, "beta_stop", k.beta_stop);
  k.stop_at_sign_change = get_or(j, "stop_at_sign_change", k.stop_at_sign_change);
  k.compute_nu1 = get_or(j, "compute_nu1", k.compute_nu1);
  require(c.epsilon > 0.0, "epsilon must be positive");
  return c;
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Schema, path.string() + ": " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) fail(ErrorKind::Io, "write failed for " + path.string());
}

Json to_json(const EnergyReport& r) {
  Json j;
  j["j_beta"] = r.j_beta;
  j["j_beta_shifted"] = r.j_beta_shifted;
  j["grad_norm"] = r.grad_norm;
  j["u_min"] = r.u_min;
  j["u_max"] = r.u_max;
  j["bounds"] = {{"le_one", r.flags.le_one},
                 {"le_m_beta", r.flags.le_m_beta},
                 {"le_c_beta", r.flags.le_c_beta},
                 {"nonneg", r.flags.nonneg}};
  return j;
}

}  // namespace efk
