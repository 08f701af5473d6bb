#include "efk/efk.h"

#include <cmath>
#include <cstring>
#include <sstream>
#include <string>

#include "efk/config.hpp"
#include "efk/continuation.hpp"
#include "efk/error.hpp"
#include "efk/field_io.hpp"
#include "efk/harness.hpp"
#include "efk/saddle.hpp"
#include "efk/stability.hpp"

struct efk_field {
  efk::Field field;
  std::optional<double> beta;
};

namespace {

thread_local std::string last_error;

efk_status status_of(efk::ErrorKind kind) {
  switch (kind) {
    case efk::ErrorKind::InvalidArgument:
    case efk::ErrorKind::Unsupported:
    case efk::ErrorKind::Schema: return EFK_INVALID_ARGUMENT;
    case efk::ErrorKind::NotConverged: return EFK_NOT_CONVERGED;
    case efk::ErrorKind::NonFinite: return EFK_NUMERIC;
    case efk::ErrorKind::Io: return EFK_IO;
  }
  return EFK_INTERNAL;
}

template <class Fn>
efk_status guarded(Fn fn) {
  try {
    last_error.clear();
    return fn();
  } catch (const efk::Error& e) {
    last_error = e.what();
    return status_of(e.kind());
  } catch (const nlohmann::json::exception& e) {
    last_error = e.what();
    return EFK_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    last_error = e.what();
    return EFK_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return EFK_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void put(char** out, const efk::Json& j) {
  if (out) *out = dup_string(j.dump(2));
}

void need(const void* p, const char* what) {
  if (!p) efk::fail(efk::ErrorKind::InvalidArgument, std::string(what) + " is null");
}

efk::Json num(double v) { return std::isfinite(v) ? efk::Json(v) : efk::Json(nullptr); }

}  // namespace

extern "C" {

const char* efk_last_error(void) { return last_error.c_str(); }

const char* efk_version(void) { return "1.0.0"; }

void efk_string_free(char* s) { delete[] s; }

efk_status efk_field_load(const char* csv_path, efk_field_t** out) {
  return guarded([&] {
    need(csv_path, "path");
    need(out, "output handle");
    efk::FieldFile f = efk::load_field_file(csv_path);
    *out = new efk_field{std::move(f.field), f.beta};
    return EFK_OK;
  });
}

efk_status efk_field_save(const efk_field_t* field, const char* csv_path, int binary) {
  return guarded([&] {
    need(field, "field");
    need(csv_path, "path");
    efk::save_field(field->field, csv_path, field->beta, binary != 0);
    return EFK_OK;
  });
}

void efk_field_free(efk_field_t* field) { delete field; }

efk_status efk_field_info(const efk_field_t* field, efk_field_info_t* info) {
  return guarded([&] {
    need(field, "field");
    need(info, "info");
    *info = efk_field_info_t{};
    info->dim = efk::domain_of(field->field).dim;
    info->sup_norm = efk::fine_sup_norm(field->field);
    info->l2_norm = efk::l2_norm(field->field);
    info->has_beta = field->beta.has_value();
    info->beta = field->beta.value_or(0.0);
    if (const auto* s = std::get_if<efk::SpectralField>(&field->field)) {
      info->discretization = EFK_SPECTRAL;
      info->size = s->size();
      for (int i = 0; i < s->dim() && i < 2; ++i) info->modes[i] = s->modes()[i];
    } else {
      const auto& r = std::get<efk::RadialField>(field->field);
      info->discretization = EFK_RADIAL;
      info->size = static_cast<size_t>(r.n_points());
      info->n_points = r.n_points();
    }
    return EFK_OK;
  });
}

efk_status efk_field_values(const efk_field_t* field, double* out, size_t capacity) {
  return guarded([&] {
    need(field, "field");
    need(out, "output buffer");
    std::vector<double> v;
    if (const auto* s = std::get_if<efk::SpectralField>(&field->field)) {
      v = s->collocation_values();
    } else {
      v = std::get<efk::RadialField>(field->field).values();
    }
    if (capacity < v.size()) efk::fail(efk::ErrorKind::InvalidArgument, "output buffer too small");
    std::copy(v.begin(), v.end(), out);
    return EFK_OK;
  });
}

efk_status efk_minimize(const char* config_json, efk_field_t** field, char** report_json) {
  return guarded([&] {
    need(config_json, "config");
    const efk::RunConfig cfg = efk::run_config_from_json(efk::Json::parse(config_json));
    const efk::MinimizeResult r = efk::minimize(cfg.minimize, cfg.domain);
    const auto& best = r.best;
    efk::Json j;
    j["config"] = efk::run_config_to_json(cfg);
    j["energy"] = efk::to_json(best.report);
    j["sup_norm"] = efk::fine_sup_norm(best.field);
    j["iterations"] = best.iterations;
    j["converged"] = best.converged;
    j["energy_monotone"] = best.energy_monotone;
    j["stop_reason"] = best.stop_reason;
    j["multistart_spread"] = r.spread;
    efk::Json runs = efk::Json::array();
    for (const auto& run : r.runs)
      runs.push_back({{"j_beta", run.report.j_beta}, {"iterations", run.iterations}, {"converged", run.converged}});
    j["runs"] = std::move(runs);
    efk::Json trace = efk::Json::array();
    for (const auto& t : best.trace)
      trace.push_back({{"iteration", t.iteration}, {"energy", t.energy}, {"grad_norm", t.grad_norm}, {"step", t.step}});
    j["trace"] = std::move(trace);
    if (field) *field = new efk_field{best.field, cfg.minimize.gamma ? std::nullopt : std::optional(cfg.minimize.beta)};
    put(report_json, j);
    return best.converged ? EFK_OK : EFK_NOT_CONVERGED;
  });
}

efk_status efk_stability(const efk_field_t* field, double beta, char** report_json) {
  return guarded([&] {
    need(field, "field");
    const efk::StabilityReport s = efk::stability(field->field, beta);
    efk::Json j;
    j["beta"] = beta;
    j["mu1"] = s.mu1;
    j["nu1"] = s.nu1;
    j["residual_mu"] = s.residual_mu;
    j["residual_nu"] = s.residual_nu;
    j["converged"] = s.converged;
    j["strictly_stable"] = s.strictly_stable;
    j["ordered"] = s.ordered;
    j["min_u2v2"] = s.min_u2v2;
    j["eigvec_mu_positive"] = efk::eigvec_positivity(s.eigvec_mu);
    put(report_json, j);
    return s.converged ? EFK_OK : EFK_NOT_CONVERGED;
  });
}

efk_status efk_branch(const char* config_json, char** branch_json) {
  return guarded([&] {
    need(config_json, "config");
    const efk::BranchConfig cfg = efk::branch_config_from_json(efk::Json::parse(config_json));
    const efk::BranchPoint seed = efk::seed_branch(cfg.domain, cfg.modes, cfg.epsilon,
                                                   cfg.continuation.newton_tol, cfg.continuation.compute_nu1);
    const auto branch = efk::continue_branch(cfg.continuation, seed);
    efk::Json j;
    j["domain"] = efk::domain_to_json(cfg.domain);
    j["beta_bar"] = efk::bifurcation_point(cfg.domain);
    j["endpoint"] = num(efk::branch_endpoint(branch));
    efk::Json pts = efk::Json::array();
    for (const auto& p : branch)
      pts.push_back({{"arclength", p.arclength},
                     {"beta", p.beta},
                     {"sup_norm", p.sup_norm},
                     {"l2_norm", p.l2_norm},
                     {"nu1", num(p.nu1)},
                     {"residual", p.residual},
                     {"newton_iterations", p.newton_iterations}});
    j["points"] = std::move(pts);
    put(branch_json, j);
    return EFK_OK;
  });
}

efk_status efk_saddle(double radius, double beta, int modes, const char* out_dir, efk_field_t** quadrant,
                      char** report_json) {
  return guarded([&] {
    const efk::SaddleResult s = efk::build_saddle(radius, beta, modes);
    const efk::ReflectionReport r = efk::reflection_smoothness(s.quadrant);
    efk::Json j;
    j["radius"] = radius;
    j["beta"] = beta;
    j["modes"] = modes;
    j["covered"] = s.covered;
    j["converged"] = s.solve.run.converged;
    j["grad_norm"] = s.solve.run.report.grad_norm;
    j["u_max"] = efk::fine_max(s.solve.run.field);
    j["m_beta"] = s.solve.m_beta;
    j["upper_m_ok"] = s.solve.upper_m_ok;
    j["min_sign_product"] = s.min_sign_product;
    j["sign_ok"] = s.sign_ok;
    j["window"] = s.window;
    j["window_sup"] = s.window_sup;
    j["lower_bound_ok"] = s.lower_bound_ok;
    j["diagonal_defect"] = s.diagonal_defect;
    j["reflection"] = {{"h", r.h},
                       {"scale", r.scale},
                       {"jumps", r.jumps},
                       {"laplacian_trace", r.laplacian_trace},
                       {"threshold", r.threshold},
                       {"smooth", r.smooth}};
    if (out_dir) {
      const std::filesystem::path dir(out_dir);
      std::filesystem::create_directories(dir);
      efk::save_field(s.quadrant, dir / "quadrant.csv", beta);
      efk::save_grid_csv(s.tile, dir / "tile.csv");
      efk::write_json(dir / "report.json", j);
    }
    if (quadrant) *quadrant = new efk_field{s.quadrant, beta};
    put(report_json, j);
    const bool ok = s.sign_ok && s.lower_bound_ok && r.smooth;
    return !s.solve.run.converged ? EFK_NOT_CONVERGED : (ok ? EFK_OK : EFK_CHECK_FAILED);
  });
}

efk_status efk_verify(const char* suites, int quick, const char* plot_dir, char** scorecard_json) {
  return guarded([&] {
    std::vector<efk::Suite> list;
    const std::string spec = suites ? suites : "all";
    if (spec == "all") {
      list = efk::all_suites();
    } else {
      std::stringstream ss(spec);
      std::string name;
      while (std::getline(ss, name, ','))
        if (!name.empty()) list.push_back(efk::suite_from_string(name));
    }
    if (list.empty()) efk::fail(efk::ErrorKind::InvalidArgument, "no suites selected");
    efk::HarnessConfig cfg;
    cfg.quick = quick != 0;
    if (plot_dir) cfg.plot_dir = plot_dir;
    const efk::Scorecard card = efk::run_suites(list, cfg);
    put(scorecard_json, efk::to_json(card, true));
    return card.passed() ? EFK_OK : EFK_CHECK_FAILED;
  });
}

efk_status efk_scorecard_diff(const char* a_json, const char* b_json, char** diff_json) {
  return guarded([&] {
    need(a_json, "first scorecard");
    need(b_json, "second scorecard");
    const auto a = efk::scorecard_from_json(efk::Json::parse(a_json));
    const auto b = efk::scorecard_from_json(efk::Json::parse(b_json));
    put(diff_json, efk::to_json(efk::scorecard_diff(a, b)));
    return EFK_OK;
  });
}

efk_status efk_critical_radius(double beta, int dim, double* radius) {
  return guarded([&] {
    need(radius, "output");
    *radius = efk::critical_radius(beta, dim);
    return EFK_OK;
  });
}

}  // extern "C"
