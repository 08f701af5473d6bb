#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "efk/efk.h"
#include "json.hpp"

using nlohmann::json;

namespace {

std::filesystem::path tmp_dir() {
  const char* env = std::getenv("EFK_TEST_TMP");
  std::filesystem::path p = env ? env : std::filesystem::temp_directory_path() / "efk_capi_tmp";
  std::filesystem::create_directories(p);
  return p;
}

json take(char* s) {
  REQUIRE(s != nullptr);
  json j = json::parse(s);
  efk_string_free(s);
  return j;
}

const char* kRun = R"({"domain": {"kind": "interval", "lengths": [6.283185307179586]},
                       "beta": 3.0, "init": {"kind": "delta_phi1", "delta": 0.1}, "modes": [64]})";

}  // namespace

TEST_CASE("version and critical radius") {
  CHECK(std::string(efk_version()) == "1.0.0");
  double r = 0.0;
  REQUIRE(efk_critical_radius(std::sqrt(8.0), 2, &r) == EFK_OK);
  CHECK(r == doctest::Approx(4.265610383048131).epsilon(1e-9));
  CHECK(std::string(efk_last_error()).empty());
  CHECK(efk_critical_radius(2.0, 0, &r) == EFK_INVALID_ARGUMENT);
  CHECK_FALSE(std::string(efk_last_error()).empty());
  CHECK(efk_critical_radius(2.0, 2, nullptr) == EFK_INVALID_ARGUMENT);
}

TEST_CASE("errors map to status codes") {
  efk_field_t* f = nullptr;
  char* out = nullptr;
  CHECK(efk_field_load("/nonexistent/u.csv", &f) == EFK_IO);
  CHECK(f == nullptr);
  CHECK(efk_minimize("{not json", &f, &out) == EFK_INVALID_ARGUMENT);
  CHECK(efk_minimize(R"({"domain": {"kind": "torus"}})", &f, &out) == EFK_INVALID_ARGUMENT);
  CHECK(efk_minimize(nullptr, &f, &out) == EFK_INVALID_ARGUMENT);
  CHECK(efk_verify("nope", 1, nullptr, &out) == EFK_INVALID_ARGUMENT);
  CHECK(out == nullptr);
  efk_field_free(nullptr);
}

TEST_CASE("minimize, save, load and stability") {
  efk_field_t* f = nullptr;
  char* report = nullptr;
  REQUIRE(efk_minimize(kRun, &f, &report) == EFK_OK);
  const json r = take(report);
  CHECK(r["converged"] == true);
  CHECK(r["energy"]["u_min"].get<double>() >= -1e-9);
  CHECK(r["sup_norm"].get<double>() <= 1.0 + 1e-6);
  CHECK(r["trace"].size() > 1);

  efk_field_info_t info{};
  REQUIRE(efk_field_info(f, &info) == EFK_OK);
  CHECK(info.discretization == EFK_SPECTRAL);
  CHECK(info.dim == 1);
  CHECK(info.modes[0] == 64);
  CHECK(info.size == 64);
  CHECK(info.has_beta == 1);
  CHECK(info.beta == 3.0);

  std::vector<double> v(info.size);
  CHECK(efk_field_values(f, v.data(), 3) == EFK_INVALID_ARGUMENT);
  REQUIRE(efk_field_values(f, v.data(), v.size()) == EFK_OK);
  for (double x : v) CHECK(x > 0.0);

  const std::string path = (tmp_dir() / "capi_u.csv").string();
  REQUIRE(efk_field_save(f, path.c_str(), 1) == EFK_OK);
  efk_field_t* g = nullptr;
  REQUIRE(efk_field_load(path.c_str(), &g) == EFK_OK);
  std::vector<double> w(info.size);
  REQUIRE(efk_field_values(g, w.data(), w.size()) == EFK_OK);
  CHECK(v == w);

  char* stab = nullptr;
  REQUIRE(efk_stability(g, 3.0, &stab) == EFK_OK);
  const json s = take(stab);
  CHECK(std::abs(s["mu1"].get<double>()) < 1e-6);
  CHECK(s["nu1"].get<double>() > 0.0);
  CHECK(s["strictly_stable"] == true);
  efk_field_free(f);
  efk_field_free(g);
}

TEST_CASE("branch json") {
  char* out = nullptr;
  REQUIRE(efk_branch(R"({"domain": {"kind": "interval", "lengths": [6.283185307179586]}, "modes": [64],
                        "direction": "increasing", "stop_at_sign_change": true, "beta_stop": 4.5,
                        "compute_nu1": false})",
                     &out) == EFK_OK);
  const json b = take(out);
  CHECK(b["beta_bar"].get<double>() == doctest::Approx(3.75));
  CHECK(std::abs(b["endpoint"].get<double>() - 3.75) < 1e-3);
  REQUIRE(b["points"].size() > 2);
  CHECK(b["points"][0].contains("arclength"));
  CHECK(b["points"][0].contains("sup_norm"));
}

TEST_CASE("scorecard diff through the C API") {
  const char* a = R"({"version": 1, "entries": [
      {"suite": "bounds", "name": "x", "passed": true, "measured": 1.0, "tolerance": 2.0}]})";
  const char* b = R"({"version": 1, "entries": [
      {"suite": "bounds", "name": "x", "passed": false, "measured": 3.0, "tolerance": 2.0}]})";
  char* out = nullptr;
  REQUIRE(efk_scorecard_diff(a, b, &out) == EFK_OK);
  const json d = take(out);
  CHECK(d["transitions"] == 1);
  CHECK(d["changed"][0]["delta"].get<double>() == doctest::Approx(2.0));
  CHECK(efk_scorecard_diff(a, R"({"version": 1, "entries": []})", &out) == EFK_INVALID_ARGUMENT);
}
