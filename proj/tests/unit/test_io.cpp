#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "efk/config.hpp"
#include "efk/error.hpp"
#include "efk/field_io.hpp"
#include "efk/minimize.hpp"

using namespace efk;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("efk_io_" + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("binary round trip is bit-exact") {
  TempDir tmp;
  const auto sq = DomainSpec::hyperrectangle({7.0, 9.0});
  const SpectralField s = random_spectral_field(sq, {12, 10}, 5, 0.7, false);
  save_field(s, tmp.path / "s.csv", 3.5);
  CHECK(fs::exists(tmp.path / "s.json"));
  CHECK(fs::exists(tmp.path / "s.bin"));
  const FieldFile fs_ = load_field_file(tmp.path / "s.csv");
  REQUIRE(fs_.beta);
  CHECK(*fs_.beta == 3.5);
  const auto& back = std::get<SpectralField>(fs_.field);
  CHECK(back.domain() == sq);
  CHECK(back.modes() == s.modes());
  CHECK(back.coeffs() == s.coeffs());

  const auto ann = DomainSpec::annulus(1.0, 4.0, 3);
  const RadialField r = random_radial_field(ann, 65, 9, 0.4, true);
  save_field(r, tmp.path / "r.csv");
  const FieldFile fr = load_field_file(tmp.path / "r.csv");
  CHECK_FALSE(fr.beta);
  CHECK(std::get<RadialField>(fr.field).values() == r.values());
  CHECK(std::get<RadialField>(fr.field).domain() == ann);
}

TEST_CASE("csv-only reload") {
  TempDir tmp;
  const SpectralField s = random_spectral_field(DomainSpec::interval(5.0), {40}, 2, 1.0, false);
  save_field(s, tmp.path / "u.csv", std::nullopt, false);
  CHECK_FALSE(fs::exists(tmp.path / "u.bin"));
  const auto back = std::get<SpectralField>(load_field(tmp.path / "u.csv"));
  CHECK((back - s).l2_norm() < 1e-12 * s.l2_norm());

  std::ofstream(tmp.path / "u.csv") << "x,u\n0.1,0.2\n";
  CHECK(kind_of([&] { load_field(tmp.path / "u.csv"); }) == ErrorKind::Io);
  CHECK(kind_of([&] { load_field(tmp.path / "missing.csv"); }) == ErrorKind::Io);
}

TEST_CASE("run config parsing") {
  const Json j = Json::parse(R"({
    "domain": {"kind": "ball", "radius": 6.0, "dim": 3},
    "beta": 2.5, "nonlinearity": "truncated_pos",
    "init": {"kind": "random", "seed": 7, "amplitude": 0.3},
    "n_points": 129, "multistart": 2
  })");
  const RunConfig c = run_config_from_json(j);
  CHECK(c.domain == DomainSpec::ball(6.0, 3));
  CHECK(c.minimize.beta == 2.5);
  CHECK(c.minimize.nonlinearity == NonlinearityKind::TruncatedPos);
  CHECK(c.minimize.init.kind == InitKind::Random);
  CHECK(c.minimize.init.seed == 7);
  CHECK(c.minimize.n_points == 129);
  const RunConfig again = run_config_from_json(run_config_to_json(c));
  CHECK(run_config_to_json(again) == run_config_to_json(c));

  CHECK(domain_from_json(Json::parse(R"({"kind": "quadrant", "side": 30})")) == DomainSpec::quadrant_square(30.0));
  CHECK(domain_from_json(Json::parse(R"({"kind": "square", "side": 3})")) == DomainSpec::square(3.0));
  for (const auto& d : {DomainSpec::interval(2.0), DomainSpec::annulus(1.0, 2.0, 2), DomainSpec::ball(1.0, 4)})
    CHECK(domain_from_json(domain_to_json(d)) == d);

  CHECK(kind_of([] { domain_from_json(Json::parse(R"({"kind": "torus"})")); }) == ErrorKind::Schema);
  CHECK(kind_of([] { domain_from_json(Json::parse(R"({"kind": "ball"})")); }) == ErrorKind::Schema);
  CHECK(kind_of([] { domain_from_json(Json::parse(R"({"kind": "ball", "radius": -1})")); }) ==
        ErrorKind::InvalidArgument);
  CHECK(kind_of([] { run_config_from_json(Json::parse(R"({"beta": 1})")); }) == ErrorKind::Schema);
  CHECK(kind_of([] { read_json("/nonexistent/config.json"); }) == ErrorKind::Io);
}

TEST_CASE("branch config parsing") {
  const BranchConfig b = branch_config_from_json(Json::parse(
      R"({"domain": {"kind": "interval", "lengths": [6.0]}, "direction": "increasing", "ds_max": 0.3})"));
  CHECK(b.modes == std::vector<int>{64});
  CHECK(b.continuation.direction == Direction::IncreasingBeta);
  CHECK(b.continuation.ds_max == 0.3);
  CHECK(kind_of([] {
          branch_config_from_json(
              Json::parse(R"({"domain": {"kind": "interval", "lengths": [6.0]}, "direction": "up"})"));
        }) == ErrorKind::Schema);
}

TEST_CASE("file init restarts a minimization") {
  TempDir tmp;
  MinimizeConfig c;
  c.beta = 3.0;
  c.modes = {48};
  const auto d = DomainSpec::interval(2.0 * M_PI);
  const MinimizeRun first = minimize(c, d).best;
  REQUIRE(first.converged);
  save_field(first.field, tmp.path / "u.csv", 3.0);
  c.init.kind = InitKind::File;
  c.init.path = (tmp.path / "u.csv").string();
  const MinimizeRun second = minimize(c, d).best;
  CHECK(second.converged);
  CHECK(second.iterations <= 1);
  CHECK((std::get<SpectralField>(second.field) - std::get<SpectralField>(first.field)).l2_norm() < 1e-8);
}
