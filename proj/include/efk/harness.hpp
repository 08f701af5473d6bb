#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "efk/config.hpp"

namespace efk {

enum class Suite { Bounds, Uniqueness, Stability, Symmetry, Radial, Flipping, Saddle, Bifurcation, Gamma };

const std::vector<Suite>& all_suites();
std::string to_string(Suite s);
Suite suite_from_string(const std::string& s);

// Every tolerance the suites assert against, in one place.
struct Tolerances {
  double trivial_sup = 1e-6;
  double bound = 1e-6;
  double mu1 = 5e-4;
  double stable = 1e-8;
  double symmetry = 1e-6;       // relative to ‖u‖∞
  double monotone = 1e-7;
  double angular = 1e-3;        // relative to ‖u‖∞
  double sign = 1e-7;
  double saddle_window = 0.7071067811865476;
  double endpoint = 1e-3;
  double slope = 0.05;
  double critical_radius = 0.01;
  double beta_bar_disk = 5e-3;
  double uniqueness = 1e-5;
  double gamma_increment = 0.05;
  double rescale = 1e-6;
  double plateau = 0.99;
};

struct HarnessConfig {
  bool quick = false;  // coarser grids and fewer starts for smoke runs
  Tolerances tol;
  std::optional<std::filesystem::path> plot_dir;  // two-column plot data per entry
};

struct ScoreEntry {
  std::string suite;
  std::string name;
  bool passed = false;
  bool primary = true;    // recorded-only entries never fail the scorecard
  int criterion = 0;      // acceptance criterion the entry belongs to, 0 if none
  double measured = 0.0;
  double tolerance = 0.0;
  double runtime = 0.0;   // seconds spent on the check group
  std::string detail;
};

struct Scorecard {
  int version = 1;
  std::vector<ScoreEntry> entries;

  bool passed() const;  // all primary entries pass
};

Scorecard run_suite(Suite suite, const HarnessConfig& config);
Scorecard run_suites(const std::vector<Suite>& suites, const HarnessConfig& config);

// Runtimes are omitted unless requested so that fixed-seed runs serialize identically.
Json to_json(const Scorecard& card, bool include_runtime = false);
Scorecard scorecard_from_json(const Json& j);

struct DiffEntry {
  std::string suite;
  std::string name;
  double before = 0.0;
  double after = 0.0;
  bool passed_before = false;
  bool passed_after = false;
  bool transition() const { return passed_before != passed_after; }
};

struct DiffReport {
  std::vector<DiffEntry> changed;  // entries whose measured value or verdict differs
  int transitions = 0;
  bool empty() const { return changed.empty(); }
};

// Throws a Schema error when versions differ or an entry is missing on either side.
DiffReport scorecard_diff(const Scorecard& a, const Scorecard& b);
Json to_json(const DiffReport& d);

// Result being verified and the single suite that covers it.
struct CoverageItem {
  std::string result;
  Suite suite;
};

const std::vector<CoverageItem>& coverage_manifest();
// Each manifest result is covered by exactly one suite and every suite covers something.
bool coverage_complete();

}  // namespace efk
