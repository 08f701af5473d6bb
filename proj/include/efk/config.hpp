#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "efk/continuation.hpp"
#include "efk/domain.hpp"
#include "efk/minimize.hpp"

namespace efk {

using Json = nlohmann::ordered_json;

// {"kind": "hyperrectangle", "lengths": [..]} | {"kind": "ball", "radius": R, "dim": N}
// | {"kind": "annulus", "inner": R0, "outer": R, "dim": N} | {"kind": "quadrant", "side": R}
DomainSpec domain_from_json(const Json& j);
Json domain_to_json(const DomainSpec& d);

// MinimizeConfig fields plus a "domain" object.
struct RunConfig {
  DomainSpec domain;
  MinimizeConfig minimize;
};

RunConfig run_config_from_json(const Json& j);
Json run_config_to_json(const RunConfig& c);

struct BranchConfig {
  DomainSpec domain;
  std::vector<int> modes;
  double epsilon = 0.05;
  ContinuationConfig continuation;
};

BranchConfig branch_config_from_json(const Json& j);

Json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const Json& j);

Json to_json(const EnergyReport& r);

}  // namespace efk
