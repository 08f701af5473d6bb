#pragma once

#include <filesystem>
#include <optional>

#include "efk/field.hpp"
#include "efk/polar.hpp"

namespace efk {

struct FieldFile {
  Field field;
  std::optional<double> beta;
};

// Writes grid values to `csv` and a JSON sidecar next to it (same stem, .json).
// Spectral fields store their collocation grid (columns x[, y], u); radial fields
// store r, u. With binary, the coefficients also go to a little-endian .bin file
// that load_field prefers, so the round trip is bit-exact.
void save_field(const Field& field, const std::filesystem::path& csv, std::optional<double> beta = std::nullopt,
                bool binary = true);

FieldFile load_field_file(const std::filesystem::path& csv);
inline Field load_field(const std::filesystem::path& csv) { return load_field_file(csv).field; }

// Plain grid dump with columns x, y, u.
void save_grid_csv(const GridField2D& grid, const std::filesystem::path& csv);

}  // namespace efk
