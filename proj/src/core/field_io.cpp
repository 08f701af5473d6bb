#include "efk/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "efk/config.hpp"
#include "efk/error.hpp"

namespace efk {

namespace {

namespace fs = std::filesystem;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

fs::path sidecar(const fs::path& csv) { return fs::path(csv).replace_extension(".json"); }
fs::path binfile(const fs::path& csv) { return fs::path(csv).replace_extension(".bin"); }

std::uint64_t to_le(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  std::uint64_t r = 0;
  for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
  return r;
}

void write_bin(const fs::path& path, const std::vector<double>& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
  for (double d : data) {
    const std::uint64_t w = to_le(std::bit_cast<std::uint64_t>(d));
    out.write(reinterpret_cast<const char*>(&w), sizeof w);
  }
  if (!out) fail(ErrorKind::Io, "write failed for " + path.string());
}

std::vector<double> read_bin(const fs::path& path, std::size_t count) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open " + path.string());
  std::vector<double> data(count);
  for (auto& d : data) {
    std::uint64_t w = 0;
    in.read(reinterpret_cast<char*>(&w), sizeof w);
    if (!in) fail(ErrorKind::Io, path.string() + ": truncated binary field");
    d = std::bit_cast<double>(to_le(w));
  }
  if (in.peek() != std::char_traits<char>::eof()) fail(ErrorKind::Io, path.string() + ": trailing data");
  return data;
}

// Last column of each data row.
std::vector<double> read_csv_column(const fs::path& path, std::size_t columns) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  std::vector<double> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        fail(ErrorKind::Io, path.string() + ": bad number '" + cell + "'");
      }
    }
    if (row.size() != columns) fail(ErrorKind::Io, path.string() + ": wrong column count");
    out.push_back(row.back());
  }
  return out;
}

}  // namespace

void save_field(const Field& field, const fs::path& csv, std::optional<double> beta, bool binary) {
  Json meta;
  meta["format"] = "efk-field";
  meta["version"] = 1;
  meta["domain"] = domain_to_json(domain_of(field));
  meta["beta"] = beta ? Json(*beta) : Json(nullptr);

  std::ofstream out(csv);
  if (!out) fail(ErrorKind::Io, "cannot write " + csv.string());
  std::vector<double> raw;
  if (const auto* s = std::get_if<SpectralField>(&field)) {
    meta["discretization"] = "spectral";
    meta["modes"] = s->modes();
    const auto v = s->collocation_values();
    const auto sides = s->domain().sides();
    if (s->dim() == 1) {
      out << "x,u\n";
      const int m = s->modes()[0];
      for (int j = 0; j < m; ++j) out << num((j + 1) * sides[0] / (m + 1)) << ',' << num(v[j]) << '\n';
    } else {
      out << "x,y,u\n";
      const int mx = s->modes()[0];
      const int my = s->modes()[1];
      for (int i = 0; i < mx; ++i)
        for (int j = 0; j < my; ++j)
          out << num((i + 1) * sides[0] / (mx + 1)) << ',' << num((j + 1) * sides[1] / (my + 1)) << ','
              << num(v[static_cast<std::size_t>(i) * my + j]) << '\n';
    }
    raw = s->coeffs();
  } else {
    const auto& r = std::get<RadialField>(field);
    meta["discretization"] = "radial";
    meta["n_points"] = r.n_points();
    out << "r,u\n";
    for (int i = 0; i < r.n_points(); ++i) out << num(r.r()[i]) << ',' << num(r.values()[i]) << '\n';
    raw = r.values();
  }
  if (!out) fail(ErrorKind::Io, "write failed for " + csv.string());
  if (binary) {
    write_bin(binfile(csv), raw);
    meta["binary"] = binfile(csv).filename().string();
  } else {
    meta["binary"] = nullptr;
  }
  write_json(sidecar(csv), meta);
}

FieldFile load_field_file(const fs::path& csv) {
  const Json meta = read_json(sidecar(csv));
  if (meta.value("format", "") != "efk-field") fail(ErrorKind::Schema, sidecar(csv).string() + ": not a field header");
  const DomainSpec domain = domain_from_json(meta.at("domain"));
  std::optional<double> beta;
  if (meta.contains("beta") && !meta.at("beta").is_null()) beta = meta.at("beta").get<double>();
  const bool has_bin = meta.contains("binary") && meta.at("binary").is_string();
  const fs::path bin = csv.parent_path() / (has_bin ? meta.at("binary").get<std::string>() : std::string());
  const std::string disc = meta.value("discretization", "");
  if (disc == "spectral") {
    const auto modes = meta.at("modes").get<std::vector<int>>();
    require(static_cast<int>(modes.size()) == domain.dim, "field header: modes do not match the domain");
    std::size_t count = 1;
    for (int m : modes) count *= static_cast<std::size_t>(m);
    if (has_bin && fs::exists(bin)) return {SpectralField(domain, modes, read_bin(bin, count)), beta};
    const auto v = read_csv_column(csv, static_cast<std::size_t>(domain.dim) + 1);
    if (v.size() != count) fail(ErrorKind::Io, csv.string() + ": row count does not match the modes");
    return {SpectralField::from_collocation(domain, modes, v), beta};
  }
  if (disc == "radial") {
    const int n = meta.at("n_points").get<int>();
    if (has_bin && fs::exists(bin)) return {RadialField(domain, n, read_bin(bin, static_cast<std::size_t>(n))), beta};
    auto v = read_csv_column(csv, 2);
    if (static_cast<int>(v.size()) != n) fail(ErrorKind::Io, csv.string() + ": row count does not match n_points");
    return {RadialField(domain, n, std::move(v)), beta};
  }
  fail(ErrorKind::Schema, sidecar(csv).string() + ": unknown discretization '" + disc + "'");
}

void save_grid_csv(const GridField2D& grid, const fs::path& csv) {
  std::ofstream out(csv);
  if (!out) fail(ErrorKind::Io, "cannot write " + csv.string());
  out << "x,y,u\n";
  for (int i = 0; i < grid.nx; ++i)
    for (int j = 0; j < grid.ny; ++j)
      out << num(grid.x0 + i * grid.hx) << ',' << num(grid.y0 + j * grid.hy) << ',' << num(grid.at(i, j)) << '\n';
  if (!out) fail(ErrorKind::Io, "write failed for " + csv.string());
}

}  // namespace efk
