#include "nodalab/spectra_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace nodalab {

using nlohmann::json;

json geometry_to_json(const Geometry& geometry) {
  return json{{"kind", to_string(geometry.kind)},
              {"d", geometry.dimension},
              {"sides", std::vector<double>(geometry.sides.data(),
                                            geometry.sides.data() + geometry.dimension)}};
}

Geometry geometry_from_json(const json& j) {
  Geometry g;
  g.kind = geometry_kind_from_string(j.at("kind").get<std::string>());
  g.dimension = j.at("d").get<int>();
  if (j.contains("sides")) {
    const auto sides = j.at("sides").get<std::vector<double>>();
    g.sides = Eigen::Map<const Eigen::VectorXd>(sides.data(), static_cast<Eigen::Index>(sides.size()));
  } else {
    g.sides = Point::Ones(g.dimension);
  }
  g.validate();
  return g;
}

json mode_to_json(const EigenMode& mode) {
  json j = geometry_to_json(mode.geometry);
  j["lambda"] = mode.eigenvalue;
  json terms = json::array();
  for (const auto& t : mode.terms)
    terms.push_back({{"k", std::vector<int>(t.k.data(), t.k.data() + t.k.size())},
                     {"phase", to_string(t.phase)},
                     {"coeff", t.coeff}});
  j["terms"] = terms;
  return j;
}

EigenMode mode_from_json(const json& j) {
  EigenMode mode;
  mode.geometry = geometry_from_json(j);
  mode.eigenvalue = j.at("lambda").get<double>();
  for (const auto& t : j.at("terms")) {
    const auto k = t.at("k").get<std::vector<int>>();
    ModeTerm term;
    term.k = Eigen::Map<const Eigen::VectorXi>(k.data(), static_cast<Eigen::Index>(k.size()));
    term.phase = phase_from_string(t.at("phase").get<std::string>());
    term.coeff = t.at("coeff").get<double>();
    mode.terms.push_back(term);
  }
  mode.validate();
  return mode;
}

void save_mode(const EigenMode& mode, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  // max_digits10 round-trips every double exactly.
  out << mode_to_json(mode).dump(2) << '\n';
}

EigenMode load_mode(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return mode_from_json(json::parse(in));
}

void write_float64_le(const Eigen::ArrayXd& values, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    std::uint64_t bits = std::bit_cast<std::uint64_t>(values[i]);
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
    char bytes[8];
    std::memcpy(bytes, &bits, 8);
    out.write(bytes, 8);
  }
}

Eigen::ArrayXd read_float64_le(const std::filesystem::path& path, std::int64_t count) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  Eigen::ArrayXd values(count);
  for (std::int64_t i = 0; i < count; ++i) {
    char bytes[8];
    if (!in.read(bytes, 8)) throw std::runtime_error("truncated grid file " + path.string());
    std::uint64_t bits;
    std::memcpy(&bits, bytes, 8);
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
    values[i] = std::bit_cast<double>(bits);
  }
  return values;
}

std::vector<std::filesystem::path> save_grid(const ScalarGrid& grid, const std::filesystem::path& stem) {
  std::filesystem::path bin = stem, meta = stem;
  bin += ".bin";
  meta += ".json";
  write_float64_le(grid.values, bin);
  json header{{"d", grid.dimension()},
              {"N", grid.resolution},
              {"geometry", geometry_to_json(grid.geometry)},
              {"source", grid.source},
              {"shape", std::vector<int>(grid.dimension(), grid.points_per_axis())},
              {"lambda", grid.eigenvalue},
              {"layout", "x-fastest float64 little-endian"}};
  if (grid.mode) header["mode"] = mode_to_json(*grid.mode);
  std::ofstream out(meta);
  out << header.dump(2) << '\n';
  return {bin, meta};
}

ScalarGrid load_grid(const std::filesystem::path& stem) {
  std::filesystem::path bin = stem, meta = stem;
  bin += ".bin";
  meta += ".json";
  std::ifstream in(meta);
  if (!in) throw std::runtime_error("cannot read " + meta.string());
  const json header = json::parse(in);
  ScalarGrid grid;
  grid.geometry = geometry_from_json(header.at("geometry"));
  grid.resolution = header.at("N").get<int>();
  const int n = grid.points_per_axis();
  grid.lattice = LatticeIndexer(grid.geometry.dimension, {n, n, n});
  grid.source = header.value("source", "");
  grid.eigenvalue = header.value("lambda", 0.0);
  if (header.contains("mode")) grid.mode = mode_from_json(header.at("mode"));
  grid.values = read_float64_le(bin, grid.lattice.size());
  return grid;
}

}  // namespace nodalab
