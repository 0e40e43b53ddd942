#pragma once

#include "nodalab/spectra.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>

namespace nodalab {

nlohmann::json geometry_to_json(const Geometry& geometry);
Geometry geometry_from_json(const nlohmann::json& j);

/// {kind, d, sides, lambda, terms: [{k: [...], phase, coeff}]}
nlohmann::json mode_to_json(const EigenMode& mode);
EigenMode mode_from_json(const nlohmann::json& j);

void save_mode(const EigenMode& mode, const std::filesystem::path& path);
EigenMode load_mode(const std::filesystem::path& path);

/// Writes `<stem>.bin` (little-endian float64, x fastest) and `<stem>.json`
/// with {d, N, geometry, source, shape}. Returns the paths written.
std::vector<std::filesystem::path> save_grid(const ScalarGrid& grid, const std::filesystem::path& stem);

/// Raw array writer shared by grid and checkpoint persistence.
void write_float64_le(const Eigen::ArrayXd& values, const std::filesystem::path& path);
Eigen::ArrayXd read_float64_le(const std::filesystem::path& path, std::int64_t count);

ScalarGrid load_grid(const std::filesystem::path& stem);

}  // namespace nodalab
