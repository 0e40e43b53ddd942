#pragma once

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace nodalab {

/// Points and small vectors in d <= 3 dimensions. Fixed max size keeps them
/// off the heap.
template <typename Scalar>
using BasicPoint = Eigen::Matrix<Scalar, Eigen::Dynamic, 1, 0, 3, 1>;
using Point = BasicPoint<double>;
using IntVector = Eigen::Matrix<int, Eigen::Dynamic, 1, 0, 3, 1>;

/// Raised when an iterative solve or other numerical procedure fails.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class GeometryKind { dirichlet_box, flat_torus };

std::string to_string(GeometryKind kind);
GeometryKind geometry_kind_from_string(const std::string& name);

/// A flat model geometry: either [0,L_1]x...x[0,L_d] with Dirichlet walls or
/// the flat torus R^d / (L_1 Z x ... x L_d Z).
struct Geometry {
  GeometryKind kind = GeometryKind::dirichlet_box;
  int dimension = 2;
  Point sides = Point::Ones(2);

  static Geometry box(int dimension, double side = 1.0);
  static Geometry torus(int dimension, double side = 1.0);

  bool periodic() const { return kind == GeometryKind::flat_torus; }
  double volume() const { return sides.prod(); }

  /// Stand-in for the injectivity radius: half the smallest side.
  double injectivity_radius() const { return 0.5 * sides.minCoeff(); }

  /// Throws std::invalid_argument unless d in {2,3} and all sides > 0.
  void validate() const;

  /// Euclidean distance, using the minimal image on the torus.
  double distance(const Point& x, const Point& y) const;

  bool operator==(const Geometry& other) const {
    return kind == other.kind && dimension == other.dimension && sides == other.sides;
  }
};

/// Row-major (x fastest) indexing of a d-dimensional lattice with up to three axes.
struct LatticeIndexer {
  int dimension = 0;
  std::array<int, 3> extent{1, 1, 1};
  std::array<std::int64_t, 3> stride{1, 1, 1};

  LatticeIndexer() = default;
  LatticeIndexer(int dimension, std::array<int, 3> extent);

  std::int64_t size() const {
    return static_cast<std::int64_t>(extent[0]) * extent[1] * extent[2];
  }
  std::int64_t ravel(const std::array<int, 3>& ijk) const {
    return ijk[0] + stride[1] * ijk[1] + stride[2] * ijk[2];
  }
  std::array<int, 3> unravel(std::int64_t index) const {
    std::array<int, 3> ijk{0, 0, 0};
    ijk[0] = static_cast<int>(index % extent[0]);
    ijk[1] = static_cast<int>((index / stride[1]) % extent[1]);
    ijk[2] = static_cast<int>(index / stride[2]);
    return ijk;
  }
};

}  // namespace nodalab
