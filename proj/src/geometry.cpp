#include "nodalab/geometry.hpp"

#include <cmath>

namespace nodalab {

std::string to_string(GeometryKind kind) {
  return kind == GeometryKind::flat_torus ? "flat_torus" : "dirichlet_box";
}

GeometryKind geometry_kind_from_string(const std::string& name) {
  if (name == "flat_torus" || name == "torus") return GeometryKind::flat_torus;
  if (name == "dirichlet_box" || name == "box") return GeometryKind::dirichlet_box;
  throw std::invalid_argument("unknown geometry kind '" + name + "'");
}

Geometry Geometry::box(int dimension, double side) {
  Geometry g{GeometryKind::dirichlet_box, dimension, Point::Constant(dimension, side)};
  g.validate();
  return g;
}

Geometry Geometry::torus(int dimension, double side) {
  Geometry g{GeometryKind::flat_torus, dimension, Point::Constant(dimension, side)};
  g.validate();
  return g;
}

void Geometry::validate() const {
  if (dimension != 2 && dimension != 3)
    throw std::invalid_argument("geometry dimension must be 2 or 3, got " +
                                std::to_string(dimension));
  if (sides.size() != dimension)
    throw std::invalid_argument("geometry needs one side length per axis");
  for (int i = 0; i < dimension; ++i)
    if (!(sides[i] > 0.0)) throw std::invalid_argument("geometry side lengths must be positive");
}

double Geometry::distance(const Point& x, const Point& y) const {
  double sq = 0.0;
  for (int i = 0; i < dimension; ++i) {
    double delta = std::abs(x[i] - y[i]);
    if (periodic()) {
      delta = std::fmod(delta, sides[i]);
      delta = std::min(delta, sides[i] - delta);
    }
    sq += delta * delta;
  }
  return std::sqrt(sq);
}

LatticeIndexer::LatticeIndexer(int dim, std::array<int, 3> ext) : dimension(dim), extent(ext) {
  for (int i = dim; i < 3; ++i) extent[i] = 1;
  stride[0] = 1;
  stride[1] = extent[0];
  stride[2] = static_cast<std::int64_t>(extent[0]) * extent[1];
}

}  // namespace nodalab
