#include "nodalab/nodal.hpp"

#include "nodalab/distance_transform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace nodalab {

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::int64_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::int64_t find(std::int64_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::int64_t a, std::int64_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) std::swap(a, b);
    parent_[a] = b;
  }

 private:
  std::vector<std::int64_t> parent_;
};

int wrap(int i, int n) {
  i %= n;
  return i < 0 ? i + n : i;
}

}  // namespace

DomainLabeling label_nodal_domains(const ScalarGrid& grid, double zero_tolerance) {
  const std::int64_t n = grid.size();
  const double peak = grid.values.abs().maxCoeff();
  if (!(peak > 0.0)) throw std::invalid_argument("degenerate field");

  DomainLabeling out;
  out.zero_threshold = zero_tolerance * peak;
  std::vector<signed char> sign(n);
  for (std::int64_t i = 0; i < n; ++i) {
    const double v = grid.values[i];
    sign[i] = v > out.zero_threshold ? 1 : (v < -out.zero_threshold ? -1 : 0);
  }

  const LatticeIndexer& lat = grid.lattice;
  const bool periodic = grid.geometry.periodic();
  UnionFind uf(n);
  for (std::int64_t i = 0; i < n; ++i) {
    if (sign[i] == 0) continue;
    const auto ijk = lat.unravel(i);
    for (int axis = 0; axis < lat.dimension; ++axis) {
      auto next = ijk;
      next[axis] += 1;
      if (next[axis] == lat.extent[axis]) {
        if (!periodic) continue;
        next[axis] = 0;
      }
      const std::int64_t j = lat.ravel(next);
      if (sign[j] == sign[i]) uf.unite(i, j);
    }
  }

  out.labels = Eigen::ArrayXi::Zero(n);
  std::vector<int> root_label(n, 0);
  for (std::int64_t i = 0; i < n; ++i) {
    if (sign[i] == 0) {
      out.zero_volume += grid.dual_cell_volume(i);
      continue;
    }
    const std::int64_t r = uf.find(i);
    if (root_label[r] == 0) {
      root_label[r] = out.count() + 1;
      out.signs.push_back(sign[i]);
      out.volumes.push_back(0.0);
      out.max_abs.push_back(-1.0);
      out.argmax.push_back(i);
    }
    const int id = root_label[r];
    out.labels[i] = id;
    out.volumes[id - 1] += grid.dual_cell_volume(i);
    const double a = std::abs(grid.values[i]);
    if (a > out.max_abs[id - 1]) {
      out.max_abs[id - 1] = a;
      out.argmax[id - 1] = i;
    }
  }
  return out;
}

namespace {

struct AxisWindow {
  int start = 0;
  int length = 0;
  bool periodic = false;
};

// Window along one axis covering every coordinate the domain occupies plus one
// non-occupied coordinate on each side, or the full periodic axis.
AxisWindow axis_window(const std::vector<char>& occupied, bool periodic_axis) {
  const int n = static_cast<int>(occupied.size());
  if (!periodic_axis) {
    int lo = n, hi = -1;
    for (int i = 0; i < n; ++i)
      if (occupied[i]) {
        lo = std::min(lo, i);
        hi = std::max(hi, i);
      }
    lo = std::max(lo - 1, 0);
    hi = std::min(hi + 1, n - 1);
    return {lo, hi - lo + 1, false};
  }
  int best_gap = 0, best_end = -1;
  int first_occ = -1;
  for (int i = 0; i < n; ++i)
    if (occupied[i]) {
      first_occ = i;
      break;
    }
  if (first_occ < 0) return {0, n, true};
  // Scan one full turn starting at an occupied coordinate.
  int gap = 0;
  for (int step = 1; step <= n; ++step) {
    const int i = (first_occ + step) % n;
    if (!occupied[i]) {
      ++gap;
    } else {
      if (gap > best_gap) {
        best_gap = gap;
        best_end = (i - 1 + n) % n;
      }
      gap = 0;
    }
  }
  if (best_gap == 0) return {0, n, true};
  const int arc_start = (best_end + 1) % n;
  const int arc_length = n - best_gap;
  return {(arc_start - 1 + n) % n, arc_length + 2, false};
}

}  // namespace

std::vector<DomainRadii> inradius_report(const DomainLabeling& labeling, const ScalarGrid& grid) {
  const int d = grid.dimension();
  const LatticeIndexer& lat = grid.lattice;
  const int count = labeling.count();
  const bool periodic = grid.geometry.periodic();

  std::vector<std::array<std::vector<char>, 3>> occupancy(count);
  for (auto& occ : occupancy)
    for (int a = 0; a < d; ++a) occ[a].assign(lat.extent[a], 0);
  for (std::int64_t i = 0; i < lat.size(); ++i) {
    const int id = labeling.labels[i];
    if (id == 0) continue;
    const auto ijk = lat.unravel(i);
    for (int a = 0; a < d; ++a) occupancy[id - 1][a][ijk[a]] = 1;
  }

  const double inf = std::numeric_limits<double>::infinity();
  std::array<double, 3> spacing{1.0, 1.0, 1.0};
  for (int a = 0; a < d; ++a) spacing[a] = grid.spacing(a);

  std::vector<DomainRadii> report;
  report.reserve(count);
  std::vector<double> field;
  for (int id = 1; id <= count; ++id) {
    std::array<AxisWindow, 3> win{};
    std::array<int, 3> ext{1, 1, 1};
    std::array<bool, 3> wrap_axis{false, false, false};
    for (int a = 0; a < d; ++a) {
      win[a] = axis_window(occupancy[id - 1][a], periodic);
      ext[a] = win[a].length;
      wrap_axis[a] = win[a].periodic;
    }
    const LatticeIndexer wl(d, ext);
    field.assign(wl.size(), 0.0);
    std::vector<std::int64_t> to_grid(wl.size());
    for (std::int64_t w = 0; w < wl.size(); ++w) {
      const auto local = wl.unravel(w);
      std::array<int, 3> g{0, 0, 0};
      for (int a = 0; a < d; ++a) g[a] = wrap(win[a].start + local[a], lat.extent[a]);
      to_grid[w] = lat.ravel(g);
      field[w] = labeling.labels[to_grid[w]] == id ? inf : 0.0;
    }
    squared_distance_transform<double>(field, wl, spacing, wrap_axis);

    DomainRadii r;
    r.domain_id = id;
    double best = -1.0;
    std::int64_t best_index = labeling.peak_index(id);
    for (std::int64_t w = 0; w < wl.size(); ++w) {
      if (labeling.labels[to_grid[w]] != id) continue;
      if (field[w] > best) {
        best = field[w];
        best_index = to_grid[w];
      }
      if (to_grid[w] == labeling.peak_index(id)) r.centered_inradius = std::sqrt(field[w]);
    }
    r.inradius = std::sqrt(std::max(best, 0.0));
    r.incenter = grid.position(best_index);
    report.push_back(r);
  }
  return report;
}

DomainMembership::DomainMembership(const ScalarGrid& grid, const DomainLabeling& labeling,
                                   int domain_id)
    : grid_(grid), labeling_(labeling), domain_id_(domain_id), sign_(labeling.sign(domain_id)) {}

bool DomainMembership::contains(const Point& x) const {
  const int d = grid_.dimension();
  const LatticeIndexer& lat = grid_.lattice;
  const bool periodic = grid_.geometry.periodic();
  if (!grid_.mode) {
    std::array<int, 3> g{0, 0, 0};
    for (int a = 0; a < d; ++a) {
      int i = static_cast<int>(std::lround(x[a] / grid_.spacing(a)));
      g[a] = periodic ? wrap(i, lat.extent[a]) : std::clamp(i, 0, lat.extent[a] - 1);
    }
    return labeling_.labels[lat.ravel(g)] == domain_id_;
  }

  const double v = grid_.mode->value(x);
  if (std::abs(v) <= labeling_.zero_threshold) return false;
  if ((v > 0 ? 1 : -1) != sign_) return false;
  std::array<int, 3> base{0, 0, 0};
  for (int a = 0; a < d; ++a) {
    // Snap points that sit on a lattice plane up to rounding.
    const double t = x[a] / grid_.spacing(a);
    const double r = std::round(t);
    base[a] = static_cast<int>(std::abs(t - r) < 1e-9 ? r : std::floor(t));
  }
  const int corners = 1 << d;
  for (int c = 0; c < corners; ++c) {
    std::array<int, 3> g{0, 0, 0};
    for (int a = 0; a < d; ++a) {
      const int i = base[a] + ((c >> a) & 1);
      g[a] = periodic ? wrap(i, lat.extent[a]) : std::clamp(i, 0, lat.extent[a] - 1);
    }
    if (labeling_.labels[lat.ravel(g)] == domain_id_) return true;
  }
  return false;
}

double deficiency_ratio(const DomainLabeling& labeling, const ScalarGrid& grid, int domain_id,
                        double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("deficiency_ratio needs delta > 0");
  if (!(grid.eigenvalue > 0.0))
    throw std::invalid_argument("deficiency_ratio needs a positive eigenvalue on the grid");
  const int d = grid.dimension();
  const double radius = delta / std::sqrt(grid.eigenvalue);
  const Point center = grid.position(labeling.peak_index(domain_id));
  if (grid.geometry.periodic()) {
    if (!(radius < grid.geometry.injectivity_radius()))
      throw std::invalid_argument("ball exceeds the injectivity radius of the torus");
  } else {
    for (int a = 0; a < d; ++a)
      if (center[a] - radius < 0.0 || center[a] + radius > grid.geometry.sides[a])
        throw std::invalid_argument("ball exceeds the geometry");
  }

  const int f = grid.mode ? kDeficiencyOversampling : 1;
  std::array<double, 3> step{0.0, 0.0, 0.0};
  std::array<int, 3> reach{0, 0, 0};
  for (int a = 0; a < d; ++a) {
    step[a] = grid.spacing(a) / f;
    reach[a] = static_cast<int>(std::floor(radius / step[a] + 1e-9));
  }
  const DomainMembership member(grid, labeling, domain_id);
  std::int64_t total = 0, outside = 0;
  const double r2 = radius * radius * (1.0 + 1e-12);
  Point y(d);
  for (int k = -reach[2]; k <= reach[2]; ++k)
    for (int j = -reach[1]; j <= reach[1]; ++j)
      for (int i = -reach[0]; i <= reach[0]; ++i) {
        const std::array<int, 3> off{i, j, k};
        double s = 0.0;
        for (int a = 0; a < d; ++a) {
          const double delta_a = off[a] * step[a];
          s += delta_a * delta_a;
          y[a] = center[a] + delta_a;
        }
        if (s > r2) continue;
        ++total;
        if (!member.contains(y)) ++outside;
      }
  return static_cast<double>(outside) / static_cast<double>(total);
}

double faber_krahn_constant(int dimension) {
  constexpr double pi = std::numbers::pi;
  if (dimension == 2) {
    constexpr double j0 = 2.404825557695772768621631879;
    return pi * j0 * j0;
  }
  if (dimension == 3) return 4.0 * pi / 3.0 * pi * pi * pi;
  throw std::invalid_argument("Faber-Krahn constant only for d = 2, 3");
}

ClassicalBounds classical_bounds_report(const DomainLabeling& labeling, const ScalarGrid& grid,
                                        double eigenvalue) {
  ClassicalBounds out;
  const int d = grid.dimension();
  out.faber_krahn_min = std::numeric_limits<double>::infinity();
  for (int id = 1; id <= labeling.count(); ++id)
    out.faber_krahn_min =
        std::min(out.faber_krahn_min, labeling.volume(id) * std::pow(eigenvalue, 0.5 * d));

  // Distance from each point to the nearest point that is not of its own sign.
  const std::int64_t n = grid.size();
  const double inf = std::numeric_limits<double>::infinity();
  std::array<double, 3> spacing{1.0, 1.0, 1.0};
  std::array<bool, 3> wrap_axis{false, false, false};
  for (int a = 0; a < d; ++a) {
    spacing[a] = grid.spacing(a);
    wrap_axis[a] = grid.geometry.periodic();
  }
  double worst = 0.0;
  for (int sgn : {1, -1}) {
    std::vector<double> field(n);
    bool any = false;
    for (std::int64_t i = 0; i < n; ++i) {
      const int id = labeling.labels[i];
      const bool same = id != 0 && labeling.sign(id) == sgn;
      field[i] = same ? inf : 0.0;
      any = any || same;
    }
    if (!any) continue;
    squared_distance_transform<double>(field, grid.lattice, spacing, wrap_axis);
    for (std::int64_t i = 0; i < n; ++i) {
      const int id = labeling.labels[i];
      if (id != 0 && labeling.sign(id) == sgn) worst = std::max(worst, field[i]);
    }
  }
  out.zero_hitting_radius = std::sqrt(worst);
  return out;
}

void write_domain_csv(std::ostream& out, const DomainLabeling& labeling,
                      const std::vector<DomainRadii>& radii, const ScalarGrid& grid, bool header) {
  const int d = grid.dimension();
  static constexpr const char* axes[] = {"argmax_x", "argmax_y", "argmax_z"};
  if (header) {
    out << "lambda,domain_id,sign,volume,inradius,centered_inradius";
    for (int a = 0; a < d; ++a) out << ',' << axes[a];
    out << ",faber_krahn\n";
  }
  const auto old_precision = out.precision(17);
  for (const DomainRadii& r : radii) {
    const Point x = grid.position(labeling.peak_index(r.domain_id));
    out << grid.eigenvalue << ',' << r.domain_id << ',' << labeling.sign(r.domain_id) << ','
        << labeling.volume(r.domain_id) << ',' << r.inradius << ',' << r.centered_inradius;
    for (int a = 0; a < d; ++a) out << ',' << x[a];
    out << ',' << labeling.volume(r.domain_id) * std::pow(grid.eigenvalue, 0.5 * d) << '\n';
  }
  out.precision(old_precision);
}

}  // namespace nodalab
