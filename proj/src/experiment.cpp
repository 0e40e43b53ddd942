#include "nodalab/experiment.hpp"

#include "nodalab/capacity.hpp"
#include "nodalab/doubling.hpp"
#include "nodalab/spectra_io.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>

namespace nodalab {

namespace fs = std::filesystem;
using nlohmann::json;

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::spectrum: return "spectrum";
    case ExperimentKind::nodal: return "nodal";
    case ExperimentKind::chain: return "chain";
    case ExperimentKind::capacity: return "capacity";
    case ExperimentKind::heat_bounds: return "heat_bounds";
    case ExperimentKind::scaling: return "scaling";
    case ExperimentKind::fit: return "fit";
  }
  return "unknown";
}

ExperimentKind experiment_kind_from_string(const std::string& name) {
  for (auto k : {ExperimentKind::spectrum, ExperimentKind::nodal, ExperimentKind::chain,
                 ExperimentKind::capacity, ExperimentKind::heat_bounds, ExperimentKind::scaling,
                 ExperimentKind::fit})
    if (to_string(k) == name) return k;
  if (name == "heat-bounds") return ExperimentKind::heat_bounds;
  throw std::invalid_argument("unknown experiment kind: " + name);
}

bool ExperimentConfig::operator==(const ExperimentConfig& o) const {
  return kind == o.kind && geometry == o.geometry && levels == o.levels && modes == o.modes &&
         seeds == o.seeds && samples_per_wavelength == o.samples_per_wavelength &&
         resolution == o.resolution && zero_tolerance == o.zero_tolerance && deltas == o.deltas &&
         A == o.A && shapes == o.shapes && a == o.a && b == o.b &&
         condenser_spacing == o.condenser_spacing && balls_per_field == o.balls_per_field &&
         times == o.times && table == o.table && quantity == o.quantity && model == o.model &&
         output_dir == o.output_dir;
}

namespace {

std::string join(const std::vector<std::string>& items, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? sep : "") + items[i];
  return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> violations)
    : std::runtime_error("invalid config: " + join(violations, "; ")), violations_(std::move(violations)) {}

json to_json(const ExperimentConfig& c) {
  return {{"kind", to_string(c.kind)},
          {"geometry", geometry_to_json(c.geometry)},
          {"levels", c.levels},
          {"modes", c.modes},
          {"seeds", c.seeds},
          {"samples_per_wavelength", c.samples_per_wavelength},
          {"resolution", c.resolution},
          {"zero_tolerance", c.zero_tolerance},
          {"deltas", c.deltas},
          {"A", c.A},
          {"shapes", c.shapes},
          {"a", c.a},
          {"b", c.b},
          {"condenser_spacing", c.condenser_spacing},
          {"balls_per_field", c.balls_per_field},
          {"times", c.times},
          {"table", c.table},
          {"quantity", c.quantity},
          {"model", to_string(c.model)},
          {"output_dir", c.output_dir}};
}

ExperimentConfig config_from_json(const json& j) {
  std::vector<std::string> errors;
  ExperimentConfig c;
  if (!j.is_object()) throw ConfigError({"config must be a JSON object"});
  static const std::set<std::string> known{
      "kind", "geometry", "levels", "modes", "seeds", "samples_per_wavelength", "resolution",
      "zero_tolerance", "deltas", "A", "shapes", "a", "b", "condenser_spacing", "balls_per_field",
      "times", "table", "quantity", "model", "output_dir"};
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) errors.push_back("unknown field '" + key + "'");

  auto read = [&](const char* key, auto& target, bool required = false) {
    if (!j.contains(key)) {
      if (required) errors.push_back(std::string("missing field '") + key + "'");
      return;
    }
    try {
      j.at(key).get_to(target);
    } catch (const std::exception& e) {
      errors.push_back(std::string("field '") + key + "' has the wrong type");
    }
  };
  std::string kind, model;
  read("kind", kind, true);
  if (!kind.empty()) {
    try {
      c.kind = experiment_kind_from_string(kind);
    } catch (const std::exception& e) {
      errors.push_back(e.what());
    }
  }
  if (j.contains("geometry")) {
    try {
      c.geometry = geometry_from_json(j.at("geometry"));
    } catch (const std::exception& e) {
      errors.push_back(std::string("geometry: ") + e.what());
    }
  } else if (c.kind != ExperimentKind::fit) {
    errors.push_back("missing field 'geometry'");
  }
  read("levels", c.levels);
  read("modes", c.modes);
  read("seeds", c.seeds);
  read("samples_per_wavelength", c.samples_per_wavelength);
  read("resolution", c.resolution);
  read("zero_tolerance", c.zero_tolerance);
  read("deltas", c.deltas);
  read("A", c.A);
  read("shapes", c.shapes);
  read("a", c.a);
  read("b", c.b);
  read("condenser_spacing", c.condenser_spacing);
  read("balls_per_field", c.balls_per_field);
  read("times", c.times);
  read("table", c.table);
  read("quantity", c.quantity);
  read("model", model);
  if (!model.empty()) {
    try {
      c.model = scaling_model_from_string(model);
    } catch (const std::exception& e) {
      errors.push_back(e.what());
    }
  }
  read("output_dir", c.output_dir);
  if (!errors.empty()) throw ConfigError(errors);
  return c;
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot read config file " + path.string()});
  json j;
  try {
    j = json::parse(in);
  } catch (const std::exception& e) {
    throw ConfigError({std::string("config is not valid JSON: ") + e.what()});
  }
  return config_from_json(j);
}

std::vector<std::string> validate(const ExperimentConfig& c) {
  std::vector<std::string> v;
  const bool needs_geometry = c.kind != ExperimentKind::fit;
  bool geometry_ok = true;
  if (needs_geometry) {
    try {
      c.geometry.validate();
    } catch (const std::exception& e) {
      v.push_back(std::string("geometry: ") + e.what());
      geometry_ok = false;
    }
  }
  const int d = c.geometry.dimension;
  if (c.output_dir.empty()) v.push_back("output_dir must not be empty");
  if (!(c.samples_per_wavelength >= 16.0)) v.push_back("samples_per_wavelength must be at least 16");
  if (c.resolution < 0) v.push_back("resolution must be nonnegative");
  if (!(c.zero_tolerance > 0.0 && c.zero_tolerance < 1.0)) v.push_back("zero_tolerance must lie in (0, 1)");
  for (int n : c.levels)
    if (n < 0) v.push_back("level " + std::to_string(n) + " is negative");
  if (!c.levels.empty()) {
    if (geometry_ok && !c.geometry.periodic()) v.push_back("levels need a torus geometry");
    if (geometry_ok && c.geometry.periodic() && !(c.geometry.sides.array() == 1.0).all())
      v.push_back("torus levels need unit sides");
    if (c.seeds.empty()) v.push_back("levels need at least one seed");
  }
  if (!c.modes.empty() && geometry_ok && c.geometry.periodic()) v.push_back("modes need a box geometry");
  for (const auto& m : c.modes) {
    if (static_cast<int>(m.size()) != d) v.push_back("mode index length must equal the dimension");
    for (int k : m)
      if (k < 1) v.push_back("mode indices must be at least 1");
  }
  for (double delta : c.deltas)
    if (!(delta > 0.0)) v.push_back("deltas must be positive");
  for (int A : c.A)
    if (A < 5 || A % 4 != 1) v.push_back("A = " + std::to_string(A) + " is not of the form 4A'+1 with A' >= 1");
  if (c.balls_per_field < 1) v.push_back("balls_per_field must be at least 1");

  // Resolutions against the sampling floor.
  if (geometry_ok && needs_geometry && v.empty() && c.resolution > 0) {
    for (const auto& f : enumerate_fields(c))
      if (c.resolution < minimum_resolution(c.geometry, f.mode.eigenvalue, c.samples_per_wavelength))
        v.push_back("resolution " + std::to_string(c.resolution) + " is below the sampling floor for " + f.id);
  }

  switch (c.kind) {
    case ExperimentKind::chain:
      if (c.deltas.empty()) v.push_back("chain needs at least one delta");
      if (c.A.empty()) v.push_back("chain needs at least one A");
      break;
    case ExperimentKind::capacity: {
      const std::set<std::string> ok(condenser_shapes().begin(), condenser_shapes().end());
      for (const auto& s : c.shapes)
        if (s != "concentric" && !ok.count(s)) v.push_back("unknown condenser shape '" + s + "'");
      if (!(c.condenser_spacing > 0.0 && c.condenser_spacing <= 0.05))
        v.push_back("condenser_spacing must lie in (0, 0.05]");
      if (!(0.0 < c.a && c.a < c.b && c.b < 0.5 - 3.0 * c.condenser_spacing))
        v.push_back("concentric radii need 0 < a < b and the shell inside the unit cube");
      break;
    }
    case ExperimentKind::heat_bounds:
      if (geometry_ok && !c.geometry.periodic()) v.push_back("heat_bounds needs a torus geometry");
      for (double t : c.times)
        if (!(t > 0.0 && t < 1.0)) v.push_back("times must lie in (0, 1)");
      break;
    case ExperimentKind::scaling:
      if (geometry_ok && v.empty()) {
        for (const auto& f : enumerate_fields(c))
          if (!(f.mode.eigenvalue > std::numbers::e))
            v.push_back("scaling needs lambda > e, violated by " + f.id);
      }
      break;
    case ExperimentKind::fit:
      if (c.table.empty()) v.push_back("fit needs a table");
      else if (!fs::exists(c.table)) v.push_back("table " + c.table + " does not exist");
      if (c.quantity.empty()) v.push_back("fit needs a quantity");
      break;
    default:
      break;
  }
  return v;
}

void write_long_csv(std::ostream& out, const std::vector<LongRow>& rows) {
  out << "lambda,n,seed,quantity,value\n";
  const auto old = out.precision(17);
  for (const auto& r : rows) out << r.lambda << ',' << r.n << ',' << r.seed << ',' << r.quantity << ',' << r.value << '\n';
  out.precision(old);
}

std::vector<LongRow> read_long_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  std::getline(in, line);
  if (line.rfind("lambda,n,seed,quantity,value", 0) != 0)
    throw std::invalid_argument("not a long-format table: " + path.string());
  std::vector<LongRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell[5];
    for (auto& c : cell) std::getline(ss, c, ',');
    rows.push_back({std::stod(cell[0]), std::stoi(cell[1]), std::stoull(cell[2]), cell[3], std::stod(cell[4])});
  }
  return rows;
}

std::vector<FieldInstance> enumerate_fields(const ExperimentConfig& c, std::vector<InstanceRecord>* skipped) {
  std::vector<FieldInstance> out;
  if (!c.geometry.periodic()) {
    for (const auto& m : c.modes) {
      IntVector idx(c.geometry.dimension);
      std::string id = "mode";
      int n = 0;
      for (int a = 0; a < c.geometry.dimension; ++a) {
        idx[a] = m[a];
        n += m[a] * m[a];
        id += (a ? "x" : "_") + std::to_string(m[a]);
      }
      out.push_back({id, box_mode(c.geometry, idx), n, 0});
    }
    return out;
  }
  for (int level : c.levels)
    for (std::uint64_t seed : c.seeds) {
      const std::string id = "level" + std::to_string(level) + "_seed" + std::to_string(seed);
      auto mode = sweep_mode(c.geometry, level, seed);
      if (!mode) {
        if (skipped) skipped->push_back({id, "skipped", "", "empty eigenspace"});
        continue;
      }
      out.push_back({id, *mode, level, seed});
    }
  return out;
}

int field_resolution(const ExperimentConfig& c, const EigenMode& mode) {
  if (c.resolution > 0) return c.resolution;
  return std::max(minimum_resolution(mode.geometry, mode.eigenvalue, c.samples_per_wavelength), 8);
}

namespace {

struct InstanceOutput {
  std::vector<InstanceRecord> records;
  std::vector<LongRow> rows;
  std::string text;
  std::vector<fs::path> files;
};

/// Runs fn, recording success or the failure kind under `id`.
void guarded(InstanceOutput& out, const std::string& id, const std::function<void()>& fn) {
  try {
    fn();
    out.records.push_back({id, "ok", "", ""});
  } catch (const NumericalError& e) {
    out.records.push_back({id, "failed", "numerical", e.what()});
  } catch (const std::invalid_argument& e) {
    out.records.push_back({id, "failed", "invalid_argument", e.what()});
  } catch (const std::exception& e) {
    out.records.push_back({id, "failed", "error", e.what()});
  }
}

std::vector<InstanceOutput> run_parallel(std::size_t count, const std::function<void(std::size_t, InstanceOutput&)>& fn) {
  std::vector<InstanceOutput> outputs(count);
  const auto n = static_cast<long>(count);
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < n; ++i) fn(static_cast<std::size_t>(i), outputs[static_cast<std::size_t>(i)]);
  return outputs;
}

std::string number_tag(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

int max_domain(const DomainLabeling& labeling) {
  int best = 1;
  for (int id = 2; id <= labeling.count(); ++id)
    if (labeling.peak(id) > labeling.peak(best)) best = id;
  return best;
}

double lambda_of(const FieldInstance& f) { return f.mode.eigenvalue; }

}  // namespace

RunResult run_experiment(const ExperimentConfig& config) {
  if (auto v = validate(config); !v.empty()) throw ConfigError(v);
  const fs::path root = config.output_dir;
  fs::create_directories(root);

  RunResult result;
  Manifest& m = result.manifest;
  m.kind = to_string(config.kind);
  m.config = to_json(config);
  m.created = utc_timestamp();

  std::vector<InstanceRecord> skipped;
  const std::vector<FieldInstance> fields =
      config.kind == ExperimentKind::fit ? std::vector<FieldInstance>{} : enumerate_fields(config, &skipped);
  std::vector<InstanceOutput> outputs;

  auto collect = [&](const std::string& csv_name, const std::string& header) {
    std::vector<LongRow> rows;
    std::string text = header;
    for (auto& o : outputs) {
      m.instances.insert(m.instances.end(), o.records.begin(), o.records.end());
      rows.insert(rows.end(), o.rows.begin(), o.rows.end());
      text += o.text;
      for (const auto& f : o.files) add_artifact(m, root, f);
    }
    if (!csv_name.empty()) {
      std::ofstream out(root / csv_name);
      out << text;
      add_artifact(m, root, csv_name);
    }
    return rows;
  };
  auto write_sweep = [&](const std::vector<LongRow>& rows, const std::string& name) {
    std::ofstream out(root / name);
    write_long_csv(out, rows);
    out.close();
    add_artifact(m, root, name);
  };
  m.instances = skipped;

  switch (config.kind) {
    case ExperimentKind::spectrum: {
      fs::create_directories(root / "modes");
      fs::create_directories(root / "grids");
      outputs = run_parallel(fields.size(), [&](std::size_t i, InstanceOutput& o) {
        const auto& f = fields[i];
        guarded(o, f.id, [&] {
          const ScalarGrid grid = sample_field(f.mode, field_resolution(config, f.mode));
          const fs::path mode_rel = fs::path("modes") / (f.id + ".json");
          save_mode(f.mode, root / mode_rel);
          o.files.push_back(mode_rel);
          for (const auto& p : save_grid(grid, root / "grids" / f.id))
            o.files.push_back(fs::relative(p, root));
          o.rows.push_back({lambda_of(f), f.n, f.seed, "resolution", static_cast<double>(grid.resolution)});
          o.rows.push_back({lambda_of(f), f.n, f.seed, "max_abs", grid.values.abs().maxCoeff()});
          o.rows.push_back({lambda_of(f), f.n, f.seed, "terms", static_cast<double>(f.mode.terms.size())});
        });
      });
      write_sweep(collect("", ""), "sweep.csv");
      break;
    }
    case ExperimentKind::nodal: {
      outputs = run_parallel(fields.size(), [&](std::size_t i, InstanceOutput& o) {
        const auto& f = fields[i];
        guarded(o, f.id, [&] {
          const ScalarGrid grid = sample_field(f.mode, field_resolution(config, f.mode));
          const DomainLabeling labeling = label_nodal_domains(grid, config.zero_tolerance);
          const auto radii = inradius_report(labeling, grid);
          const ClassicalBounds cb = classical_bounds_report(labeling, grid, grid.eigenvalue);
          std::ostringstream text;
          write_domain_csv(text, labeling, radii, grid, false);
          o.text = text.str();
          double min_in = std::numeric_limits<double>::infinity(), min_c = min_in;
          for (const auto& r : radii) {
            min_in = std::min(min_in, r.inradius);
            min_c = std::min(min_c, r.centered_inradius);
          }
          const double lam = lambda_of(f);
          o.rows.push_back({lam, f.n, f.seed, "domains", static_cast<double>(labeling.count())});
          o.rows.push_back({lam, f.n, f.seed, "min_inradius", min_in});
          o.rows.push_back({lam, f.n, f.seed, "min_centered_inradius", min_c});
          o.rows.push_back({lam, f.n, f.seed, "faber_krahn_min", cb.faber_krahn_min});
          o.rows.push_back({lam, f.n, f.seed, "zero_hitting_radius", cb.zero_hitting_radius});
          const int id = max_domain(labeling);
          for (double delta : config.deltas)
            guarded(o, f.id + "/delta=" + number_tag(delta), [&] {
              o.rows.push_back({lam, f.n, f.seed, "deficiency@" + number_tag(delta),
                                deficiency_ratio(labeling, grid, id, delta)});
            });
        });
      });
      std::string header = "lambda,domain_id,sign,volume,inradius,centered_inradius,argmax_x,argmax_y";
      header += config.geometry.dimension == 3 ? ",argmax_z,faber_krahn\n" : ",faber_krahn\n";
      write_sweep(collect("domains.csv", header), "sweep.csv");
      break;
    }
    case ExperimentKind::chain: {
      fs::create_directories(root / "chains");
      outputs = run_parallel(fields.size(), [&](std::size_t i, InstanceOutput& o) {
        const auto& f = fields[i];
        guarded(o, f.id, [&] {
          const ScalarGrid grid = sample_field(f.mode, field_resolution(config, f.mode));
          const DomainLabeling labeling = label_nodal_domains(grid, config.zero_tolerance);
          const int id = max_domain(labeling);
          const double lam = lambda_of(f);
          for (double delta : config.deltas)
            for (int A : config.A) {
              const std::string tag = "delta=" + number_tag(delta) + "_A=" + std::to_string(A);
              guarded(o, f.id + "/" + tag, [&] {
                const ChainReport r = run_chain(grid, labeling, id, delta, A);
                const fs::path rel = fs::path("chains") / (f.id + "_" + tag + ".json");
                write_json(root / rel, to_json(r));
                o.files.push_back(rel);
                const double n_max =
                    r.N_sequence.empty() ? 0.0 : *std::max_element(r.N_sequence.begin(), r.N_sequence.end());
                o.rows.push_back({lam, f.n, f.seed, "N_max@" + tag, n_max});
                o.rows.push_back({lam, f.n, f.seed, "df_ratio@" + tag, r.df_ratio});
                o.rows.push_back({lam, f.n, f.seed, "sup_ratio@" + tag, r.sup_ratio});
                o.rows.push_back({lam, f.n, f.seed, "max_volume_fraction@" + tag, r.max_volume_fraction});
                o.rows.push_back({lam, f.n, f.seed, "telescoping_violations@" + tag,
                                  static_cast<double>(r.telescoping_violations)});
                o.rows.push_back({lam, f.n, f.seed, "growth_verified@" + tag, r.growth_verified ? 1.0 : 0.0});
                o.rows.push_back({lam, f.n, f.seed, "truncated@" + tag, r.truncated ? 1.0 : 0.0});
              });
            }
        });
      });
      write_sweep(collect("", ""), "sweep.csv");
      break;
    }
    case ExperimentKind::capacity: {
      fs::create_directories(root / "condensers");
      const int d = config.geometry.dimension;
      const std::size_t shape_count = config.shapes.size();
      outputs = run_parallel(shape_count + fields.size(), [&](std::size_t i, InstanceOutput& o) {
        if (i < shape_count) {
          const std::string& shape = config.shapes[i];
          guarded(o, "shape=" + shape, [&] {
            const double h = config.condenser_spacing;
            const bool concentric = shape == "concentric";
            const CondenserSpec spec =
                concentric ? concentric_condenser(d, config.a, config.b, h, Point::Constant(d, 0.5))
                           : shape_condenser(d, shape, h);
            const CapacityResult cap = variational_capacity(spec);
            std::ostringstream line;
            line.precision(17);
            line << shape << ',' << config.a << ',' << config.b << ',' << std::lround(1.0 / h) << ','
                 << cap.energy_value << ',';
            json report{{"shape", shape},
                        {"energy", cap.energy_value},
                        {"flux", cap.flux_value},
                        {"relative_gap", cap.relative_gap},
                        {"residual", cap.residual},
                        {"iterations", cap.iterations},
                        {"unknowns", cap.unknowns}};
            if (concentric) {
              const double exact = concentric_capacity(d, config.a, config.b);
              line << exact << ',' << (cap.energy_value - exact) / exact << '\n';
            } else {
              line << ",\n";
              Point x = Point::Constant(d, 0.5);
              x[0] += 0.25;
              const double r = enclosing_radius(spec, x) + spec.spacing;
              json checks = json::array();
              for (double t : {0.25 * r * r, r * r}) {
                const HeatBoundCheck hb = capacity_heat_bound_check(spec, x, t, r);
                checks.push_back({{"t", t},
                                  {"r", r},
                                  {"psi", hb.psi},
                                  {"kernel_integral", hb.kernel_integral},
                                  {"margin1", hb.margin1},
                                  {"psi_r2", hb.psi_r2},
                                  {"proposition_ratio", hb.proposition_ratio},
                                  {"small_time_fraction", hb.small_time_fraction},
                                  {"tail_warning", hb.tail_warning}});
              }
              report["heat_bound"] = checks;
              if (d == 3) report["volume_capacity_ratio"] = spec.k_volume() / std::pow(cap.energy_value, 3.0);
            }
            o.text = line.str();
            const fs::path rel = fs::path("condensers") / (shape + ".json");
            write_json(root / rel, report);
            o.files.push_back(rel);
          });
          return;
        }
        const auto& f = fields[i - shape_count];
        guarded(o, f.id, [&] {
          const ScalarGrid grid = sample_field(f.mode, field_resolution(config, f.mode));
          const DomainLabeling labeling = label_nodal_domains(grid, config.zero_tolerance);
          const int id = max_domain(labeling);
          const double lam = lambda_of(f);
          for (double delta : config.deltas)
            guarded(o, f.id + "/delta=" + number_tag(delta), [&] {
              const NodalCapacityReport r = nodal_capacity_experiment(grid, labeling, id, delta);
              const fs::path rel = fs::path("condensers") / (f.id + "_delta=" + number_tag(delta) + ".json");
              write_json(root / rel, to_json(r));
              o.files.push_back(rel);
              const std::string tag = "@" + number_tag(delta);
              o.rows.push_back({lam, f.n, f.seed, "normalized_cap" + tag, r.normalized_cap});
              o.rows.push_back({lam, f.n, f.seed, "normalized_temp" + tag, r.normalized_temp});
              o.rows.push_back({lam, f.n, f.seed, "majorization_margin" + tag, r.majorization_margin});
              o.rows.push_back({lam, f.n, f.seed, "vacuous" + tag, r.vacuous ? 1.0 : 0.0});
            });
        });
      });
      write_sweep(collect("capacity.csv", "shape,a,b,N,cap,analytic,rel_err\n"), "sweep.csv");
      break;
    }
    case ExperimentKind::heat_bounds: {
      InstanceOutput o;
      guarded(o, "kernel_bounds", [&] {
        const std::vector<double> times =
            config.times.empty() ? std::vector<double>{1e-3, 1e-2, 0.05, 0.1} : config.times;
        const auto pairs = sample_point_pairs(config.geometry, config.balls_per_field,
                                              config.seeds.empty() ? 0 : config.seeds.front());
        const KernelBoundReport rep = kernel_bound_report(config.geometry, times, pairs);
        std::ofstream csv(root / "kernel_bounds.csv");
        write_kernel_bound_csv(csv, rep);
        csv.close();
        write_json(root / "kernel_bounds.json", to_json(rep));
        o.files = {"kernel_bounds.csv", "kernel_bounds.json"};
      });
      outputs.push_back(std::move(o));
      collect("", "");
      break;
    }
    case ExperimentKind::scaling: {
      outputs = run_parallel(fields.size(), [&](std::size_t i, InstanceOutput& o) {
        const auto& f = fields[i];
        guarded(o, f.id, [&] {
          const TheoremRow row = theorem_row(f.mode, f.n, f.seed, config.samples_per_wavelength);
          const double lam = row.lambda;
          o.rows.push_back({lam, f.n, f.seed, "min_centered_inradius", row.min_centered_inradius});
          o.rows.push_back({lam, f.n, f.seed, "min_inradius", row.min_inradius});
          o.rows.push_back({lam, f.n, f.seed, "inverse_sqrt_lambda", row.inverse_sqrt_lambda});
          o.rows.push_back({lam, f.n, f.seed, "predicted_shape", row.predicted_shape});
          if (config.geometry.periodic()) {
            const auto df = df_sweep(config.geometry, {f.n}, {f.seed}, config.balls_per_field,
                                     config.samples_per_wavelength);
            for (const auto& r : df) o.rows.push_back({lam, f.n, f.seed, "N_max", r.n_max});
          }
        });
      });
      const auto rows = collect("", "");
      write_sweep(rows, "sweep.csv");
      InstanceOutput fit_out;
      json fits = json::object();
      for (auto model : {ScalingModel::pure_power, ScalingModel::power_with_log_correction})
        guarded(fit_out, "fit_" + to_string(model), [&] {
          std::vector<double> lam, y;
          for (const auto& r : rows)
            if (r.quantity == "min_centered_inradius") {
              lam.push_back(r.lambda);
              y.push_back(r.value);
            }
          const ScalingFit fit = fit_scaling(lam, y, model, config.geometry.dimension);
          fits[to_string(model)] = {{"slope", fit.slope}, {"intercept", fit.intercept},
                                    {"r_squared", fit.r_squared}, {"points", fit.x.size()}};
        });
      m.instances.insert(m.instances.end(), fit_out.records.begin(), fit_out.records.end());
      write_json(root / "fits.json", fits);
      add_artifact(m, root, "fits.json");
      break;
    }
    case ExperimentKind::fit: {
      InstanceOutput o;
      guarded(o, "fit", [&] {
        std::vector<double> lam, y;
        for (const auto& r : read_long_csv(config.table))
          if (r.quantity == config.quantity) {
            lam.push_back(r.lambda);
            y.push_back(r.value);
          }
        const ScalingFit fit = fit_scaling(lam, y, config.model, config.geometry.dimension);
        write_json(root / "fit.json", {{"quantity", config.quantity},
                                       {"model", to_string(fit.model)},
                                       {"slope", fit.slope},
                                       {"intercept", fit.intercept},
                                       {"r_squared", fit.r_squared},
                                       {"points", fit.x.size()}});
        o.files.push_back("fit.json");
      });
      outputs.push_back(std::move(o));
      collect("", "");
      break;
    }
  }
  write_manifest(m, root);
  result.exit_code = m.failures() > 0 ? 3 : 0;
  return result;
}

}  // namespace nodalab
