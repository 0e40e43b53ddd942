#include "nodalab/experiment.hpp"

#include <CLI11.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <fstream>
#include <iostream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct CommonOptions {
  std::string config;
  std::string out;
  int threads = 0;
  long long seed_override = -1;
};

int run(nodalab::ExperimentKind kind, const CommonOptions& opt) {
  using namespace nodalab;
  try {
    std::ifstream in(opt.config);
    if (!in) throw ConfigError({"cannot read config file " + opt.config});
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const std::exception& e) {
      throw ConfigError({std::string("config is not valid JSON: ") + e.what()});
    }
    if (j.is_object() && !j.contains("kind")) j["kind"] = to_string(kind);
    ExperimentConfig config = config_from_json(j);
    if (config.kind != kind)
      throw ConfigError({"config kind '" + to_string(config.kind) + "' does not match subcommand '" +
                         to_string(kind) + "'"});
    if (!opt.out.empty()) config.output_dir = opt.out;
    if (opt.seed_override >= 0) config.seeds = {static_cast<std::uint64_t>(opt.seed_override)};
#ifdef _OPENMP
    if (opt.threads > 0) omp_set_num_threads(opt.threads);
#endif
    const RunResult result = run_experiment(config);
    const auto& m = result.manifest;
    std::cout << "kind: " << m.kind << "\ninstances: " << m.instances.size()
              << "\nfailures: " << m.failures() << "\nartifacts: " << m.artifacts.size()
              << "\nmanifest: " << (std::filesystem::path(config.output_dir) / "manifest.json").string() << '\n';
    for (const auto& i : m.instances)
      if (i.status == "failed") std::cerr << "failed " << i.id << " (" << i.error_kind << "): " << i.error << '\n';
    return result.exit_code;
  } catch (const ConfigError& e) {
    std::cerr << "config validation failed:\n";
    for (const auto& v : e.violations()) std::cerr << "  - " << v << '\n';
    return kExitConfig;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nodal-domain, doubling-index and capacity experiments on flat boxes and tori"};
  app.require_subcommand(1);
  CommonOptions opt;
  const std::vector<std::pair<std::string, nodalab::ExperimentKind>> commands{
      {"spectrum", nodalab::ExperimentKind::spectrum},
      {"nodal", nodalab::ExperimentKind::nodal},
      {"chain", nodalab::ExperimentKind::chain},
      {"capacity", nodalab::ExperimentKind::capacity},
      {"heat-bounds", nodalab::ExperimentKind::heat_bounds},
      {"scaling", nodalab::ExperimentKind::scaling},
      {"fit", nodalab::ExperimentKind::fit}};
  std::vector<std::pair<CLI::App*, nodalab::ExperimentKind>> subs;
  for (const auto& [name, kind] : commands) {
    CLI::App* sub = app.add_subcommand(name, "Run a " + name + " experiment");
    sub->add_option("--config", opt.config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out, "Output directory (overrides output_dir)");
    sub->add_option("--threads", opt.threads, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--seed-override", opt.seed_override, "Replace the seed list by this seed")
        ->check(CLI::NonNegativeNumber);
    subs.emplace_back(sub, kind);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }
  for (const auto& [sub, kind] : subs)
    if (sub->parsed()) return run(kind, opt);
  return kExitConfig;
}
