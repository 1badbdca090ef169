#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "carleson/experiments.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> grid_j;
  std::optional<int> grid_m;
  std::optional<int> depth;
  std::optional<double> q;
  std::optional<double> p;
  std::optional<std::string> space;  // "p,d"; p may be "inf"
  std::optional<int> refine;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "JSON study configuration");
  cmd->add_option("--out", flags.out_path,
                  "Output path prefix; writes <out>.json and <out>.csv");
  cmd->add_option("--seed", flags.seed, "Corpus RNG seed");
  cmd->add_option("--grid-j", flags.grid_j, "Dyadic radial levels");
  cmd->add_option("--grid-m", flags.grid_m, "Circle node count (0 = automatic)");
  cmd->add_option("--depth", flags.depth, "Arc-grid depth");
  cmd->add_option("--q", flags.q, "Inner exponent q");
  cmd->add_option("--p", flags.p, "Space exponent p");
  cmd->add_option("--space", flags.space, "Target space as p,d (p may be inf)");
  cmd->add_option("--refine", flags.refine, "Extra refinement levels for probes");
}

carleson::StudyConfig resolve_config(const std::string& study, const CommonFlags& flags) {
  carleson::StudyConfig config;
  if (!flags.config_path.empty()) {
    std::ifstream in(flags.config_path);
    if (!in) throw CLI::ValidationError("--config", "cannot open " + flags.config_path);
    std::ostringstream buf;
    buf << in.rdbuf();
    config = carleson::StudyConfig::from_json(buf.str());
  }
  config.study = study;
  if (flags.seed) config.corpus.seed = *flags.seed;
  if (flags.grid_j) config.grid.j = *flags.grid_j;
  if (flags.grid_m) config.grid.m = *flags.grid_m;
  if (flags.depth) config.grid.depth = *flags.depth;
  if (flags.q) config.q = *flags.q;
  if (flags.p) config.p = *flags.p;
  if (flags.refine) config.grid.refine = *flags.refine;
  if (flags.space) {
    const auto comma = flags.space->find(',');
    if (comma == std::string::npos)
      throw CLI::ValidationError("--space", "expected p,d");
    const std::string ps = flags.space->substr(0, comma);
    config.p = (ps == "inf") ? carleson::kInfinityExponent : std::stod(ps);
    config.d = std::stoi(flags.space->substr(comma + 1));
  }
  if (!flags.out_path.empty()) config.out = flags.out_path;
  return config;
}

int run(const std::string& study, const CommonFlags& flags) {
  const carleson::StudyConfig config = resolve_config(study, flags);
  const carleson::StudyReport report = carleson::run_study(config);

  if (!config.out.empty()) {
    std::ofstream js(config.out + ".json");
    js << report.to_json() << "\n";
    std::ofstream cs(config.out + ".csv");
    cs << report.to_csv();
    if (!js || !cs) {
      std::cerr << "error: cannot write " << config.out << ".{json,csv}\n";
      return 2;
    }
  }

  if (report.all_passed()) {
    std::cout << report.to_json() << "\n";
    return 0;
  }
  nlohmann::ordered_json failures = nlohmann::ordered_json::array();
  for (const auto& g : report.gates)
    if (!g.passed)
      failures.push_back({{"gate", g.name},
                          {"value", g.value},
                          {"threshold", g.threshold},
                          {"detail", g.detail}});
  nlohmann::ordered_json out;
  out["status"] = "failed";
  out["study"] = study;
  out["failures"] = std::move(failures);
  out["report"] = nlohmann::json::parse(report.to_json());
  std::cout << out.dump(2) << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Carleson-measure and square-function experiment harness"};
  app.require_subcommand(1);

  const std::vector<std::string> studies = {"equivalence", "lacunary", "witness",
                                            "mobius",      "moduli",   "kernels",
                                            "cotype"};
  std::vector<CommonFlags> flags(studies.size());
  for (std::size_t i = 0; i < studies.size(); ++i) {
    CLI::App* cmd = app.add_subcommand(studies[i], studies[i] + " study");
    add_common(cmd, flags[i]);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    for (std::size_t i = 0; i < studies.size(); ++i)
      if (app.got_subcommand(studies[i])) return run(studies[i], flags[i]);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
