#include <CLI11.hpp>
#include <cstdio>
#include <functional>
#include <string>

#include "exomap/errors.hpp"
#include "exomap/pipeline.hpp"

namespace {

// Exit codes: 0 success, 2 config error, 3 data error, 4 numerical failure.
int dispatch(const std::string& config_path, const std::string& out_dir, long long seed,
             bool seed_set,
             const std::function<void(const exomap::PipelineConfig&, const std::string&)>& run) {
  try {
    exomap::PipelineConfig config = exomap::loadPipelineConfig(config_path);
    if (seed_set) config.seed = static_cast<std::uint64_t>(seed);
    run(config, out_dir);
    return 0;
  } catch (const exomap::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const exomap::NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 4;
  } catch (const exomap::Error& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Terrain mapping, traversability, and relocalization pipeline"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  long long seed = 0;
  bool seed_set = false;

  const auto addCommon = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "Pipeline TOML configuration")->required();
    cmd->add_option("--out", out_dir, "Artifact directory");
    cmd->add_option("--seed", seed, "Override the config seed")->each([&](const std::string&) {
      seed_set = true;
    });
  };

  struct Command {
    const char* name;
    const char* help;
    void (*run)(const exomap::PipelineConfig&, const std::string&);
  };
  const Command commands[] = {
      {"simulate", "Generate the synthetic world, trajectories, clouds, and keyframes",
       &exomap::runSimulate},
      {"map", "Build the elevation map and semantic pose graph from simulated streams",
       &exomap::runMap},
      {"fuse", "Fuse node submaps into per-room terrain maps", &exomap::runFuse},
      {"traverse", "Score per-cell traversability on the fused rooms", &exomap::runTraverse},
      {"localize", "Relocalize the revisit session inside the mapped graph",
       &exomap::runLocalize},
      {"eval-rpe", "Relative pose error of the estimated trajectories", &exomap::runEvalRpe},
      {"eval-recon", "Point-to-point reconstruction error against the scene",
       &exomap::runEvalRecon},
      {"eval-trav", "Precision/recall/F sweep of the traversability methods",
       &exomap::runEvalTrav},
  };

  for (const auto& command : commands) {
    CLI::App* sub = app.add_subcommand(command.name, command.help);
    addCommon(sub);
    void (*run)(const exomap::PipelineConfig&, const std::string&) = command.run;
    sub->callback([&, run]() { std::exit(dispatch(config_path, out_dir, seed, seed_set, run)); });
  }

  CLI11_PARSE(app, argc, argv);
  return 0;
}
