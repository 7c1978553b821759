// Copyright Contributors to the rgbd-augment Project
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <exception>
#include <functional>
#include <string>

#include <CLI11.hpp>

#include "rgbda/pipeline.hpp"

namespace {

struct CommonOptions {
  std::string config_path;
  uint64_t seed = 0;
  bool seed_given = false;
  int jobs = 1;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "Pipeline configuration file (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", opts.seed, "Override the config seed")
      ->each([&opts](const std::string&) { opts.seed_given = true; });
  cmd->add_option("--jobs", opts.jobs, "Sub-scene level parallelism")
      ->check(CLI::PositiveNumber);
}

int dispatch(const CommonOptions& opts,
             const std::function<int(const rgbda::PipelineConfig&, int)>& stage) {
  rgbda::PipelineConfig config = rgbda::PipelineConfig::load(opts.config_path);
  if (opts.seed_given) config.seed = opts.seed;
  return stage(config, opts.jobs);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RGB-D dataset augmentation pipeline"};
  app.require_subcommand(1);

  struct Command {
    const char* name;
    const char* help;
    std::function<int(const rgbda::PipelineConfig&, int)> stage;
  };
  const Command commands[] = {
      {"gen-scene", "Generate a synthetic RGB-D dataset under dataset_root",
       [](const rgbda::PipelineConfig& c, int) { return rgbda::run_gen_scene(c); }},
      {"split", "Split scenes into sub-scenes with holdout assignment",
       [](const rgbda::PipelineConfig& c, int) { return rgbda::run_split(c); }},
      {"synth", "Synthesize novel target poses per strategy",
       [](const rgbda::PipelineConfig& c, int) { return rgbda::run_synth(c); }},
      {"render", "Render RGB-D-mask triplets for every target pose",
       [](const rgbda::PipelineConfig& c, int jobs) { return rgbda::run_render(c, jobs); }},
      {"score", "Score renderer quality on each sub-scene's holdout split",
       [](const rgbda::PipelineConfig& c, int jobs) { return rgbda::run_score(c, jobs); }},
      {"filter", "Partition sub-scenes by the quality thresholds",
       [](const rgbda::PipelineConfig& c, int) { return rgbda::run_filter(c); }},
      {"merge", "Merge a capped sample of kept renders into the original set",
       [](const rgbda::PipelineConfig& c, int) { return rgbda::run_merge(c); }},
      {"eval", "Evaluate a prediction manifest against ground truth",
       [](const rgbda::PipelineConfig& c, int) { return rgbda::run_eval(c); }},
      {"gen-testset", "Build the perturbed dense test set",
       [](const rgbda::PipelineConfig& c, int jobs) { return rgbda::run_gen_testset(c, jobs); }},
      {"saturation", "Produce the merged-manifest cap ladder",
       [](const rgbda::PipelineConfig& c, int) { return rgbda::run_saturation(c); }},
  };

  CommonOptions opts;
  int exit_code = 0;
  for (const auto& command : commands) {
    CLI::App* cmd = app.add_subcommand(command.name, command.help);
    add_common(cmd, opts);
    cmd->callback([&, stage = command.stage] { exit_code = dispatch(opts, stage); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return exit_code;
}
