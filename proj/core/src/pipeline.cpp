// Copyright Contributors to the rgbd-augment Project
// SPDX-License-Identifier: Apache-2.0

#include "rgbda/pipeline.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "json_util.hpp"
#include "rgbda/dataset_io.hpp"
#include "rgbda/depth_codec.hpp"
#include "rgbda/rng.hpp"

namespace rgbda {

using nlohmann::json;

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

namespace {

std::vector<StrategySpec> default_strategies() {
  std::vector<StrategySpec> out(5);
  out[0].kind = StrategyKind::kReconstruction;
  out[1].kind = StrategyKind::kInterpolation;
  out[2].kind = StrategyKind::kAngled;
  out[3].kind = StrategyKind::kTranslateHorizontal;
  out[4].kind = StrategyKind::kTranslateVertical;
  return out;
}

std::vector<MergeCap> default_saturation_caps() {
  return {MergeCap::count(1000), MergeCap::count(5000), MergeCap::count(10000),
          MergeCap::count(20000), MergeCap::count(50000)};
}

MergeCap cap_from_json(const json& j) {
  if (j.is_number()) return MergeCap::count(j.get<uint64_t>());
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (!s.empty() && s.back() == '%') return MergeCap::percent(std::stod(s.substr(0, s.size() - 1)));
    throw std::runtime_error("merge cap string must look like \"28%\": " + s);
  }
  throw std::runtime_error("merge cap must be a number or a percentage string");
}

json cap_to_json(const MergeCap& cap) {
  if (cap.kind == MergeCap::Kind::kCount) return static_cast<uint64_t>(cap.value);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g%%", cap.value);
  return std::string(buf);
}

std::string cap_label(const MergeCap& cap) {
  char buf[32];
  if (cap.kind == MergeCap::Kind::kCount) {
    std::snprintf(buf, sizeof(buf), "%llu",
                  static_cast<unsigned long long>(cap.value));
  } else {
    std::snprintf(buf, sizeof(buf), "%gpct", cap.value);
  }
  return buf;
}

StrategySpec strategy_from_json(const json& j) {
  StrategySpec s;
  s.kind = strategy_kind_from_string(j.at("kind").get<std::string>());
  s.angle_deg = j.value("angle_deg", s.angle_deg);
  s.translate_m = j.value("translate_m", s.translate_m);
  s.interp_count = j.value("interp_count", s.interp_count);
  s.camera_frame = j.value("camera_frame", s.camera_frame);
  s.perturb_translate_m = j.value("perturb_translate_m", s.perturb_translate_m);
  s.perturb_rotate_deg = j.value("perturb_rotate_deg", s.perturb_rotate_deg);
  s.validate();
  return s;
}

json strategy_to_json(const StrategySpec& s) {
  return json{{"kind", to_string(s.kind)},
              {"angle_deg", s.angle_deg},
              {"translate_m", s.translate_m},
              {"interp_count", s.interp_count},
              {"camera_frame", s.camera_frame},
              {"perturb_translate_m", s.perturb_translate_m},
              {"perturb_rotate_deg", s.perturb_rotate_deg}};
}

}  // namespace

PipelineConfig PipelineConfig::from_json_string(const std::string& text) {
  const json j = json::parse(text);
  PipelineConfig c;
  c.dataset_root = j.value("dataset_root", "");
  c.output_root = j.value("output_root", "");
  c.seed = j.value("seed", uint64_t{0});
  c.max_extent_m = j.value("max_extent_m", c.max_extent_m);
  c.holdout_fraction = j.value("holdout_fraction", c.holdout_fraction);

  if (j.contains("strategies")) {
    for (const auto& js : j.at("strategies")) c.strategies.push_back(strategy_from_json(js));
  } else {
    c.strategies = default_strategies();
  }

  if (j.contains("renderer")) {
    const json& jr = j.at("renderer");
    c.renderer_kind = jr.value("kind", c.renderer_kind);
    c.splat.splat_radius_px = jr.value("splat_radius_px", c.splat.splat_radius_px);
    c.splat.zbuffer_epsilon_m = jr.value("zbuffer_epsilon_m", c.splat.zbuffer_epsilon_m);
    c.exchange_root = jr.value("exchange_root", "");
    c.exchange_timeout_sec = jr.value("timeout_sec", c.exchange_timeout_sec);
  }
  if (c.renderer_kind != "builtin-splat" && c.renderer_kind != "external")
    throw std::runtime_error("renderer.kind must be builtin-splat or external");
  c.splat.validate();

  if (j.contains("quality")) {
    const json& jq = j.at("quality");
    c.quality.alpha = jq.value("alpha", c.quality.alpha);
    c.quality.thresholds.perceptual = jq.value("perceptual_threshold", c.quality.thresholds.perceptual);
    c.quality.thresholds.absrel = jq.value("absrel_threshold", c.quality.thresholds.absrel);
    c.external_scores = jq.value("external_scores", "");
  }
  c.quality.thresholds.validate();

  if (j.contains("testset")) {
    const json& jt = j.at("testset");
    c.testset_thresholds.perceptual = jt.value("perceptual_threshold", c.testset_thresholds.perceptual);
    c.testset_thresholds.absrel = jt.value("absrel_threshold", c.testset_thresholds.absrel);
    c.testset_frames_per_scene = jt.value("frames_per_scene", c.testset_frames_per_scene);
    c.testset_translate_range_m = jt.value("translate_range_m", c.testset_translate_range_m);
    c.testset_rotate_range_deg = jt.value("rotate_range_deg", c.testset_rotate_range_deg);
  }
  c.testset_thresholds.validate();
  if (c.testset_frames_per_scene < 1)
    throw std::runtime_error("testset.frames_per_scene must be >= 1");

  if (j.contains("merge")) {
    const json& jm = j.at("merge");
    if (jm.contains("cap") && !jm.at("cap").is_null()) c.merge_cap = cap_from_json(jm.at("cap"));
    if (jm.contains("saturation_caps")) {
      for (const auto& jc : jm.at("saturation_caps")) c.saturation_caps.push_back(cap_from_json(jc));
    }
    c.merge_original_manifest = jm.value("original_manifest", "");
    c.merge_pool_manifest = jm.value("pool_manifest", "");
  }
  if (c.saturation_caps.empty()) c.saturation_caps = default_saturation_caps();

  if (j.contains("eval")) {
    const json& je = j.at("eval");
    c.eval.min_depth = je.value("min_depth_m", c.eval.min_depth);
    c.eval.max_depth = je.value("max_depth_m", c.eval.max_depth);
    if (je.contains("crop") && !je.at("crop").is_null()) {
      const json& jc = je.at("crop");
      c.eval.crop = EvalCrop{jc.at("u0").get<int>(), jc.at("v0").get<int>(),
                             jc.at("width").get<int>(), jc.at("height").get<int>()};
    }
    c.eval_pred_manifest = je.value("pred_manifest", "");
    c.eval_gt_manifest = je.value("gt_manifest", "");
  }
  c.eval.validate();

  if (j.contains("synthetic")) {
    const json& js = j.at("synthetic");
    c.synthetic.scene_count = js.value("scene_count", c.synthetic.scene_count);
    c.synthetic.frame_count = js.value("frame_count", c.synthetic.frame_count);
    c.synthetic.spacing_m = js.value("spacing_m", c.synthetic.spacing_m);
    c.synthetic.sparsify_row_step = js.value("sparsify_row_step", c.synthetic.sparsify_row_step);
    if (js.contains("intrinsics"))
      c.synthetic.intrinsics = json_util::intrinsics_from_json(js.at("intrinsics"));
  }
  c.synthetic.intrinsics.validate();
  return c;
}

PipelineConfig PipelineConfig::load(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  PipelineConfig c = from_json_string(buffer.str());
  // Relative paths resolve against the config file's directory.
  const fs::path base = path.parent_path();
  const auto resolve = [&base](fs::path& p) {
    if (!p.empty() && p.is_relative()) p = base / p;
  };
  resolve(c.dataset_root);
  resolve(c.output_root);
  resolve(c.exchange_root);
  resolve(c.external_scores);
  resolve(c.merge_original_manifest);
  resolve(c.merge_pool_manifest);
  resolve(c.eval_pred_manifest);
  resolve(c.eval_gt_manifest);
  return c;
}

std::string PipelineConfig::to_json_string() const {
  json strategies_json = json::array();
  for (const auto& s : strategies) strategies_json.push_back(strategy_to_json(s));
  json caps_json = json::array();
  for (const auto& cap : saturation_caps) caps_json.push_back(cap_to_json(cap));
  json j{
      {"dataset_root", dataset_root.generic_string()},
      {"output_root", output_root.generic_string()},
      {"seed", seed},
      {"max_extent_m", max_extent_m},
      {"holdout_fraction", holdout_fraction},
      {"strategies", strategies_json},
      {"renderer",
       {{"kind", renderer_kind},
        {"splat_radius_px", splat.splat_radius_px},
        {"zbuffer_epsilon_m", splat.zbuffer_epsilon_m},
        {"exchange_root", exchange_root.generic_string()},
        {"timeout_sec", exchange_timeout_sec}}},
      {"quality",
       {{"alpha", quality.alpha},
        {"perceptual_threshold", quality.thresholds.perceptual},
        {"absrel_threshold", quality.thresholds.absrel},
        {"external_scores", external_scores.generic_string()}}},
      {"testset",
       {{"perceptual_threshold", testset_thresholds.perceptual},
        {"absrel_threshold", testset_thresholds.absrel},
        {"frames_per_scene", testset_frames_per_scene},
        {"translate_range_m", testset_translate_range_m},
        {"rotate_range_deg", testset_rotate_range_deg}}},
      {"merge",
       {{"cap", merge_cap ? cap_to_json(*merge_cap) : json(nullptr)},
        {"saturation_caps", caps_json},
        {"original_manifest", merge_original_manifest.generic_string()},
        {"pool_manifest", merge_pool_manifest.generic_string()}}},
      {"eval",
       {{"min_depth_m", eval.min_depth},
        {"max_depth_m", eval.max_depth},
        {"crop", eval.crop ? json{{"u0", eval.crop->u0},
                                  {"v0", eval.crop->v0},
                                  {"width", eval.crop->width},
                                  {"height", eval.crop->height}}
                           : json(nullptr)},
        {"pred_manifest", eval_pred_manifest.generic_string()},
        {"gt_manifest", eval_gt_manifest.generic_string()}}},
      {"synthetic",
       {{"scene_count", synthetic.scene_count},
        {"frame_count", synthetic.frame_count},
        {"spacing_m", synthetic.spacing_m},
        {"sparsify_row_step", synthetic.sparsify_row_step},
        {"intrinsics", json_util::intrinsics_to_json(synthetic.intrinsics)}}},
  };
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Stage plumbing
// ---------------------------------------------------------------------------

namespace {

class StageTimer {
 public:
  StageTimer() : start_(std::chrono::steady_clock::now()) {}
  double elapsed_sec() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

// report.json is deterministic; wall-clock timings live in timing.json so
// reruns stay byte-identical everywhere else.
void write_stage_files(const fs::path& stage_dir, const json& report, double elapsed_sec) {
  fs::create_directories(stage_dir);
  write_text(stage_dir / "report.json", report.dump(2) + "\n");
  write_text(stage_dir / "timing.json", json{{"elapsed_sec", elapsed_sec}}.dump(2) + "\n");
}

int fail_stage(const fs::path& stage_dir, const std::string& stage,
               const std::vector<std::string>& errors, double elapsed_sec) {
  write_stage_files(stage_dir, json{{"stage", stage}, {"errors", errors}}, elapsed_sec);
  return 1;
}

void parallel_for(size_t n, int jobs, const std::function<void(size_t)>& fn) {
  if (jobs <= 1 || n <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  const size_t workers = std::min<size_t>(static_cast<size_t>(jobs), n);
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (size_t t = 0; t < workers; ++t) {
    threads.emplace_back([&] {
      for (size_t i; (i = next.fetch_add(1)) < n;) fn(i);
    });
  }
  for (auto& th : threads) th.join();
}

std::string index_name(int k) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "%03d", k);
  return buf;
}

std::string global_frame_id(const std::string& scene, int k, const std::string& frame_id) {
  return scene + "_" + index_name(k) + "_" + frame_id;
}

struct SubsceneRef {
  std::string scene;
  int index = 0;
  fs::path dir;
  std::string id;  // "<scene>/<index>"
};

std::vector<SubsceneRef> enumerate_subscenes(const fs::path& subscenes_root) {
  std::vector<SubsceneRef> out;
  for (const auto& scene : dataset_io::list_scenes(subscenes_root)) {
    for (const auto& seq : dataset_io::list_sequences(subscenes_root / scene)) {
      const int k = std::stoi(seq);
      out.push_back({scene, k, subscenes_root / scene / seq, scene + "/" + std::to_string(k)});
    }
  }
  return out;
}

const char* strategy_abbrev(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::kReconstruction: return "rec";
    case StrategyKind::kInterpolation: return "itp";
    case StrategyKind::kAngled: return "ang";
    case StrategyKind::kTranslateHorizontal: return "trh";
    case StrategyKind::kTranslateVertical: return "trv";
    case StrategyKind::kRandomPerturb: return "rnd";
  }
  return "unk";
}

// Reconstruction targets reuse the source frame id so that re-rendered frames
// pair with their originals; every other strategy gets a unique suffix.
std::string target_name(const std::string& source_id, size_t strategy_index, StrategyKind kind,
                        int ordinal) {
  if (kind == StrategyKind::kReconstruction) return source_id;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "_%02zu%s_%02d", strategy_index, strategy_abbrev(kind), ordinal);
  return source_id + buf;
}

struct SynthTarget {
  std::string target_id;
  Pose pose;
  std::string strategy;
  std::string parameter;
  std::string source_frame;  // global frame id
  int source_index = 0;      // index into the sub-scene frame list
};

json target_to_json(const SynthTarget& t) {
  return json{{"target_id", t.target_id},       {"pose", json_util::pose_to_json(t.pose)},
              {"strategy", t.strategy},         {"parameter", t.parameter},
              {"source_frame", t.source_frame}, {"source_index", t.source_index}};
}

SynthTarget target_from_json(const json& j) {
  SynthTarget t;
  t.target_id = j.at("target_id").get<std::string>();
  t.pose = json_util::pose_from_json(j.at("pose"));
  t.strategy = j.at("strategy").get<std::string>();
  t.parameter = j.at("parameter").get<std::string>();
  t.source_frame = j.at("source_frame").get<std::string>();
  t.source_index = j.at("source_index").get<int>();
  return t;
}

json load_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return json::parse(in);
}

// Re-roots record paths from one manifest directory to another.
DatasetManifest rebase_manifest(DatasetManifest manifest, const fs::path& old_base,
                                const fs::path& new_base) {
  const auto rebase = [&](std::string& p) {
    if (p.empty()) return;
    const fs::path abs = (old_base / p).lexically_normal();
    const fs::path rel = abs.lexically_relative(new_base.lexically_normal());
    p = rel.empty() ? abs.generic_string() : rel.generic_string();
  };
  for (auto& r : manifest.records) {
    rebase(r.rgb_path);
    rebase(r.depth_path);
    rebase(r.mask_path);
  }
  return manifest;
}

std::unique_ptr<Renderer> make_renderer(const PipelineConfig& config) {
  if (config.renderer_kind == "external") {
    ExternalRenderConfig base;
    base.exchange_dir = config.exchange_root;
    base.timeout_sec = config.exchange_timeout_sec;
    return std::make_unique<ExchangeRenderer>(base);
  }
  return std::make_unique<SplatRenderer>(config.splat);
}

int aggregate_exit(size_t ok, size_t failed) {
  if (failed == 0) return 0;
  return ok == 0 ? 1 : 2;
}

}  // namespace

// ---------------------------------------------------------------------------
// Synthetic street scenes
// ---------------------------------------------------------------------------

SceneSpec make_street_scene(const SyntheticDatasetSpec& spec, uint64_t seed) {
  std::mt19937_64 engine(seed);
  SceneSpec scene;
  scene.ground_plane = true;
  scene.intrinsics = spec.intrinsics;
  scene.max_range_m = 120.0;
  scene.sparsify_row_step = spec.sparsify_row_step;
  scene.seed = seed;
  scene.trajectory.frame_count = spec.frame_count;
  scene.trajectory.spacing_m = spec.spacing_m;
  scene.trajectory.height_m = 1.6;

  const double road_length = spec.frame_count * spec.spacing_m + 60.0;
  // Facades on both sides of the corridor.
  for (const double side : {1.0, -1.0}) {
    double x = -6.0 + 4.0 * rng::unit(engine);
    while (x < road_length) {
      const double length = 8.0 + 6.0 * rng::unit(engine);
      const double gap = 2.0 + 4.0 * rng::unit(engine);
      const double depth = 3.0 + 2.0 * rng::unit(engine);
      const double height = 3.5 + 4.5 * rng::unit(engine);
      const double near_edge = 4.5 + 1.5 * rng::unit(engine);
      const double y0 = side * near_edge;
      const double y1 = side * (near_edge + depth);
      scene.boxes.push_back(Box{{x, std::min(y0, y1), 0.0}, {x + length, std::max(y0, y1), height}});
      x += length + gap;
    }
  }
  // Poles along the road edges, alternating sides.
  double x = 2.0 + 3.0 * rng::unit(engine);
  int n = 0;
  while (x < road_length) {
    const double side = (n % 2 == 0) ? 1.0 : -1.0;
    scene.cylinders.push_back(
        Cylinder{x, side * 3.2, 0.25, 3.5 + 1.5 * rng::unit(engine)});
    x += 6.0 + 4.0 * rng::unit(engine);
    ++n;
  }
  return scene;
}

// ---------------------------------------------------------------------------
// Stages
// ---------------------------------------------------------------------------

int run_gen_scene(const PipelineConfig& config) {
  StageTimer timer;
  const fs::path stage_dir = config.output_root / "gen-scene";
  if (config.dataset_root.empty() || config.output_root.empty())
    return fail_stage(stage_dir, "gen-scene", {"config requires dataset_root and output_root"},
                      timer.elapsed_sec());
  try {
    json scenes = json::array();
    for (int i = 0; i < config.synthetic.scene_count; ++i) {
      char name[16];
      std::snprintf(name, sizeof(name), "scene%02d", i);
      const uint64_t scene_seed = rng::derive_seed(config.seed, std::string("gen-scene/") + name);
      const SceneSpec spec = make_street_scene(config.synthetic, scene_seed);
      const SyntheticScene synth(spec);
      SubScene sub;
      sub.scene_id = name;
      sub.subscene_index = 0;
      sub.intrinsics = spec.intrinsics;
      sub.frames = synth.generate_frames();
      dataset_io::write_subscene(config.dataset_root / name / "full", sub);
      scenes.push_back(json{{"scene", name},
                            {"frames", sub.frames.size()},
                            {"boxes", spec.boxes.size()},
                            {"cylinders", spec.cylinders.size()},
                            {"seed", scene_seed}});
    }
    write_stage_files(stage_dir, json{{"stage", "gen-scene"}, {"scenes", scenes}},
                      timer.elapsed_sec());
    return 0;
  } catch (const std::exception& e) {
    return fail_stage(stage_dir, "gen-scene", {e.what()}, timer.elapsed_sec());
  }
}

int run_split(const PipelineConfig& config) {
  StageTimer timer;
  const fs::path stage_dir = config.output_root / "subscenes";
  if (!fs::is_directory(config.dataset_root))
    return fail_stage(stage_dir, "split",
                      {"missing input: dataset_root " + config.dataset_root.string()},
                      timer.elapsed_sec());
  try {
    const auto scenes = dataset_io::list_scenes(config.dataset_root);
    if (scenes.empty())
      return fail_stage(stage_dir, "split", {"no scenes under " + config.dataset_root.string()},
                        timer.elapsed_sec());

    DatasetManifest original;
    original.seed = config.seed;
    json statuses = json::array();
    size_t ok = 0, failed = 0, subscene_total = 0, frame_total = 0;
    for (const auto& scene_name : scenes) {
      try {
        Scene scene = dataset_io::read_scene(config.dataset_root / scene_name, scene_name);
        original.intrinsics.emplace(scene_name, scene.intrinsics);
        auto subs = split_scene(std::move(scene), config.max_extent_m, config.holdout_fraction);
        size_t frames = 0;
        for (const auto& sub : subs) {
          const fs::path dir = stage_dir / scene_name / index_name(sub.subscene_index);
          dataset_io::write_subscene(dir, sub);
          for (const auto& f : sub.frames) {
            ManifestRecord rec;
            rec.frame_id = global_frame_id(scene_name, sub.subscene_index, f.frame_id);
            const fs::path rel =
                fs::path(scene_name) / index_name(sub.subscene_index);
            rec.rgb_path = (rel / "rgb" / (f.frame_id + ".png")).generic_string();
            rec.depth_path = (rel / "depth" / (f.frame_id + ".png")).generic_string();
            rec.pose = f.pose;
            rec.intrinsics_id = scene_name;
            rec.origin = "original";
            rec.source_frame = rec.frame_id;
            rec.subscene_id = sub.id();
            original.records.push_back(std::move(rec));
          }
          frames += sub.frames.size();
        }
        subscene_total += subs.size();
        frame_total += frames;
        ++ok;
        statuses.push_back(json{{"scene", scene_name},
                                {"ok", true},
                                {"subscenes", subs.size()},
                                {"frames", frames}});
      } catch (const std::exception& e) {
        ++failed;
        statuses.push_back(json{{"scene", scene_name}, {"ok", false}, {"error", e.what()}});
      }
    }
    if (ok > 0) original.save(stage_dir / "original_manifest.json");
    write_stage_files(stage_dir,
                      json{{"stage", "split"},
                           {"seed", config.seed},
                           {"max_extent_m", config.max_extent_m},
                           {"holdout_fraction", config.holdout_fraction},
                           {"scene_count", ok},
                           {"subscene_count", subscene_total},
                           {"frame_count", frame_total},
                           {"statuses", statuses}},
                      timer.elapsed_sec());
    return aggregate_exit(ok, failed);
  } catch (const std::exception& e) {
    return fail_stage(stage_dir, "split", {e.what()}, timer.elapsed_sec());
  }
}

int run_synth(const PipelineConfig& config) {
  StageTimer timer;
  const fs::path stage_dir = config.output_root / "synth";
  const fs::path subscenes_root = config.output_root / "subscenes";
  if (!fs::is_directory(subscenes_root))
    return fail_stage(stage_dir, "synth", {"missing input: " + subscenes_root.string()},
                      timer.elapsed_sec());
  if (config.strategies.empty())
    return fail_stage(stage_dir, "synth", {"config violation: empty strategy list"},
                      timer.elapsed_sec());
  try {
    const auto subs = enumerate_subscenes(subscenes_root);
    json statuses = json::array();
    std::map<std::string, size_t> per_strategy;
    size_t ok = 0, failed = 0, total = 0;
    for (const auto& ref : subs) {
      try {
        const auto meta = dataset_io::read_subscene_meta(ref.dir, ref.scene, ref.index,
                                                         config.holdout_fraction);
        // Novel poses derive from the full ordered trajectory; the holdout
        // split only drives quality scoring.
        std::vector<SynthTarget> targets;
        json counts = json::object();
        for (size_t si = 0; si < config.strategies.size(); ++si) {
          StrategySpec spec = config.strategies[si];
          if (spec.kind == StrategyKind::kRandomPerturb) {
            spec.seed = rng::derive_seed(config.seed, "synth/" + ref.id + "/random-perturb");
          }
          const auto synthesized = synthesize_poses(meta.poses, spec);
          std::map<int, int> ordinal;
          for (const auto& sp : synthesized) {
            const std::string& src_id = meta.frame_ids[sp.source_index];
            SynthTarget t;
            t.target_id = target_name(src_id, si, spec.kind, ordinal[sp.source_index]++);
            t.pose = sp.pose;
            t.strategy = to_string(spec.kind);
            t.parameter = sp.parameter;
            t.source_frame = global_frame_id(ref.scene, ref.index, src_id);
            t.source_index = sp.source_index;
            targets.push_back(std::move(t));
          }
          counts[to_string(spec.kind)] =
              counts.value(to_string(spec.kind), size_t{0}) + synthesized.size();
          per_strategy[to_string(spec.kind)] += synthesized.size();
        }

        json jt = json::array();
        for (const auto& t : targets) jt.push_back(target_to_json(t));
        const fs::path dir = stage_dir / ref.scene / index_name(ref.index);
        fs::create_directories(dir);
        write_text(dir / "targets.json",
                   json{{"subscene_id", ref.id}, {"targets", jt}}.dump(2) + "\n");
        total += targets.size();
        ++ok;
        statuses.push_back(json{{"subscene", ref.id},
                                {"ok", true},
                                {"targets", targets.size()},
                                {"per_strategy", counts}});
      } catch (const std::exception& e) {
        ++failed;
        statuses.push_back(json{{"subscene", ref.id}, {"ok", false}, {"error", e.what()}});
      }
    }
    json per_strategy_json = json::object();
    for (const auto& [k, v] : per_strategy) per_strategy_json[k] = v;
    write_stage_files(stage_dir,
                      json{{"stage", "synth"},
                           {"seed", config.seed},
                           {"subscene_count", ok},
                           {"target_count", total},
                           {"per_strategy", per_strategy_json},
                           {"statuses", statuses}},
                      timer.elapsed_sec());
    return aggregate_exit(ok, failed);
  } catch (const std::exception& e) {
    return fail_stage(stage_dir, "synth", {e.what()}, timer.elapsed_sec());
  }
}

namespace {

struct RenderOutcome {
  bool ok = false;
  std::string error;
  size_t rendered = 0;
  std::vector<ManifestRecord> records;
  json failures = json::array();
  CameraIntrinsics intrinsics;
};

// Renders every target of one sub-scene and writes the RGB-D-mask triplets.
RenderOutcome render_subscene_targets(const PipelineConfig& config, const SubsceneRef& ref,
                                      const fs::path& out_dir,
                                      const std::vector<SynthTarget>& targets,
                                      const fs::path& manifest_base) {
  RenderOutcome outcome;
  const SubScene sub =
      dataset_io::read_subscene(ref.dir, ref.scene, ref.index, config.holdout_fraction);
  outcome.intrinsics = sub.intrinsics;

  std::vector<Pose> poses;
  poses.reserve(targets.size());
  for (const auto& t : targets) poses.push_back(t.pose);

  std::vector<RenderResult> results;
  if (config.renderer_kind == "external") {
    ExternalRenderConfig ext;
    ext.exchange_dir =
        config.exchange_root / (ref.scene + "_" + index_name(ref.index));
    ext.subscene_dir = ref.dir;
    ext.timeout_sec = config.exchange_timeout_sec;
    results = render_external(sub, poses, ext);
  } else {
    const PointCloud cloud = build_train_cloud(sub);
    results.reserve(poses.size());
    for (const auto& pose : poses) {
      RenderedView view = render_splat_from_cloud(cloud, sub.intrinsics, pose, config.splat);
      view.subscene_id = sub.id();
      results.push_back({std::move(view), ""});
    }
  }

  fs::create_directories(out_dir / "rgb");
  fs::create_directories(out_dir / "depth");
  fs::create_directories(out_dir / "mask");

  std::vector<std::pair<std::string, Pose>> written;  // target_id -> pose
  for (size_t i = 0; i < targets.size(); ++i) {
    const SynthTarget& t = targets[i];
    if (!results[i].view) {
      outcome.failures.push_back(json{{"target_id", t.target_id}, {"error", results[i].error}});
      continue;
    }
    const RenderedView& view = *results[i].view;
    save_rgb(out_dir / "rgb" / (t.target_id + ".png"), view.rgb);
    save_depth(out_dir / "depth" / (t.target_id + ".png"), view.depth);
    save_mask(out_dir / "mask" / (t.target_id + ".png"), view.mask);
    written.emplace_back(t.target_id, t.pose);

    ManifestRecord rec;
    rec.frame_id = global_frame_id(ref.scene, ref.index, t.target_id);
    const fs::path rel = fs::path(ref.scene) / index_name(ref.index);
    rec.rgb_path =
        (rel / "rgb" / (t.target_id + ".png")).generic_string();
    rec.depth_path = (rel / "depth" / (t.target_id + ".png")).generic_string();
    rec.mask_path = (rel / "mask" / (t.target_id + ".png")).generic_string();
    rec.pose = t.pose;
    rec.intrinsics_id = ref.scene;
    rec.origin = t.strategy;
    rec.source_frame = t.source_frame;
    rec.parameter = t.parameter;
    rec.subscene_id = ref.id;
    outcome.records.push_back(std::move(rec));
    ++outcome.rendered;
  }
  (void)manifest_base;

  // poses.txt follows the lexicographic file order of the written frames.
  std::sort(written.begin(), written.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Pose> ordered;
  ordered.reserve(written.size());
  for (const auto& [id, pose] : written) ordered.push_back(pose);
  dataset_io::write_poses_txt(out_dir / "poses.txt", ordered);
  dataset_io::write_calib_txt(out_dir / "calib.txt", sub.intrinsics);

  outcome.ok = true;
  return outcome;
}

}  // namespace

int run_render(const PipelineConfig& config, int jobs) {
  StageTimer timer;
  const fs::path stage_dir = config.output_root / "renders";
  const fs::path subscenes_root = config.output_root / "subscenes";
  const fs::path synth_root = config.output_root / "synth";
  std::vector<std::string> missing;
  if (!fs::is_directory(subscenes_root)) missing.push_back("missing input: " + subscenes_root.string());
  if (!fs::is_directory(synth_root)) missing.push_back("missing input: " + synth_root.string());
  if (!missing.empty()) return fail_stage(stage_dir, "render", missing, timer.elapsed_sec());

  try {
    const auto subs = enumerate_subscenes(subscenes_root);
    std::vector<RenderOutcome> outcomes(subs.size());
    parallel_for(subs.size(), jobs, [&](size_t i) {
      const SubsceneRef& ref = subs[i];
      try {
        const fs::path targets_path = synth_root / ref.scene / index_name(ref.index) / "targets.json";
        if (!fs::exists(targets_path))
          throw std::runtime_error("missing input: " + targets_path.string());
        std::vector<SynthTarget> targets;
        for (const auto& jt : load_json(targets_path).at("targets"))
          targets.push_back(target_from_json(jt));
        outcomes[i] = render_subscene_targets(
            config, ref, stage_dir / ref.scene / index_name(ref.index), targets, stage_dir);
      } catch (const std::exception& e) {
        outcomes[i].ok = false;
        outcomes[i].error = e.what();
      }
    });

    DatasetManifest pool;
    pool.seed = config.seed;
    json statuses = json::array();
    size_t ok = 0, failed = 0, rendered = 0, render_failures = 0;
    for (size_t i = 0; i < subs.size(); ++i) {
      const auto& outcome = outcomes[i];
      if (!outcome.ok) {
        ++failed;
        statuses.push_back(json{{"subscene", subs[i].id}, {"ok", false}, {"error", outcome.error}});
        continue;
      }
      ++ok;
      rendered += outcome.rendered;
      render_failures += outcome.failures.size();
      pool.intrinsics.emplace(subs[i].scene, outcome.intrinsics);
      for (const auto& rec : outcome.records) pool.records.push_back(rec);
      statuses.push_back(json{{"subscene", subs[i].id},
                              {"ok", true},
                              {"rendered", outcome.rendered},
                              {"failures", outcome.failures}});
    }
    if (ok > 0) pool.save(stage_dir / "pool_manifest.json");
    write_stage_files(stage_dir,
                      json{{"stage", "render"},
                           {"seed", config.seed},
                           {"renderer", config.renderer_kind},
                           {"subscene_count", ok},
                           {"rendered", rendered},
                           {"render_failures", render_failures},
                           {"statuses", statuses}},
                      timer.elapsed_sec());
    const int code = aggregate_exit(ok, failed);
    return code == 0 && render_failures > 0 ? 2 : code;
  } catch (const std::exception& e) {
    return fail_stage(stage_dir, "render", {e.what()}, timer.elapsed_sec());
  }
}

int run_score(const PipelineConfig& config, int jobs) {
  StageTimer timer;
  const fs::path stage_dir = config.output_root / "quality";
  const fs::path subscenes_root = config.output_root / "subscenes";
  if (!fs::is_directory(subscenes_root))
    return fail_stage(stage_dir, "score", {"missing input: " + subscenes_root.string()},
                      timer.elapsed_sec());
  try {
    const auto subs = enumerate_subscenes(subscenes_root);
    const auto renderer = make_renderer(config);

    struct ScoreOutcome {
      bool ok = false;
      std::string error;
      QualityReport report;
    };
    std::vector<ScoreOutcome> outcomes(subs.size());
    parallel_for(subs.size(), jobs, [&](size_t i) {
      try {
        const SubScene sub = dataset_io::read_subscene(subs[i].dir, subs[i].scene, subs[i].index,
                                                       config.holdout_fraction);
        outcomes[i].report = score_subscene(sub, *renderer, config.quality);
        outcomes[i].ok = true;
      } catch (const std::exception& e) {
        outcomes[i].error = e.what();
      }
    });

    std::vector<QualityReport> reports;
    json statuses = json::array();
    size_t ok = 0, failed = 0;
    for (size_t i = 0; i < subs.size(); ++i) {
      if (!outcomes[i].ok) {
        ++failed;
        statuses.push_back(
            json{{"subscene", subs[i].id}, {"ok", false}, {"error", outcomes[i].error}});
        continue;
      }
      ++ok;
      reports.push_back(outcomes[i].report);
      statuses.push_back(json{{"subscene", subs[i].id},
                              {"ok", true},
                              {"pass", outcomes[i].report.pass},
                              {"t_rgbd", outcomes[i].report.t_rgbd}});
    }

    if (!config.external_scores.empty()) {
      std::set<std::string> known;
      for (const auto& r : reports) known.insert(r.subscene_id);
      const auto overrides = ingest_external_scores(config.external_scores, known);
      apply_external_scores(reports, overrides, config.quality);
    }

    fs::create_directories(stage_dir);
    json all = json::array();
    for (size_t i = 0, r = 0; i < subs.size(); ++i) {
      if (!outcomes[i].ok) continue;
      const QualityReport& report = reports[r++];
      write_text(stage_dir / (subs[i].scene + "_" + index_name(subs[i].index) + ".json"),
                 report.to_json_string());
      all.push_back(json::parse(report.to_json_string()));
    }
    write_text(stage_dir / "reports.json", all.dump(2) + "\n");
    write_stage_files(stage_dir,
                      json{{"stage", "score"},
                           {"seed", config.seed},
                           {"renderer", config.renderer_kind},
                           {"scored", ok},
                           {"statuses", statuses}},
                      timer.elapsed_sec());
    return aggregate_exit(ok, failed);
  } catch (const std::exception& e) {
    return fail_stage(stage_dir, "score", {e.what()}, timer.elapsed_sec());
  }
}

int run_filter(const PipelineConfig& config) {
  StageTimer timer;
  const fs::path stage_dir = config.output_root / "filter";
  const fs::path reports_path = config.output_root / "quality" / "reports.json";
  if (!fs::exists(reports_path))
    return fail_stage(stage_dir, "filter", {"missing input: " + reports_path.string()},
                      timer.elapsed_sec());
  try {
    std::vector<QualityReport> reports;
    for (const auto& jr : load_json(reports_path))
      reports.push_back(QualityReport::from_json_string(jr.dump()));
    const FilterResult result = filter_subscenes(reports, config.quality.thresholds);

    json reasons = json::object();
    for (const auto& [id, reason] : result.reasons) reasons[id] = reason;
    fs::create_directories(stage_dir);
    write_text(stage_dir / "result.json",
               json{{"kept", result.kept}, {"rejected", result.rejected}, {"reasons", reasons}}
                       .dump(2) +
                   "\n");
    write_stage_files(stage_dir,
                      json{{"stage", "filter"},
                           {"perceptual_threshold", config.quality.thresholds.perceptual},
                           {"absrel_threshold", config.quality.thresholds.absrel},
                           {"kept_count", result.kept.size()},
                           {"rejected_count", result.rejected.size()},
                           {"reasons", reasons}},
                      timer.elapsed_sec());
    return 0;
  } catch (const std::exception& e) {
    return fail_stage(stage_dir, "filter", {e.what()}, timer.elapsed_sec());
  }
}

namespace {

struct MergeInputs {
  DatasetManifest original;
  DatasetManifest pool;
  size_t pool_before_filter = 0;
};

MergeInputs load_merge_inputs(const PipelineConfig& config, const fs::path& stage_dir,
                              std::vector<std::string>& missing) {
  const fs::path original_path = config.merge_original_manifest.empty()
                                     ? config.output_root / "subscenes" / "original_manifest.json"
                                     : config.merge_original_manifest;
  const fs::path pool_path = config.merge_pool_manifest.empty()
                                 ? config.output_root / "renders" / "pool_manifest.json"
                                 : config.merge_pool_manifest;
  const fs::path filter_path = config.output_root / "filter" / "result.json";
  for (const auto& p : {original_path, pool_path, filter_path})
    if (!fs::exists(p)) missing.push_back("missing input: " + p.string());
  if (!missing.empty()) return {};

  MergeInputs in;
  in.original = rebase_manifest(DatasetManifest::load(original_path),
                                original_path.parent_path(), stage_dir);
  DatasetManifest pool = rebase_manifest(DatasetManifest::load(pool_path),
                                         pool_path.parent_path(), stage_dir);
  in.pool_before_filter = pool.records.size();

  std::set<std::string> kept;
  for (const auto& id : load_json(filter_path).at("kept")) kept.insert(id.get<std::string>());
  in.pool.intrinsics = pool.intrinsics;
  in.pool.seed = pool.seed;
  for (auto& rec : pool.records)
    if (kept.count(rec.subscene_id)) in.pool.records.push_back(std::move(rec));
  return in;
}

}  // namespace

int run_merge(const PipelineConfig& config) {
  StageTimer timer;
  const fs::path stage_dir = config.output_root / "merged";
  try {
    std::vector<std::string> missing;
    MergeInputs in = load_merge_inputs(config, stage_dir, missing);
    if (!missing.empty()) return fail_stage(stage_dir, "merge", missing, timer.elapsed_sec());

    const MergeCap cap =
        config.merge_cap ? *config.merge_cap : MergeCap::count(in.pool.records.size());
    const uint64_t seed = rng::derive_seed(config.seed, "merge");
    const DatasetManifest merged = merge_datasets(in.original, in.pool, cap, seed);
    fs::create_directories(stage_dir);
    merged.save(stage_dir / "manifest.json");
    merged.validate(stage_dir);
    write_stage_files(stage_dir,
                      json{{"stage", "merge"},
                           {"seed", seed},
                           {"cap", cap_to_json(cap)},
                           {"original_count", in.original.records.size()},
                           {"pool_count", in.pool_before_filter},
                           {"kept_pool_count", in.pool.records.size()},
                           {"added", merged.records.size() - in.original.records.size()},
                           {"total", merged.records.size()}},
                      timer.elapsed_sec());
    return 0;
  } catch (const std::exception& e) {
    return fail_stage(stage_dir, "merge", {e.what()}, timer.elapsed_sec());
  }
}

int run_saturation(const PipelineConfig& config) {
  StageTimer timer;
  const fs::path stage_dir = config.output_root / "saturation";
  try {
    std::vector<std::string> missing;
    MergeInputs in = load_merge_inputs(config, stage_dir, missing);
    if (!missing.empty()) return fail_stage(stage_dir, "saturation", missing, timer.elapsed_sec());

    fs::create_directories(stage_dir);
    json summary = json::array();
    for (const auto& cap : config.saturation_caps) {
      const std::string label = cap_label(cap);
      const uint64_t seed = rng::derive_seed(config.seed, "saturation/cap=" + label);
      const DatasetManifest merged = merge_datasets(in.original, in.pool, cap, seed);
      merged.save(stage_dir / ("manifest_" + label + ".json"));
      const size_t added = merged.records.size() - in.original.records.size();
      summary.push_back(json{{"cap", cap_to_json(cap)},
                             {"label", label},
                             {"seed", seed},
                             {"added", added},
                             {"total", merged.records.size()},
                             {"augmented_fraction",
                              merged.records.empty()
                                  ? 0.0
                                  : static_cast<double>(added) / merged.records.size()}});
    }
    write_text(stage_dir / "summary.json", summary.dump(2) + "\n");
    write_stage_files(stage_dir,
                      json{{"stage", "saturation"},
                           {"original_count", in.original.records.size()},
                           {"kept_pool_count", in.pool.records.size()},
                           {"ladder", summary}},
                      timer.elapsed_sec());
    return 0;
  } catch (const std::exception& e) {
    return fail_stage(stage_dir, "saturation", {e.what()}, timer.elapsed_sec());
  }
}

int run_eval(const PipelineConfig& config) {
  StageTimer timer;
  const fs::path stage_dir = config.output_root / "eval";
  const fs::path pred_path = config.eval_pred_manifest.empty()
                                 ? config.output_root / "renders" / "pool_manifest.json"
                                 : config.eval_pred_manifest;
  const fs::path gt_path = config.eval_gt_manifest.empty()
                               ? config.output_root / "subscenes" / "original_manifest.json"
                               : config.eval_gt_manifest;
  std::vector<std::string> missing;
  for (const auto& p : {pred_path, gt_path})
    if (!fs::exists(p)) missing.push_back("missing input: " + p.string());
  if (!missing.empty()) return fail_stage(stage_dir, "eval", missing, timer.elapsed_sec());

  try {
    const ManifestEvalResult result =
        evaluate_manifest(DatasetManifest::load(pred_path), pred_path.parent_path(),
                          DatasetManifest::load(gt_path), gt_path.parent_path(), config.eval);
    fs::create_directories(stage_dir);
    write_text(stage_dir / "metrics.json", result.to_json_string());
    write_text(stage_dir / "metrics.csv", result.to_csv());
    write_stage_files(stage_dir,
                      json{{"stage", "eval"},
                           {"paired", result.per_frame.size()},
                           {"failed", result.failed.size()},
                           {"unmatched_pred", result.unmatched_pred.size()},
                           {"unmatched_gt", result.unmatched_gt.size()},
                           {"aggregate", json::parse(result.to_json_string()).at("aggregate")}},
                      timer.elapsed_sec());
    return result.failed.empty() ? 0 : 2;
  } catch (const std::exception& e) {
    return fail_stage(stage_dir, "eval", {e.what()}, timer.elapsed_sec());
  }
}

int run_gen_testset(const PipelineConfig& config, int jobs) {
  StageTimer timer;
  const fs::path stage_dir = config.output_root / "testset";
  if (!fs::is_directory(config.dataset_root))
    return fail_stage(stage_dir, "gen-testset",
                      {"missing input: dataset_root " + config.dataset_root.string()},
                      timer.elapsed_sec());
  try {
    // Split every test scene into sub-scenes.
    std::vector<SubScene> subs;
    json split_errors = json::array();
    for (const auto& scene_name : dataset_io::list_scenes(config.dataset_root)) {
      try {
        Scene scene = dataset_io::read_scene(config.dataset_root / scene_name, scene_name);
        auto parts = split_scene(std::move(scene), config.max_extent_m, config.holdout_fraction);
        for (auto& sub : parts) subs.push_back(std::move(sub));
      } catch (const std::exception& e) {
        split_errors.push_back(json{{"scene", scene_name}, {"error", e.what()}});
      }
    }
    if (subs.empty())
      return fail_stage(stage_dir, "gen-testset", {"no usable scenes"}, timer.elapsed_sec());

    // Score with the test-set threshold preset.
    QualityConfig qcfg;
    qcfg.alpha = config.quality.alpha;
    qcfg.thresholds = config.testset_thresholds;
    const auto renderer = make_renderer(config);
    struct ScoreOutcome {
      bool ok = false;
      std::string error;
      QualityReport report;
    };
    std::vector<ScoreOutcome> scored(subs.size());
    parallel_for(subs.size(), jobs, [&](size_t i) {
      try {
        scored[i].report = score_subscene(subs[i], *renderer, qcfg);
        scored[i].ok = true;
      } catch (const std::exception& e) {
        scored[i].error = e.what();
      }
    });

    std::vector<QualityReport> reports;
    for (const auto& s : scored)
      if (s.ok) reports.push_back(s.report);
    const FilterResult filtered = filter_subscenes(reports, config.testset_thresholds);
    const std::set<std::string> kept(filtered.kept.begin(), filtered.kept.end());

    json reasons = json::object();
    for (const auto& [id, reason] : filtered.reasons) reasons[id] = reason;
    for (size_t i = 0; i < subs.size(); ++i)
      if (!scored[i].ok) reasons[subs[i].id()] = "scoring failed: " + scored[i].error;

    if (kept.empty()) {
      write_stage_files(stage_dir,
                        json{{"stage", "gen-testset"},
                             {"errors", {"every sub-scene was filtered out"}},
                             {"reasons", reasons},
                             {"split_errors", split_errors}},
                        timer.elapsed_sec());
      return 1;
    }

    // Perturb a capped, seeded sample of train poses per kept sub-scene and
    // render dense RGB-D with masks.
    DatasetManifest manifest;
    manifest.seed = config.seed;
    std::vector<size_t> kept_indices;
    for (size_t i = 0; i < subs.size(); ++i)
      if (kept.count(subs[i].id())) kept_indices.push_back(i);

    struct TestsetOutcome {
      bool ok = false;
      std::string error;
      std::vector<ManifestRecord> records;
      size_t rendered = 0;
    };
    std::vector<TestsetOutcome> outcomes(kept_indices.size());
    parallel_for(kept_indices.size(), jobs, [&](size_t oi) {
      const SubScene& sub = subs[kept_indices[oi]];
      TestsetOutcome& outcome = outcomes[oi];
      try {
        // Seeded sample of up to frames_per_scene source frames.
        std::vector<int> chosen(sub.frames.size());
        for (size_t i = 0; i < chosen.size(); ++i) chosen[i] = static_cast<int>(i);
        if (static_cast<int>(chosen.size()) > config.testset_frames_per_scene) {
          std::mt19937_64 engine(
              rng::derive_seed(config.seed, "testset/sample/" + sub.id()));
          for (size_t i = 0; i < static_cast<size_t>(config.testset_frames_per_scene); ++i) {
            const size_t j = i + static_cast<size_t>(rng::bounded(engine, chosen.size() - i));
            std::swap(chosen[i], chosen[j]);
          }
          chosen.resize(config.testset_frames_per_scene);
          std::sort(chosen.begin(), chosen.end());
        }
        std::vector<Pose> source_poses;
        source_poses.reserve(chosen.size());
        for (int idx : chosen) source_poses.push_back(sub.frames[idx].pose);

        StrategySpec perturb;
        perturb.kind = StrategyKind::kRandomPerturb;
        perturb.perturb_translate_m = config.testset_translate_range_m;
        perturb.perturb_rotate_deg = config.testset_rotate_range_deg;
        perturb.seed = rng::derive_seed(config.seed, "testset/perturb/" + sub.id());
        const auto synthesized = synthesize_poses(source_poses, perturb);

        const fs::path out_dir = stage_dir / sub.scene_id / index_name(sub.subscene_index);
        fs::create_directories(out_dir / "rgb");
        fs::create_directories(out_dir / "depth");
        fs::create_directories(out_dir / "mask");

        const PointCloud cloud = build_train_cloud(sub);
        std::vector<std::pair<std::string, Pose>> written;
        for (size_t k = 0; k < synthesized.size(); ++k) {
          const int src_idx = chosen[synthesized[k].source_index];
          const std::string& src_id = sub.frames[src_idx].frame_id;
          const std::string target_id = src_id + "_rnd";
          const RenderedView view =
              render_splat_from_cloud(cloud, sub.intrinsics, synthesized[k].pose, config.splat);
          save_rgb(out_dir / "rgb" / (target_id + ".png"), view.rgb);
          save_depth(out_dir / "depth" / (target_id + ".png"), view.depth);
          save_mask(out_dir / "mask" / (target_id + ".png"), view.mask);
          written.emplace_back(target_id, synthesized[k].pose);

          ManifestRecord rec;
          rec.frame_id = global_frame_id(sub.scene_id, sub.subscene_index, target_id);
          const fs::path rel = fs::path(sub.scene_id) / index_name(sub.subscene_index);
          rec.rgb_path = (rel / "rgb" / (target_id + ".png")).generic_string();
          rec.depth_path = (rel / "depth" / (target_id + ".png")).generic_string();
          rec.mask_path = (rel / "mask" / (target_id + ".png")).generic_string();
          rec.pose = synthesized[k].pose;
          rec.intrinsics_id = sub.scene_id;
          rec.origin = "random-perturb";
          rec.source_frame = global_frame_id(sub.scene_id, sub.subscene_index, src_id);
          rec.parameter = synthesized[k].parameter;
          rec.subscene_id = sub.id();
          outcome.records.push_back(std::move(rec));
          ++outcome.rendered;
        }
        std::sort(written.begin(), written.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        std::vector<Pose> ordered;
        for (const auto& [id, pose] : written) ordered.push_back(pose);
        dataset_io::write_poses_txt(out_dir / "poses.txt", ordered);
        dataset_io::write_calib_txt(out_dir / "calib.txt", sub.intrinsics);
        outcome.ok = true;
      } catch (const std::exception& e) {
        outcome.error = e.what();
      }
    });

    json statuses = json::array();
    size_t ok = 0, failed = 0, rendered = 0;
    for (size_t oi = 0; oi < kept_indices.size(); ++oi) {
      const SubScene& sub = subs[kept_indices[oi]];
      manifest.intrinsics.emplace(sub.scene_id, sub.intrinsics);
      if (!outcomes[oi].ok) {
        ++failed;
        statuses.push_back(
            json{{"subscene", sub.id()}, {"ok", false}, {"error", outcomes[oi].error}});
        continue;
      }
      ++ok;
      rendered += outcomes[oi].rendered;
      for (const auto& rec : outcomes[oi].records) manifest.records.push_back(rec);
      statuses.push_back(
          json{{"subscene", sub.id()}, {"ok", true}, {"rendered", outcomes[oi].rendered}});
    }
    if (ok > 0) manifest.save(stage_dir / "manifest.json");
    write_stage_files(stage_dir,
                      json{{"stage", "gen-testset"},
                           {"seed", config.seed},
                           {"perceptual_threshold", config.testset_thresholds.perceptual},
                           {"absrel_threshold", config.testset_thresholds.absrel},
                           {"frames_per_scene", config.testset_frames_per_scene},
                           {"subscene_count", subs.size()},
                           {"kept_count", kept.size()},
                           {"rendered", rendered},
                           {"reasons", reasons},
                           {"split_errors", split_errors},
                           {"statuses", statuses}},
                      timer.elapsed_sec());
    return aggregate_exit(ok, failed);
  } catch (const std::exception& e) {
    return fail_stage(stage_dir, "gen-testset", {e.what()}, timer.elapsed_sec());
  }
}

}  // namespace rgbda
