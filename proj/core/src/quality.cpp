// Copyright Contributors to the rgbd-augment Project
// SPDX-License-Identifier: Apache-2.0

#include "rgbda/quality.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace rgbda {

using nlohmann::json;

void QualityThresholds::validate() const {
  if (!(perceptual > 0.0) || !(absrel > 0.0))
    throw std::invalid_argument("quality thresholds must be positive");
}

double trade_off_measure(double alpha, double abs_rel, double perceptual) {
  return std::sqrt(alpha * abs_rel * abs_rel + perceptual * perceptual);
}

namespace {

bool passes(double abs_rel, double perceptual, const QualityThresholds& t) {
  return perceptual < t.perceptual && abs_rel < t.absrel;
}

constexpr int kWindow = 11;
constexpr double kSigma = 1.5;
constexpr double kC1 = 0.01 * 0.01;
constexpr double kC2 = 0.03 * 0.03;

std::vector<double> luma(const Image& img) {
  std::vector<double> out(static_cast<size_t>(img.width()) * img.height());
  for (int v = 0; v < img.height(); ++v) {
    for (int u = 0; u < img.width(); ++u) {
      out[static_cast<size_t>(v) * img.width() + u] =
          0.299 * img.at(u, v, 0) + 0.587 * img.at(u, v, 1) + 0.114 * img.at(u, v, 2);
    }
  }
  return out;
}

std::array<double, kWindow> gaussian_kernel() {
  std::array<double, kWindow> k{};
  double sum = 0.0;
  for (int i = 0; i < kWindow; ++i) {
    const double x = i - (kWindow - 1) / 2.0;
    k[i] = std::exp(-x * x / (2.0 * kSigma * kSigma));
    sum += k[i];
  }
  for (auto& v : k) v /= sum;
  return k;
}

// Separable Gaussian filter; only the fully-covered interior is used later.
std::vector<double> gauss_filter(const std::vector<double>& src, int width, int height) {
  static const auto kernel = gaussian_kernel();
  const int half = kWindow / 2;
  std::vector<double> tmp(src.size(), 0.0);
  for (int v = 0; v < height; ++v) {
    for (int u = half; u < width - half; ++u) {
      double acc = 0.0;
      for (int i = 0; i < kWindow; ++i)
        acc += kernel[i] * src[static_cast<size_t>(v) * width + u - half + i];
      tmp[static_cast<size_t>(v) * width + u] = acc;
    }
  }
  std::vector<double> out(src.size(), 0.0);
  for (int v = half; v < height - half; ++v) {
    for (int u = half; u < width - half; ++u) {
      double acc = 0.0;
      for (int i = 0; i < kWindow; ++i)
        acc += kernel[i] * tmp[static_cast<size_t>(v - half + i) * width + u];
      out[static_cast<size_t>(v) * width + u] = acc;
    }
  }
  return out;
}

}  // namespace

double reference_perceptual(const Image& a, const Image& b) {
  if (a.width() != b.width() || a.height() != b.height())
    throw std::invalid_argument("reference_perceptual: image sizes differ");
  const int width = a.width();
  const int height = a.height();
  if (width < kWindow || height < kWindow)
    throw std::invalid_argument("reference_perceptual: images smaller than the 11x11 window");

  const auto x = luma(a);
  const auto y = luma(b);
  std::vector<double> xx(x.size()), yy(x.size()), xy(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    xx[i] = x[i] * x[i];
    yy[i] = y[i] * y[i];
    xy[i] = x[i] * y[i];
  }

  const auto mu_x = gauss_filter(x, width, height);
  const auto mu_y = gauss_filter(y, width, height);
  const auto m_xx = gauss_filter(xx, width, height);
  const auto m_yy = gauss_filter(yy, width, height);
  const auto m_xy = gauss_filter(xy, width, height);

  const int half = kWindow / 2;
  double total = 0.0;
  size_t count = 0;
  for (int v = half; v < height - half; ++v) {
    for (int u = half; u < width - half; ++u) {
      const size_t i = static_cast<size_t>(v) * width + u;
      const double var_x = m_xx[i] - mu_x[i] * mu_x[i];
      const double var_y = m_yy[i] - mu_y[i] * mu_y[i];
      const double cov = m_xy[i] - mu_x[i] * mu_y[i];
      const double ssim = ((2.0 * mu_x[i] * mu_y[i] + kC1) * (2.0 * cov + kC2)) /
                          ((mu_x[i] * mu_x[i] + mu_y[i] * mu_y[i] + kC1) * (var_x + var_y + kC2));
      total += ssim;
      ++count;
    }
  }
  return (1.0 - total / count) / 2.0;
}

QualityReport score_from_views(const SubScene& sub, const std::vector<RenderResult>& views,
                               const QualityConfig& cfg) {
  if (sub.holdout.empty())
    throw std::invalid_argument("score: sub-scene " + sub.id() + " has no holdout frames");
  if (views.size() != sub.holdout.size())
    throw std::invalid_argument("score: one rendered view per holdout frame expected");

  QualityReport report;
  report.subscene_id = sub.id();
  report.alpha = cfg.alpha;

  double absrel_sum = 0.0;
  double perceptual_sum = 0.0;
  size_t used = 0;
  for (size_t k = 0; k < sub.holdout.size(); ++k) {
    const int idx = sub.holdout[k];
    const Frame& gt = sub.frames[idx];

    FrameQuality fq;
    fq.frame_index = idx;
    fq.frame_id = gt.frame_id;

    if (!views[k].view) {
      fq.excluded = true;
      fq.note = views[k].error.empty() ? "render failed" : views[k].error;
      report.frames.push_back(std::move(fq));
      continue;
    }
    const RenderedView& rv = *views[k].view;

    double err_sum = 0.0;
    size_t overlap = 0;
    for (int v = 0; v < gt.depth.height(); ++v) {
      for (int u = 0; u < gt.depth.width(); ++u) {
        if (!gt.depth.valid(u, v) || !rv.mask.at(u, v) || !rv.depth.valid(u, v)) continue;
        err_sum += std::abs(gt.depth.at(u, v) - rv.depth.at(u, v)) / gt.depth.at(u, v);
        ++overlap;
      }
    }
    fq.overlap_pixels = overlap;
    if (overlap == 0) {
      fq.excluded = true;
      fq.note = "no overlapping valid pixels";
      report.frames.push_back(std::move(fq));
      continue;
    }
    fq.abs_rel = err_sum / overlap;
    fq.perceptual = reference_perceptual(rv.rgb, gt.rgb);
    absrel_sum += fq.abs_rel;
    perceptual_sum += fq.perceptual;
    ++used;
    report.frames.push_back(std::move(fq));
  }

  if (used == 0)
    throw std::runtime_error("score: every holdout frame of " + sub.id() + " was excluded");

  report.abs_rel = absrel_sum / used;
  report.perceptual = perceptual_sum / used;
  report.t_rgbd = trade_off_measure(cfg.alpha, report.abs_rel, report.perceptual);
  report.pass = passes(report.abs_rel, report.perceptual, cfg.thresholds);
  return report;
}

QualityReport score_subscene(const SubScene& sub, const Renderer& renderer,
                             const QualityConfig& cfg) {
  std::vector<Pose> poses;
  poses.reserve(sub.holdout.size());
  for (int idx : sub.holdout) poses.push_back(sub.frames[idx].pose);
  return score_from_views(sub, renderer.render_batch(sub, poses), cfg);
}

std::string QualityReport::to_json_string() const {
  json j{{"subscene_id", subscene_id},
         {"abs_rel", abs_rel},
         {"perceptual", perceptual},
         {"perceptual_metric", perceptual_metric},
         {"t_rgbd", t_rgbd},
         {"alpha", alpha},
         {"pass", pass}};
  json frames_json = json::array();
  for (const auto& f : frames) {
    frames_json.push_back(json{{"frame_index", f.frame_index},
                               {"frame_id", f.frame_id},
                               {"abs_rel", f.abs_rel},
                               {"perceptual", f.perceptual},
                               {"overlap_pixels", f.overlap_pixels},
                               {"excluded", f.excluded},
                               {"note", f.note}});
  }
  j["frames"] = frames_json;
  return j.dump(2) + "\n";
}

QualityReport QualityReport::from_json_string(const std::string& text) {
  const json j = json::parse(text);
  QualityReport r;
  r.subscene_id = j.at("subscene_id").get<std::string>();
  r.abs_rel = j.at("abs_rel").get<double>();
  r.perceptual = j.at("perceptual").get<double>();
  r.perceptual_metric = j.value("perceptual_metric", "dssim");
  r.t_rgbd = j.at("t_rgbd").get<double>();
  r.alpha = j.at("alpha").get<double>();
  r.pass = j.at("pass").get<bool>();
  for (const auto& jf : j.value("frames", json::array())) {
    FrameQuality f;
    f.frame_index = jf.at("frame_index").get<int>();
    f.frame_id = jf.at("frame_id").get<std::string>();
    f.abs_rel = jf.at("abs_rel").get<double>();
    f.perceptual = jf.at("perceptual").get<double>();
    f.overlap_pixels = jf.at("overlap_pixels").get<size_t>();
    f.excluded = jf.at("excluded").get<bool>();
    f.note = jf.at("note").get<std::string>();
    r.frames.push_back(std::move(f));
  }
  return r;
}

std::map<std::string, double> ingest_external_scores(const std::filesystem::path& file,
                                                     const std::set<std::string>& known_ids) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open external scores: " + file.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) return {};

  const json j = json::parse(text);
  if (!j.is_object()) throw std::runtime_error("external scores: expected a JSON object");

  std::map<std::string, double> out;
  std::vector<std::string> offenders;
  for (const auto& [id, value] : j.items()) {
    if (!known_ids.count(id)) {
      offenders.push_back(id + ": unknown sub-scene id");
      continue;
    }
    const double score = value.get<double>();
    if (!(score >= 0.0 && score <= 1.0)) {
      offenders.push_back(id + ": score " + std::to_string(score) + " outside [0, 1]");
      continue;
    }
    out[id] = score;
  }
  if (!offenders.empty()) {
    std::string msg = "external scores rejected:";
    for (const auto& o : offenders) msg += "\n  " + o;
    throw std::runtime_error(msg);
  }
  return out;
}

void apply_external_scores(std::vector<QualityReport>& reports,
                           const std::map<std::string, double>& overrides,
                           const QualityConfig& cfg) {
  for (auto& report : reports) {
    const auto it = overrides.find(report.subscene_id);
    if (it == overrides.end()) continue;
    report.perceptual = it->second;
    report.perceptual_metric = "lpips-external";
    report.t_rgbd = trade_off_measure(cfg.alpha, report.abs_rel, report.perceptual);
    report.pass = passes(report.abs_rel, report.perceptual, cfg.thresholds);
  }
}

FilterResult filter_subscenes(const std::vector<QualityReport>& reports,
                              const QualityThresholds& thresholds) {
  thresholds.validate();
  FilterResult result;
  for (const auto& r : reports) {
    if (passes(r.abs_rel, r.perceptual, thresholds)) {
      result.kept.push_back(r.subscene_id);
      continue;
    }
    std::string reason;
    if (!(r.perceptual < thresholds.perceptual)) {
      reason = "perceptual " + std::to_string(r.perceptual) + " >= " +
               std::to_string(thresholds.perceptual);
    }
    if (!(r.abs_rel < thresholds.absrel)) {
      if (!reason.empty()) reason += "; ";
      reason += "abs_rel " + std::to_string(r.abs_rel) + " >= " + std::to_string(thresholds.absrel);
    }
    result.rejected.push_back(r.subscene_id);
    result.reasons[r.subscene_id] = reason;
  }
  return result;
}

}  // namespace rgbda
