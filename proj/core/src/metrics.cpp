// Copyright Contributors to the rgbd-augment Project
// SPDX-License-Identifier: Apache-2.0

#include "rgbda/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "rgbda/depth_codec.hpp"

namespace rgbda {

using nlohmann::json;

void EvalConfig::validate() const {
  if (!(min_depth > 0.0) || !(min_depth < max_depth))
    throw std::invalid_argument("eval config: require 0 < min_depth < max_depth");
  if (crop && (crop->width < 1 || crop->height < 1 || crop->u0 < 0 || crop->v0 < 0))
    throw std::invalid_argument("eval config: degenerate crop rectangle");
}

void MetricsAccumulator::add(const DepthMap& pred, const DepthMap& gt, const EvalConfig& cfg) {
  cfg.validate();
  if (pred.width() != gt.width() || pred.height() != gt.height())
    throw std::invalid_argument("evaluate: prediction and ground truth sizes differ");

  int u_lo = 0, v_lo = 0, u_hi = gt.width(), v_hi = gt.height();
  if (cfg.crop) {
    u_lo = cfg.crop->u0;
    v_lo = cfg.crop->v0;
    u_hi = std::min(gt.width(), cfg.crop->u0 + cfg.crop->width);
    v_hi = std::min(gt.height(), cfg.crop->v0 + cfg.crop->height);
  }

  for (int v = v_lo; v < v_hi; ++v) {
    for (int u = u_lo; u < u_hi; ++u) {
      if (!gt.valid(u, v)) continue;
      const double y = gt.at(u, v);
      if (y < cfg.min_depth || y > cfg.max_depth) continue;
      const double p = std::clamp(pred.at(u, v), cfg.min_depth, cfg.max_depth);
      const double diff = y - p;
      abs_rel_sum_ += std::abs(diff) / y;
      sq_rel_sum_ += diff * diff / y;
      sq_err_sum_ += diff * diff;
      const double log_diff = std::log(y) - std::log(p);
      sq_log_err_sum_ += log_diff * log_diff;
      const double ratio = std::max(y / p, p / y);
      d1_ += ratio < 1.25;
      d2_ += ratio < 1.5625;
      d3_ += ratio < 1.953125;
      ++count_;
    }
  }
}

MetricsReport MetricsAccumulator::finalize() const {
  if (count_ == 0) throw std::runtime_error("evaluate: no valid pixels");
  MetricsReport r;
  const double n = static_cast<double>(count_);
  r.rel = abs_rel_sum_ / n;
  r.sq_rel = sq_rel_sum_ / n;
  r.rms = std::sqrt(sq_err_sum_ / n);
  r.rms_log = std::sqrt(sq_log_err_sum_ / n);
  r.delta1 = d1_ / n;
  r.delta2 = d2_ / n;
  r.delta3 = d3_ / n;
  r.n_pixels = count_;
  return r;
}

MetricsReport evaluate(const DepthMap& pred, const DepthMap& gt, const EvalConfig& cfg) {
  MetricsAccumulator acc;
  acc.add(pred, gt, cfg);
  return acc.finalize();
}

namespace {

json report_to_json(const MetricsReport& r) {
  return json{{"delta1", r.delta1}, {"delta2", r.delta2},   {"delta3", r.delta3},
              {"rel", r.rel},       {"sq_rel", r.sq_rel},   {"rms", r.rms},
              {"rms_log", r.rms_log}, {"n_pixels", r.n_pixels}};
}

DepthMap masked_depth(DepthMap depth, const OccupancyMask& mask) {
  for (int v = 0; v < depth.height(); ++v)
    for (int u = 0; u < depth.width(); ++u)
      if (!mask.at(u, v)) depth.set_invalid(u, v);
  return depth;
}

}  // namespace

std::string ManifestEvalResult::to_json_string() const {
  json j;
  j["aggregate"] = report_to_json(aggregate);
  json frames = json::array();
  for (const auto& [id, r] : per_frame) {
    json jr = report_to_json(r);
    jr["frame_id"] = id;
    frames.push_back(std::move(jr));
  }
  j["per_frame"] = frames;
  json fails = json::array();
  for (const auto& [id, reason] : failed) fails.push_back(json{{"frame_id", id}, {"reason", reason}});
  j["failed"] = fails;
  j["unmatched_pred"] = unmatched_pred;
  j["unmatched_gt"] = unmatched_gt;
  return j.dump(2) + "\n";
}

std::string ManifestEvalResult::to_csv() const {
  std::ostringstream out;
  out << "frame_id,delta1,delta2,delta3,rel,sq_rel,rms,rms_log,n_pixels\n";
  const auto row = [&out](const std::string& id, const MetricsReport& r) {
    out << id << ',' << r.delta1 << ',' << r.delta2 << ',' << r.delta3 << ',' << r.rel << ','
        << r.sq_rel << ',' << r.rms << ',' << r.rms_log << ',' << r.n_pixels << '\n';
  };
  for (const auto& [id, r] : per_frame) row(id, r);
  row("aggregate", aggregate);
  return out.str();
}

ManifestEvalResult evaluate_manifest(const DatasetManifest& pred,
                                     const std::filesystem::path& pred_base,
                                     const DatasetManifest& gt,
                                     const std::filesystem::path& gt_base,
                                     const EvalConfig& cfg) {
  cfg.validate();
  std::map<std::string, const ManifestRecord*> gt_by_id;
  for (const auto& r : gt.records) gt_by_id[r.frame_id] = &r;

  ManifestEvalResult result;
  MetricsAccumulator pooled;
  std::map<std::string, const ManifestRecord*> matched_gt;
  for (const auto& pr : pred.records) {
    const auto it = gt_by_id.find(pr.frame_id);
    if (it == gt_by_id.end()) {
      result.unmatched_pred.push_back(pr.frame_id);
      continue;
    }
    matched_gt[pr.frame_id] = it->second;
  }
  for (const auto& gr : gt.records)
    if (!matched_gt.count(gr.frame_id)) result.unmatched_gt.push_back(gr.frame_id);

  if (matched_gt.empty()) {
    std::string msg = "evaluate_manifest: no shared frame ids";
    msg += "; prediction-only:";
    for (const auto& id : result.unmatched_pred) msg += " " + id;
    msg += "; ground-truth-only:";
    for (const auto& id : result.unmatched_gt) msg += " " + id;
    throw std::runtime_error(msg);
  }

  for (const auto& pr : pred.records) {
    const auto it = matched_gt.find(pr.frame_id);
    if (it == matched_gt.end()) continue;
    const ManifestRecord& gr = *it->second;
    try {
      const DepthMap pred_depth = load_depth(pred_base / pr.depth_path);
      DepthMap gt_depth = load_depth(gt_base / gr.depth_path);
      if (!gr.mask_path.empty())
        gt_depth = masked_depth(std::move(gt_depth), load_mask(gt_base / gr.mask_path));
      MetricsAccumulator frame_acc;
      frame_acc.add(pred_depth, gt_depth, cfg);
      result.per_frame.emplace_back(pr.frame_id, frame_acc.finalize());
      pooled.add(pred_depth, gt_depth, cfg);
    } catch (const std::exception& e) {
      result.failed.emplace_back(pr.frame_id, e.what());
    }
  }

  if (result.per_frame.empty())
    throw std::runtime_error("evaluate_manifest: every paired frame failed");
  result.aggregate = pooled.finalize();
  return result;
}

}  // namespace rgbda
