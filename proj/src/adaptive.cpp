#include "atf/adaptive.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "atf/rng.hpp"
#include "atf/textio.hpp"

namespace atf {

double covariance_epsilon(const Eigen::Vector2d& bbox_lo, const Eigen::Vector2d& bbox_hi) {
  const double diag2 = (bbox_hi - bbox_lo).squaredNorm();
  const double eps = 1e-6 * diag2;
  return eps > 0.0 ? eps : 1e-12;
}

WeightedCollection assign_weights(const LabeledDiagramCollection& collection) {
  const std::size_t n = collection.diagrams.size();
  if (n == 0) throw std::invalid_argument("assign_weights: empty collection");
  if (collection.labels.size() != n)
    throw std::invalid_argument("assign_weights: " + std::to_string(n) + " diagrams but " +
                                std::to_string(collection.labels.size()) + " labels");
  const Frame frame = collection.diagrams[0].frame();
  for (const auto& d : collection.diagrams)
    if (d.frame() != frame)
      throw std::invalid_argument("assign_weights: diagrams mix coordinate frames");

  std::set<int> distinct(collection.labels.begin(), collection.labels.end());
  WeightedCollection out;
  out.label_ids.assign(distinct.begin(), distinct.end());
  const double label_count = static_cast<double>(out.label_ids.size());

  std::vector<double> clouds_per_label(out.label_ids.size(), 0.0);
  std::vector<int> canonical(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto it = std::lower_bound(out.label_ids.begin(), out.label_ids.end(),
                                     collection.labels[i]);
    canonical[i] = static_cast<int>(it - out.label_ids.begin());
    clouds_per_label[canonical[i]] += 1.0;
  }

  out.bbox_lo = Eigen::Vector2d(kInfinity, kInfinity);
  out.bbox_hi = Eigen::Vector2d(-kInfinity, -kInfinity);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& diagram = collection.diagrams[i];
    std::uint64_t cloud_mult = 0;
    for (const auto& p : diagram.points())
      if (!p.is_infinite()) cloud_mult += p.multiplicity;
    if (cloud_mult == 0)
      throw std::invalid_argument("assign_weights: diagram " + std::to_string(i) +
                                  " has no finite points");
    const double denom =
        static_cast<double>(cloud_mult) * clouds_per_label[canonical[i]] * label_count;
    for (const auto& p : diagram.points()) {
      if (p.is_infinite()) continue;
      WeightedPoint wp;
      wp.pos = Eigen::Vector2d(p.birth, p.y);
      wp.weight = static_cast<double>(p.multiplicity) / denom;
      wp.label = canonical[i];
      out.bbox_lo = out.bbox_lo.cwiseMin(wp.pos);
      out.bbox_hi = out.bbox_hi.cwiseMax(wp.pos);
      out.points.push_back(wp);
    }
  }
  return out;
}

double entropy_from_weights(const std::vector<double>& label_weights) {
  double total = 0.0;
  for (double w : label_weights) total += w;
  if (!(total > 0.0)) return 0.0;
  const std::size_t label_count = label_weights.size();
  if (label_count < 2) return 0.0;
  double s = 0.0;
  for (double w : label_weights) {
    if (w <= 0.0) continue;  // 0 log 0 := 0
    const double p = w / total;
    s -= p * std::log(p);
  }
  s /= std::log(static_cast<double>(label_count));
  return std::clamp(s, 0.0, 1.0);
}

RegionStats region_stats(const Rect& region, const WeightedCollection& collection) {
  RegionStats stats;
  stats.label_weights.assign(collection.label_ids.size(), 0.0);
  for (const auto& p : collection.points)
    if (region.contains(p.pos)) stats.label_weights[p.label] += p.weight;
  for (double w : stats.label_weights) stats.total_weight += w;
  stats.empty = !(stats.total_weight > 0.0);
  stats.entropy = entropy_from_weights(stats.label_weights);
  return stats;
}

double region_entropy(const Rect& region, const WeightedCollection& collection) {
  return region_stats(region, collection).entropy;
}

CderResult cder_fit(const WeightedCollection& collection, const CderParams& params) {
  if (collection.points.empty()) throw std::invalid_argument("cder_fit: no points");
  if (params.max_depth < 0 || !(params.entropy_threshold >= 0.0) ||
      !(params.min_region_weight > 0.0) || !(params.scale > 0.0))
    throw std::invalid_argument("cder_fit: parameters must be positive");

  const double eps = covariance_epsilon(collection.bbox_lo, collection.bbox_hi);
  const double label_count = static_cast<double>(collection.label_ids.size());
  CderResult result;

  struct Frame {
    std::vector<std::size_t> indices;
    Rect rect;
    int depth;
  };

  // Explicit depth-first recursion, children visited in a fixed order.
  auto recurse = [&](auto&& self, const std::vector<std::size_t>& indices, const Rect& rect,
                     int depth) -> void {
    std::vector<double> label_weights(collection.label_ids.size(), 0.0);
    for (std::size_t i : indices) label_weights[collection.points[i].label] +=
        collection.points[i].weight;
    double total = 0.0;
    for (double w : label_weights) total += w;
    if (!(total >= params.min_region_weight)) return;  // discarded

    const double entropy = entropy_from_weights(label_weights);
    if (entropy <= params.entropy_threshold) {
      CderRegion region{rect, depth, total, entropy, {}};
      for (std::size_t l = 0; l < label_weights.size(); ++l) {
        const double share = label_weights[l] / total;
        if (!(share * label_count >= 1.0 - 1e-12)) continue;
        // Weighted mean and covariance of this label's points in the region.
        Eigen::Vector2d mean = Eigen::Vector2d::Zero();
        double wsum = 0.0;
        for (std::size_t i : indices) {
          if (collection.points[i].label != static_cast<int>(l)) continue;
          mean += collection.points[i].weight * collection.points[i].pos;
          wsum += collection.points[i].weight;
        }
        mean /= wsum;
        Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
        for (std::size_t i : indices) {
          if (collection.points[i].label != static_cast<int>(l)) continue;
          const Eigen::Vector2d d = collection.points[i].pos - mean;
          cov += collection.points[i].weight * (d * d.transpose());
        }
        cov /= wsum;
        cov += eps * Eigen::Matrix2d::Identity();
        const Eigen::Matrix2d a = (params.scale * cov).inverse();
        result.templates.push_back(EllipseTemplate{mean, a});
        result.template_labels.push_back(static_cast<int>(l));
        region.emitted_labels.push_back(static_cast<int>(l));
      }
      result.regions.push_back(region);
      return;
    }

    if (depth >= params.max_depth) return;  // discarded

    Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
    for (std::size_t i : indices) centroid += collection.points[i].weight *
        collection.points[i].pos;
    centroid /= total;

    std::array<std::vector<std::size_t>, 4> child_indices;
    for (std::size_t i : indices) {
      const auto& p = collection.points[i].pos;
      const int child = (p.x() >= centroid.x() ? 1 : 0) + (p.y() >= centroid.y() ? 2 : 0);
      child_indices[child].push_back(i);
    }
    const std::array<Rect, 4> child_rects = {
        Rect{rect.lo, centroid},
        Rect{{centroid.x(), rect.lo.y()}, {rect.hi.x(), centroid.y()}},
        Rect{{rect.lo.x(), centroid.y()}, {centroid.x(), rect.hi.y()}},
        Rect{centroid, rect.hi}};
    for (int c = 0; c < 4; ++c)
      if (!child_indices[c].empty()) self(self, child_indices[c], child_rects[c], depth + 1);
  };

  std::vector<std::size_t> all(collection.points.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  recurse(recurse, all, Rect{collection.bbox_lo, collection.bbox_hi}, 0);

  if (result.templates.empty())
    throw std::runtime_error(
        "cder_fit: no region satisfied the emission criteria; raise entropy_threshold, "
        "lower min_region_weight, or increase max_depth");
  return result;
}

std::vector<EllipseTemplate> ellipses_from_clusters(
    const std::vector<std::vector<Eigen::Vector2d>>& clusters, double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("ellipses_from_clusters: scale must be > 0");
  Eigen::Vector2d lo(kInfinity, kInfinity), hi(-kInfinity, -kInfinity);
  for (const auto& cluster : clusters)
    for (const auto& p : cluster) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
  const double eps = covariance_epsilon(lo, hi);

  std::vector<EllipseTemplate> out;
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    const auto& cluster = clusters[c];
    if (cluster.size() < 2)
      throw std::invalid_argument("ellipses_from_clusters: cluster " + std::to_string(c) +
                                  " is a degenerate singleton");
    Eigen::Vector2d mean = Eigen::Vector2d::Zero();
    for (const auto& p : cluster) mean += p;
    mean /= static_cast<double>(cluster.size());
    Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
    for (const auto& p : cluster) {
      const Eigen::Vector2d d = p - mean;
      cov += d * d.transpose();
    }
    cov /= static_cast<double>(cluster.size());
    cov += eps * Eigen::Matrix2d::Identity();
    out.push_back(EllipseTemplate{mean, (scale * cov).inverse()});
  }
  return out;
}

std::string to_string(FitMethod m) {
  switch (m) {
    case FitMethod::cder: return "cder";
    case FitMethod::gmm: return "gmm";
    case FitMethod::hdbscan: return "hdbscan";
  }
  throw std::logic_error("unreachable fit method");
}

FitMethod fit_method_from_string(std::string_view name) {
  if (name == "cder") return FitMethod::cder;
  if (name == "gmm") return FitMethod::gmm;
  if (name == "hdbscan") return FitMethod::hdbscan;
  throw std::invalid_argument("unknown fit method '" + std::string(name) +
                              "'; expected cder, gmm, or hdbscan");
}

namespace {

std::string label_display(int canonical, const std::vector<int>& label_ids,
                          const std::vector<std::string>& label_names) {
  const std::size_t idx = static_cast<std::size_t>(canonical);
  if (idx < label_names.size() && !label_names[idx].empty()) return label_names[idx];
  return "label " + std::to_string(label_ids[idx]);
}

}  // namespace

AdaptiveFitOutput fit_adaptive_system(const LabeledDiagramCollection& collection,
                                      const AdaptiveFitParams& params,
                                      const std::vector<std::string>& label_names) {
  const WeightedCollection weighted = assign_weights(collection);
  const Frame frame = collection.diagrams[0].frame();

  AdaptiveFitOutput out;
  out.system.frame = frame;
  std::ostringstream report;
  report << "method: " << to_string(params.method) << "\n";
  report << "points: " << weighted.points.size() << ", labels: " << weighted.label_count()
         << ", frame: " << to_string(frame) << "\n";

  if (params.method == FitMethod::cder) {
    CderParams cder = params.cder;
    cder.scale = params.scale;
    const CderResult res = cder_fit(weighted, cder);
    for (const auto& e : res.templates) out.system.templates.push_back(e);
    report << "emitted regions: " << res.regions.size() << " (one ellipse per label holding"
           << " at least a 1/L weight share)\n";
    for (const auto& r : res.regions) {
      report << "  depth " << r.depth << " rect [" << format_double(r.rect.lo.x()) << ","
             << format_double(r.rect.hi.x()) << "]x[" << format_double(r.rect.lo.y()) << ","
             << format_double(r.rect.hi.y()) << "] weight " << format_double(r.total_weight)
             << " entropy " << format_double(r.entropy) << " labels:";
      for (int l : r.emitted_labels)
        report << " " << label_display(l, weighted.label_ids, label_names);
      report << "\n";
    }
  } else if (params.method == FitMethod::gmm) {
    for (int l = 0; l < weighted.label_count(); ++l) {
      std::vector<Eigen::Vector2d> pts;
      std::vector<double> wts;
      for (const auto& p : weighted.points) {
        if (p.label != l) continue;
        pts.push_back(p.pos);
        wts.push_back(p.weight);
      }
      std::set<std::pair<double, double>> distinct;
      for (const auto& p : pts) distinct.insert({p.x(), p.y()});
      const int k = std::min(params.gmm_components, static_cast<int>(distinct.size()));
      const std::uint64_t seed = derive_seed(params.seed, "gmm/label=" + std::to_string(l));
      const GmmResult res = gmm_fit(pts, wts, k, seed, params.gmm_tol, params.gmm_max_iter);
      report << label_display(l, weighted.label_ids, label_names) << ": " << pts.size()
             << " points, " << k << " components, " << res.iterations
             << " EM iterations, final log-likelihood "
             << format_double(res.log_likelihood.back()) << "\n";
      for (const auto& comp : res.components) {
        out.system.templates.push_back(
            EllipseTemplate{comp.mean, (params.scale * comp.covariance).inverse()});
        report << "  mean (" << format_double(comp.mean.x()) << ", "
               << format_double(comp.mean.y()) << ") mixing "
               << format_double(comp.mixing_weight) << "\n";
      }
    }
  } else {
    for (int l = 0; l < weighted.label_count(); ++l) {
      // HDBSCAN is unweighted: multiplicities expand to repeated points.
      std::vector<Eigen::Vector2d> pts;
      for (std::size_t i = 0; i < collection.diagrams.size(); ++i) {
        const auto it = std::lower_bound(weighted.label_ids.begin(), weighted.label_ids.end(),
                                         collection.labels[i]);
        if (static_cast<int>(it - weighted.label_ids.begin()) != l) continue;
        for (const auto& p : collection.diagrams[i].points()) {
          if (p.is_infinite()) continue;
          for (std::uint32_t m = 0; m < p.multiplicity; ++m)
            pts.emplace_back(p.birth, p.y);
        }
      }
      const HdbscanResult res = hdbscan_fit(pts, params.hdbscan_min_cluster_size);
      report << label_display(l, weighted.label_ids, label_names) << ": " << pts.size()
             << " points, " << res.clusters.size() << " clusters, sizes:";
      std::size_t clustered = 0;
      std::vector<std::vector<Eigen::Vector2d>> cluster_points;
      for (const auto& cluster : res.clusters) {
        report << " " << cluster.size();
        clustered += cluster.size();
        std::vector<Eigen::Vector2d> cp;
        for (std::size_t idx : cluster) cp.push_back(pts[idx]);
        cluster_points.push_back(std::move(cp));
      }
      report << " (noise " << pts.size() - clustered << ")\n";
      for (auto& e : ellipses_from_clusters(cluster_points, params.scale))
        out.system.templates.push_back(e);
    }
    if (out.system.templates.empty())
      throw std::runtime_error(
          "hdbscan fit found no clusters for any label; lower min_cluster_size");
  }

  report << "templates: " << out.system.templates.size() << "\n";
  out.report = report.str();
  return out;
}

}  // namespace atf
