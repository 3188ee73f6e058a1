#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "atf/diagrams.hpp"
#include "atf/templates.hpp"

namespace atf {

/// Diagrams of one homology dimension tagged with class labels. All
/// diagrams must share one frame (the fitters work on its coordinates).
struct LabeledDiagramCollection {
  std::vector<PersistenceDiagram> diagrams;
  std::vector<int> labels;  // parallel to diagrams, arbitrary class ids
};

/// One finite diagram point with its label and allocated weight
/// (multiplicity folded into the weight).
struct WeightedPoint {
  Eigen::Vector2d pos;
  double weight = 0.0;
  int label = 0;  // canonical index into label_ids
};

struct WeightedCollection {
  std::vector<WeightedPoint> points;
  std::vector<int> label_ids;  // sorted distinct input labels
  Eigen::Vector2d bbox_lo, bbox_hi;

  int label_count() const { return static_cast<int>(label_ids.size()); }
};

/// Three-step weight allocation: each label gets 1/L, each cloud of a label
/// 1/(N_l L), each point of a cloud 1/(|X_i| N_l L) where |X_i| is the
/// cloud's total multiplicity. Weights sum to 1. A diagram with no finite
/// points is an error.
WeightedCollection assign_weights(const LabeledDiagramCollection& collection);

/// Axis-aligned rectangle, both bounds inclusive.
struct Rect {
  Eigen::Vector2d lo, hi;
  bool contains(const Eigen::Vector2d& p) const {
    return p.x() >= lo.x() && p.x() <= hi.x() && p.y() >= lo.y() && p.y() <= hi.y();
  }
};

/// Per-label weight totals of a region, its entropy S in [0, 1] (base-L
/// logarithm, 0 log 0 := 0), and whether the region carried no weight
/// (entropy defined as 0 then).
struct RegionStats {
  std::vector<double> label_weights;
  double total_weight = 0.0;
  double entropy = 0.0;
  bool empty = false;
};

RegionStats region_stats(const Rect& region, const WeightedCollection& collection);
double region_entropy(const Rect& region, const WeightedCollection& collection);

/// Entropy of a weight vector: -sum_l (w_l/W) log_L (w_l/W).
double entropy_from_weights(const std::vector<double>& label_weights);

struct CderParams {
  int max_depth = 8;
  double entropy_threshold = 0.2;
  double min_region_weight = 0.001;
  double scale = 9.0;  // support = Mahalanobis radius sqrt(scale)
};

struct CderRegion {
  Rect rect;
  int depth = 0;
  double total_weight = 0.0;
  double entropy = 0.0;
  std::vector<int> emitted_labels;  // canonical label indices
};

struct CderResult {
  std::vector<EllipseTemplate> templates;
  std::vector<int> template_labels;  // canonical label index per template
  std::vector<CderRegion> regions;   // emitted regions in depth-first order
};

/// Quadtree cover search: recursively split the bounding rectangle at the
/// weighted centroid; emit a region once its entropy falls to the threshold
/// (given enough weight), recurse otherwise until max_depth. Each emitted
/// region yields one ellipse per label holding at least a 1/L share of the
/// region's weight: center = that label's weighted mean, matrix
/// A = (scale * (Sigma + eps I))^-1 with Sigma the weighted covariance.
/// Errors when no region is ever emitted.
CderResult cder_fit(const WeightedCollection& collection, const CderParams& params);

struct GaussianComponent {
  Eigen::Vector2d mean;
  Eigen::Matrix2d covariance;
  double mixing_weight = 1.0;
};

struct GmmResult {
  std::vector<GaussianComponent> components;
  std::vector<double> log_likelihood;  // one entry per iteration, non-decreasing
  int iterations = 0;
};

/// Weighted EM for a K-component Gaussian mixture. Means seeded k-means++
/// style from the seed; covariances regularized with eps I each M-step;
/// stops when the log-likelihood improves by less than tol or after
/// max_iter iterations. K above the number of distinct points is an error.
/// An empty weight vector means unit weights.
GmmResult gmm_fit(const std::vector<Eigen::Vector2d>& points, const std::vector<double>& weights,
                  int k, std::uint64_t seed, double tol = 1e-7, int max_iter = 200);

/// Distance to the min_cluster_size-th nearest neighbor, the point itself
/// counted first.
std::vector<double> core_distances(const std::vector<Eigen::Vector2d>& points,
                                   int min_cluster_size);

struct MstEdge {
  std::size_t a = 0, b = 0;
  double weight = 0.0;
};

/// MST of the complete mutual-reachability graph
/// d_mr(a,b) = max(core(a), core(b), d(a,b)).
std::vector<MstEdge> mutual_reachability_mst(const std::vector<Eigen::Vector2d>& points,
                                             int min_cluster_size);

struct HdbscanResult {
  std::vector<std::vector<std::size_t>> clusters;  // point indices; noise omitted
  double mst_total_weight = 0.0;
};

/// Single-linkage over the mutual-reachability MST, condensed with the
/// minimum cluster size, clusters selected by excess-of-mass stability.
/// Points in no selected cluster are noise. Fewer than min_cluster_size
/// points is an error; min_cluster_size >= 2.
HdbscanResult hdbscan_fit(const std::vector<Eigen::Vector2d>& points, int min_cluster_size);

/// Moment ellipse of a point set: center = mean, A = (scale*(Sigma+eps I))^-1.
/// eps = 1e-6 * (bounding-box diagonal)^2, pooled over all clusters given.
/// Singleton clusters are an error.
std::vector<EllipseTemplate> ellipses_from_clusters(
    const std::vector<std::vector<Eigen::Vector2d>>& clusters, double scale);

/// Scale-aware covariance floor used by every fitter.
double covariance_epsilon(const Eigen::Vector2d& bbox_lo, const Eigen::Vector2d& bbox_hi);

enum class FitMethod { cder, gmm, hdbscan };
std::string to_string(FitMethod m);
FitMethod fit_method_from_string(std::string_view name);

struct AdaptiveFitParams {
  FitMethod method = FitMethod::cder;
  double scale = 9.0;
  CderParams cder;
  int gmm_components = 3;
  double gmm_tol = 1e-7;
  int gmm_max_iter = 200;
  int hdbscan_min_cluster_size = 10;
  std::uint64_t seed = 0;
};

struct AdaptiveFitOutput {
  TemplateSystem system;
  std::string report;
};

/// Builds the ellipse template system for one homology dimension. CDER runs
/// on the whole labeled collection; GMM and HDBSCAN run per label on that
/// label's pooled points and the union over labels forms the system.
AdaptiveFitOutput fit_adaptive_system(const LabeledDiagramCollection& collection,
                                      const AdaptiveFitParams& params,
                                      const std::vector<std::string>& label_names = {});

}  // namespace atf
