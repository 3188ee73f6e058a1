#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "atf/diagrams.hpp"

namespace atf {

/// The six synthetic sources. Parameters are fixed:
///   annulus              uniform in the ring of radii [1,2] about the origin
///   three_clusters       Gaussian mixture at (0,0),(0,2),(2,0), sigma 0.05
///   clusters_of_clusters nine Gaussian means in three groups, sigma 0.05
///   cube                 uniform on [0,1]^2
///   torus                circle of radius 1 centered (2,0) in the xz-plane,
///                        rotated about the z-axis, uniform in both angles
///   sphere               uniform on S^2 with uniform [-0.05,0.05] radial noise
enum class ManifoldKind { annulus, three_clusters, clusters_of_clusters, cube, torus, sphere };

std::string to_string(ManifoldKind k);
ManifoldKind manifold_from_string(std::string_view name);
const std::vector<ManifoldKind>& all_manifolds();

struct PointCloud {
  int dim = 2;  // ambient dimension; pts[k][2] == 0 when dim == 2
  std::vector<std::array<double, 3>> pts;
  std::uint64_t seed = 0;

  std::size_t size() const { return pts.size(); }
};

/// Deterministic in (kind, n, seed); identical calls give bit-identical
/// clouds on any platform.
PointCloud sample_manifold(ManifoldKind kind, std::size_t n, std::uint64_t seed);

/// Uniform subsample of k distinct points, deterministic in seed.
PointCloud subsample(const PointCloud& cloud, std::size_t k, std::uint64_t seed);

double euclidean(const std::array<double, 3>& a, const std::array<double, 3>& b);

/// min over points of the max distance to the others; the Rips complex is a
/// cone at this radius, so every 1-cycle has died.
double enclosing_radius(const PointCloud& cloud);

struct RipsResult {
  PersistenceDiagram h0;
  PersistenceDiagram h1;
};

/// Vietoris-Rips persistence in dimensions 0 and 1.
///
/// H0 comes from Kruskal/union-find over the full metric: each MST edge of
/// length d > 0 contributes (0, d) and the surviving component an infinite
/// point. H1 comes from column reduction of the triangle boundary matrix
/// over Z/2, simplices ordered by (filtration value, dimension, vertex
/// order); the union-find pass doubles as the clearing step, identifying
/// the cycle-creating edges so vertex-boundary columns are never reduced.
/// Zero-persistence pairs are discarded.
///
/// max_dim is 0 or 1; max_radius <= 0 selects the enclosing radius.
/// Fewer than 2 points is an error.
RipsResult rips_persistence(const PointCloud& cloud, int max_dim = 1, double max_radius = 0.0);

std::string serialize_cloud(const PointCloud& cloud);
void write_cloud_file(const PointCloud& cloud, const std::string& path);
PointCloud read_cloud_file(const std::string& path);

}  // namespace atf
