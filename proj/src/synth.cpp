#include "atf/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "atf/rng.hpp"
#include "atf/textio.hpp"

namespace atf {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

std::string to_string(ManifoldKind k) {
  switch (k) {
    case ManifoldKind::annulus: return "annulus";
    case ManifoldKind::three_clusters: return "three_clusters";
    case ManifoldKind::clusters_of_clusters: return "clusters_of_clusters";
    case ManifoldKind::cube: return "cube";
    case ManifoldKind::torus: return "torus";
    case ManifoldKind::sphere: return "sphere";
  }
  throw std::logic_error("unreachable manifold kind");
}

ManifoldKind manifold_from_string(std::string_view name) {
  for (ManifoldKind k : all_manifolds())
    if (to_string(k) == name) return k;
  throw std::invalid_argument("unknown manifold kind '" + std::string(name) + "'");
}

const std::vector<ManifoldKind>& all_manifolds() {
  static const std::vector<ManifoldKind> kinds = {
      ManifoldKind::annulus,       ManifoldKind::three_clusters,
      ManifoldKind::clusters_of_clusters, ManifoldKind::cube,
      ManifoldKind::torus,         ManifoldKind::sphere};
  return kinds;
}

PointCloud sample_manifold(ManifoldKind kind, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_manifold requires n >= 1");
  Rng rng(seed);
  PointCloud cloud;
  cloud.seed = seed;
  cloud.dim = (kind == ManifoldKind::torus || kind == ManifoldKind::sphere) ? 3 : 2;
  cloud.pts.reserve(n);

  // Nine means in three groups of three; the middle group sits higher.
  static const std::array<std::array<double, 2>, 9> kNineMeans = {{{0.0, 0.0},
                                                                   {0.0, 1.5},
                                                                   {1.5, 0.0},
                                                                   {0.0, 4.0},
                                                                   {1.0, 3.0},
                                                                   {1.0, 5.0},
                                                                   {3.0, 4.0},
                                                                   {3.0, 5.5},
                                                                   {4.5, 4.0}}};
  constexpr double kSigma = 0.05;

  for (std::size_t i = 0; i < n; ++i) {
    std::array<double, 3> p = {0.0, 0.0, 0.0};
    switch (kind) {
      case ManifoldKind::annulus: {
        // Area-uniform in the ring: radius density proportional to r.
        const double r = std::sqrt(1.0 + 3.0 * rng.uniform());
        const double a = kTwoPi * rng.uniform();
        p = {r * std::cos(a), r * std::sin(a), 0.0};
        break;
      }
      case ManifoldKind::three_clusters: {
        static const std::array<std::array<double, 2>, 3> means = {
            {{0.0, 0.0}, {0.0, 2.0}, {2.0, 0.0}}};
        const auto& m = means[rng.below(3)];
        p = {m[0] + kSigma * rng.normal(), m[1] + kSigma * rng.normal(), 0.0};
        break;
      }
      case ManifoldKind::clusters_of_clusters: {
        const auto& m = kNineMeans[rng.below(9)];
        p = {m[0] + kSigma * rng.normal(), m[1] + kSigma * rng.normal(), 0.0};
        break;
      }
      case ManifoldKind::cube: {
        p = {rng.uniform(), rng.uniform(), 0.0};
        break;
      }
      case ManifoldKind::torus: {
        const double theta = kTwoPi * rng.uniform();  // around the tube
        const double phi = kTwoPi * rng.uniform();    // around the axis
        const double rho = 2.0 + std::cos(theta);
        p = {rho * std::cos(phi), rho * std::sin(phi), std::sin(theta)};
        break;
      }
      case ManifoldKind::sphere: {
        double u[3] = {rng.normal(), rng.normal(), rng.normal()};
        double norm = std::sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);
        while (norm == 0.0) {
          u[0] = rng.normal();
          u[1] = rng.normal();
          u[2] = rng.normal();
          norm = std::sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);
        }
        const double r = 1.0 + rng.uniform(-0.05, 0.05);
        p = {r * u[0] / norm, r * u[1] / norm, r * u[2] / norm};
        break;
      }
    }
    cloud.pts.push_back(p);
  }
  return cloud;
}

PointCloud subsample(const PointCloud& cloud, std::size_t k, std::uint64_t seed) {
  if (k > cloud.size())
    throw std::invalid_argument("subsample size exceeds cloud size");
  std::vector<std::size_t> idx(cloud.size());
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(seed);
  rng.shuffle(idx);
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  PointCloud out;
  out.dim = cloud.dim;
  out.seed = seed;
  out.pts.reserve(k);
  for (std::size_t i : idx) out.pts.push_back(cloud.pts[i]);
  return out;
}

double euclidean(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double enclosing_radius(const PointCloud& cloud) {
  if (cloud.size() < 2) throw std::invalid_argument("enclosing radius needs >= 2 points");
  double best = kInfinity;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    double far = 0.0;
    for (std::size_t j = 0; j < cloud.size(); ++j)
      if (j != i) far = std::max(far, euclidean(cloud.pts[i], cloud.pts[j]));
    best = std::min(best, far);
  }
  return best;
}

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool merge(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[b] = a;
    return true;
  }
};

struct Edge {
  double filt;
  std::uint32_t a, b;  // a < b
};

struct Triangle {
  double filt;
  std::uint32_t a, b, c;  // a < b < c
};

// Z/2 symmetric difference of sorted index vectors.
void symdiff(std::vector<std::uint32_t>& col, const std::vector<std::uint32_t>& other,
             std::vector<std::uint32_t>& scratch) {
  scratch.clear();
  std::set_symmetric_difference(col.begin(), col.end(), other.begin(), other.end(),
                                std::back_inserter(scratch));
  col.swap(scratch);
}

}  // namespace

RipsResult rips_persistence(const PointCloud& cloud, int max_dim, double max_radius) {
  const std::size_t n = cloud.size();
  if (n < 2) throw std::invalid_argument("rips_persistence requires at least 2 points");
  if (max_dim < 0 || max_dim > 1)
    throw std::invalid_argument("rips_persistence supports max_dim 0 or 1");
  const double radius = max_radius > 0.0 ? max_radius : enclosing_radius(cloud);

  std::vector<double> dist(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      dist[i * n + j] = dist[j * n + i] = euclidean(cloud.pts[i], cloud.pts[j]);
  auto d = [&](std::size_t i, std::size_t j) { return dist[i * n + j]; };

  // All edges sorted by (filtration, vertex order); Kruskal gives H0 and
  // marks the tree (component-merging) edges.
  std::vector<Edge> edges;
  edges.reserve(n * (n - 1) / 2);
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = i + 1; j < n; ++j)
      edges.push_back(Edge{d(i, j), i, j});
  std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
    if (x.filt != y.filt) return x.filt < y.filt;
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
  });

  std::vector<char> is_tree(edges.size(), 0);
  std::vector<PersistencePoint> h0_pts;
  {
    UnionFind uf(n);
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (uf.merge(edges[e].a, edges[e].b)) {
        is_tree[e] = 1;
        if (edges[e].filt > 0.0)
          h0_pts.push_back(PersistencePoint{0.0, edges[e].filt, 1});
      }
    }
  }
  h0_pts.push_back(PersistencePoint{0.0, kInfinity, 1});

  RipsResult result;
  result.h0 = PersistenceDiagram(std::move(h0_pts));
  if (max_dim == 0) return result;

  // Edges within the radius keep their position in the sorted order as the
  // boundary-matrix row index.
  std::vector<std::uint32_t> edge_row(edges.size(), 0);
  std::vector<std::size_t> row_to_edge;
  {
    std::uint32_t row = 0;
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (edges[e].filt <= radius) {
        edge_row[e] = row++;
        row_to_edge.push_back(e);
      }
    }
  }
  // Edge id lookup for triangle boundaries.
  std::vector<std::size_t> pair_to_edge(n * n, static_cast<std::size_t>(-1));
  for (std::size_t e = 0; e < edges.size(); ++e)
    pair_to_edge[edges[e].a * n + edges[e].b] = e;

  std::vector<Triangle> triangles;
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = i + 1; j < n; ++j) {
      if (d(i, j) > radius) continue;
      for (std::uint32_t k = j + 1; k < n; ++k) {
        const double filt = std::max({d(i, j), d(i, k), d(j, k)});
        if (filt <= radius) triangles.push_back(Triangle{filt, i, j, k});
      }
    }
  std::sort(triangles.begin(), triangles.end(), [](const Triangle& x, const Triangle& y) {
    if (x.filt != y.filt) return x.filt < y.filt;
    if (x.a != y.a) return x.a < y.a;
    if (x.b != y.b) return x.b < y.b;
    return x.c < y.c;
  });

  // Standard reduction of the triangle boundary matrix. pivot_owner maps an
  // edge row to the reduced column holding it as pivot.
  const std::size_t rows = row_to_edge.size();
  std::vector<std::size_t> pivot_owner(rows, static_cast<std::size_t>(-1));
  std::vector<std::vector<std::uint32_t>> reduced;  // owner columns only
  std::vector<std::size_t> owner_column_of_pivot(rows, 0);
  std::vector<PersistencePoint> h1_pts;
  std::vector<std::uint32_t> col, scratch;
  std::vector<char> edge_paired(rows, 0);

  for (const auto& tri : triangles) {
    col.clear();
    const std::size_t e1 = pair_to_edge[tri.a * n + tri.b];
    const std::size_t e2 = pair_to_edge[tri.a * n + tri.c];
    const std::size_t e3 = pair_to_edge[tri.b * n + tri.c];
    col.push_back(edge_row[e1]);
    col.push_back(edge_row[e2]);
    col.push_back(edge_row[e3]);
    std::sort(col.begin(), col.end());

    while (!col.empty()) {
      const std::uint32_t piv = col.back();
      const std::size_t owner = pivot_owner[piv];
      if (owner == static_cast<std::size_t>(-1)) {
        pivot_owner[piv] = reduced.size();
        reduced.push_back(col);
        edge_paired[piv] = 1;
        const double birth = edges[row_to_edge[piv]].filt;
        if (birth < tri.filt) h1_pts.push_back(PersistencePoint{birth, tri.filt, 1});
        break;
      }
      symdiff(col, reduced[owner], scratch);
    }
  }

  // Cycle-creating edges never killed by a triangle are essential classes;
  // absent when the radius is the enclosing radius (the complex ends as a
  // cone).
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t e = row_to_edge[r];
    if (!is_tree[e] && !edge_paired[r])
      h1_pts.push_back(PersistencePoint{edges[e].filt, kInfinity, 1});
  }

  result.h1 = PersistenceDiagram(std::move(h1_pts));
  return result;
}

std::string serialize_cloud(const PointCloud& cloud) {
  std::string out;
  for (const auto& p : cloud.pts) {
    out += format_double(p[0]);
    out += ',';
    out += format_double(p[1]);
    if (cloud.dim == 3) {
      out += ',';
      out += format_double(p[2]);
    }
    out += '\n';
  }
  return out;
}

void write_cloud_file(const PointCloud& cloud, const std::string& path) {
  write_text_file(path, serialize_cloud(cloud));
}

PointCloud read_cloud_file(const std::string& path) {
  PointCloud cloud;
  cloud.dim = 0;
  const std::string text = read_text_file(path);
  std::size_t line_no = 0;
  for (std::string_view line : split(text, '\n')) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    auto fields = split(line, ',');
    if (fields.size() != 2 && fields.size() != 3)
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected 2 or 3 coordinates");
    if (cloud.dim == 0) cloud.dim = static_cast<int>(fields.size());
    if (static_cast<int>(fields.size()) != cloud.dim)
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": inconsistent ambient dimension");
    std::array<double, 3> p = {0.0, 0.0, 0.0};
    for (std::size_t k = 0; k < fields.size(); ++k) p[k] = parse_double(fields[k]);
    cloud.pts.push_back(p);
  }
  if (cloud.dim == 0) cloud.dim = 2;
  return cloud;
}

}  // namespace atf
