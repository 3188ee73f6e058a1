#include "atf/bottleneck.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace atf {

std::vector<PersistencePoint> expand_multiplicities(const PersistenceDiagram& d) {
  std::vector<PersistencePoint> out;
  for (const auto& p : d.birth_death_points()) {
    if (p.is_infinite()) continue;
    PersistencePoint q = p;
    q.multiplicity = 1;
    for (std::uint32_t k = 0; k < p.multiplicity; ++k) out.push_back(q);
  }
  return out;
}

namespace {

double linf(const PersistencePoint& a, const PersistencePoint& b) {
  return std::max(std::abs(a.birth - b.birth), std::abs(a.y - b.y));
}

// Bipartite graph for the feasibility test at a given delta. Left vertices
// are D1 points followed by one skip slot per D2 point; right vertices are
// D2 points followed by one skip slot per D1 point. A perfect matching
// exists iff a delta-matching exists:
//   point-point edge     <=>  L-inf distance <= delta
//   point-own skip slot  <=>  persistence <= 2*delta
//   skip-skip edge       always.
class FeasibilityGraph {
 public:
  FeasibilityGraph(const std::vector<PersistencePoint>& a,
                   const std::vector<PersistencePoint>& b, double delta)
      : a_(a), b_(b), delta_(delta), n_left_(a.size() + b.size()),
        n_right_(b.size() + a.size()) {}

  bool has_perfect_matching() const {
    std::vector<std::size_t> match_right(n_right_, kUnmatched);
    std::size_t matched = 0;
    std::vector<char> visited(n_right_);
    for (std::size_t u = 0; u < n_left_; ++u) {
      std::fill(visited.begin(), visited.end(), 0);
      if (augment(u, match_right, visited)) ++matched;
    }
    return matched == n_left_;
  }

 private:
  static constexpr std::size_t kUnmatched = static_cast<std::size_t>(-1);

  bool edge(std::size_t u, std::size_t v) const {
    const bool u_real = u < a_.size();
    const bool v_real = v < b_.size();
    if (u_real && v_real) return linf(a_[u], b_[v]) <= delta_;
    if (!u_real && !v_real) return true;
    if (u_real)  // v is the skip slot of a D1 point: only its own point may use it
      return v - b_.size() == u && persistence(a_[u]) <= 2.0 * delta_;
    return u - a_.size() == v && persistence(b_[v]) <= 2.0 * delta_;
  }

  bool augment(std::size_t u, std::vector<std::size_t>& match_right,
               std::vector<char>& visited) const {
    for (std::size_t v = 0; v < n_right_; ++v) {
      if (visited[v] || !edge(u, v)) continue;
      visited[v] = 1;
      if (match_right[v] == kUnmatched || augment(match_right[v], match_right, visited)) {
        match_right[v] = u;
        return true;
      }
    }
    return false;
  }

  const std::vector<PersistencePoint>& a_;
  const std::vector<PersistencePoint>& b_;
  double delta_;
  std::size_t n_left_;
  std::size_t n_right_;
};

}  // namespace

bool is_delta_matching(const PartialMatching& m, const PersistenceDiagram& d1,
                       const PersistenceDiagram& d2, double delta) {
  const auto a = expand_multiplicities(d1);
  const auto b = expand_multiplicities(d2);
  std::vector<char> used_a(a.size()), used_b(b.size());
  for (const auto& [i, j] : m.pairs) {
    if (i >= a.size() || j >= b.size())
      throw std::invalid_argument("matching index out of range");
    if (used_a[i] || used_b[j])
      throw std::invalid_argument("matching repeats an index");
    used_a[i] = used_b[j] = 1;
    if (linf(a[i], b[j]) > delta) return false;
  }
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!used_a[i] && persistence(a[i]) > 2.0 * delta) return false;
  for (std::size_t j = 0; j < b.size(); ++j)
    if (!used_b[j] && persistence(b[j]) > 2.0 * delta) return false;
  return true;
}

double bottleneck_distance(const PersistenceDiagram& d1, const PersistenceDiagram& d2) {
  if (d1.infinite_point_count() != d2.infinite_point_count())
    throw std::invalid_argument(
        "bottleneck distance is +inf: diagrams have " +
        std::to_string(d1.infinite_point_count()) + " and " +
        std::to_string(d2.infinite_point_count()) + " infinite points");
  const auto a = expand_multiplicities(d1);
  const auto b = expand_multiplicities(d2);
  if (a.empty() && b.empty()) return 0.0;

  std::vector<double> candidates;
  candidates.reserve(a.size() * b.size() + a.size() + b.size() + 1);
  candidates.push_back(0.0);
  for (const auto& p : a) candidates.push_back(persistence(p) / 2.0);
  for (const auto& q : b) candidates.push_back(persistence(q) / 2.0);
  for (const auto& p : a)
    for (const auto& q : b) candidates.push_back(linf(p, q));
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  auto feasible = [&](double delta) {
    return FeasibilityGraph(a, b, delta).has_perfect_matching();
  };

  // The optimum is attained at a candidate value; find the smallest feasible one.
  std::size_t lo = 0, hi = candidates.size() - 1;
  if (!feasible(candidates[hi]))
    throw std::logic_error("bottleneck: no feasible matching at the largest candidate");
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (feasible(candidates[mid]))
      hi = mid;
    else
      lo = mid + 1;
  }
  return candidates[lo];
}

}  // namespace atf
