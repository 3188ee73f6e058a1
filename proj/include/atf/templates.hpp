#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <variant>
#include <vector>

#include "atf/diagrams.hpp"

namespace atf {

/// Piecewise-linear bump with square (L-inf ball) support and peak 1 at the
/// center: max{1 - (1/delta) max(|x-a|, |y-b|), 0}.
struct TentTemplate {
  Eigen::Vector2d center;
  double radius = 0.0;  // delta
};

/// Quadratic bump 1 - (z-c)^T A (z-c), clipped at 0. Support is the ellipse
/// where the form stays below 1; A is symmetric positive-definite.
struct EllipseTemplate {
  Eigen::Vector2d center;
  Eigen::Matrix2d matrix;
};

/// Product of 1-D Lagrange basis polynomials l_i(x) * l_j(y) over the knot
/// grid, clipped to the knot bounding box so the support is compact. Equals
/// 1 at knot (i, j) and 0 at every other knot pair.
struct PolynomialMeshTemplate {
  std::vector<double> x_knots;  // strictly increasing
  std::vector<double> y_knots;
  int i = 0;
  int j = 0;
};

using Template = std::variant<TentTemplate, EllipseTemplate, PolynomialMeshTemplate>;

/// Validating factories. Tents require 0 < radius < center.y so the support
/// stays above the lifetime-0 axis; ellipse matrices must be symmetric to
/// 1e-12 with positive eigenvalues.
TentTemplate make_tent(const Eigen::Vector2d& center, double radius);
EllipseTemplate make_ellipse(const Eigen::Vector2d& center, const Eigen::Matrix2d& matrix);
PolynomialMeshTemplate make_polymesh(std::vector<double> x_knots, std::vector<double> y_knots,
                                     int i, int j);

double tent_eval(const TentTemplate& t, const Eigen::Vector2d& z);
double ellipse_eval(const EllipseTemplate& e, const Eigen::Vector2d& z);
double polymesh_eval(const PolynomialMeshTemplate& p, const Eigen::Vector2d& z);
double template_eval(const Template& t, const Eigen::Vector2d& z);

/// True when the support ellipse {z : (z-c)^T A (z-c) <= 1} stays inside the
/// closed upper half-plane y >= 0. Fitters may legitimately produce
/// boundary-straddling ellipses; callers treat a false result as a warning.
bool ellipse_support_above_axis(const EllipseTemplate& e);

/// The rescaled translate z -> f(n*z + m/n). Tents map to tents, ellipses to
/// ellipses; polynomial meshes are unsupported.
Template rescale_translate(const Template& f, int n, const std::array<int, 2>& m);

/// Ordered template list; the order fixes feature-column order.
struct TemplateSystem {
  std::vector<Template> templates;
  Frame frame = Frame::birth_lifetime;
};

/// nu_f for every template: component k = sum over diagram points of
/// multiplicity * template_k(point). Infinite points are skipped; the
/// diagram must already be in the system's frame.
Eigen::VectorXd featurize(const TemplateSystem& system, const PersistenceDiagram& diagram);

/// Provenance of one feature column.
struct FeatureColumn {
  int homology_dim = 0;
  int template_index = 0;
  int monomial_degree = 1;
  std::string label;  // e.g. "h1:t3", after expansion "h0:t1*h1:t0"
};

struct FeatureMatrix {
  Eigen::MatrixXd values;  // N x F
  std::vector<FeatureColumn> columns;
  std::vector<int> labels;  // per-row class ids; empty until assigned

  std::size_t rows() const { return static_cast<std::size_t>(values.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(values.cols()); }
};

enum class PairMode {
  single,  // featurize dimension 0 only
  concat   // one block per homology dimension, concatenated h0 | h1 | ...
};

/// Rows follow the sample order of `diagrams_per_dim[d]`; all dimensions must
/// list the same number of samples (ragged input is an error).
FeatureMatrix featurize_collection(const std::vector<TemplateSystem>& systems_per_dim,
                                   const std::vector<std::vector<PersistenceDiagram>>& diagrams_per_dim,
                                   PairMode mode);

/// Text manifest, one `kind,params...` line per template
/// (ellipse: center_x, center_y, a11, a12, a22). Reload is bit-exact.
std::string serialize_template_system(const TemplateSystem& system);
TemplateSystem parse_template_system(const std::string& text, const std::string& source_name);
void write_template_system(const TemplateSystem& system, const std::string& path);
TemplateSystem read_template_system(const std::string& path);

}  // namespace atf
