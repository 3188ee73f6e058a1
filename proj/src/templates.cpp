#include "atf/templates.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "atf/textio.hpp"

namespace atf {

TentTemplate make_tent(const Eigen::Vector2d& center, double radius) {
  if (!(radius > 0.0) || !(radius < center.y()))
    throw std::invalid_argument("tent requires 0 < radius < center.y, got radius " +
                                format_double(radius) + " at y " + format_double(center.y()));
  return TentTemplate{center, radius};
}

EllipseTemplate make_ellipse(const Eigen::Vector2d& center, const Eigen::Matrix2d& matrix) {
  if (std::abs(matrix(0, 1) - matrix(1, 0)) > 1e-12)
    throw std::invalid_argument("ellipse matrix is not symmetric");
  // 2x2 symmetric is positive-definite iff trace > 0 and det > 0.
  const double det = matrix(0, 0) * matrix(1, 1) - matrix(0, 1) * matrix(1, 0);
  if (!(matrix.trace() > 0.0) || !(det > 0.0))
    throw std::invalid_argument("ellipse matrix is not positive-definite");
  return EllipseTemplate{center, matrix};
}

PolynomialMeshTemplate make_polymesh(std::vector<double> x_knots, std::vector<double> y_knots,
                                     int i, int j) {
  auto check_knots = [](const std::vector<double>& k, const char* axis) {
    if (k.empty()) throw std::invalid_argument(std::string("empty ") + axis + " knot list");
    for (std::size_t t = 1; t < k.size(); ++t)
      if (!(k[t - 1] < k[t]))
        throw std::invalid_argument(std::string(axis) + " knots must be strictly increasing");
  };
  check_knots(x_knots, "x");
  check_knots(y_knots, "y");
  if (i < 0 || j < 0 || i >= static_cast<int>(x_knots.size()) ||
      j >= static_cast<int>(y_knots.size()))
    throw std::invalid_argument("polymesh coefficient index out of knot range");
  return PolynomialMeshTemplate{std::move(x_knots), std::move(y_knots), i, j};
}

double tent_eval(const TentTemplate& t, const Eigen::Vector2d& z) {
  const double dist = std::max(std::abs(z.x() - t.center.x()), std::abs(z.y() - t.center.y()));
  return std::max(1.0 - dist / t.radius, 0.0);
}

double ellipse_eval(const EllipseTemplate& e, const Eigen::Vector2d& z) {
  const Eigen::Vector2d d = z - e.center;
  const double q = d.dot(e.matrix * d);
  return q < 1.0 ? 1.0 - q : 0.0;
}

namespace {

double lagrange_basis(const std::vector<double>& knots, int idx, double x) {
  double v = 1.0;
  for (std::size_t k = 0; k < knots.size(); ++k) {
    if (static_cast<int>(k) == idx) continue;
    v *= (x - knots[k]) / (knots[idx] - knots[k]);
  }
  return v;
}

}  // namespace

double polymesh_eval(const PolynomialMeshTemplate& p, const Eigen::Vector2d& z) {
  if (z.x() < p.x_knots.front() || z.x() > p.x_knots.back() || z.y() < p.y_knots.front() ||
      z.y() > p.y_knots.back())
    return 0.0;
  return lagrange_basis(p.x_knots, p.i, z.x()) * lagrange_basis(p.y_knots, p.j, z.y());
}

double template_eval(const Template& t, const Eigen::Vector2d& z) {
  return std::visit(
      [&](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, TentTemplate>) {
          return tent_eval(f, z);
        } else if constexpr (std::is_same_v<T, EllipseTemplate>) {
          return ellipse_eval(f, z);
        } else {
          return polymesh_eval(f, z);
        }
      },
      t);
}

bool ellipse_support_above_axis(const EllipseTemplate& e) {
  // Half-extent of the support ellipse along y is sqrt((A^-1)_(1,1)).
  const Eigen::Matrix2d inv = e.matrix.inverse();
  return e.center.y() - std::sqrt(std::max(inv(1, 1), 0.0)) >= 0.0;
}

Template rescale_translate(const Template& f, int n, const std::array<int, 2>& m) {
  if (n < 1) throw std::invalid_argument("rescale_translate requires n >= 1");
  const double nd = static_cast<double>(n);
  const Eigen::Vector2d shift(static_cast<double>(m[0]) / nd, static_cast<double>(m[1]) / nd);
  if (const auto* tent = std::get_if<TentTemplate>(&f)) {
    return make_tent((tent->center - shift) / nd, tent->radius / nd);
  }
  if (const auto* ell = std::get_if<EllipseTemplate>(&f)) {
    return make_ellipse((ell->center - shift) / nd, nd * nd * ell->matrix);
  }
  throw std::invalid_argument("rescale_translate supports tent and ellipse templates only");
}

Eigen::VectorXd featurize(const TemplateSystem& system, const PersistenceDiagram& diagram) {
  if (diagram.frame() != system.frame)
    throw std::invalid_argument("featurize: diagram is in " + to_string(diagram.frame()) +
                                " but the template system works in " + to_string(system.frame));
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(system.templates.size()));
  for (const auto& p : diagram.points()) {
    if (p.is_infinite()) continue;
    const Eigen::Vector2d z(p.birth, p.y);
    const double mu = static_cast<double>(p.multiplicity);
    for (std::size_t k = 0; k < system.templates.size(); ++k)
      out[static_cast<Eigen::Index>(k)] += mu * template_eval(system.templates[k], z);
  }
  return out;
}

FeatureMatrix featurize_collection(const std::vector<TemplateSystem>& systems_per_dim,
                                   const std::vector<std::vector<PersistenceDiagram>>& diagrams_per_dim,
                                   PairMode mode) {
  if (systems_per_dim.empty() || diagrams_per_dim.empty())
    throw std::invalid_argument("featurize_collection: no template systems or no diagrams");
  const std::size_t dims = mode == PairMode::single ? 1 : systems_per_dim.size();
  if (mode == PairMode::concat && systems_per_dim.size() != diagrams_per_dim.size())
    throw std::invalid_argument("featurize_collection: " + std::to_string(systems_per_dim.size()) +
                                " template systems but " +
                                std::to_string(diagrams_per_dim.size()) + " diagram lists");
  const std::size_t n = diagrams_per_dim[0].size();
  for (std::size_t d = 0; d < dims; ++d)
    if (diagrams_per_dim[d].size() != n)
      throw std::invalid_argument("featurize_collection: ragged input, dimension " +
                                  std::to_string(d) + " has " +
                                  std::to_string(diagrams_per_dim[d].size()) + " diagrams, expected " +
                                  std::to_string(n));

  std::size_t total_cols = 0;
  for (std::size_t d = 0; d < dims; ++d) total_cols += systems_per_dim[d].templates.size();

  FeatureMatrix out;
  out.values.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(total_cols));
  out.columns.reserve(total_cols);
  for (std::size_t d = 0; d < dims; ++d)
    for (std::size_t k = 0; k < systems_per_dim[d].templates.size(); ++k)
      out.columns.push_back(FeatureColumn{static_cast<int>(d), static_cast<int>(k), 1,
                                          "h" + std::to_string(d) + ":t" + std::to_string(k)});

  for (std::size_t row = 0; row < n; ++row) {
    Eigen::Index col = 0;
    for (std::size_t d = 0; d < dims; ++d) {
      const Eigen::VectorXd block = featurize(systems_per_dim[d], diagrams_per_dim[d][row]);
      out.values.block(static_cast<Eigen::Index>(row), col, 1, block.size()) = block.transpose();
      col += block.size();
    }
  }
  return out;
}

std::string serialize_template_system(const TemplateSystem& system) {
  std::string out = "frame," + to_string(system.frame) + "\n";
  for (const auto& t : system.templates) {
    if (const auto* tent = std::get_if<TentTemplate>(&t)) {
      out += "tent," + format_double(tent->center.x()) + "," + format_double(tent->center.y()) +
             "," + format_double(tent->radius) + "\n";
    } else if (const auto* e = std::get_if<EllipseTemplate>(&t)) {
      out += "ellipse," + format_double(e->center.x()) + "," + format_double(e->center.y()) +
             "," + format_double(e->matrix(0, 0)) + "," + format_double(e->matrix(0, 1)) + "," +
             format_double(e->matrix(1, 1)) + "\n";
    } else {
      const auto& p = std::get<PolynomialMeshTemplate>(t);
      out += "polymesh," + std::to_string(p.i) + "," + std::to_string(p.j) + "," +
             std::to_string(p.x_knots.size()) + "," + std::to_string(p.y_knots.size());
      for (double v : p.x_knots) out += "," + format_double(v);
      for (double v : p.y_knots) out += "," + format_double(v);
      out += "\n";
    }
  }
  return out;
}

TemplateSystem parse_template_system(const std::string& text, const std::string& source_name) {
  TemplateSystem system;
  bool frame_seen = false;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    auto fields = split(body, ',');
    const std::string where = source_name + ":" + std::to_string(line_no);
    const std::string_view kind = trim(fields[0]);
    try {
      if (kind == "frame") {
        if (fields.size() != 2) throw std::runtime_error("frame line needs one value");
        const std::string_view v = trim(fields[1]);
        if (v == "birth-death") system.frame = Frame::birth_death;
        else if (v == "birth-lifetime") system.frame = Frame::birth_lifetime;
        else throw std::runtime_error("unknown frame '" + std::string(v) + "'");
        frame_seen = true;
      } else if (kind == "tent") {
        if (fields.size() != 4) throw std::runtime_error("tent needs cx,cy,radius");
        system.templates.push_back(make_tent(
            {parse_double(fields[1]), parse_double(fields[2])}, parse_double(fields[3])));
      } else if (kind == "ellipse") {
        if (fields.size() != 6) throw std::runtime_error("ellipse needs cx,cy,a11,a12,a22");
        Eigen::Matrix2d a;
        a(0, 0) = parse_double(fields[3]);
        a(0, 1) = a(1, 0) = parse_double(fields[4]);
        a(1, 1) = parse_double(fields[5]);
        system.templates.push_back(
            make_ellipse({parse_double(fields[1]), parse_double(fields[2])}, a));
      } else if (kind == "polymesh") {
        if (fields.size() < 5) throw std::runtime_error("polymesh needs i,j,nx,ny,knots...");
        const int i = static_cast<int>(parse_u64(fields[1]));
        const int j = static_cast<int>(parse_u64(fields[2]));
        const std::size_t nx = parse_u64(fields[3]);
        const std::size_t ny = parse_u64(fields[4]);
        if (fields.size() != 5 + nx + ny)
          throw std::runtime_error("polymesh knot count mismatch");
        std::vector<double> xk, yk;
        for (std::size_t k = 0; k < nx; ++k) xk.push_back(parse_double(fields[5 + k]));
        for (std::size_t k = 0; k < ny; ++k) yk.push_back(parse_double(fields[5 + nx + k]));
        system.templates.push_back(make_polymesh(std::move(xk), std::move(yk), i, j));
      } else {
        throw std::runtime_error("unknown template kind '" + std::string(kind) + "'");
      }
    } catch (const std::exception& e) {
      throw std::runtime_error(where + ": " + e.what());
    }
  }
  if (!frame_seen && !system.templates.empty())
    throw std::runtime_error(source_name + ": missing frame line");
  if (system.templates.empty())
    throw std::runtime_error(source_name + ": template system is empty");
  return system;
}

void write_template_system(const TemplateSystem& system, const std::string& path) {
  write_text_file(path, serialize_template_system(system));
}

TemplateSystem read_template_system(const std::string& path) {
  return parse_template_system(read_text_file(path), path);
}

}  // namespace atf
