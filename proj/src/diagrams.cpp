#include "atf/diagrams.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "atf/textio.hpp"

namespace atf {

std::string to_string(Frame f) {
  return f == Frame::birth_death ? "birth-death" : "birth-lifetime";
}

double persistence(const PersistencePoint& p) { return p.y - p.birth; }

namespace {

bool point_less(const PersistencePoint& a, const PersistencePoint& b) {
  if (a.birth != b.birth) return a.birth < b.birth;
  return a.y < b.y;
}

void validate_birth_death(const PersistencePoint& p) {
  if (!(p.birth >= 0.0))
    throw std::invalid_argument("diagram point has negative birth " + format_double(p.birth));
  if (!(p.birth < p.y))
    throw std::invalid_argument("diagram point needs birth < death, got (" +
                                format_double(p.birth) + ", " + format_double(p.y) + ")");
  if (std::isnan(p.birth) || std::isnan(p.y))
    throw std::invalid_argument("diagram point has NaN coordinate");
  if (p.multiplicity < 1) throw std::invalid_argument("diagram point has multiplicity 0");
}

std::vector<PersistencePoint> lifetime_view(const std::vector<PersistencePoint>& bd) {
  std::vector<PersistencePoint> out = bd;
  for (auto& p : out) p.y = p.y - p.birth;
  std::sort(out.begin(), out.end(), point_less);
  return out;
}

}  // namespace

PersistenceDiagram::PersistenceDiagram(std::vector<PersistencePoint> birth_death_points)
    : canonical_(std::move(birth_death_points)) {
  for (const auto& p : canonical_) validate_birth_death(p);
  std::sort(canonical_.begin(), canonical_.end(), point_less);
  // Merge bit-identical coordinates.
  std::size_t w = 0;
  for (std::size_t i = 0; i < canonical_.size(); ++i) {
    if (w > 0 && canonical_[w - 1].birth == canonical_[i].birth &&
        canonical_[w - 1].y == canonical_[i].y) {
      canonical_[w - 1].multiplicity += canonical_[i].multiplicity;
    } else {
      canonical_[w++] = canonical_[i];
    }
  }
  canonical_.resize(w);
}

std::uint64_t PersistenceDiagram::total_multiplicity() const {
  std::uint64_t n = 0;
  for (const auto& p : canonical_) n += p.multiplicity;
  return n;
}

std::size_t PersistenceDiagram::infinite_point_count() const {
  std::size_t n = 0;
  for (const auto& p : canonical_)
    if (p.is_infinite()) n += p.multiplicity;
  return n;
}

PersistenceDiagram PersistenceDiagram::finite_part() const {
  std::vector<PersistencePoint> pts;
  pts.reserve(canonical_.size());
  for (const auto& p : canonical_)
    if (!p.is_infinite()) pts.push_back(p);
  PersistenceDiagram out(std::move(pts));
  if (frame_ == Frame::birth_lifetime) out = to_birth_lifetime(out);
  return out;
}

PersistenceDiagram PersistenceDiagram::with_infinite_capped(double cap) const {
  std::vector<PersistencePoint> pts = canonical_;
  for (auto& p : pts) {
    if (!p.is_infinite()) continue;
    if (!(cap > p.birth))
      throw std::invalid_argument("infinite-death cap " + format_double(cap) +
                                  " does not exceed birth " + format_double(p.birth));
    p.y = cap;
  }
  PersistenceDiagram out(std::move(pts));
  if (frame_ == Frame::birth_lifetime) out = to_birth_lifetime(out);
  return out;
}

PersistenceDiagram to_birth_lifetime(const PersistenceDiagram& d) {
  if (d.frame_ == Frame::birth_lifetime)
    throw std::invalid_argument("diagram is already in the birth-lifetime frame");
  PersistenceDiagram out;
  out.canonical_ = d.canonical_;
  out.view_ = lifetime_view(d.canonical_);
  out.frame_ = Frame::birth_lifetime;
  return out;
}

PersistenceDiagram to_birth_death(const PersistenceDiagram& d) {
  if (d.frame_ == Frame::birth_death)
    throw std::invalid_argument("diagram is already in the birth-death frame");
  PersistenceDiagram out;
  out.canonical_ = d.canonical_;
  out.frame_ = Frame::birth_death;
  return out;
}

PersistenceDiagram parse_diagram(std::istream& in, const std::string& source_name) {
  std::vector<PersistencePoint> pts;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    auto fields = split(body, ',');
    const std::string where = source_name + ":" + std::to_string(line_no);
    if (fields.size() != 2 && fields.size() != 3)
      throw std::runtime_error(where + ": expected 2 or 3 comma-separated fields, got " +
                               std::to_string(fields.size()));
    PersistencePoint p;
    try {
      p.birth = parse_double(fields[0]);
      p.y = parse_double(fields[1]);
      p.multiplicity =
          fields.size() == 3 ? static_cast<std::uint32_t>(parse_u64(fields[2])) : 1u;
    } catch (const std::exception& e) {
      throw std::runtime_error(where + ": " + e.what());
    }
    if (!(p.birth >= 0.0) || !(p.birth < p.y) || p.multiplicity < 1)
      throw std::runtime_error(where + ": invalid point (" + std::string(trim(fields[0])) +
                               ", " + std::string(trim(fields[1])) +
                               "): requires 0 <= birth < death and multiplicity >= 1");
    pts.push_back(p);
  }
  return PersistenceDiagram(std::move(pts));
}

PersistenceDiagram read_diagram_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open diagram file: " + path);
  return parse_diagram(in, path);
}

std::string serialize_diagram(const PersistenceDiagram& d) {
  std::string out;
  for (const auto& p : d.birth_death_points()) {
    out += format_double(p.birth);
    out += ',';
    out += format_double(p.y);
    out += ',';
    out += std::to_string(p.multiplicity);
    out += '\n';
  }
  return out;
}

void write_diagram_file(const PersistenceDiagram& d, const std::string& path) {
  write_text_file(path, serialize_diagram(d));
}

}  // namespace atf
