#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace atf {

enum class Frame { birth_death, birth_lifetime };

std::string to_string(Frame f);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// One diagram point. `y` is the death value in the birth-death frame and
/// the lifetime (death - birth) in the birth-lifetime frame.
struct PersistencePoint {
  double birth = 0.0;
  double y = 0.0;
  std::uint32_t multiplicity = 1;

  bool is_infinite() const { return y == kInfinity; }
};

/// pers(birth, death) = death - birth; the +inf sentinel propagates.
/// Defined on birth-death coordinates.
double persistence(const PersistencePoint& p);

/// Finite multiset of (birth, death) pairs with multiplicities.
///
/// Storage is always canonical birth-death coordinates; the birth-lifetime
/// frame is a materialized view. This keeps frame conversion exact:
/// to_birth_death(to_birth_lifetime(D)) reproduces D bit for bit, which a
/// stored (birth, death-birth) pair could not guarantee in floating point.
///
/// Construction merges points with bit-identical coordinates (summing
/// multiplicities) and sorts by (birth, death). Diagrams are immutable.
class PersistenceDiagram {
 public:
  PersistenceDiagram() = default;

  /// Builds from birth-death points. Requires 0 <= birth < death for every
  /// point (death may be +inf) and multiplicity >= 1.
  explicit PersistenceDiagram(std::vector<PersistencePoint> birth_death_points);

  Frame frame() const { return frame_; }

  /// Points in the diagram's frame, sorted by (birth, y), infinite last.
  const std::vector<PersistencePoint>& points() const {
    return frame_ == Frame::birth_death ? canonical_ : view_;
  }

  /// Canonical birth-death points regardless of frame.
  const std::vector<PersistencePoint>& birth_death_points() const { return canonical_; }

  bool empty() const { return canonical_.empty(); }
  std::size_t point_count() const { return canonical_.size(); }
  std::uint64_t total_multiplicity() const;
  std::size_t infinite_point_count() const;

  /// Copy without infinite-death points.
  PersistenceDiagram finite_part() const;

  /// Copy with every infinite death replaced by `cap`. Requires cap to
  /// exceed the birth of every infinite point.
  PersistenceDiagram with_infinite_capped(double cap) const;

  friend PersistenceDiagram to_birth_lifetime(const PersistenceDiagram& d);
  friend PersistenceDiagram to_birth_death(const PersistenceDiagram& d);

 private:
  std::vector<PersistencePoint> canonical_;  // birth-death, sorted, merged
  std::vector<PersistencePoint> view_;       // (birth, lifetime) when frame_ == birth_lifetime
  Frame frame_ = Frame::birth_death;
};

/// (a, b) -> (a, b - a). Errors if the diagram is already in birth-lifetime.
PersistenceDiagram to_birth_lifetime(const PersistenceDiagram& d);

/// Inverse of to_birth_lifetime; exact roundtrip. Errors if already
/// in birth-death.
PersistenceDiagram to_birth_death(const PersistenceDiagram& d);

/// Reads a delimited diagram file: one `birth,death[,multiplicity]` line per
/// point, `inf` for infinite death, `#` comments and blank lines skipped.
/// Duplicate coordinates merge with summed multiplicity. Malformed lines and
/// death <= birth report the offending line number. Result is birth-death.
PersistenceDiagram read_diagram_file(const std::string& path);
PersistenceDiagram parse_diagram(std::istream& in, const std::string& source_name);

/// Writes the canonical birth-death points, shortest round-trip decimals;
/// re-reading reproduces the diagram exactly. The multiplicity column is
/// always present.
void write_diagram_file(const PersistenceDiagram& d, const std::string& path);
std::string serialize_diagram(const PersistenceDiagram& d);

}  // namespace atf
