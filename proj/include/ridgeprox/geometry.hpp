#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ridgeprox/error.hpp"

namespace ridgeprox {

using Rational = boost::multiprecision::cpp_rational;
using Vector = std::vector<double>;
using ExactVector = std::vector<Rational>;

/// Parses "p/q", an integer, or a decimal literal ("0.125", "-3e-2") into an
/// exact rational. Throws Error on malformed text or a zero denominator.
Rational parse_rational(const std::string& text);

/// Exact rational value of the shortest decimal that round-trips `value`.
Rational rational_from_double(double value);

/// Comparison predicate for projection values: |s - t| <= abs + rel*max(|s|,|t|).
struct Tolerance {
  double abs_tol = 1e-9;
  double rel_tol = 1e-9;

  [[nodiscard]] bool equal(double s, double t) const;
  [[nodiscard]] double slack(double magnitude) const { return abs_tol + rel_tol * magnitude; }
};

/// A nonzero vector a defining the functional x -> a.x.
class Direction {
 public:
  explicit Direction(Vector coords);
  explicit Direction(ExactVector coords);

  [[nodiscard]] std::size_t dim() const { return coords_.size(); }
  [[nodiscard]] std::span<const double> coords() const { return coords_; }
  [[nodiscard]] double operator[](std::size_t j) const { return coords_[j]; }
  [[nodiscard]] bool is_exact() const { return exact_.has_value(); }
  [[nodiscard]] const ExactVector& exact() const;

 private:
  Vector coords_;
  std::optional<ExactVector> exact_;
};

/// Dot product d.x. Throws on dimension mismatch.
double project(const Direction& d, std::span<const double> x);
Rational project_exact(const ExactVector& d, const ExactVector& x);

/// Finite labeled point set with the two directions of the ridge sum.
///
/// Coordinates are held twice: row-major for per-point access and
/// column-major for the batch projection kernels. In exact mode the rational
/// coordinates are authoritative and every equality test is exact.
class PointSet {
 public:
  PointSet(std::vector<Vector> points, Direction dir1, Direction dir2, Tolerance tol = {},
           std::vector<std::string> labels = {});

  static PointSet exact(std::vector<ExactVector> points, ExactVector dir1, ExactVector dir2,
                        std::vector<std::string> labels = {}, Tolerance tol = {});

  [[nodiscard]] std::size_t size() const { return count_; }
  [[nodiscard]] std::size_t dim() const { return dim_; }
  [[nodiscard]] bool is_exact() const { return exact_mode_; }
  [[nodiscard]] const Tolerance& tol() const { return tol_; }
  [[nodiscard]] const std::vector<std::string>& labels() const { return labels_; }

  [[nodiscard]] std::span<const double> point(std::size_t i) const {
    return {rows_.data() + i * dim_, dim_};
  }
  [[nodiscard]] const ExactVector& exact_point(std::size_t i) const { return exact_points_.at(i); }
  [[nodiscard]] std::span<const double> column(std::size_t j) const {
    return {columns_.data() + j * count_, count_};
  }

  /// which = 1 or 2.
  [[nodiscard]] const Direction& direction(int which) const;

  /// Points at the given indices, in that order, with the same directions and tolerance.
  [[nodiscard]] PointSet subset(std::span<const std::size_t> indices) const;

  /// Index of the first point whose coordinates equal x under the tolerance.
  [[nodiscard]] std::optional<std::size_t> find(std::span<const double> x) const;
  /// Exact lookup in exact mode; falls back to the tolerance otherwise.
  [[nodiscard]] std::optional<std::size_t> find(const ExactVector& x) const;

  /// a.x for every point, through the active SIMD kernel.
  [[nodiscard]] Vector projections(const Direction& d) const;
  [[nodiscard]] std::vector<Rational> exact_projections(const ExactVector& d) const;

 private:
  PointSet() = default;
  void init_storage(const std::vector<Vector>& points);
  void validate();

  std::size_t count_ = 0;
  std::size_t dim_ = 0;
  Vector rows_;
  Vector columns_;
  std::vector<ExactVector> exact_points_;
  bool exact_mode_ = false;
  std::vector<Direction> dirs_;
  Tolerance tol_;
  std::vector<std::string> labels_;
};

/// Partition of point indices into level sets of one projection.
/// Classes are ordered by ascending level and members by ascending index.
struct FiberPartition {
  int which = 1;
  std::vector<std::vector<std::size_t>> classes;
  std::vector<double> class_value;
  std::vector<std::size_t> class_of;
  // Number of classes that absorbed more than one distinct raw value.
  std::size_t merged_classes = 0;

  [[nodiscard]] std::size_t size() const { return classes.size(); }
};

FiberPartition fibers(const PointSet& ps, int which);

/// a1, a2 followed by an orthonormal basis of span(a1, a2)'s complement.
std::vector<Direction> complete_basis(const PointSet& ps);

/// Sine of the angle between two vectors; 0 when either is zero.
double angle_sine(std::span<const double> a, std::span<const double> b);

inline constexpr double kIndependenceThreshold = 1e-10;

}  // namespace ridgeprox
