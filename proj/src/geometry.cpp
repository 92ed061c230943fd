#include "ridgeprox/geometry.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numeric>
#include <string_view>
#include <utility>

#include "ridgeprox/kernels.hpp"

namespace ridgeprox {

namespace {

using boost::multiprecision::cpp_int;

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

// cpp_int reads a leading 0 as an octal prefix.
cpp_int decimal_integer(std::string_view digits) {
  const auto first = digits.find_first_not_of('0');
  if (first == std::string_view::npos) return 0;
  return cpp_int{std::string(digits.substr(first))};
}

cpp_int parse_integer(std::string_view s, const std::string& whole) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw Error("malformed number '" + whole + "'");
  cpp_int v = decimal_integer(s);
  if (negative) v = -v;
  return v;
}

cpp_int pow10(long e) {
  cpp_int r = 1;
  for (long i = 0; i < e; ++i) r *= 10;
  return r;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) throw Error("empty number");

  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    const cpp_int num = parse_integer(s.substr(0, slash), text);
    const cpp_int den = parse_integer(s.substr(slash + 1), text);
    if (den == 0) throw Error("zero denominator in '" + text + "'");
    return Rational(num, den);
  }

  bool negative = false;
  if (s.front() == '-' || s.front() == '+') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (const auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    const std::string_view exp_text = s.substr(e + 1);
    const auto [ptr, ec] = std::from_chars(exp_text.data() + (exp_text.starts_with('+') ? 1 : 0),
                                           exp_text.data() + exp_text.size(), exponent);
    if (ec != std::errc{} || ptr != exp_text.data() + exp_text.size()) {
      throw Error("malformed exponent in '" + text + "'");
    }
    s = s.substr(0, e);
  }
  std::string digits;
  long frac_digits = 0;
  if (const auto dot = s.find('.'); dot != std::string_view::npos) {
    const std::string_view int_part = s.substr(0, dot);
    const std::string_view frac_part = s.substr(dot + 1);
    if ((!int_part.empty() && !all_digits(int_part)) || (!frac_part.empty() && !all_digits(frac_part)) ||
        (int_part.empty() && frac_part.empty())) {
      throw Error("malformed number '" + text + "'");
    }
    digits = std::string(int_part) + std::string(frac_part);
    frac_digits = static_cast<long>(frac_part.size());
  } else {
    if (!all_digits(s)) throw Error("malformed number '" + text + "'");
    digits = std::string(s);
  }
  cpp_int num = decimal_integer(digits);
  if (negative) num = -num;
  const long scale = exponent - frac_digits;
  if (std::labs(scale) > 4000) throw Error("exponent out of range in '" + text + "'");
  if (scale >= 0) return Rational(num * pow10(scale));
  return Rational(num, pow10(-scale));
}

Rational rational_from_double(double value) {
  if (!std::isfinite(value)) throw Error("non-finite value cannot be made exact");
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) throw Error("cannot format value");
  return parse_rational(std::string(buf, ptr));
}

bool Tolerance::equal(double s, double t) const {
  return std::fabs(s - t) <= abs_tol + rel_tol * std::max(std::fabs(s), std::fabs(t));
}

Direction::Direction(Vector coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw Error("direction must have at least one coordinate");
  bool nonzero = false;
  for (double c : coords_) {
    if (!std::isfinite(c)) throw Error("direction has a non-finite coordinate");
    nonzero = nonzero || c != 0.0;
  }
  if (!nonzero) throw Error("direction must be a nonzero vector");
}

Direction::Direction(ExactVector coords) {
  if (coords.empty()) throw Error("direction must have at least one coordinate");
  if (std::all_of(coords.begin(), coords.end(), [](const Rational& c) { return c == 0; })) {
    throw Error("direction must be a nonzero vector");
  }
  coords_.reserve(coords.size());
  for (const auto& c : coords) coords_.push_back(c.convert_to<double>());
  exact_ = std::move(coords);
}

const ExactVector& Direction::exact() const {
  if (!exact_) throw Error("direction has no exact coordinates");
  return *exact_;
}

double project(const Direction& d, std::span<const double> x) {
  if (d.dim() != x.size()) {
    throw Error("dimension mismatch: direction has " + std::to_string(d.dim()) + " coordinates, point has " +
                std::to_string(x.size()));
  }
  double acc = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) acc = acc + d[j] * x[j];
  return acc;
}

Rational project_exact(const ExactVector& d, const ExactVector& x) {
  if (d.size() != x.size()) throw Error("dimension mismatch in exact projection");
  Rational acc = 0;
  for (std::size_t j = 0; j < x.size(); ++j) acc += d[j] * x[j];
  return acc;
}

double angle_sine(std::span<const double> a, std::span<const double> b) {
  double aa = 0, bb = 0, ab = 0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    aa += a[j] * a[j];
    bb += b[j] * b[j];
    ab += a[j] * b[j];
  }
  if (aa == 0 || bb == 0) return 0.0;
  const double c2 = (ab * ab) / (aa * bb);
  return std::sqrt(std::max(0.0, 1.0 - c2));
}

PointSet::PointSet(std::vector<Vector> points, Direction dir1, Direction dir2, Tolerance tol,
                   std::vector<std::string> labels)
    : tol_(tol), labels_(std::move(labels)) {
  dirs_.push_back(std::move(dir1));
  dirs_.push_back(std::move(dir2));
  init_storage(points);
  validate();
}

PointSet PointSet::exact(std::vector<ExactVector> points, ExactVector dir1, ExactVector dir2,
                         std::vector<std::string> labels, Tolerance tol) {
  PointSet ps;
  ps.exact_mode_ = true;
  ps.tol_ = tol;
  ps.labels_ = std::move(labels);
  ps.dirs_.emplace_back(std::move(dir1));
  ps.dirs_.emplace_back(std::move(dir2));
  std::vector<Vector> approx;
  approx.reserve(points.size());
  for (const auto& p : points) {
    Vector v;
    v.reserve(p.size());
    for (const auto& c : p) v.push_back(c.convert_to<double>());
    approx.push_back(std::move(v));
  }
  ps.exact_points_ = std::move(points);
  ps.init_storage(approx);
  ps.validate();
  return ps;
}

void PointSet::init_storage(const std::vector<Vector>& points) {
  if (points.empty()) throw Error("point set must contain at least one point");
  count_ = points.size();
  dim_ = points.front().size();
  if (dim_ == 0) throw Error("points must have at least one coordinate");
  rows_.resize(count_ * dim_);
  columns_.resize(count_ * dim_);
  for (std::size_t i = 0; i < count_; ++i) {
    if (points[i].size() != dim_) {
      throw Error("point " + std::to_string(i) + " has " + std::to_string(points[i].size()) +
                  " coordinates, expected " + std::to_string(dim_));
    }
    for (std::size_t j = 0; j < dim_; ++j) {
      const double c = points[i][j];
      if (!std::isfinite(c)) throw Error("point " + std::to_string(i) + " has a non-finite coordinate");
      rows_[i * dim_ + j] = c;
      columns_[j * count_ + i] = c;
    }
  }
}

void PointSet::validate() {
  if (!labels_.empty() && labels_.size() != count_) {
    throw Error("expected " + std::to_string(count_) + " labels, got " + std::to_string(labels_.size()));
  }
  if (!(tol_.abs_tol >= 0) || !(tol_.rel_tol >= 0)) throw Error("tolerances must be non-negative");
  for (const auto& d : dirs_) {
    if (d.dim() != dim_) {
      throw Error("direction has " + std::to_string(d.dim()) + " coordinates, points have " +
                  std::to_string(dim_));
    }
  }

  if (exact_mode_) {
    const auto& a = dirs_[0].exact();
    const auto& b = dirs_[1].exact();
    Rational aa = 0, bb = 0, ab = 0;
    for (std::size_t j = 0; j < dim_; ++j) {
      aa += a[j] * a[j];
      bb += b[j] * b[j];
      ab += a[j] * b[j];
    }
    if (aa * bb - ab * ab == 0) throw Error("directions are linearly dependent");

    std::vector<std::size_t> order(count_);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return exact_points_[i] < exact_points_[j]; });
    for (std::size_t k = 1; k < count_; ++k) {
      if (exact_points_[order[k - 1]] == exact_points_[order[k]]) {
        throw Error("points " + std::to_string(std::min(order[k - 1], order[k])) + " and " +
                    std::to_string(std::max(order[k - 1], order[k])) + " coincide");
      }
    }
    return;
  }

  if (angle_sine(dirs_[0].coords(), dirs_[1].coords()) <= kIndependenceThreshold) {
    throw Error("directions are linearly dependent (rank < 2 under tolerance)");
  }

  // Sort by first coordinate; coincident points must be tol-equal there.
  std::vector<std::size_t> order(count_);
  std::iota(order.begin(), order.end(), 0);
  const auto first = column(0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return first[i] < first[j] || (first[i] == first[j] && i < j);
  });
  for (std::size_t a = 0; a < count_; ++a) {
    const std::size_t i = order[a];
    for (std::size_t b = a + 1; b < count_; ++b) {
      const std::size_t j = order[b];
      if (!tol_.equal(first[i], first[j])) break;
      bool same = true;
      for (std::size_t c = 1; c < dim_ && same; ++c) same = tol_.equal(point(i)[c], point(j)[c]);
      if (same) {
        throw Error("points " + std::to_string(std::min(i, j)) + " and " + std::to_string(std::max(i, j)) +
                    " coincide under tolerance");
      }
    }
  }
}

const Direction& PointSet::direction(int which) const {
  if (which != 1 && which != 2) throw Error("direction index must be 1 or 2");
  return dirs_[static_cast<std::size_t>(which - 1)];
}

PointSet PointSet::subset(std::span<const std::size_t> indices) const {
  std::vector<std::string> labels;
  for (std::size_t i : indices) {
    if (i >= count_) throw Error("subset index " + std::to_string(i) + " out of range");
    if (!labels_.empty()) labels.push_back(labels_[i]);
  }
  if (exact_mode_) {
    std::vector<ExactVector> pts;
    for (std::size_t i : indices) pts.push_back(exact_points_[i]);
    return PointSet::exact(std::move(pts), dirs_[0].exact(), dirs_[1].exact(), std::move(labels), tol_);
  }
  std::vector<Vector> pts;
  for (std::size_t i : indices) pts.emplace_back(point(i).begin(), point(i).end());
  return PointSet(std::move(pts), dirs_[0], dirs_[1], tol_, std::move(labels));
}

std::optional<std::size_t> PointSet::find(std::span<const double> x) const {
  if (x.size() != dim_) throw Error("dimension mismatch in point lookup");
  for (std::size_t i = 0; i < count_; ++i) {
    bool same = true;
    for (std::size_t j = 0; j < dim_ && same; ++j) same = tol_.equal(point(i)[j], x[j]);
    if (same) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> PointSet::find(const ExactVector& x) const {
  if (x.size() != dim_) throw Error("dimension mismatch in point lookup");
  if (!exact_mode_) {
    Vector approx;
    for (const auto& c : x) approx.push_back(c.convert_to<double>());
    return find(approx);
  }
  for (std::size_t i = 0; i < count_; ++i) {
    if (exact_points_[i] == x) return i;
  }
  return std::nullopt;
}

Vector PointSet::projections(const Direction& d) const {
  if (d.dim() != dim_) throw Error("dimension mismatch between direction and point set");
  Vector out(count_);
  kernels::active().project_columns(columns_.data(), dim_, count_, d.coords().data(), out.data());
  return out;
}

std::vector<Rational> PointSet::exact_projections(const ExactVector& d) const {
  if (!exact_mode_) throw Error("point set is not exact");
  std::vector<Rational> out;
  out.reserve(count_);
  for (const auto& p : exact_points_) out.push_back(project_exact(d, p));
  return out;
}

FiberPartition fibers(const PointSet& ps, int which) {
  const Direction& d = ps.direction(which);
  FiberPartition part;
  part.which = which;
  part.class_of.assign(ps.size(), 0);
  const Vector values = ps.projections(d);

  std::vector<std::size_t> order(ps.size());
  std::iota(order.begin(), order.end(), 0);

  auto close_class = [&](std::vector<std::size_t> members) {
    std::sort(members.begin(), members.end());
    double sum = 0;
    bool distinct = false;
    for (std::size_t m : members) {
      sum += values[m];
      distinct = distinct || values[m] != values[members.front()];
    }
    if (distinct) ++part.merged_classes;
    for (std::size_t m : members) part.class_of[m] = part.classes.size();
    part.class_value.push_back(sum / static_cast<double>(members.size()));
    part.classes.push_back(std::move(members));
  };

  if (ps.is_exact()) {
    const auto exact = ps.exact_projections(d.exact());
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
      return exact[i] < exact[j] || (exact[i] == exact[j] && i < j);
    });
    std::vector<std::size_t> current{order[0]};
    for (std::size_t k = 1; k < order.size(); ++k) {
      if (exact[order[k]] != exact[order[k - 1]]) close_class(std::exchange(current, {}));
      current.push_back(order[k]);
    }
    close_class(std::move(current));
    part.merged_classes = 0;
    return part;
  }

  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return values[i] < values[j] || (values[i] == values[j] && i < j);
  });
  std::vector<std::size_t> current{order[0]};
  for (std::size_t k = 1; k < order.size(); ++k) {
    if (!ps.tol().equal(values[order[k - 1]], values[order[k]])) close_class(std::exchange(current, {}));
    current.push_back(order[k]);
  }
  close_class(std::move(current));
  return part;
}

std::vector<Direction> complete_basis(const PointSet& ps) {
  const std::size_t n = ps.dim();
  const Direction& a1 = ps.direction(1);
  const Direction& a2 = ps.direction(2);
  if (angle_sine(a1.coords(), a2.coords()) <= kIndependenceThreshold) {
    throw Error("directions are linearly dependent");
  }

  std::vector<Vector> ortho;
  auto residual = [&](Vector v) {
    // Two passes of classical Gram-Schmidt.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : ortho) {
        double c = 0;
        for (std::size_t j = 0; j < n; ++j) c += q[j] * v[j];
        for (std::size_t j = 0; j < n; ++j) v[j] -= c * q[j];
      }
    }
    return v;
  };
  auto norm = [](const Vector& v) {
    double s = 0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
  };
  for (const auto* d : {&a1, &a2}) {
    Vector r = residual(Vector(d->coords().begin(), d->coords().end()));
    const double len = norm(r);
    for (double& x : r) x /= len;
    ortho.push_back(std::move(r));
  }

  std::vector<Direction> basis{a1, a2};
  for (std::size_t j = 0; j < n && basis.size() < n; ++j) {
    Vector e(n, 0.0);
    e[j] = 1.0;
    Vector r = residual(std::move(e));
    const double len = norm(r);
    if (len <= kIndependenceThreshold) continue;
    for (double& x : r) x /= len;
    ortho.push_back(r);
    basis.emplace_back(std::move(r));
  }
  return basis;
}

}  // namespace ridgeprox
