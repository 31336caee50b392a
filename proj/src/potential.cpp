#include "presslab/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "presslab/error.hpp"

namespace presslab {

namespace {

// Strict total order on points: semantic lex first, representation tiebreak.
bool point_less(const Point& a, const Point& b) {
  int c = Point::compare(a, b);
  if (c != 0) return c < 0;
  if (a.kind() == SpaceKind::Symbolic) {
    if (a.prefix() != b.prefix()) return a.prefix() < b.prefix();
    return a.tail() < b.tail();
  }
  return false;
}

}  // namespace

Potential Potential::constant(double value) {
  Potential f;
  f.kind_ = PotentialKind::Constant;
  f.value_ = value;
  f.finalize();
  return f;
}

Potential Potential::coordinate_affine(std::vector<double> coeffs, double offset) {
  if (coeffs.empty()) throw ConfigError("affine potential needs coefficients");
  Potential f;
  f.kind_ = PotentialKind::CoordinateAffine;
  f.coeffs_ = std::move(coeffs);
  f.value_ = offset;
  f.finalize();
  return f;
}

Potential Potential::first_symbol(std::vector<double> table) {
  if (table.size() < 2) throw ConfigError("first-symbol potential table needs m >= 2 entries");
  Potential f;
  f.kind_ = PotentialKind::FirstSymbol;
  f.table_ = std::move(table);
  f.finalize();
  return f;
}

Potential Potential::tabulated(std::vector<Point> points, std::vector<double> values) {
  if (points.empty() || points.size() != values.size())
    throw ConfigError("tabulated potential needs matching nonempty point/value lists");
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return point_less(points[a], points[b]);
  });
  Potential f;
  f.kind_ = PotentialKind::Tabulated;
  f.grid_points_.reserve(points.size());
  f.grid_values_.reserve(points.size());
  for (std::size_t i : order) {
    f.grid_points_.push_back(points[i]);
    f.grid_values_.push_back(values[i]);
  }
  f.finalize();
  return f;
}

void Potential::finalize() {
  switch (kind_) {
    case PotentialKind::Constant:
      sup_norm_ = std::fabs(value_);
      break;
    case PotentialKind::CoordinateAffine: {
      // max |f| over the closed coordinate box [0,1]^D
      double best = 0.0;
      const std::size_t d = coeffs_.size();
      for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
        double v = value_;
        for (std::size_t i = 0; i < d; ++i)
          if (mask & (std::size_t{1} << i)) v += coeffs_[i];
        best = std::max(best, std::fabs(v));
      }
      sup_norm_ = best;
      break;
    }
    case PotentialKind::FirstSymbol: {
      double best = 0.0;
      for (double v : table_) best = std::max(best, std::fabs(v));
      sup_norm_ = best;
      break;
    }
    case PotentialKind::Tabulated: {
      double best = 0.0;
      for (double v : grid_values_) best = std::max(best, std::fabs(v));
      sup_norm_ = best;
      break;
    }
  }
}

double Potential::eval(const Point& p) const {
  switch (kind_) {
    case PotentialKind::Constant:
      return value_;
    case PotentialKind::CoordinateAffine: {
      double v = value_;
      for (std::size_t i = 0; i < coeffs_.size() && i < static_cast<std::size_t>(p.dim()); ++i)
        v += coeffs_[i] * p.coord(static_cast<int>(i));
      return v;
    }
    case PotentialKind::FirstSymbol: {
      int s = p.symbol_at(0);
      if (s < 0 || static_cast<std::size_t>(s) >= table_.size())
        throw Error("first symbol outside potential table");
      return table_[static_cast<std::size_t>(s)];
    }
    case PotentialKind::Tabulated: {
      auto it = std::lower_bound(grid_points_.begin(), grid_points_.end(), p,
                                 point_less);
      while (it != grid_points_.end() && Point::compare(*it, p) == 0) {
        if (Point::identical(*it, p))
          return grid_values_[static_cast<std::size_t>(it - grid_points_.begin())];
        ++it;
      }
      throw Error("tabulated potential evaluated off its grid");
    }
  }
  throw Error("unreachable potential kind");
}

Potential Potential::shifted(double delta) const {
  Potential f = *this;
  switch (kind_) {
    case PotentialKind::Constant:
    case PotentialKind::CoordinateAffine:
      f.value_ += delta;
      break;
    case PotentialKind::FirstSymbol:
      for (double& v : f.table_) v += delta;
      break;
    case PotentialKind::Tabulated:
      for (double& v : f.grid_values_) v += delta;
      break;
  }
  f.finalize();
  return f;
}

}  // namespace presslab
