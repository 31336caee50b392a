#pragma once

#include <vector>

#include "presslab/point.hpp"
#include "presslab/system.hpp"

namespace presslab {

enum class PotentialKind { Constant, CoordinateAffine, FirstSymbol, Tabulated };

// Continuous observable f on the model space. Evaluation is deterministic and
// |f(x)| <= sup_norm() on every representable x of the potential's domain.
class Potential {
 public:
  static Potential constant(double value);
  // f(x) = offset + sum_i coeffs[i] * x_i on the torus
  static Potential coordinate_affine(std::vector<double> coeffs, double offset);
  // locally constant on the first symbol
  static Potential first_symbol(std::vector<double> table);
  // exact-match table on a fixed point set; evaluation off the grid throws
  static Potential tabulated(std::vector<Point> points, std::vector<double> values);

  PotentialKind kind() const { return kind_; }
  double sup_norm() const { return sup_norm_; }

  double eval(const Point& p) const;

  // f + delta, same kind
  Potential shifted(double delta) const;

  double constant_value() const { return value_; }
  const std::vector<double>& table() const { return table_; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  double affine_offset() const { return value_; }

 private:
  Potential() = default;
  void finalize();

  PotentialKind kind_ = PotentialKind::Constant;
  double value_ = 0.0;               // constant value / affine offset
  std::vector<double> coeffs_;       // affine
  std::vector<double> table_;        // first-symbol
  std::vector<Point> grid_points_;   // tabulated, sorted
  std::vector<double> grid_values_;  // tabulated, aligned with grid_points_
  double sup_norm_ = 0.0;
};

}  // namespace presslab
