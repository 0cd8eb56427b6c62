#pragma once

#include <span>
#include <string>
#include <vector>

#include "bcg/measure.hpp"

namespace bcg {

enum class ModelKind { h2, h2xh2, sl3, sl4 };

/// Positive restricted root e_i - e_j of SL(n), with its value at b+.
struct PositiveRoot {
  int i = 0;
  int j = 0;
  int multiplicity = 1;
  double value = 0.0;
};

struct RootData {
  int flat_dim = 0;
  /// Diagonal of b+ as a traceless symmetric matrix (SL models only).
  Vector b_plus;
  /// Sorted by value ascending (the order of the root lines in the basis).
  std::vector<PositiveRoot> positive_roots;
};

/// A model symmetric space at its basepoint: tangent space with an adapted
/// orthonormal basis, Busemann derivative fields over a boundary chart.
///
/// For the SL(n)/SO(n) models the tangent space is the space of traceless
/// symmetric matrices with the trace form <X, Y> = Tr(XY). The basis lists
/// the flat first (b+ first), then the root lines (E_ij + E_ji)/sqrt2 by
/// increasing root value, so the reference fields A = e1 e1^T and B0 are
/// diagonal.
class SpaceModel {
 public:
  static SpaceModel h2();
  static SpaceModel h2xh2();
  static SpaceModel sl3();
  static SpaceModel sl4();

  ModelKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  int tangent_dim() const { return tangent_dim_; }
  int rank() const { return rank_; }
  Chart chart() const { return chart_; }
  bool is_sl() const { return kind_ == ModelKind::sl3 || kind_ == ModelKind::sl4; }
  /// Matrix size n of SL(n); 0 for the hyperbolic models.
  int group_dim() const;

  const RootData& roots() const { return roots_; }
  const std::vector<Matrix>& basis() const { return basis_; }

  /// Hessian of the Busemann function at the reference boundary point.
  Matrix reference_hessian() const;
  /// Multiplier applied to every Hessian field (1 in normal operation).
  double hessian_scale() const { return hessian_scale_; }
  SpaceModel with_hessian_scale(double scale) const;

  /// Coordinates of a traceless symmetric matrix in the adapted basis.
  Vector coordinates(const Matrix& x) const;

 private:
  SpaceModel() = default;
  static SpaceModel make_sl(int n);

  ModelKind kind_ = ModelKind::h2;
  std::string name_;
  int tangent_dim_ = 0;
  int rank_ = 0;
  Chart chart_ = Chart::circle;
  double hessian_scale_ = 1.0;
  RootData roots_;
  std::vector<Matrix> basis_;
  Vector reference_hessian_diag_;
};

/// O(k)_ij = <e_i, k e_j k^T>, the action of K on the tangent space.
Matrix adjoint_rep(const SpaceModel& model, const Matrix& k);

/// Entry layout of the six skew parameters. `row_major` fills the upper
/// triangle as (s1 s2 s3 / s4 s5 / s6) and reproduces the published 55-atom
/// table; `printed` follows the displayed matrix (s1 s4 s6 / s2 s5 / s3).
enum class SkewLayout { row_major, printed };

Matrix skew_matrix(std::span<const double> params, SkewLayout layout = SkewLayout::row_major);
/// exp of the 4x4 skew matrix built from six parameters; an element of SO(4).
Matrix skew_exp(std::span<const double> params, SkewLayout layout = SkewLayout::row_major);

/// Unit vector u(theta) with dB^2 = u u^T, pointing toward theta.
Vector grad_busemann(const SpaceModel& model, const BoundaryPoint& theta);
/// DdB at the basepoint for the boundary point theta (PSD, kernel = flat).
Matrix hess_busemann(const SpaceModel& model, const BoundaryPoint& theta);

/// Weyl group representatives in SO(n) (signed permutation matrices) for
/// the SL models: 6 elements for SL(3), 24 for SL(4).
std::vector<BoundaryPoint> weyl_orbit(const SpaceModel& model);

/// Volume entropy of the hyperbolic models; `length_scale` multiplies the
/// metric by length_scale^2.
double volume_entropy(const SpaceModel& model, double length_scale = 1.0);

}  // namespace bcg
