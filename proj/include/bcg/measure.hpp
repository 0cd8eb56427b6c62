#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace bcg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Coordinate chart of a model boundary.
enum class Chart { circle, torus, so3, so4 };

const char* to_string(Chart chart);
int rotation_dim(Chart chart);  // 3, 4, or 0 for angle charts

/// A point of a model boundary. Angle charts store reduced angles in
/// [0, 2pi); rotation charts store an element of SO(3) or SO(4).
class BoundaryPoint {
 public:
  static BoundaryPoint circle(double t);
  static BoundaryPoint torus(double t1, double t2);
  /// Throws invalid_rotation unless k is special orthogonal to 1e-10.
  static BoundaryPoint rotation(const Matrix& k);

  Chart chart() const { return chart_; }
  double angle(int i = 0) const { return angles_[i]; }
  const Matrix& rotation() const { return rotation_; }

 private:
  BoundaryPoint() = default;
  Chart chart_ = Chart::circle;
  std::array<double, 2> angles_{};
  Matrix rotation_;
};

struct QuadratureRule {
  Chart chart = Chart::torus;
  std::vector<BoundaryPoint> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/// Signed or probability measure on a model boundary, stored either as
/// weighted atoms or as density values on a quadrature rule.
class BoundaryMeasure {
 public:
  /// Signed weights are allowed; `probability` is validated (weights >= 0,
  /// mass within 1e-12 of 1).
  static BoundaryMeasure atomic(std::vector<BoundaryPoint> points,
                                std::vector<double> weights,
                                bool probability = false);
  /// `values` are densities w.r.t. the rule's reference measure.
  /// `max_harmonic` records the highest trigonometric degree of the density,
  /// used to flag under-resolved integrals.
  static BoundaryMeasure density(QuadratureRule rule, std::vector<double> values,
                                 bool probability = false, int max_harmonic = 0);

  bool is_atomic() const { return atomic_; }
  bool probability() const { return probability_; }
  Chart chart() const { return chart_; }
  int max_harmonic() const { return max_harmonic_; }
  std::size_t size() const { return points_.size(); }

  const BoundaryPoint& point(std::size_t i) const { return points_[i]; }
  /// Effective mass carried by node i (rule weight times density for
  /// density measures).
  double weight(std::size_t i) const { return weights_[i]; }
  std::span<const BoundaryPoint> points() const { return points_; }
  std::span<const double> weights() const { return weights_; }
  /// Density values; empty for atomic measures.
  std::span<const double> values() const { return values_; }
  /// Reference quadrature weights; empty for atomic measures.
  std::span<const double> rule_weights() const { return rule_weights_; }
  /// Grid resolution per axis for torus/circle density measures, else 0.
  int grid_n() const { return grid_n_; }

 private:
  BoundaryMeasure() = default;

  bool atomic_ = true;
  bool probability_ = false;
  Chart chart_ = Chart::circle;
  int max_harmonic_ = 0;
  int grid_n_ = 0;
  std::vector<BoundaryPoint> points_;
  std::vector<double> weights_;
  std::vector<double> values_;
  std::vector<double> rule_weights_;
};

/// Haar-distributed elements of SO(group_dim), group_dim in {3, 4}.
std::vector<BoundaryPoint> haar_sample(int group_dim, int count, std::uint64_t seed);

/// n x n product trapezoid rule on [0, 2pi)^2, normalized to mass 1.
QuadratureRule torus_grid(int n);
/// n-point trapezoid rule on [0, 2pi), normalized to mass 1.
QuadratureRule circle_grid(int n);

double total_mass(const BoundaryMeasure& mu);

/// mu + t * nu, not renormalized.
BoundaryMeasure blend(const BoundaryMeasure& mu, const BoundaryMeasure& nu, double t);

/// Replaces each atom sigma_i by `per_atom` atoms sigma_i * exp(xi), xi
/// uniform in the Frobenius eps-ball of the skew-symmetric algebra.
BoundaryMeasure mollify(const BoundaryMeasure& mu, double eps, int per_atom,
                        std::uint64_t seed);

/// Skew-symmetric matrix with Frobenius norm equal to |coeffs|, using the
/// basis (E_ij - E_ji)/sqrt2, i < j, in row-major order.
Matrix skew_from_coefficients(int dim, std::span<const double> coeffs);

/// Rotation angles (theta1, theta2) in [0, pi] of an element of SO(4).
std::array<double, 2> so4_rotation_angles(const Matrix& k);
/// Frobenius norm of the principal logarithm of k in SO(4).
double so4_log_norm(const Matrix& k);
/// Haar probability of the geodesic ball {exp(xi) : |xi|_F <= eps} in SO(4).
double so4_haar_ball_fraction(double eps);
/// Upper bound for the Haar density of the kernel used by mollify on SO(4).
double so4_mollifier_density_bound(double eps);

/// Gauss-Legendre nodes and weights on [a, b].
void gauss_legendre(int n, double a, double b, std::vector<double>& nodes,
                    std::vector<double>& weights);

}  // namespace bcg
