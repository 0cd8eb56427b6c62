#pragma once

// The barycenter map on the hyperbolic plane (Poincare disk, curvature -1).
//
// Busemann functions are normalized at 0 and decrease toward the boundary
// point: B(x, xi) = log(|x - xi|^2 / (1 - |x|^2)). Tangent vectors are
// written in the orthonormal frame (1 - |x|^2)/2 * (d/dx, d/dy).

#include <complex>
#include <vector>

#include "bcg/kernels.hpp"
#include "bcg/measure.hpp"
#include "bcg/space_models.hpp"

namespace bcg {

using Complex = std::complex<double>;

class DiskPoint {
 public:
  DiskPoint() = default;
  /// Throws invalid_parameter unless |z| < 1 - 1e-12.
  DiskPoint(double x, double y);
  explicit DiskPoint(Complex z);

  double x() const { return z_.real(); }
  double y() const { return z_.imag(); }
  Complex z() const { return z_; }
  double norm() const { return std::abs(z_); }

 private:
  Complex z_{0.0, 0.0};
};

/// Density on the uniform n-point circle grid, w.r.t. dtheta / 2pi.
struct CircleMeasure {
  std::vector<double> density;

  int size() const { return static_cast<int>(density.size()); }
  double angle(int k) const;
  double mass() const;
};

double hyp_distance(const DiskPoint& a, const DiskPoint& b);
double busemann(const DiskPoint& x, double xi);
/// Poisson kernel (1 - |x|^2) / |x - xi|^2 = dnu_x / dnu_0 at xi.
double poisson_kernel(const DiskPoint& x, double xi);
/// Riemannian gradient of B(., xi) at x in the orthonormal frame; unit length.
Vector busemann_gradient(const DiskPoint& x, double xi);
/// Point at hyperbolic distance d from 0 along the ray toward angle phi.
DiskPoint radial_point(double phi, double d);
/// exp_x(v) for v in the orthonormal frame at x.
DiskPoint disk_exp(const DiskPoint& x, const Vector& v);
/// Image of x under the rotation by angle phi about 0.
DiskPoint rotate(const DiskPoint& x, double phi);

/// Visual measure nu_x (Poisson kernel density) sampled on n nodes.
CircleMeasure visual_measure(const DiskPoint& x, int n);
CircleMeasure uniform_measure(int n);

struct SigmaOptions {
  int grid_n = 128;
  int radial_nodes = 32;
  double r_max = 4.0;
  Exec exec = Exec::parallel;
};

/// Density of sigma_y^s = int nu_z d(mu_y^s)(z) for the identity map, where
/// mu_y^s has density e^{-s d(y, z)} (normalized). Hyperbolic rings around y
/// are integrated by Gauss-Legendre in r on [0, r_max] and the trapezoid
/// rule in angle; the ring mean beyond r_max is P(y, xi) (harmonicity) and is
/// added with its exact radial weight. Throws divergent_entropy_parameter
/// unless s > 1.
CircleMeasure sigma_density(const DiskPoint& y, double s, const SigmaOptions& opt = {});

struct BarycenterResult {
  DiskPoint x;
  double residual = 0.0;
  double certificate = 0.0;
  int iterations = 0;
  int gradient_steps = 0;
};

/// int B(x, theta) dsigma(theta).
double barycenter_functional(const CircleMeasure& sigma, const DiskPoint& x);
/// int grad B(x, theta) dsigma(theta), in the orthonormal frame.
Vector barycenter_gradient(const CircleMeasure& sigma, const DiskPoint& x);
/// int DdB(x, theta) dsigma(theta) = mass I - int u u^T dsigma.
Matrix barycenter_hessian(const CircleMeasure& sigma, const DiskPoint& x);
/// Smallest eigenvalue of barycenter_hessian at x.
double convexity_certificate(const CircleMeasure& sigma, const DiskPoint& x);

/// Minimizer of the barycenter functional by Riemannian Newton with Armijo
/// damping; gradient descent when the certificate is <= 1e-8. Throws
/// convexity_violation if the density vanishes somewhere, solver_failure
/// if the residual is still above tol after max_iter iterations.
BarycenterResult barycenter(const CircleMeasure& sigma, double tol = 1e-8, int max_iter = 200);

/// F_s(y) = bar(sigma_y^s).
BarycenterResult bcg_map(const DiskPoint& y, double s, const SigmaOptions& opt = {},
                         double tol = 1e-12);

struct JacobianCheck {
  double jac = 0.0;
  double bound = 0.0;
  double residual = 0.0;
  double certificate = 0.0;
};

/// |Jac F_s(y)| w.r.t. the hyperbolic metric, by central differences with
/// Euclidean step h_fd, against the bound s^2. h_fd must lie in [1e-5, 1e-2].
JacobianCheck jacobian_bound_check(const DiskPoint& y, double s, double h_fd = 1e-4,
                                   const SigmaOptions& opt = {});

/// det(Q2^{-1} Q1) with Q1 = int u u^T dsigma, Q2 = int DdB dsigma at the
/// barycenter of sigma_0^s: the implicit-function form of Jac F_s(0).
double ift_jacobian_at_origin(double s, const SigmaOptions& opt = {});

/// h(model)^n * volume, with the metric scaled by length_scale^2.
double normalized_entropy(const SpaceModel& model, double volume, double length_scale = 1.0);

}  // namespace bcg
