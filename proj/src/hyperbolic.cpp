#include "bcg/hyperbolic.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "bcg/error.hpp"

namespace bcg {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Complex boundary(double xi) { return std::polar(1.0, xi); }

// Mobius map sending 0 to a, preserving the direction at 0.
Complex mobius_from_origin(Complex a, Complex w) { return (w + a) / (1.0 + std::conj(a) * w); }

Vector to_vec(Complex c) {
  Vector v(2);
  v << c.real(), c.imag();
  return v;
}

void require_density(const CircleMeasure& sigma) {
  if (sigma.size() < 4) throw Error(ErrorKind::grid_too_coarse, "circle measure needs >= 4 nodes");
}

}  // namespace

DiskPoint::DiskPoint(double x, double y) : DiskPoint(Complex(x, y)) {}

DiskPoint::DiskPoint(Complex z) : z_(z) {
  if (!(std::abs(z) < 1.0 - 1e-12)) {
    throw Error(ErrorKind::invalid_parameter, "disk point must satisfy |z| < 1 - 1e-12");
  }
}

double CircleMeasure::angle(int k) const { return kTwoPi * k / size(); }

double CircleMeasure::mass() const {
  double s = 0.0;
  for (double d : density) s += d;
  return s / size();
}

double hyp_distance(const DiskPoint& a, const DiskPoint& b) {
  const double num = std::abs(a.z() - b.z());
  const double den = std::sqrt((1.0 - std::norm(a.z())) * (1.0 - std::norm(b.z())));
  return 2.0 * std::asinh(num / den);
}

double busemann(const DiskPoint& x, double xi) {
  return std::log(std::norm(x.z() - boundary(xi)) / (1.0 - std::norm(x.z())));
}

double poisson_kernel(const DiskPoint& x, double xi) {
  return (1.0 - std::norm(x.z())) / std::norm(x.z() - boundary(xi));
}

Vector busemann_gradient(const DiskPoint& x, double xi) {
  const Complex z = x.z();
  const double q = 1.0 - std::norm(z);
  const Complex d = z - boundary(xi);
  const Complex grad_e = 2.0 * d / std::norm(d) + 2.0 * z / q;
  return to_vec(0.5 * q * grad_e);
}

DiskPoint radial_point(double phi, double d) { return DiskPoint(std::polar(std::tanh(0.5 * d), phi)); }

DiskPoint disk_exp(const DiskPoint& x, const Vector& v) {
  const double len = v.norm();
  if (len == 0.0) return x;
  const Complex dir(v(0) / len, v(1) / len);
  return DiskPoint(mobius_from_origin(x.z(), std::tanh(0.5 * len) * dir));
}

DiskPoint rotate(const DiskPoint& x, double phi) { return DiskPoint(std::polar(1.0, phi) * x.z()); }

CircleMeasure visual_measure(const DiskPoint& x, int n) {
  CircleMeasure m;
  m.density.resize(n);
  for (int k = 0; k < n; ++k) m.density[k] = poisson_kernel(x, kTwoPi * k / n);
  return m;
}

CircleMeasure uniform_measure(int n) { return CircleMeasure{std::vector<double>(n, 1.0)}; }

CircleMeasure sigma_density(const DiskPoint& y, double s, const SigmaOptions& opt) {
  if (!(s > 1.0)) {
    throw Error(ErrorKind::divergent_entropy_parameter,
                "s = " + std::to_string(s) + " does not exceed the volume entropy 1");
  }
  if (opt.grid_n < 4) throw Error(ErrorKind::grid_too_coarse, "sigma grid needs n >= 4");
  if (!(opt.r_max > 0) || opt.radial_nodes < 1) {
    throw Error(ErrorKind::invalid_parameter, "sigma quadrature needs r_max > 0 and radial nodes");
  }
  // mu_y^s has radial density (s^2 - 1) e^{-s r} sinh r about y.
  std::vector<double> rs, rw;
  gauss_legendre(opt.radial_nodes, 0.0, opt.r_max, rs, rw);
  const double s2 = s * s - 1.0;
  const double big_r = opt.r_max;
  const double tail = 0.5 * s2 *
                      (std::exp(-(s - 1.0) * big_r) / (s - 1.0) -
                       std::exp(-(s + 1.0) * big_r) / (s + 1.0));

  // Ring nodes z = T_y(rho e^{i phi}) with their weights.
  std::vector<Complex> zs;
  std::vector<double> zq;  // (1 - |z|^2) * weight
  for (std::size_t i = 0; i < rs.size(); ++i) {
    const double rho = std::tanh(0.5 * rs[i]);
    const int m = std::max(8, static_cast<int>(std::ceil(36.0 / -std::log(rho))));
    const double w = rw[i] * s2 * std::exp(-s * rs[i]) * std::sinh(rs[i]) / m;
    for (int j = 0; j < m; ++j) {
      const Complex z = mobius_from_origin(y.z(), std::polar(rho, kTwoPi * (j + 0.5) / m));
      zs.push_back(z);
      zq.push_back(w * (1.0 - std::norm(z)));
    }
  }

  CircleMeasure out;
  out.density.resize(opt.grid_n);
  for_each_index(
      static_cast<std::size_t>(opt.grid_n),
      [&](std::size_t k) {
        const double xi = kTwoPi * static_cast<double>(k) / opt.grid_n;
        const Complex e = boundary(xi);
        double acc = 0.0;
        for (std::size_t p = 0; p < zs.size(); ++p) acc += zq[p] / std::norm(zs[p] - e);
        out.density[k] = acc + tail * poisson_kernel(y, xi);
      },
      opt.exec);
  return out;
}

double barycenter_functional(const CircleMeasure& sigma, const DiskPoint& x) {
  double s = 0.0;
  for (int k = 0; k < sigma.size(); ++k) s += sigma.density[k] * busemann(x, sigma.angle(k));
  return s / sigma.size();
}

Vector barycenter_gradient(const CircleMeasure& sigma, const DiskPoint& x) {
  Vector g = Vector::Zero(2);
  for (int k = 0; k < sigma.size(); ++k) {
    g += sigma.density[k] * busemann_gradient(x, sigma.angle(k));
  }
  return g / sigma.size();
}

Matrix barycenter_hessian(const CircleMeasure& sigma, const DiskPoint& x) {
  Matrix h = Matrix::Zero(2, 2);
  for (int k = 0; k < sigma.size(); ++k) {
    const Vector u = busemann_gradient(x, sigma.angle(k));
    h += sigma.density[k] * (Matrix::Identity(2, 2) - u * u.transpose());
  }
  return h / sigma.size();
}

double convexity_certificate(const CircleMeasure& sigma, const DiskPoint& x) {
  require_density(sigma);
  Eigen::SelfAdjointEigenSolver<Matrix> es(barycenter_hessian(sigma, x), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

BarycenterResult barycenter(const CircleMeasure& sigma, double tol, int max_iter) {
  require_density(sigma);
  for (double d : sigma.density) {
    if (!(d > 0)) {
      throw Error(ErrorKind::convexity_violation,
                  "measure does not have full support; the barycenter functional is not "
                  "strictly convex");
    }
  }
  BarycenterResult r;
  DiskPoint x;
  Vector g = barycenter_gradient(sigma, x);
  double f = barycenter_functional(sigma, x);
  for (int it = 0; it < max_iter && g.norm() > tol; ++it) {
    const Matrix h = barycenter_hessian(sigma, x);
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    Vector v;
    if (es.eigenvalues()(0) > 1e-8) {
      v = -es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() *
          es.eigenvectors().transpose() * g;
    } else {
      v = -g;
      ++r.gradient_steps;
    }
    const double slope = g.dot(v);
    double alpha = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 60; ++ls, alpha *= 0.5) {
      const DiskPoint cand = disk_exp(x, alpha * v);
      const double fc = barycenter_functional(sigma, cand);
      const Vector gc = barycenter_gradient(sigma, cand);
      if (fc <= f + 1e-4 * alpha * slope || gc.norm() < g.norm()) {
        x = cand;
        f = fc;
        g = gc;
        moved = true;
        break;
      }
    }
    r.iterations = it + 1;
    if (!moved) break;
  }
  r.x = x;
  r.residual = g.norm();
  r.certificate = convexity_certificate(sigma, x);
  if (!(r.residual <= tol)) {
    throw Error(ErrorKind::solver_failure,
                "barycenter did not converge: residual " + std::to_string(r.residual) +
                    " after " + std::to_string(r.iterations) + " iterations at (" +
                    std::to_string(x.x()) + ", " + std::to_string(x.y()) + ")");
  }
  return r;
}

BarycenterResult bcg_map(const DiskPoint& y, double s, const SigmaOptions& opt, double tol) {
  return barycenter(sigma_density(y, s, opt), tol);
}

JacobianCheck jacobian_bound_check(const DiskPoint& y, double s, double h_fd,
                                   const SigmaOptions& opt) {
  if (!(h_fd >= 1e-5 && h_fd <= 1e-2)) {
    throw Error(ErrorKind::invalid_parameter, "finite-difference step must lie in [1e-5, 1e-2]");
  }
  auto at = [&](double dx, double dy) {
    return bcg_map(DiskPoint(y.z() + Complex(dx, dy)), s, opt).x.z();
  };
  const BarycenterResult center = bcg_map(y, s, opt);
  const Complex cx = (at(h_fd, 0) - at(-h_fd, 0)) / (2.0 * h_fd);
  const Complex cy = (at(0, h_fd) - at(0, -h_fd)) / (2.0 * h_fd);
  const double det_e = cx.real() * cy.imag() - cx.imag() * cy.real();
  const double conf = (1.0 - std::norm(y.z())) / (1.0 - std::norm(center.x.z()));
  JacobianCheck c;
  c.jac = det_e * conf * conf;
  c.bound = s * s;
  c.residual = center.residual;
  c.certificate = center.certificate;
  return c;
}

double ift_jacobian_at_origin(double s, const SigmaOptions& opt) {
  const CircleMeasure sigma = sigma_density(DiskPoint(), s, opt);
  const BarycenterResult b = barycenter(sigma, 1e-12);
  Matrix q1 = Matrix::Zero(2, 2);
  for (int k = 0; k < sigma.size(); ++k) {
    const Vector u = busemann_gradient(b.x, sigma.angle(k));
    q1 += sigma.density[k] * u * u.transpose();
  }
  q1 /= sigma.size();
  const Matrix q2 = barycenter_hessian(sigma, b.x);
  return (q2.inverse() * q1).determinant();
}

double normalized_entropy(const SpaceModel& model, double volume, double length_scale) {
  if (!(volume > 0)) throw Error(ErrorKind::invalid_parameter, "volume must be > 0");
  return std::pow(volume_entropy(model, length_scale), model.tangent_dim()) * volume;
}

}  // namespace bcg
