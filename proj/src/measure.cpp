#include "bcg/measure.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "bcg/error.hpp"

namespace bcg {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double reduce_angle(double t) {
  double r = std::fmod(t, kTwoPi);
  if (r < 0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

void check_probability(std::span<const double> weights) {
  double mass = 0.0;
  for (double w : weights) {
    if (w < 0) {
      throw Error(ErrorKind::invalid_parameter,
                  "probability measure has a negative weight");
    }
    mass += w;
  }
  if (std::abs(mass - 1.0) > 1e-12) {
    throw Error(ErrorKind::invalid_parameter,
                "probability measure has mass " + std::to_string(mass));
  }
}

}  // namespace

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::unsupported_model: return "unsupported-model";
    case ErrorKind::grid_too_coarse: return "grid-too-coarse";
    case ErrorKind::under_resolved: return "under-resolved";
    case ErrorKind::incompatible_measures: return "incompatible-measures";
    case ErrorKind::invalid_parameter: return "invalid-parameter";
    case ErrorKind::invalid_rotation: return "invalid-rotation";
    case ErrorKind::degenerate_measure: return "degenerate-measure";
    case ErrorKind::experiment_invalid: return "experiment-invalid";
    case ErrorKind::divergent_entropy_parameter: return "divergent-entropy-parameter";
    case ErrorKind::solver_failure: return "solver-failure";
    case ErrorKind::convexity_violation: return "convexity-violation";
    case ErrorKind::not_implemented: return "not-implemented";
    case ErrorKind::io_error: return "io-error";
  }
  return "unknown";
}

const char* to_string(Chart chart) {
  switch (chart) {
    case Chart::circle: return "circle";
    case Chart::torus: return "torus";
    case Chart::so3: return "so3";
    case Chart::so4: return "so4";
  }
  return "unknown";
}

int rotation_dim(Chart chart) {
  switch (chart) {
    case Chart::so3: return 3;
    case Chart::so4: return 4;
    default: return 0;
  }
}

BoundaryPoint BoundaryPoint::circle(double t) {
  BoundaryPoint p;
  p.chart_ = Chart::circle;
  p.angles_ = {reduce_angle(t), 0.0};
  return p;
}

BoundaryPoint BoundaryPoint::torus(double t1, double t2) {
  BoundaryPoint p;
  p.chart_ = Chart::torus;
  p.angles_ = {reduce_angle(t1), reduce_angle(t2)};
  return p;
}

BoundaryPoint BoundaryPoint::rotation(const Matrix& k) {
  if (k.rows() != k.cols() || (k.rows() != 3 && k.rows() != 4)) {
    throw Error(ErrorKind::invalid_rotation, "rotation must be 3x3 or 4x4");
  }
  const Matrix gram = k.transpose() * k - Matrix::Identity(k.rows(), k.cols());
  if (gram.norm() > 1e-10 || std::abs(k.determinant() - 1.0) > 1e-10) {
    throw Error(ErrorKind::invalid_rotation, "matrix is not special orthogonal");
  }
  BoundaryPoint p;
  p.chart_ = k.rows() == 3 ? Chart::so3 : Chart::so4;
  p.rotation_ = k;
  return p;
}

BoundaryMeasure BoundaryMeasure::atomic(std::vector<BoundaryPoint> points,
                                        std::vector<double> weights,
                                        bool probability) {
  if (points.size() != weights.size()) {
    throw Error(ErrorKind::invalid_parameter, "atom and weight counts differ");
  }
  if (points.empty()) {
    throw Error(ErrorKind::invalid_parameter, "atomic measure needs at least one atom");
  }
  for (const auto& p : points) {
    if (p.chart() != points.front().chart()) {
      throw Error(ErrorKind::incompatible_measures, "atoms on different charts");
    }
  }
  if (probability) check_probability(weights);
  BoundaryMeasure m;
  m.atomic_ = true;
  m.probability_ = probability;
  m.chart_ = points.front().chart();
  m.points_ = std::move(points);
  m.weights_ = std::move(weights);
  return m;
}

BoundaryMeasure BoundaryMeasure::density(QuadratureRule rule, std::vector<double> values,
                                         bool probability, int max_harmonic) {
  if (rule.size() != values.size() || rule.weights.size() != rule.nodes.size()) {
    throw Error(ErrorKind::invalid_parameter, "density values do not match the rule");
  }
  BoundaryMeasure m;
  m.atomic_ = false;
  m.chart_ = rule.chart;
  m.max_harmonic_ = max_harmonic;
  m.weights_.resize(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m.weights_[i] = rule.weights[i] * values[i];
  if (probability) check_probability(m.weights_);
  m.probability_ = probability;
  if (rule.chart == Chart::torus) {
    m.grid_n_ = static_cast<int>(std::lround(std::sqrt(static_cast<double>(rule.size()))));
  } else if (rule.chart == Chart::circle) {
    m.grid_n_ = static_cast<int>(rule.size());
  }
  m.points_ = std::move(rule.nodes);
  m.values_ = std::move(values);
  m.rule_weights_ = std::move(rule.weights);
  return m;
}

std::vector<BoundaryPoint> haar_sample(int group_dim, int count, std::uint64_t seed) {
  if (group_dim != 3 && group_dim != 4) {
    throw Error(ErrorKind::unsupported_model,
                "Haar sampling supports SO(3) and SO(4) only");
  }
  if (count < 1) throw Error(ErrorKind::invalid_parameter, "count must be >= 1");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<BoundaryPoint> out;
  out.reserve(count);
  Matrix g(group_dim, group_dim);
  for (int s = 0; s < count; ++s) {
    for (int i = 0; i < group_dim; ++i)
      for (int j = 0; j < group_dim; ++j) g(i, j) = normal(rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Q * diag(sign R_ii) is Haar on O(n).
    for (int j = 0; j < group_dim; ++j) {
      if (r(j, j) < 0) q.col(j) *= -1.0;
    }
    // Right translation of the det = -1 coset keeps the law Haar on SO(n).
    if (q.determinant() < 0) q.col(0) *= -1.0;
    out.push_back(BoundaryPoint::rotation(q));
  }
  return out;
}

QuadratureRule torus_grid(int n) {
  if (n < 4) throw Error(ErrorKind::grid_too_coarse, "torus grid needs n >= 4");
  QuadratureRule rule;
  rule.chart = Chart::torus;
  rule.nodes.reserve(static_cast<std::size_t>(n) * n);
  const double w = 1.0 / (static_cast<double>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      rule.nodes.push_back(BoundaryPoint::torus(kTwoPi * i / n, kTwoPi * j / n));
      rule.weights.push_back(w);
    }
  }
  return rule;
}

QuadratureRule circle_grid(int n) {
  if (n < 4) throw Error(ErrorKind::grid_too_coarse, "circle grid needs n >= 4");
  QuadratureRule rule;
  rule.chart = Chart::circle;
  for (int i = 0; i < n; ++i) {
    rule.nodes.push_back(BoundaryPoint::circle(kTwoPi * i / n));
    rule.weights.push_back(1.0 / n);
  }
  return rule;
}

double total_mass(const BoundaryMeasure& mu) {
  double mass = 0.0;
  for (double w : mu.weights()) mass += w;
  return mass;
}

BoundaryMeasure blend(const BoundaryMeasure& mu, const BoundaryMeasure& nu, double t) {
  if (mu.chart() != nu.chart()) {
    throw Error(ErrorKind::incompatible_measures,
                std::string("cannot blend measures on charts ") + to_string(mu.chart()) +
                    " and " + to_string(nu.chart()));
  }
  // Same quadrature grid: stay in density form.
  if (!mu.is_atomic() && !nu.is_atomic() && mu.size() == nu.size() &&
      mu.grid_n() == nu.grid_n() && mu.grid_n() > 0) {
    QuadratureRule rule;
    rule.chart = mu.chart();
    rule.nodes.assign(mu.points().begin(), mu.points().end());
    std::vector<double> values(mu.size());
    rule.weights.assign(mu.rule_weights().begin(), mu.rule_weights().end());
    for (std::size_t i = 0; i < mu.size(); ++i) {
      values[i] = mu.values()[i] + t * nu.values()[i];
    }
    return BoundaryMeasure::density(std::move(rule), std::move(values), false,
                                    std::max(mu.max_harmonic(), nu.max_harmonic()));
  }
  std::vector<BoundaryPoint> points(mu.points().begin(), mu.points().end());
  std::vector<double> weights(mu.weights().begin(), mu.weights().end());
  for (std::size_t i = 0; i < nu.size(); ++i) {
    points.push_back(nu.point(i));
    weights.push_back(t * nu.weight(i));
  }
  return BoundaryMeasure::atomic(std::move(points), std::move(weights));
}

Matrix skew_from_coefficients(int dim, std::span<const double> coeffs) {
  const std::size_t expected = static_cast<std::size_t>(dim * (dim - 1) / 2);
  if (coeffs.size() != expected) {
    throw Error(ErrorKind::invalid_parameter, "wrong number of skew coefficients");
  }
  Matrix x = Matrix::Zero(dim, dim);
  std::size_t c = 0;
  for (int i = 0; i < dim; ++i) {
    for (int j = i + 1; j < dim; ++j) {
      x(i, j) = coeffs[c] / std::numbers::sqrt2;
      x(j, i) = -x(i, j);
      ++c;
    }
  }
  return x;
}

BoundaryMeasure mollify(const BoundaryMeasure& mu, double eps, int per_atom,
                        std::uint64_t seed) {
  if (!(eps > 0)) throw Error(ErrorKind::invalid_parameter, "mollifier radius must be > 0");
  if (per_atom < 1) throw Error(ErrorKind::invalid_parameter, "per_atom must be >= 1");
  const int dim = rotation_dim(mu.chart());
  if (dim == 0 || !mu.is_atomic()) {
    throw Error(ErrorKind::unsupported_model,
                "mollify needs an atomic measure on a rotation chart");
  }
  const int alg_dim = dim * (dim - 1) / 2;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform;

  std::vector<BoundaryPoint> points;
  std::vector<double> weights;
  points.reserve(mu.size() * per_atom);
  weights.reserve(mu.size() * per_atom);
  std::vector<double> c(alg_dim);
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double w = mu.weight(i) / per_atom;
    for (int a = 0; a < per_atom; ++a) {
      double norm2 = 0.0;
      for (auto& ci : c) {
        ci = normal(rng);
        norm2 += ci * ci;
      }
      const double radius = eps * std::pow(uniform(rng), 1.0 / alg_dim) / std::sqrt(norm2);
      for (auto& ci : c) ci *= radius;
      const Matrix xi = skew_from_coefficients(dim, c);
      Matrix k = mu.point(i).rotation() * xi.exp();
      // Re-orthonormalize away the round-off of exp.
      Eigen::JacobiSVD<Matrix> svd(k, Eigen::ComputeFullU | Eigen::ComputeFullV);
      k = svd.matrixU() * svd.matrixV().transpose();
      points.push_back(BoundaryPoint::rotation(k));
      weights.push_back(w);
    }
  }
  return BoundaryMeasure::atomic(std::move(points), std::move(weights), mu.probability());
}

std::array<double, 2> so4_rotation_angles(const Matrix& k) {
  // Real Schur form of an orthogonal matrix is block diagonal with planar
  // rotations; atan2 keeps small and near-pi angles accurate.
  const Eigen::RealSchur<Matrix> schur(k, false);
  const Matrix& t = schur.matrixT();
  std::vector<double> angles, reals;
  for (int i = 0; i < 4;) {
    if (i + 1 < 4 && t(i + 1, i) != 0.0) {
      const double sn = std::sqrt(std::abs(t(i, i + 1) * t(i + 1, i)));
      angles.push_back(std::atan2(sn, 0.5 * (t(i, i) + t(i + 1, i + 1))));
      i += 2;
    } else {
      reals.push_back(t(i, i));
      ++i;
    }
  }
  // Real eigenvalues are +-1 and come in equal pairs for SO(4).
  std::sort(reals.begin(), reals.end());
  for (std::size_t j = 0; j + 1 < reals.size(); j += 2) {
    angles.push_back(reals[j] + reals[j + 1] > 0.0 ? 0.0 : std::numbers::pi);
  }
  std::sort(angles.begin(), angles.end(), std::greater<>());
  return {angles[0], angles[1]};
}

double so4_log_norm(const Matrix& k) {
  const auto th = so4_rotation_angles(k);
  return std::sqrt(2.0 * (th[0] * th[0] + th[1] * th[1]));
}

namespace {

// Integral over the disk of radius rho of f(theta1, theta2), polar Gauss rule.
template <class F>
double disk_integral(double rho, F&& f) {
  std::vector<double> rn, rw, an, aw;
  gauss_legendre(64, 0.0, rho, rn, rw);
  gauss_legendre(128, 0.0, kTwoPi, an, aw);
  double sum = 0.0;
  for (std::size_t i = 0; i < rn.size(); ++i) {
    for (std::size_t j = 0; j < an.size(); ++j) {
      sum += rw[i] * aw[j] * rn[i] * f(rn[i] * std::cos(an[j]), rn[i] * std::sin(an[j]));
    }
  }
  return sum;
}

double sinc_half_sq(double a) {
  if (std::abs(a) < 1e-8) return 1.0;
  const double s = std::sin(0.5 * a) / (0.5 * a);
  return s * s;
}

}  // namespace

double so4_haar_ball_fraction(double eps) {
  const double rho = eps / std::numbers::sqrt2;
  if (rho >= std::numbers::pi) return 1.0;
  // Weyl density of SO(4) on its maximal torus: 4 (cos t1 - cos t2)^2,
  // total mass 16 pi^2 over [-pi, pi]^2.
  const double inner = disk_integral(rho, [](double a, double b) {
    const double d = std::cos(a) - std::cos(b);
    return 4.0 * d * d;
  });
  return inner / (16.0 * std::numbers::pi * std::numbers::pi);
}

double so4_mollifier_density_bound(double eps) {
  if (!(eps > 0)) throw Error(ErrorKind::invalid_parameter, "eps must be > 0");
  const double rho = eps / std::numbers::sqrt2;
  // Lebesgue volume of the ball over Haar volume, both in exp coordinates:
  // int_{disk} (t1^2 - t2^2)^2 / 16 pi^2 = rho^6 / (96 pi).
  const double ball_over_total = std::pow(rho, 6) / (96.0 * std::numbers::pi);
  // Jacobian of exp: prod over roots t1 +- t2 of (sin(a/2)/(a/2))^2;
  // smallest on the boundary of the ball.
  double jmin = 1.0;
  for (int i = 0; i < 720; ++i) {
    const double phi = kTwoPi * i / 720.0;
    const double t1 = rho * std::cos(phi);
    const double t2 = rho * std::sin(phi);
    jmin = std::min(jmin, sinc_half_sq(t1 + t2) * sinc_half_sq(t1 - t2));
  }
  return 1.0 / (ball_over_total * jmin);
}

void gauss_legendre(int n, double a, double b, std::vector<double>& nodes,
                    std::vector<double>& weights) {
  if (n < 1) throw Error(ErrorKind::invalid_parameter, "Gauss-Legendre needs n >= 1");
  // Golub-Welsch.
  Matrix jac = Matrix::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    const double beta = i / std::sqrt(4.0 * i * i - 1.0);
    jac(i, i - 1) = beta;
    jac(i - 1, i) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(jac);
  nodes.resize(n);
  weights.resize(n);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  for (int i = 0; i < n; ++i) {
    const double v0 = es.eigenvectors()(0, i);
    nodes[i] = mid + half * es.eigenvalues()(i);
    weights[i] = 2.0 * v0 * v0 * half;
  }
}

}  // namespace bcg
