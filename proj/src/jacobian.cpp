#include "bcg/jacobian.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "bcg/error.hpp"

namespace bcg {

MomentPair& MomentPair::operator+=(const MomentPair& o) {
  q1 += o.q1;
  q2 += o.q2;
  mass += o.mass;
  return *this;
}

MomentPair operator*(double t, MomentPair a) {
  a.q1 *= t;
  a.q2 *= t;
  a.mass *= t;
  return a;
}

MomentPair moments(const SpaceModel& model, const BoundaryMeasure& mu, Exec exec) {
  if (mu.chart() != model.chart()) {
    throw Error(ErrorKind::incompatible_measures,
                std::string("measure on chart ") + to_string(mu.chart()) + " but model " +
                    model.name() + " uses " + to_string(model.chart()));
  }
  if (!mu.is_atomic() && mu.grid_n() > 0 && mu.grid_n() < 4 * mu.max_harmonic()) {
    throw Error(ErrorKind::under_resolved,
                "grid n = " + std::to_string(mu.grid_n()) +
                    " does not resolve density harmonics of degree " +
                    std::to_string(mu.max_harmonic()));
  }
  MomentSums s = accumulate_moments(model, mu.points(), mu.weights(), exec);
  return {std::move(s.q1), std::move(s.q2), s.mass};
}

MomentPair haar_moments(const SpaceModel& model) {
  const int d = model.tangent_dim();
  const double trace_b = model.reference_hessian().trace();
  const Matrix id = Matrix::Identity(d, d);
  switch (model.kind()) {
    case ModelKind::h2:
      return {0.5 * id, 0.5 * model.hessian_scale() * id, 1.0};
    case ModelKind::h2xh2:
      return {0.25 * id, model.hessian_scale() / (2.0 * std::numbers::sqrt2) * id, 1.0};
    default:
      return {id / d, (trace_b / d) * id, 1.0};
  }
}

int kernel_dimension(const Matrix& m, double rel_tol) {
  const Vector sv = Eigen::JacobiSVD<Matrix>(m).singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return static_cast<int>(m.rows());
  int k = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) < rel_tol * sv(0)) ++k;
  }
  return k;
}

double singular_gap(const Matrix& m, int kernel_dim) {
  if (kernel_dim <= 0 || kernel_dim >= m.rows()) return 0.0;
  const Vector sv = Eigen::JacobiSVD<Matrix>(m).singularValues();
  const Eigen::Index k = sv.size() - kernel_dim;
  const double zero = sv(k);
  return zero > 0 ? sv(k - 1) / zero : std::numeric_limits<double>::infinity();
}

namespace {

// log det of a symmetric PSD matrix; -inf if numerically singular.
double log_det_psd(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  const Vector ev = es.eigenvalues();
  const double top = ev.cwiseAbs().maxCoeff();
  double s = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) <= 1e-12 * top) return -std::numeric_limits<double>::infinity();
    s += std::log(ev(i));
  }
  return s;
}

}  // namespace

double jacobian_ratio_J0(const SpaceModel& model, const MomentPair& mu) {
  if (!(mu.mass > 0)) {
    throw Error(ErrorKind::invalid_parameter, "J0 needs a measure of positive mass");
  }
  const Matrix q1 = mu.q1 / mu.mass;
  const Matrix q2 = mu.q2 / mu.mass;
  const int ker = kernel_dimension(q2);
  if (ker > 0) {
    throw DegenerateMeasure(ker, "Q2 has a kernel of dimension " + std::to_string(ker));
  }
  const MomentPair haar = haar_moments(model);
  const double l1 = log_det_psd(q1);
  if (std::isinf(l1)) return 0.0;
  const double log_j0 =
      l1 - log_det_psd(haar.q1) - 2.0 * (log_det_psd(q2) - log_det_psd(haar.q2));
  return std::exp(log_j0);
}

double jacobian_ratio_J0(const SpaceModel& model, const BoundaryMeasure& mu, Exec exec) {
  if (!mu.probability()) {
    throw Error(ErrorKind::invalid_parameter, "J0 is defined for probability measures");
  }
  return jacobian_ratio_J0(model, moments(model, mu, exec));
}

double mu_ab_density(double a, double b, double t1, double t2) {
  const double c = std::cos(0.5 * t1);
  const double c4 = c * c * c * c;
  return (2.0 + b + 2.0 * a * c4 + b * std::cos(t2)) /
         ((8.0 + 3.0 * a + 4.0 * b) * std::numbers::pi * std::numbers::pi);
}

BoundaryMeasure mu_ab(double a, double b, int grid_n) {
  if (a < 0 || b < 0) throw Error(ErrorKind::invalid_parameter, "mu_{a,b} needs a, b >= 0");
  QuadratureRule rule = torus_grid(grid_n);
  std::vector<double> values(rule.size());
  const double area = 4.0 * std::numbers::pi * std::numbers::pi;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    values[i] = area * mu_ab_density(a, b, rule.nodes[i].angle(0), rule.nodes[i].angle(1));
  }
  // Renormalize the round-off so the probability check holds to 1e-12.
  double mass = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) mass += rule.weights[i] * values[i];
  for (auto& v : values) v /= mass;
  return BoundaryMeasure::density(std::move(rule), std::move(values), true, 2);
}

double closed_form_J0(double a, double b) {
  const double x = 2.0 + b;
  const double num = 5.0 * a * a + 24.0 * a * x + 16.0 * x * x;
  const double den_lin = 8.0 + 3.0 * a + 4.0 * b;
  return 4.0 * num * num /
         (den_lin * den_lin * (5.0 * a + 8.0 * x) * (7.0 * a + 8.0 * x));
}

double analytic_J0(double a, double b) {
  const double x = 2.0 + b;
  const double m = 8.0 + 3.0 * a + 4.0 * b;
  return 4.0 * m * m / ((5.0 * a + 8.0 * x) * (7.0 * a + 8.0 * x));
}

std::vector<Matrix> sl3_generic_atoms(int count, std::uint64_t seed) {
  const SpaceModel model = SpaceModel::sl3();
  std::vector<Matrix> out;
  auto samples = haar_sample(3, 16 * count, seed);
  for (const auto& p : samples) {
    const Vector u = grad_busemann(model, p);
    if (u.tail(u.size() - model.rank()).norm() > 0.3) out.push_back(p.rotation());
    if (static_cast<int>(out.size()) == count) break;
  }
  if (static_cast<int>(out.size()) < count) {
    throw Error(ErrorKind::experiment_invalid, "could not draw generic SL(3) atoms");
  }
  return out;
}

std::vector<Sl3Row> sl3_degeneration(std::span<const double> deltas,
                                     std::span<const Matrix> generic_atoms) {
  const SpaceModel model = SpaceModel::sl3();
  if (generic_atoms.size() < 3) {
    throw Error(ErrorKind::experiment_invalid,
                "need at least 3 generic atoms to make Q1 nonsingular");
  }
  std::vector<BoundaryPoint> generic;
  for (const auto& k : generic_atoms) {
    BoundaryPoint p = BoundaryPoint::rotation(k);
    const Vector u = grad_busemann(model, p);
    if (u.tail(u.size() - model.rank()).norm() < 1e-6) {
      throw Error(ErrorKind::experiment_invalid, "generic atom lies in the flat");
    }
    generic.push_back(std::move(p));
  }
  const auto weyl = weyl_orbit(model);

  std::vector<Sl3Row> rows;
  for (double delta : deltas) {
    if (delta < 0 || delta >= 1) {
      throw Error(ErrorKind::invalid_parameter, "delta must lie in [0, 1)");
    }
    std::vector<BoundaryPoint> pts(weyl.begin(), weyl.end());
    std::vector<double> w(weyl.size(), (1.0 - delta) / static_cast<double>(weyl.size()));
    if (delta > 0) {
      for (const auto& g : generic) {
        pts.push_back(g);
        w.push_back(delta / static_cast<double>(generic.size()));
      }
    }
    const MomentSums m = accumulate_moments(model, pts, w, Exec::serial);
    Sl3Row row;
    row.delta = delta;
    row.det_q1 = m.q1.determinant();
    row.det_q2 = m.q2.determinant();
    row.kernel_q1 = kernel_dimension(m.q1);
    row.kernel_q2 = kernel_dimension(m.q2);
    row.gap_q1 = singular_gap(m.q1, row.kernel_q1);
    row.gap_q2 = singular_gap(m.q2, row.kernel_q2);
    row.degenerate = row.kernel_q1 > 0 || row.kernel_q2 > 0;
    row.ratio = row.degenerate ? std::numeric_limits<double>::quiet_NaN()
                               : row.det_q1 / (row.det_q2 * row.det_q2);
    if (delta > 0 && row.degenerate) {
      throw Error(ErrorKind::experiment_invalid,
                  "moments stay singular for delta > 0; generic atoms are degenerate");
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace bcg
