#include "bcg/second_variation.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "bcg/error.hpp"

namespace bcg {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& cell, const std::string& path, std::size_t line_no) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(cell, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != cell.size() || !std::isfinite(v)) {
    throw Error(ErrorKind::io_error,
                path + ":" + std::to_string(line_no) + ": not a number: '" + cell + "'");
  }
  return v;
}

Matrix symmetric_inverse_sqrt(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  return es.eigenvectors() * es.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() *
         es.eigenvectors().transpose();
}

}  // namespace

AtomTable AtomTable::load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io_error, "cannot open atom table '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::io_error, path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "s1,s2,s3,s4,s5,s6,w1,w2,w3") {
    throw Error(ErrorKind::io_error, path + ": unexpected header '" + line + "'");
  }
  AtomTable t;
  t.source = path;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 9) {
      throw Error(ErrorKind::io_error, path + ":" + std::to_string(line_no) + ": expected 9 fields");
    }
    std::array<double, 6> p{};
    for (int i = 0; i < 6; ++i) p[i] = parse_number(cells[i], path, line_no);
    t.params.push_back(p);
    for (int k = 0; k < 3; ++k) t.weights[k].push_back(parse_number(cells[6 + k], path, line_no));
  }
  if (t.params.size() != kRows) {
    throw Error(ErrorKind::io_error, path + ": expected " + std::to_string(kRows) + " rows, got " +
                                         std::to_string(t.params.size()));
  }
  return t;
}

BoundaryMeasure AtomTable::measure(int which, SkewLayout layout) const {
  if (which < 1 || which > 3) throw Error(ErrorKind::invalid_parameter, "weight vector must be 1, 2 or 3");
  std::vector<BoundaryPoint> pts;
  pts.reserve(params.size());
  for (const auto& p : params) pts.push_back(BoundaryPoint::rotation(skew_exp(p, layout)));
  return BoundaryMeasure::atomic(std::move(pts), weights[which - 1]);
}

double omega_b_coefficient(const SpaceModel& model) {
  const double n = model.tangent_dim();
  const double trace_b = model.reference_hessian().trace() / model.hessian_scale();
  return 2.0 * n * n / (trace_b * trace_b);
}

double omega(const SpaceModel& model, const MomentPair& mu, const MomentPair& nu) {
  const double n = model.tangent_dim();
  const double tr_a = (mu.q1.array() * nu.q1.array()).sum();
  const double tr_b = (mu.q2.array() * nu.q2.array()).sum();
  return -n * n * tr_a - n * (mu.mass * nu.mass) + omega_b_coefficient(model) * tr_b;
}

double omega(const SpaceModel& model, const BoundaryMeasure& mu, const BoundaryMeasure& nu,
             Exec exec) {
  return omega(model, moments(model, mu, exec), moments(model, nu, exec));
}

double q_kernel(const SpaceModel& model, const Matrix& sigma, const Matrix& tau) {
  auto dirac = [&](const Matrix& k) {
    const BoundaryPoint p = BoundaryPoint::rotation(k);
    const Vector u = grad_busemann(model, p);
    return MomentPair{u * u.transpose(), hess_busemann(model, p), 1.0};
  };
  return omega(model, dirac(sigma), dirac(tau));
}

double g_value(const SpaceModel& model, const Matrix& sigma) {
  const int n = model.group_dim();
  return q_kernel(model, Matrix::Identity(n, n), sigma);
}

Matrix g_grid(const SpaceModel& model, int plane, double range, int n, Exec exec) {
  if (model.kind() != ModelKind::sl4) {
    throw Error(ErrorKind::unsupported_model, "g_grid uses the SO(4) skew chart");
  }
  if (plane < 0 || plane > 2) throw Error(ErrorKind::invalid_parameter, "plane must be 0, 1 or 2");
  if (n < 2) throw Error(ErrorKind::invalid_parameter, "g_grid needs n >= 2");
  Matrix out(n, n);
  for_each_index(
      static_cast<std::size_t>(n) * n,
      [&](std::size_t idx) {
        const int i = static_cast<int>(idx) / n;
        const int j = static_cast<int>(idx) % n;
        std::array<double, 6> p{};
        p[2 * plane] = -range + 2.0 * range * i / (n - 1);
        p[2 * plane + 1] = -range + 2.0 * range * j / (n - 1);
        out(i, j) = g_value(model, skew_exp(p));
      },
      exec);
  return out;
}

double barycenter_residual(const SpaceModel& model, const BoundaryMeasure& mu) {
  Vector sum = Vector::Zero(model.tangent_dim());
  double abs_mass = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    sum += mu.weight(i) * grad_busemann(model, mu.point(i));
    abs_mass += std::abs(mu.weight(i));
  }
  if (abs_mass == 0.0) throw Error(ErrorKind::invalid_parameter, "measure has no mass");
  return sum.norm() / abs_mass;
}

MomentPair HaarBlend::moments(const SpaceModel& model) const {
  return haar * haar_moments(model) + scale * part;
}

HaarBlend positivize(const MomentPair& mu1, double lambda) {
  if (!(lambda > 0)) throw Error(ErrorKind::invalid_parameter, "lambda must be > 0");
  const double total = lambda + mu1.mass;
  if (!(total > 0)) throw Error(ErrorKind::invalid_parameter, "lambda + mass must be > 0");
  return {lambda / total, 1.0 / total, mu1};
}

double omega(const SpaceModel& model, const HaarBlend& mu, const HaarBlend& nu) {
  const MomentPair h = haar_moments(model);
  return mu.haar * nu.haar * omega(model, h, h) +
         mu.haar * nu.scale * omega(model, h, nu.part) +
         mu.scale * nu.haar * omega(model, mu.part, h) +
         mu.scale * nu.scale * omega(model, mu.part, nu.part);
}

double min_positivizing_lambda(std::span<const double> weights, double eps) {
  double negative = 0.0;
  for (double w : weights) {
    if (w < 0) negative -= w;
  }
  return negative * so4_mollifier_density_bound(eps);
}

double f_minus_one(const SpaceModel& model, const MomentPair& mu, double t) {
  const MomentPair haar = haar_moments(model);
  const int d = model.tangent_dim();
  double log_f = d * std::log1p(t * mu.mass);
  auto add = [&](const Matrix& qh, const Matrix& m, double coef) {
    const Matrix w = symmetric_inverse_sqrt(qh);
    Eigen::SelfAdjointEigenSolver<Matrix> es(w * m * w, Eigen::EigenvaluesOnly);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      const double x = t * es.eigenvalues()(i);
      if (!(x > -1.0)) {
        throw DegenerateMeasure(1, "blend leaves the positive cone at t = " + std::to_string(t));
      }
      log_f += coef * std::log1p(x);
    }
  };
  if (!(1.0 + t * mu.mass > 0)) {
    throw Error(ErrorKind::invalid_parameter, "blend has nonpositive mass");
  }
  add(haar.q1, mu.q1, 1.0);
  add(haar.q2, mu.q2, -2.0);
  return std::expm1(log_f);
}

double f_minus_one(const SpaceModel& model, const HaarBlend& mu, double t) {
  const double den = 1.0 + t * mu.haar;
  if (!(den > 0)) throw Error(ErrorKind::invalid_parameter, "blend has nonpositive mass");
  return f_minus_one(model, mu.part, t * mu.scale / den);
}

std::vector<double> f_curve(const SpaceModel& model, const HaarBlend& mu,
                            std::span<const double> ts) {
  std::vector<double> out;
  out.reserve(ts.size());
  for (double t : ts) out.push_back(1.0 + f_minus_one(model, mu, t));
  return out;
}

double f_second_derivative(const SpaceModel& model, const HaarBlend& mu, double h) {
  auto d2 = [&](double s) {
    return (f_minus_one(model, mu, s) + f_minus_one(model, mu, -s)) / (s * s);
  };
  return (4.0 * d2(0.5 * h) - d2(h)) / 3.0;
}

double f_first_derivative(const SpaceModel& model, const HaarBlend& mu, double h) {
  return (f_minus_one(model, mu, h) - f_minus_one(model, mu, -h)) / (2.0 * h);
}

SchurResult schur_check(const SpaceModel& model, int samples, std::uint64_t seed, Exec exec) {
  if (!model.is_sl()) throw Error(ErrorKind::unsupported_model, "Schur check needs an SL model");
  const auto pts = haar_sample(model.group_dim(), samples, seed);
  const std::vector<double> w(pts.size(), 1.0 / samples);
  const MomentSums m = accumulate_moments(model, pts, w, exec);
  const MomentPair haar = haar_moments(model);
  SchurResult r;
  r.samples = samples;
  r.seed = seed;
  r.err_a = (m.q1 - haar.q1).norm();
  r.err_b = (m.q2 - haar.q2).norm();
  r.bound = 3.0 / std::sqrt(static_cast<double>(samples));
  return r;
}

SecondVariationReport run_second_variation(const AtomTable& table, std::span<const int> which,
                                           const SecondVariationOptions& options) {
  SpaceModel model = SpaceModel::sl4();
  if (options.printed_b) model = model.with_hessian_scale(std::sqrt(2.0));
  SecondVariationReport rep;
  rep.options = options;
  rep.schur = schur_check(model, options.mc_samples, options.seed);
  for (int k : which) {
    const BoundaryMeasure mu1 = table.measure(k, options.layout);
    const MomentPair m1 = moments(model, mu1);
    WeightReport w;
    w.which = k;
    w.mass = m1.mass;
    w.residual = barycenter_residual(model, mu1);
    w.omega = omega(model, m1, m1);
    w.omega_printed = kPrintedOmega[k - 1];
    w.lambda = min_positivizing_lambda(table.weights[k - 1], options.eps);
    const HaarBlend m2 = positivize(m1, w.lambda);
    w.omega_mu2 = omega(model, m2, m2);
    w.f_second = f_second_derivative(model, m2, options.fd_step);
    w.f_max_minus_one = -std::numeric_limits<double>::infinity();
    w.f_first = f_first_derivative(model, m2, options.fd_step);
    for (int i = 0; i < options.t_points; ++i) {
      const double t =
          -options.t_max + 2.0 * options.t_max * i / std::max(1, options.t_points - 1);
      w.t.push_back(t);
      w.f_minus_one.push_back(f_minus_one(model, m2, t));
      if (t > 0) {
        w.f_max_minus_one = std::max(w.f_max_minus_one, w.f_minus_one.back());
        if (w.f_minus_one.back() > 0) w.f_exceeds_one = true;
      }
    }
    rep.weights.push_back(std::move(w));
  }
  return rep;
}

}  // namespace bcg
