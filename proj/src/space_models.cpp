#include "bcg/space_models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <unsupported/Eigen/MatrixFunctions>

#include "bcg/error.hpp"

namespace bcg {

namespace {

Matrix unit_diag(std::initializer_list<double> d) {
  Vector v(static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (double x : d) v(i++) = x;
  v /= v.norm();
  return v.asDiagonal();
}

void require_rotation(const Matrix& k, int n) {
  if (k.rows() != n || k.cols() != n) {
    throw Error(ErrorKind::invalid_rotation, "rotation has the wrong size");
  }
  if ((k.transpose() * k - Matrix::Identity(n, n)).norm() > 1e-10) {
    throw Error(ErrorKind::invalid_rotation, "matrix is not orthogonal");
  }
}

}  // namespace

SpaceModel SpaceModel::h2() {
  SpaceModel m;
  m.kind_ = ModelKind::h2;
  m.name_ = "H2";
  m.tangent_dim_ = 2;
  m.rank_ = 1;
  m.chart_ = Chart::circle;
  m.roots_.flat_dim = 1;
  m.reference_hessian_diag_ = Vector::Zero(2);
  m.reference_hessian_diag_(1) = 1.0;
  return m;
}

SpaceModel SpaceModel::h2xh2() {
  SpaceModel m;
  m.kind_ = ModelKind::h2xh2;
  m.name_ = "H2xH2";
  m.tangent_dim_ = 4;
  m.rank_ = 2;
  m.chart_ = Chart::torus;
  m.roots_.flat_dim = 2;
  m.reference_hessian_diag_ = Vector::Zero(4);
  m.reference_hessian_diag_(1) = m.reference_hessian_diag_(3) = 1.0 / std::numbers::sqrt2;
  return m;
}

SpaceModel SpaceModel::sl3() { return make_sl(3); }
SpaceModel SpaceModel::sl4() { return make_sl(4); }

SpaceModel SpaceModel::make_sl(int n) {
  SpaceModel m;
  m.kind_ = n == 3 ? ModelKind::sl3 : ModelKind::sl4;
  m.name_ = n == 3 ? "SL3/SO3" : "SL4/SO4";
  m.tangent_dim_ = n * (n + 1) / 2 - 1;
  m.rank_ = n - 1;
  m.chart_ = n == 3 ? Chart::so3 : Chart::so4;
  m.roots_.flat_dim = n - 1;

  // b+ is the normalized sum of positive roots e_i - e_j (i < j).
  Vector b(n);
  for (int i = 0; i < n; ++i) b(i) = n - 1 - 2 * i;
  b /= b.norm();
  m.roots_.b_plus = b;

  if (n == 3) {
    m.basis_.push_back(b.asDiagonal());
    m.basis_.push_back(unit_diag({1, -2, 1}));
  } else {
    m.basis_.push_back(b.asDiagonal());
    m.basis_.push_back(unit_diag({1, -1, -1, 1}));
    m.basis_.push_back(unit_diag({1, -3, 3, -1}));
  }

  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      m.roots_.positive_roots.push_back({i, j, 1, b(i) - b(j)});
    }
  }
  std::stable_sort(m.roots_.positive_roots.begin(), m.roots_.positive_roots.end(),
                   [](const PositiveRoot& x, const PositiveRoot& y) {
                     return x.value < y.value - 1e-12;
                   });
  m.reference_hessian_diag_ = Vector::Zero(m.tangent_dim_);
  int idx = m.rank_;
  for (const auto& r : m.roots_.positive_roots) {
    Matrix e = Matrix::Zero(n, n);
    e(r.i, r.j) = e(r.j, r.i) = 1.0 / std::numbers::sqrt2;
    m.basis_.push_back(e);
    m.reference_hessian_diag_(idx++) = r.value;
  }
  return m;
}

int SpaceModel::group_dim() const {
  switch (kind_) {
    case ModelKind::sl3: return 3;
    case ModelKind::sl4: return 4;
    default: return 0;
  }
}

Matrix SpaceModel::reference_hessian() const {
  return (hessian_scale_ * reference_hessian_diag_).asDiagonal();
}

SpaceModel SpaceModel::with_hessian_scale(double scale) const {
  if (!(scale > 0)) throw Error(ErrorKind::invalid_parameter, "hessian scale must be > 0");
  SpaceModel m = *this;
  m.hessian_scale_ = scale;
  return m;
}

Vector SpaceModel::coordinates(const Matrix& x) const {
  Vector c(tangent_dim_);
  for (int i = 0; i < tangent_dim_; ++i) c(i) = (basis_[i].array() * x.array()).sum();
  return c;
}

Matrix adjoint_rep(const SpaceModel& model, const Matrix& k) {
  if (!model.is_sl()) {
    throw Error(ErrorKind::unsupported_model, "adjoint_rep needs an SL model");
  }
  const int n = model.group_dim();
  require_rotation(k, n);
  const int d = model.tangent_dim();
  Matrix o(d, d);
  for (int j = 0; j < d; ++j) {
    o.col(j) = model.coordinates(k * model.basis()[j] * k.transpose());
  }
  return o;
}

Matrix skew_matrix(std::span<const double> s, SkewLayout layout) {
  if (s.size() != 6) throw Error(ErrorKind::invalid_parameter, "skew_exp needs 6 parameters");
  Matrix x = Matrix::Zero(4, 4);
  if (layout == SkewLayout::row_major) {
    x(0, 1) = s[0]; x(0, 2) = s[1]; x(0, 3) = s[2];
    x(1, 2) = s[3]; x(1, 3) = s[4];
    x(2, 3) = s[5];
  } else {
    x(0, 1) = s[0]; x(0, 2) = s[3]; x(0, 3) = s[5];
    x(1, 2) = s[1]; x(1, 3) = s[4];
    x(2, 3) = s[2];
  }
  return x - Matrix(x.transpose());
}

Matrix skew_exp(std::span<const double> params, SkewLayout layout) {
  Matrix k = skew_matrix(params, layout).exp();
  return k;
}

Vector grad_busemann(const SpaceModel& model, const BoundaryPoint& theta) {
  if (theta.chart() != model.chart()) {
    throw Error(ErrorKind::incompatible_measures, "boundary point is on the wrong chart");
  }
  switch (model.kind()) {
    case ModelKind::h2: {
      Vector u(2);
      u << std::cos(theta.angle()), std::sin(theta.angle());
      return u;
    }
    case ModelKind::h2xh2: {
      Vector u(4);
      u << std::cos(theta.angle(0)), std::sin(theta.angle(0)), std::cos(theta.angle(1)),
          std::sin(theta.angle(1));
      return u / std::numbers::sqrt2;
    }
    default: {
      const Matrix& k = theta.rotation();
      const Matrix b = model.roots().b_plus.asDiagonal();
      return model.coordinates(k * b * k.transpose());
    }
  }
}

Matrix hess_busemann(const SpaceModel& model, const BoundaryPoint& theta) {
  const double c = model.hessian_scale();
  switch (model.kind()) {
    case ModelKind::h2: {
      const Vector u = grad_busemann(model, theta);
      return c * (Matrix::Identity(2, 2) - u * u.transpose());
    }
    case ModelKind::h2xh2: {
      Matrix h = Matrix::Zero(4, 4);
      for (int f = 0; f < 2; ++f) {
        Vector v(2);
        v << std::cos(theta.angle(f)), std::sin(theta.angle(f));
        h.block(2 * f, 2 * f, 2, 2) = Matrix::Identity(2, 2) - v * v.transpose();
      }
      return (c / std::numbers::sqrt2) * h;
    }
    default: {
      if (theta.chart() != model.chart()) {
        throw Error(ErrorKind::incompatible_measures, "boundary point is on the wrong chart");
      }
      const Matrix o = adjoint_rep(model, theta.rotation());
      return o * model.reference_hessian() * o.transpose();
    }
  }
}

std::vector<BoundaryPoint> weyl_orbit(const SpaceModel& model) {
  if (!model.is_sl()) {
    throw Error(ErrorKind::unsupported_model, "Weyl orbit is defined for the SL models");
  }
  const int n = model.group_dim();
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<BoundaryPoint> out;
  do {
    Matrix p = Matrix::Zero(n, n);
    for (int j = 0; j < n; ++j) p(perm[j], j) = 1.0;
    if (p.determinant() < 0) p.row(0) *= -1.0;
    out.push_back(BoundaryPoint::rotation(p));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

double volume_entropy(const SpaceModel& model, double length_scale) {
  if (!(length_scale > 0)) {
    throw Error(ErrorKind::invalid_parameter, "length scale must be > 0");
  }
  switch (model.kind()) {
    case ModelKind::h2: return 1.0 / length_scale;
    case ModelKind::h2xh2: return std::numbers::sqrt2 / length_scale;
    default:
      throw Error(ErrorKind::not_implemented, "volume entropy is only provided for H2 models");
  }
}

}  // namespace bcg
