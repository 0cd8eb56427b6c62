#include "bcg/kernels.hpp"

#include "bcg/error.hpp"

namespace bcg {

namespace {

struct MomentAcc {
  Matrix q1;
  Matrix q2;
  double mass = 0.0;

  MomentAcc& operator+=(const MomentAcc& o) {
    q1 += o.q1;
    q2 += o.q2;
    mass += o.mass;
    return *this;
  }
};

}  // namespace

MomentSums accumulate_moments(const SpaceModel& model, std::span<const BoundaryPoint> points,
                              std::span<const double> weights, Exec exec) {
  if (points.size() != weights.size()) {
    throw Error(ErrorKind::invalid_parameter, "points and weights differ in length");
  }
  const int d = model.tangent_dim();
  const MomentAcc zero{Matrix::Zero(d, d), Matrix::Zero(d, d), 0.0};
  auto term = [&](std::size_t i) {
    const Vector u = grad_busemann(model, points[i]);
    MomentAcc t;
    t.q1 = weights[i] * (u * u.transpose());
    t.q2 = weights[i] * hess_busemann(model, points[i]);
    t.mass = weights[i];
    return t;
  };
  MomentAcc acc = reduce_sum(points.size(), zero, term, exec);
  // Symmetrize away the round-off asymmetry of O B O^T.
  acc.q2 = 0.5 * (acc.q2 + acc.q2.transpose()).eval();
  return {std::move(acc.q1), std::move(acc.q2), acc.mass};
}

double trace_pair_sum(std::span<const Matrix> a, std::span<const double> w,
                      std::span<const Matrix> b, std::span<const double> v, Exec exec) {
  if (a.size() != w.size() || b.size() != v.size()) {
    throw Error(ErrorKind::invalid_parameter, "matrices and weights differ in length");
  }
  auto row = [&](std::size_t i) {
    double s = 0.0;
    for (std::size_t j = 0; j < b.size(); ++j) {
      s += v[j] * (a[i].array() * b[j].array()).sum();
    }
    return w[i] * s;
  };
  return reduce_sum(a.size(), 0.0, row, exec);
}

}  // namespace bcg
