#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <set>

#include "bcg/error.hpp"
#include "bcg/measure.hpp"
#include "bcg/space_models.hpp"

using namespace bcg;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Least-squares fit of log S(R) = h R + alpha log R + c; returns h.
double fitted_growth_rate(auto&& log_area, double r0, double r1, int samples) {
  Matrix a(samples, 3);
  Vector y(samples);
  for (int i = 0; i < samples; ++i) {
    const double r = r0 + (r1 - r0) * i / (samples - 1);
    a(i, 0) = r;
    a(i, 1) = std::log(r);
    a(i, 2) = 1.0;
    y(i) = log_area(r);
  }
  return a.colPivHouseholderQr().solve(y)(0);
}

}  // namespace

TEST_CASE("model dimensions and ranks", "[models]") {
  CHECK(SpaceModel::h2().tangent_dim() == 2);
  CHECK(SpaceModel::h2().rank() == 1);
  CHECK(SpaceModel::h2xh2().tangent_dim() == 4);
  CHECK(SpaceModel::h2xh2().rank() == 2);
  CHECK(SpaceModel::sl3().tangent_dim() == 5);
  CHECK(SpaceModel::sl3().rank() == 2);
  CHECK(SpaceModel::sl4().tangent_dim() == 9);
  CHECK(SpaceModel::sl4().rank() == 3);
  CHECK(SpaceModel::sl4().chart() == Chart::so4);
  CHECK(SpaceModel::h2xh2().group_dim() == 0);
}

TEST_CASE("SL bases are orthonormal for the trace form", "[models]") {
  for (const SpaceModel& m : {SpaceModel::sl3(), SpaceModel::sl4()}) {
    const auto& b = m.basis();
    REQUIRE(static_cast<int>(b.size()) == m.tangent_dim());
    for (std::size_t i = 0; i < b.size(); ++i) {
      CHECK(std::abs(b[i].trace()) <= 1e-15);
      CHECK((b[i] - b[i].transpose()).norm() == 0.0);
      for (std::size_t j = 0; j < b.size(); ++j) {
        CHECK_THAT((b[i] * b[j]).trace(), WithinAbs(i == j ? 1.0 : 0.0, 1e-15));
      }
    }
  }
}

TEST_CASE("SL(4) roots at b+ and the reference Hessian", "[models]") {
  const SpaceModel m = SpaceModel::sl4();
  const Vector& b = m.roots().b_plus;
  CHECK_THAT(b(0), WithinAbs(3.0 / std::sqrt(20.0), 1e-15));
  CHECK_THAT(b(3), WithinAbs(-3.0 / std::sqrt(20.0), 1e-15));
  const std::vector<double> expect = {1, 1, 1, 2, 2, 3};
  const auto& roots = m.roots().positive_roots;
  REQUIRE(roots.size() == 6);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    CHECK_THAT(roots[i].value, WithinAbs(expect[i] / std::sqrt(5.0), 1e-15));
    CHECK(roots[i].multiplicity == 1);
  }
  const Matrix h = m.reference_hessian();
  CHECK_THAT(h.trace(), WithinAbs(std::sqrt(20.0), 1e-14));
  for (int i = 0; i < 3; ++i) CHECK(h(i, i) == 0.0);
  CHECK_THAT(m.with_hessian_scale(std::sqrt(2.0)).reference_hessian().trace(),
             WithinAbs(std::sqrt(40.0), 1e-14));
  CHECK_THROWS_AS(m.with_hessian_scale(0.0), Error);
}

TEST_CASE("SL(3) roots and rank", "[models]") {
  const SpaceModel m = SpaceModel::sl3();
  const auto& roots = m.roots().positive_roots;
  REQUIRE(roots.size() == 3);
  // b+ = (1, 0, -1)/sqrt2: root values 1/sqrt2, 1/sqrt2, sqrt2.
  CHECK_THAT(roots[0].value, WithinAbs(1 / std::numbers::sqrt2, 1e-15));
  CHECK_THAT(roots[1].value, WithinAbs(1 / std::numbers::sqrt2, 1e-15));
  CHECK_THAT(roots[2].value, WithinAbs(std::numbers::sqrt2, 1e-15));
}

TEST_CASE("adjoint representation is an orthogonal homomorphism", "[models]") {
  for (const SpaceModel& m : {SpaceModel::sl3(), SpaceModel::sl4()}) {
    const int n = m.group_dim();
    const auto ks = haar_sample(n, 12, 41);
    for (std::size_t i = 0; i + 1 < ks.size(); ++i) {
      const Matrix& a = ks[i].rotation();
      const Matrix& b = ks[i + 1].rotation();
      const Matrix oa = adjoint_rep(m, a);
      const int d = m.tangent_dim();
      CHECK((oa.transpose() * oa - Matrix::Identity(d, d)).norm() <= 1e-13);
      CHECK((adjoint_rep(m, a * b) - oa * adjoint_rep(m, b)).norm() <= 1e-13);
      CHECK((adjoint_rep(m, a.transpose()) - oa.transpose()).norm() <= 1e-13);
    }
    CHECK_THROWS_AS(adjoint_rep(m, Matrix::Identity(n, n) * 2.0), Error);
  }
  CHECK_THROWS_AS(adjoint_rep(SpaceModel::h2(), Matrix::Identity(2, 2)), Error);
}

TEST_CASE("Busemann fields: unit gradient, PSD Hessian with gradient in its kernel",
          "[models][fields]") {
  const SpaceModel sl4 = SpaceModel::sl4();
  for (const auto& p : haar_sample(4, 30, 8)) {
    const Vector u = grad_busemann(sl4, p);
    const Matrix h = hess_busemann(sl4, p);
    CHECK_THAT(u.norm(), WithinAbs(1.0, 1e-14));
    CHECK((h * u).norm() <= 1e-13);
    CHECK_THAT(h.trace(), WithinAbs(std::sqrt(20.0), 1e-13));
    const Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    CHECK(es.eigenvalues().minCoeff() >= -1e-13);
    // Spectrum is the root values plus a 3-dimensional kernel.
    int zeros = 0;
    for (int i = 0; i < 9; ++i) zeros += std::abs(es.eigenvalues()(i)) <= 1e-12;
    CHECK(zeros == 3);
  }
  const SpaceModel h2 = SpaceModel::h2();
  for (double t : {0.0, 1.0, 4.0}) {
    const BoundaryPoint p = BoundaryPoint::circle(t);
    const Vector u = grad_busemann(h2, p);
    CHECK((hess_busemann(h2, p) - (Matrix::Identity(2, 2) - u * u.transpose())).norm() <= 1e-15);
  }
  CHECK_THROWS_AS(grad_busemann(sl4, BoundaryPoint::circle(0.0)), Error);
  CHECK_THROWS_AS(hess_busemann(sl4, BoundaryPoint::torus(0.0, 0.0)), Error);
}

TEST_CASE("Haar averages of the fields match the Schur values", "[models][fields]") {
  // Independent Monte-Carlo average; the expectation of O M O^T over Haar is
  // (Tr M / d) I because the representation is irreducible.
  const SpaceModel m = SpaceModel::sl4();
  const int n = 40000;
  const auto s = haar_sample(4, n, 1234);
  Matrix a = Matrix::Zero(9, 9), h = Matrix::Zero(9, 9);
  for (const auto& p : s) {
    const Vector u = grad_busemann(m, p);
    a += u * u.transpose();
    h += hess_busemann(m, p);
  }
  a /= n;
  h /= n;
  const Matrix id = Matrix::Identity(9, 9);
  CHECK((a - id / 9.0).norm() <= 3.0 / std::sqrt(n));
  CHECK((h - std::sqrt(20.0) / 9.0 * id).norm() <= 3.0 / std::sqrt(n));
}

TEST_CASE("Weyl orbits", "[models][weyl]") {
  for (const auto& [m, size] : {std::pair{SpaceModel::sl3(), 6}, std::pair{SpaceModel::sl4(), 24}}) {
    const auto orbit = weyl_orbit(m);
    REQUIRE(static_cast<int>(orbit.size()) == size);
    Vector sum = Vector::Zero(m.tangent_dim());
    std::set<std::vector<double>> images;
    for (const auto& p : orbit) {
      CHECK_THAT(p.rotation().determinant(), WithinAbs(1.0, 1e-15));
      const Vector u = grad_busemann(m, p);
      // Every image of b+ stays in the flat (first rank coordinates).
      CHECK(u.tail(m.tangent_dim() - m.rank()).norm() <= 1e-15);
      sum += u;
      std::vector<double> key(u.data(), u.data() + u.size());
      for (double& x : key) x = std::round(x * 1e9) / 1e9;
      images.insert(key);
    }
    CHECK(sum.norm() <= 1e-14);
    CHECK(static_cast<int>(images.size()) == size);
  }
  CHECK_THROWS_AS(weyl_orbit(SpaceModel::h2xh2()), Error);
}

TEST_CASE("skew_exp layouts", "[models]") {
  const std::array<double, 6> s = {0.1, -0.4, 0.25, 0.7, -0.3, 0.05};
  for (auto layout : {SkewLayout::row_major, SkewLayout::printed}) {
    const Matrix k = skew_exp(s, layout);
    CHECK((k.transpose() * k - Matrix::Identity(4, 4)).norm() <= 1e-14);
    CHECK_THAT(k.determinant(), WithinAbs(1.0, 1e-14));
  }
  const Matrix r = skew_matrix(s, SkewLayout::row_major);
  CHECK(r(0, 1) == 0.1);
  CHECK(r(0, 3) == 0.25);
  CHECK(r(1, 2) == 0.7);
  CHECK(r(2, 3) == 0.05);
  CHECK(r(3, 2) == -0.05);
  const Matrix p = skew_matrix(s, SkewLayout::printed);
  CHECK(p(0, 2) == 0.7);
  CHECK(p(1, 2) == -0.4);
  CHECK(p(2, 3) == 0.25);
  CHECK_THROWS_AS(skew_matrix(std::vector<double>{1.0, 2.0}), Error);
}

TEST_CASE("volume entropy of the hyperbolic models", "[models][entropy]") {
  CHECK(volume_entropy(SpaceModel::h2()) == 1.0);
  CHECK_THAT(volume_entropy(SpaceModel::h2xh2()), WithinAbs(std::numbers::sqrt2, 1e-15));
  CHECK_THAT(volume_entropy(SpaceModel::h2(), 3.0), WithinAbs(1.0 / 3.0, 1e-15));
  CHECK_THROWS_AS(volume_entropy(SpaceModel::h2(), 0.0), Error);
  try {
    volume_entropy(SpaceModel::sl4());
    FAIL("SL(4) entropy returned");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::not_implemented);
  }
}

TEST_CASE("H2 x H2 sphere growth rate is sqrt 2", "[models][entropy]") {
  // Sphere of radius R in the product: S(R) = 4 pi^2 R int_0^{pi/2}
  // sinh(R cos p) sinh(R sin p) dp.
  std::vector<double> x, w;
  gauss_legendre(200, 0.0, 0.5 * std::numbers::pi, x, w);
  auto log_area = [&](double r) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      s += w[i] * std::sinh(r * std::cos(x[i])) * std::sinh(r * std::sin(x[i]));
    }
    return std::log(4 * std::numbers::pi * std::numbers::pi * r * s);
  };
  const double h = fitted_growth_rate(log_area, 5.0, 15.0, 41);
  CHECK_THAT(h, WithinRel(volume_entropy(SpaceModel::h2xh2()), 0.02));
}

TEST_CASE("H2 entropy scales inversely with length", "[models][entropy]") {
  for (double scale : {0.5, 2.0, 4.0}) {
    // Circle of radius R in the metric scale^2 g: 2 pi scale sinh(R / scale).
    auto log_area = [&](double r) {
      return std::log(2 * std::numbers::pi * scale * std::sinh(r / scale));
    };
    const double h = fitted_growth_rate(log_area, 10.0 * scale, 30.0 * scale, 41);
    CHECK_THAT(h, WithinRel(volume_entropy(SpaceModel::h2(), scale), 1e-6));
  }
}
