#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "bcg/error.hpp"
#include "bcg/jacobian.hpp"

using namespace bcg;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Independent oracle for J0(mu_{a,b}) on H2 x H2. Each factor only sees the
// 2x2 second moment M_f of its marginal; Tr M_f = 1 so det(I - M_f) =
// det M_f, and J0 = 1 / (16 det M_1 det M_2). Marginals are integrated by a
// fine midpoint rule on the raw density.
double marginal_oracle_J0(double a, double b) {
  const int n = 400;
  const double h = 2 * std::numbers::pi / n;
  double m1[3] = {0, 0, 0}, m2[3] = {0, 0, 0};
  for (int i = 0; i < n; ++i) {
    const double t1 = (i + 0.5) * h;
    for (int j = 0; j < n; ++j) {
      const double t2 = (j + 0.5) * h;
      const double w = mu_ab_density(a, b, t1, t2) * h * h;
      m1[0] += w * std::cos(t1) * std::cos(t1);
      m1[1] += w * std::cos(t1) * std::sin(t1);
      m1[2] += w * std::sin(t1) * std::sin(t1);
      m2[0] += w * std::cos(t2) * std::cos(t2);
      m2[1] += w * std::cos(t2) * std::sin(t2);
      m2[2] += w * std::sin(t2) * std::sin(t2);
    }
  }
  const double d1 = m1[0] * m1[2] - m1[1] * m1[1];
  const double d2 = m2[0] * m2[2] - m2[1] * m2[1];
  return 1.0 / (16.0 * d1 * d2);
}

BoundaryMeasure torus_atoms(std::span<const std::array<double, 3>> atoms, double s1 = 0.0,
                            double s2 = 0.0) {
  std::vector<BoundaryPoint> pts;
  std::vector<double> w;
  for (const auto& x : atoms) {
    pts.push_back(BoundaryPoint::torus(x[0] + s1, x[1] + s2));
    w.push_back(x[2]);
  }
  return BoundaryMeasure::atomic(pts, w, true);
}

}  // namespace

TEST_CASE("Haar moments in closed form", "[jacobian]") {
  const MomentPair sl4 = haar_moments(SpaceModel::sl4());
  CHECK((sl4.q1 - Matrix::Identity(9, 9) / 9.0).norm() <= 1e-15);
  CHECK((sl4.q2 - std::sqrt(20.0) / 9.0 * Matrix::Identity(9, 9)).norm() <= 1e-14);
  CHECK(sl4.mass == 1.0);

  const SpaceModel h = SpaceModel::h2xh2();
  const MomentPair grid = moments(h, mu_ab(0.0, 0.0, 16));
  const MomentPair closed = haar_moments(h);
  CHECK((grid.q1 - closed.q1).norm() <= 1e-14);
  CHECK((grid.q2 - closed.q2).norm() <= 1e-14);
}

TEST_CASE("J0 of the Haar measure is one", "[jacobian]") {
  for (const SpaceModel& m : {SpaceModel::h2(), SpaceModel::h2xh2(), SpaceModel::sl3(), SpaceModel::sl4()}) {
    CHECK_THAT(jacobian_ratio_J0(m, haar_moments(m)), WithinAbs(1.0, 1e-13));
  }
}

TEST_CASE("J0 on a 5x5 parameter grid matches the marginal oracle", "[jacobian][oracle]") {
  const SpaceModel h = SpaceModel::h2xh2();
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      const double a = 0.5 * i, b = 0.5 * j;
      const double oracle = marginal_oracle_J0(a, b);
      const double quad = jacobian_ratio_J0(h, mu_ab(a, b, 16));
      CHECK_THAT(quad, WithinRel(oracle, 1e-10));
      CHECK_THAT(analytic_J0(a, b), WithinRel(oracle, 1e-10));
      CHECK(quad >= 1.0 - 1e-12);
    }
  }
}

TEST_CASE("J0 is identically one along a = 0", "[jacobian]") {
  const SpaceModel h = SpaceModel::h2xh2();
  for (double b : {0.1, 0.9, 2.5, 7.0}) {
    CHECK_THAT(jacobian_ratio_J0(h, mu_ab(0.0, b, 16)), WithinAbs(1.0, 1e-12));
  }
}

TEST_CASE("printed closed form disagrees with the moments", "[jacobian]") {
  CHECK_THAT(closed_form_J0(1.0, 0.0), WithinRel(54756.0 / 58443.0, 1e-14));
  CHECK_THAT(analytic_J0(1.0, 0.0), WithinRel(484.0 / 483.0, 1e-14));
  CHECK(closed_form_J0(1.0, 0.0) < 1.0);
}

TEST_CASE("under-resolved grids are rejected", "[jacobian]") {
  const SpaceModel h = SpaceModel::h2xh2();
  try {
    jacobian_ratio_J0(h, mu_ab(1.0, 1.0, 6));
    FAIL("grid 6 accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::under_resolved);
  }
  CHECK_NOTHROW(jacobian_ratio_J0(h, mu_ab(1.0, 1.0, 8)));
}

TEST_CASE("moments are linear in the measure", "[jacobian]") {
  const SpaceModel m = SpaceModel::sl4();
  const auto mu = BoundaryMeasure::atomic(haar_sample(4, 7, 1), {0.3, -0.1, 0.5, 0.2, 0.4, -0.6, 1.0});
  const auto nu = BoundaryMeasure::atomic(haar_sample(4, 3, 2), {1.0, 2.0, -0.5});
  const MomentPair a = moments(m, mu);
  const MomentPair b = moments(m, nu);
  for (double t : {-1.5, 0.3, 4.0}) {
    const MomentPair c = moments(m, blend(mu, nu, t));
    const MomentPair d = a + t * b;
    CHECK((c.q1 - d.q1).norm() <= 1e-13);
    CHECK((c.q2 - d.q2).norm() <= 1e-13);
    CHECK_THAT(c.mass, WithinAbs(d.mass, 1e-14));
  }
}

TEST_CASE("J0 is invariant under rotations and rescaling of the Hessian", "[jacobian]") {
  const std::vector<std::array<double, 3>> atoms = {
      {0.1, 0.2, 0.2}, {1.3, 2.9, 0.3}, {2.2, 4.0, 0.1}, {4.4, 0.7, 0.25}, {5.5, 5.1, 0.15}};
  const SpaceModel h = SpaceModel::h2xh2();
  const double base = jacobian_ratio_J0(h, torus_atoms(atoms));
  for (auto [s1, s2] : {std::pair{0.4, 0.0}, std::pair{1.0, -2.2}, std::pair{3.0, 3.0}}) {
    CHECK_THAT(jacobian_ratio_J0(h, torus_atoms(atoms, s1, s2)), WithinRel(base, 1e-12));
  }
  CHECK_THAT(jacobian_ratio_J0(h.with_hessian_scale(std::sqrt(2.0)), torus_atoms(atoms)),
             WithinRel(base, 1e-12));

  const SpaceModel sl4 = SpaceModel::sl4();
  const auto pts = haar_sample(4, 20, 3);
  std::vector<double> w(pts.size(), 0.05);
  const auto mu = BoundaryMeasure::atomic(pts, w, true);
  const double j = jacobian_ratio_J0(sl4, mu);
  const Matrix k = haar_sample(4, 1, 4)[0].rotation();
  std::vector<BoundaryPoint> moved;
  for (const auto& p : pts) moved.push_back(BoundaryPoint::rotation(k * p.rotation()));
  CHECK_THAT(jacobian_ratio_J0(sl4, BoundaryMeasure::atomic(moved, w, true)), WithinRel(j, 1e-10));
  CHECK_THAT(jacobian_ratio_J0(sl4.with_hessian_scale(3.0), mu), WithinRel(j, 1e-12));
  // Moments overload normalizes by the mass; the measure overload insists on
  // a probability measure.
  std::vector<double> w3(pts.size(), 0.15);
  const auto heavy = BoundaryMeasure::atomic(pts, w3);
  CHECK_THAT(jacobian_ratio_J0(sl4, moments(sl4, heavy)), WithinRel(j, 1e-12));
  try {
    jacobian_ratio_J0(sl4, heavy);
    FAIL("mass 3 accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::invalid_parameter);
  }
}

TEST_CASE("degenerate measures", "[jacobian]") {
  // A single torus atom: Q2 has a kernel in each factor.
  const SpaceModel h = SpaceModel::h2xh2();
  const auto one = BoundaryMeasure::atomic({BoundaryPoint::torus(0.3, 1.0)}, {1.0}, true);
  try {
    jacobian_ratio_J0(h, one);
    FAIL("degenerate measure accepted");
  } catch (const DegenerateMeasure& e) {
    CHECK(e.kernel_dim() == 2);
    CHECK(e.kind() == ErrorKind::degenerate_measure);
  }

  // Two generic SL(4) atoms: Q2 has full rank, Q1 has rank 2.
  const SpaceModel sl4 = SpaceModel::sl4();
  const auto two = BoundaryMeasure::atomic(haar_sample(4, 2, 9), {0.5, 0.5});
  const MomentPair m = moments(sl4, two);
  CHECK(kernel_dimension(m.q1) == 7);
  CHECK(kernel_dimension(m.q2) == 0);
  CHECK(jacobian_ratio_J0(sl4, m) == 0.0);
}

TEST_CASE("kernel dimension and singular gap", "[jacobian]") {
  Matrix d = Matrix::Zero(4, 4);
  d.diagonal() << 3.0, 1.0, 1e-20, 0.0;
  CHECK(kernel_dimension(d) == 2);
  CHECK(singular_gap(d, 2) >= 1e19);
  CHECK(singular_gap(d, 0) == 0.0);
  CHECK(kernel_dimension(Matrix::Identity(3, 3)) == 0);
}

TEST_CASE("SL(3) six-Dirac degeneration", "[jacobian][sl3]") {
  const auto generic = sl3_generic_atoms(3, 3);
  REQUIRE(generic.size() == 3);
  const std::vector<double> deltas = {0.0, 1e-2, 5e-3, 1e-3, 5e-4};
  const auto rows = sl3_degeneration(deltas, generic);
  REQUIRE(rows.size() == deltas.size());
  CHECK(rows[0].degenerate);
  CHECK(rows[0].kernel_q1 == 3);
  CHECK(rows[0].kernel_q2 == 2);
  CHECK(std::isnan(rows[0].ratio));
  CHECK(rows[0].gap_q1 >= 1e10);
  CHECK(rows[0].gap_q2 >= 1e10);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK_FALSE(rows[i].degenerate);
    CHECK(rows[i].ratio > 0);
  }
  // det Q1 ~ delta^3 and det Q2 ~ delta^2, so the ratio blows up like 1/delta.
  CHECK_THAT(rows[2].ratio / rows[1].ratio, WithinRel(2.0, 0.1));
  CHECK_THAT(rows[4].ratio / rows[3].ratio, WithinRel(2.0, 0.1));
  CHECK(rows[4].ratio > rows[1].ratio * 10);
}

TEST_CASE("SL(3) experiment guards", "[jacobian][sl3]") {
  const std::vector<double> d = {0.1};
  const auto generic = sl3_generic_atoms(3, 1);
  try {
    sl3_degeneration(d, std::span(generic).first(2));
    FAIL("two atoms accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::experiment_invalid);
  }
  std::vector<Matrix> flat = generic;
  flat[1] = Matrix::Identity(3, 3);
  try {
    sl3_degeneration(d, flat);
    FAIL("flat atom accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::experiment_invalid);
  }
  const std::vector<double> bad = {1.0};
  CHECK_THROWS_AS(sl3_degeneration(bad, generic), Error);
}
