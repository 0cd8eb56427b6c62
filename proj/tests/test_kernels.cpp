#include <catch_amalgamated.hpp>

#include <cstring>
#include <random>

#include <omp.h>

#include "bcg/jacobian.hpp"
#include "bcg/kernels.hpp"

using namespace bcg;

namespace {

bool bitwise_equal(const Matrix& a, const Matrix& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), sizeof(double) * static_cast<std::size_t>(a.size())) == 0;
}

std::vector<double> normal_weights(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  std::vector<double> w(n);
  for (auto& x : w) x = d(rng);
  return w;
}

}  // namespace

TEST_CASE("reduce_sum: serial and parallel agree", "[kernels]") {
  const auto w = normal_weights(10007, 1);
  const double ser = reduce_sum(w.size(), 0.0, [&](std::size_t i) { return w[i]; }, Exec::serial);
  const double par = reduce_sum(w.size(), 0.0, [&](std::size_t i) { return w[i]; }, Exec::parallel);
  CHECK(std::abs(ser - par) <= 1e-12);
  CHECK(reduce_sum(0, 5.0, [](std::size_t) { return 1.0; }, Exec::parallel) == 5.0);
}

TEST_CASE("parallel reduction is bitwise independent of the thread count", "[kernels]") {
  const auto w = normal_weights(5000, 2);
  const auto pts = haar_sample(4, 5000, 3);
  const SpaceModel m = SpaceModel::sl4();
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const MomentSums one = accumulate_moments(m, pts, w, Exec::parallel);
  omp_set_num_threads(4);
  const MomentSums four = accumulate_moments(m, pts, w, Exec::parallel);
  omp_set_num_threads(saved);
  CHECK(bitwise_equal(one.q1, four.q1));
  CHECK(bitwise_equal(one.q2, four.q2));
  CHECK(one.mass == four.mass);
}

TEST_CASE("accumulate_moments matches a naive loop", "[kernels]") {
  const SpaceModel m = SpaceModel::sl4();
  const auto pts = haar_sample(4, 700, 5);
  const auto w = normal_weights(pts.size(), 6);
  Matrix q1 = Matrix::Zero(9, 9), q2 = Matrix::Zero(9, 9);
  double mass = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Vector u = grad_busemann(m, pts[i]);
    q1 += w[i] * u * u.transpose();
    q2 += w[i] * hess_busemann(m, pts[i]);
    mass += w[i];
  }
  for (Exec e : {Exec::serial, Exec::parallel}) {
    const MomentSums s = accumulate_moments(m, pts, w, e);
    CHECK((s.q1 - q1).norm() <= 1e-12);
    CHECK((s.q2 - q2).norm() <= 1e-12);
    CHECK(std::abs(s.mass - mass) <= 1e-12);
  }
}

TEST_CASE("moments: serial and parallel within 1e-13 on every model", "[kernels]") {
  const auto w = normal_weights(400, 7);
  {
    const SpaceModel m = SpaceModel::sl3();
    const auto mu = BoundaryMeasure::atomic(haar_sample(3, 400, 8), w);
    const MomentPair a = moments(m, mu, Exec::serial);
    const MomentPair b = moments(m, mu, Exec::parallel);
    CHECK((a.q1 - b.q1).norm() <= 1e-13);
    CHECK((a.q2 - b.q2).norm() <= 1e-13);
  }
  {
    const SpaceModel m = SpaceModel::h2xh2();
    const auto mu = mu_ab(1.3, 0.4, 32);
    const MomentPair a = moments(m, mu, Exec::serial);
    const MomentPair b = moments(m, mu, Exec::parallel);
    CHECK((a.q1 - b.q1).norm() <= 1e-13);
    CHECK((a.q2 - b.q2).norm() <= 1e-13);
  }
}

TEST_CASE("trace_pair_sum matches the double loop", "[kernels]") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> d;
  auto sym = [&] {
    Matrix x(5, 5);
    for (int i = 0; i < 25; ++i) x.data()[i] = d(rng);
    return Matrix(x + x.transpose());
  };
  std::vector<Matrix> a(150), b(90);
  for (auto& x : a) x = sym();
  for (auto& x : b) x = sym();
  const auto w = normal_weights(a.size(), 10);
  const auto v = normal_weights(b.size(), 11);
  double naive = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) naive += w[i] * v[j] * (a[i] * b[j]).trace();
  }
  for (Exec e : {Exec::serial, Exec::parallel}) {
    CHECK(std::abs(trace_pair_sum(a, w, b, v, e) - naive) <= 1e-10 * (1 + std::abs(naive)));
  }
}

TEST_CASE("for_each_index visits every index once", "[kernels]") {
  std::vector<int> hits(1000, 0);
  for_each_index(hits.size(), [&](std::size_t i) { hits[i] += 1; }, Exec::parallel);
  for (int h : hits) CHECK(h == 1);
}
