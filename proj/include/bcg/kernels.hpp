#pragma once

// Data-parallel kernels shared by the compute modules. Every kernel has a
// serial reference path and an OpenMP path. The OpenMP path sums fixed-size
// blocks in index order, so its result does not depend on the thread count.

#include <cstddef>
#include <span>
#include <vector>

#include "bcg/space_models.hpp"

namespace bcg {

enum class Exec { serial, parallel };

inline constexpr std::size_t kReductionBlock = 64;

/// Sum of term(i) for i in [0, n). T must support += and copy.
template <class T, class F>
T reduce_sum(std::size_t n, const T& zero, F&& term, Exec exec) {
  if (exec == Exec::serial || n <= kReductionBlock) {
    T acc = zero;
    for (std::size_t i = 0; i < n; ++i) acc += term(i);
    return acc;
  }
  const std::size_t blocks = (n + kReductionBlock - 1) / kReductionBlock;
  std::vector<T> partial(blocks, zero);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(blocks); ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kReductionBlock;
    const std::size_t hi = std::min(n, lo + kReductionBlock);
    T acc = zero;
    for (std::size_t i = lo; i < hi; ++i) acc += term(i);
    partial[static_cast<std::size_t>(b)] = std::move(acc);
  }
  T acc = zero;
  for (const auto& p : partial) acc += p;
  return acc;
}

/// Calls body(i) for i in [0, n); iterations must be independent.
template <class F>
void for_each_index(std::size_t n, F&& body, Exec exec) {
  if (exec == Exec::serial) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    body(static_cast<std::size_t>(i));
  }
}

struct MomentSums {
  Matrix q1;
  Matrix q2;
  double mass = 0.0;
};

/// sum_i w_i u(theta_i) u(theta_i)^T and sum_i w_i H(theta_i).
MomentSums accumulate_moments(const SpaceModel& model, std::span<const BoundaryPoint> points,
                              std::span<const double> weights, Exec exec = Exec::parallel);

/// sum_i sum_j w_i v_j Tr(a_i b_j) for symmetric matrices.
double trace_pair_sum(std::span<const Matrix> a, std::span<const double> w,
                      std::span<const Matrix> b, std::span<const double> v,
                      Exec exec = Exec::parallel);

}  // namespace bcg
