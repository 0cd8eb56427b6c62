#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bcg/kernels.hpp"
#include "bcg/measure.hpp"
#include "bcg/space_models.hpp"

namespace bcg {

/// Q1 = int dB^2 dmu and Q2 = int DdB dmu, with the total mass of mu.
struct MomentPair {
  Matrix q1;
  Matrix q2;
  double mass = 0.0;

  MomentPair& operator+=(const MomentPair& o);
  friend MomentPair operator+(MomentPair a, const MomentPair& b) { return a += b; }
  friend MomentPair operator*(double t, MomentPair a);
};

/// Moments of a measure on the model's chart. Density measures must be
/// resolved by their grid (n >= 4 * max harmonic degree).
MomentPair moments(const SpaceModel& model, const BoundaryMeasure& mu,
                   Exec exec = Exec::parallel);

/// Moments of the normalized Haar (uniform) measure, in closed form.
/// For the SL models this uses irreducibility of the adjoint representation:
/// int O M O^T = (Tr M / dim) I.
MomentPair haar_moments(const SpaceModel& model);

/// Singular values below rel_tol * (largest singular value) count as zero.
int kernel_dimension(const Matrix& m, double rel_tol = 1e-12);

/// J0(mu) = [det Q1(mu) / det Q1(Haar)] * [det Q2(Haar) / det Q2(mu)]^2 for
/// the normalized measure mu / mass. Throws DegenerateMeasure when Q2 is
/// singular.
double jacobian_ratio_J0(const SpaceModel& model, const MomentPair& mu);
double jacobian_ratio_J0(const SpaceModel& model, const BoundaryMeasure& mu,
                         Exec exec = Exec::parallel);

/// Density of mu_{a,b} on the torus, w.r.t. dt1 dt2.
double mu_ab_density(double a, double b, double t1, double t2);
/// mu_{a,b} sampled on the n x n torus grid, as a probability measure.
BoundaryMeasure mu_ab(double a, double b, int grid_n);

/// The published rational closed form for J0(mu_{a,b}), evaluated verbatim.
double closed_form_J0(double a, double b);
/// Closed form from analytic moment integration of the mu_{a,b} density:
/// J0 = 4 (8 + 3a + 4b)^2 / ((5a + 8(2+b)) (7a + 8(2+b))).
double analytic_J0(double a, double b);

struct Sl3Row {
  double delta = 0.0;
  double det_q1 = 0.0;
  double det_q2 = 0.0;
  /// det Q1 / det Q2^2; NaN when degenerate.
  double ratio = 0.0;
  bool degenerate = false;
  int kernel_q1 = 0;
  int kernel_q2 = 0;
  /// Smallest nonzero over largest zero singular value (0 without kernel).
  double gap_q1 = 0.0;
  double gap_q2 = 0.0;
};

/// sigma_{d-k} / sigma_{d-k+1} for a kernel of dimension k; 0 when k = 0.
double singular_gap(const Matrix& m, int kernel_dim);

/// Generic rotations for the SL(3) experiment: Haar samples whose b+ image
/// leaves the flat.
std::vector<Matrix> sl3_generic_atoms(int count, std::uint64_t seed);

/// Six Weyl atoms with weight (1 - delta)/6 each plus the generic atoms with
/// weight delta/count each. At delta = 0, Q1 has a 3-dimensional kernel and
/// Q2 a 2-dimensional kernel.
std::vector<Sl3Row> sl3_degeneration(std::span<const double> deltas,
                                     std::span<const Matrix> generic_atoms);

}  // namespace bcg
