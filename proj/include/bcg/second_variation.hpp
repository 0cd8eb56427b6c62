#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bcg/jacobian.hpp"
#include "bcg/measure.hpp"
#include "bcg/space_models.hpp"

namespace bcg {

/// 55 rotation parameters with three weight vectors, as shipped in
/// data/sl4_atoms.csv (header s1..s6,w1,w2,w3).
struct AtomTable {
  std::vector<std::array<double, 6>> params;
  std::array<std::vector<double>, 3> weights;
  std::string source;

  static constexpr std::size_t kRows = 55;

  /// Throws io_error (with the path) on unreadable or malformed files.
  static AtomTable load_csv(const std::string& path);

  std::size_t size() const { return params.size(); }
  /// Signed atomic measure for weight vector `which` in {1, 2, 3}.
  BoundaryMeasure measure(int which, SkewLayout layout = SkewLayout::row_major) const;
};

/// Coefficient of the B-term of Omega: 2 n^2 / (Tr B0)^2 for the normalized
/// model, independent of any Hessian rescaling.
double omega_b_coefficient(const SpaceModel& model);

/// Polarized second variation of J0 at Haar measure:
/// Omega = -n^2 Tr(Q1 Q1') - n m m' + c_B Tr(Q2 Q2').
/// For SL(4), n = 9 and c_B = 81/10.
double omega(const SpaceModel& model, const MomentPair& mu, const MomentPair& nu);
double omega(const SpaceModel& model, const BoundaryMeasure& mu, const BoundaryMeasure& nu,
             Exec exec = Exec::parallel);

/// q(sigma, tau) = Omega(delta_sigma, delta_tau).
double q_kernel(const SpaceModel& model, const Matrix& sigma, const Matrix& tau);
/// g(sigma) = q(1, sigma).
double g_value(const SpaceModel& model, const Matrix& sigma);

/// g(skew_exp(s e_i + t e_j)) over [-range, range]^2, n x n; plane 0, 1, 2
/// selects (e1,e2), (e3,e4), (e5,e6). Row index follows s, column index t.
Matrix g_grid(const SpaceModel& model, int plane, double range, int n,
              Exec exec = Exec::parallel);

/// |sum_i w_i u(sigma_i)| / sum_i |w_i|.
double barycenter_residual(const SpaceModel& model, const BoundaryMeasure& mu);

/// haar * mu0 + scale * part, with mu0 the Haar measure. Kept unexpanded so
/// that measures very close to Haar lose no precision in Omega and f.
struct HaarBlend {
  double haar = 0.0;
  double scale = 1.0;
  MomentPair part;

  double mass() const { return haar + scale * part.mass; }
  MomentPair moments(const SpaceModel& model) const;
};

/// (lambda mu0 + mu1) / (lambda + mass(mu1)).
HaarBlend positivize(const MomentPair& mu1, double lambda);

/// Omega expanded bilinearly over the Haar and atomic parts.
double omega(const SpaceModel& model, const HaarBlend& mu, const HaarBlend& nu);

/// Smallest lambda for which lambda * Haar + (mollified mu1) is a
/// nonnegative measure, using the SO(4) mollifier density bound at eps.
double min_positivizing_lambda(std::span<const double> weights, double eps);

/// f(t) = J0((mu0 + t mu) / mass) for the moments of mu, via the stable
/// log1p form. Returns f(t) - 1 to keep precision near t = 0.
double f_minus_one(const SpaceModel& model, const MomentPair& mu, double t);
/// For mu = a mu0 + b nu: (mu0 + t mu) is proportional to mu0 + tau nu with
/// tau = t b / (1 + t a), so f is evaluated through nu.
double f_minus_one(const SpaceModel& model, const HaarBlend& mu, double t);
std::vector<double> f_curve(const SpaceModel& model, const HaarBlend& mu,
                            std::span<const double> ts);

/// Central second difference of f at 0 with step h, Richardson-extrapolated
/// from steps h and h/2.
double f_second_derivative(const SpaceModel& model, const HaarBlend& mu, double h);
/// Central first difference of f at 0 with step h.
double f_first_derivative(const SpaceModel& model, const HaarBlend& mu, double h);

/// Frobenius errors of the Monte-Carlo Haar averages of O A O^T and
/// O B0 O^T against their Schur values.
struct SchurResult {
  int samples = 0;
  std::uint64_t seed = 0;
  double err_a = 0.0;
  double err_b = 0.0;
  double bound = 0.0;  // 3 / sqrt(N)
};
SchurResult schur_check(const SpaceModel& model, int samples, std::uint64_t seed,
                        Exec exec = Exec::parallel);

struct WeightReport {
  int which = 0;
  double mass = 0.0;
  double residual = 0.0;
  double omega = 0.0;
  double omega_printed = 0.0;
  double lambda = 0.0;
  double omega_mu2 = 0.0;
  double f_second = 0.0;
  double f_first = 0.0;
  std::vector<double> t;
  std::vector<double> f_minus_one;
  /// max of f(t) - 1 over t in (0, t_max].
  double f_max_minus_one = 0.0;
  bool f_exceeds_one = false;
};

struct SecondVariationOptions {
  double eps = 0.5;
  double t_max = 0.2;
  int t_points = 81;
  double fd_step = 1e-3;
  int mc_samples = 100000;
  std::uint64_t seed = 20240607;
  bool printed_b = false;
  SkewLayout layout = SkewLayout::row_major;
};

struct SecondVariationReport {
  SecondVariationOptions options;
  SchurResult schur;
  std::vector<WeightReport> weights;
};

/// Printed lower bounds for Omega(mu1, mu1), weight vectors 1..3.
inline constexpr std::array<double, 3> kPrintedOmega = {1.13346, 0.807823, 1.00141};

SecondVariationReport run_second_variation(const AtomTable& table, std::span<const int> which,
                                           const SecondVariationOptions& options);

}  // namespace bcg
