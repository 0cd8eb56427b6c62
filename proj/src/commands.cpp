#include "bcg/commands.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "bcg/error.hpp"

namespace bcg {

namespace {

nlohmann::json matrix_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json r = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
    rows.push_back(r);
  }
  return rows;
}

std::string fmt(double v) { return format_double(v); }

double rel_err(double x, double ref) { return std::abs(x - ref) / std::abs(ref); }

}  // namespace

std::string default_atoms_path() { return std::string(BCG_DATA_DIR) + "/sl4_atoms.csv"; }

std::vector<DiskPoint> disk_samples(int count, double max_radius, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<DiskPoint> out;
  for (int i = 0; i < count; ++i) {
    const double r = max_radius * std::sqrt(unit(rng));
    const double phi = 2.0 * std::numbers::pi * unit(rng);
    out.emplace_back(std::polar(r, phi));
  }
  return out;
}

CommandOutput cmd_jfunc_h2xh2(const JfuncOptions& opt) {
  if (opt.a_max < 0 || opt.b_max < 0) {
    throw Error(ErrorKind::invalid_parameter, "a and b ranges must be nonnegative");
  }
  if (opt.points < 2) throw Error(ErrorKind::invalid_parameter, "need at least 2 points per axis");
  const SpaceModel model = SpaceModel::h2xh2();
  CommandOutput out;
  RunReport& r = out.report;
  r.command = "jfunc-h2xh2";
  r.parameters = {{"a_max", opt.a_max}, {"b_max", opt.b_max}, {"points", opt.points},
                  {"grid", opt.grid_n}};

  CsvTable t;
  t.header = {"a", "b", "j0_quadrature", "j0_analytic", "j0_printed"};
  nlohmann::json rows = nlohmann::json::array();
  double worst_analytic = 0.0, worst_b_axis = 0.0, worst_printed = 0.0;
  for (int i = 0; i < opt.points; ++i) {
    const double a = opt.a_max * i / (opt.points - 1);
    for (int j = 0; j < opt.points; ++j) {
      const double b = opt.b_max * j / (opt.points - 1);
      const double quad = jacobian_ratio_J0(model, mu_ab(a, b, opt.grid_n));
      const double ana = analytic_J0(a, b);
      const double pr = closed_form_J0(a, b);
      worst_analytic = std::max(worst_analytic, rel_err(quad, ana));
      worst_printed = std::max(worst_printed, rel_err(pr, ana));
      if (i == 0) worst_b_axis = std::max(worst_b_axis, std::abs(quad - 1.0));
      t.add_row({fmt(a), fmt(b), fmt(quad), fmt(ana), fmt(pr)});
      rows.push_back({a, b, quad, ana, pr});
    }
  }
  r.payload = {{"columns", t.header},
               {"rows", rows},
               {"printed_formula_max_relative_deviation", worst_printed},
               {"printed_at_1_0", closed_form_J0(1, 0)},
               {"analytic_at_1_0", analytic_J0(1, 0)}};
  r.add_check("quadrature_matches_analytic_moments", worst_analytic <= 1e-6, worst_analytic, 1e-6);
  r.add_check("j0_identically_one_for_a_zero", worst_b_axis <= 1e-8, worst_b_axis, 1e-8);
  out.tables.emplace_back("", std::move(t));
  return out;
}

CommandOutput cmd_sl3(const Sl3Options& opt) {
  const auto atoms = sl3_generic_atoms(3, opt.seed);
  const auto rows = sl3_degeneration(opt.deltas, atoms);
  CommandOutput out;
  RunReport& r = out.report;
  r.command = "sl3";
  r.parameters = {{"deltas", opt.deltas}, {"seed", opt.seed}, {"generic_atoms", 3},
                  {"rank_tolerance", 1e-12}};
  CsvTable t;
  t.header = {"delta", "det_q1", "det_q2", "ratio", "ratio_times_delta",
              "kernel_q1", "kernel_q2", "gap_q1", "gap_q2"};
  nlohmann::json js = nlohmann::json::array();
  for (const auto& row : rows) {
    const std::string ratio = row.degenerate ? "degenerate" : fmt(row.ratio);
    const std::string rd = row.degenerate ? "degenerate" : fmt(row.ratio * row.delta);
    t.add_row({fmt(row.delta), fmt(row.det_q1), fmt(row.det_q2), ratio, rd,
               std::to_string(row.kernel_q1), std::to_string(row.kernel_q2), fmt(row.gap_q1),
               fmt(row.gap_q2)});
    nlohmann::json j = {{"delta", row.delta},          {"det_q1", row.det_q1},
                        {"det_q2", row.det_q2},        {"degenerate", row.degenerate},
                        {"kernel_q1", row.kernel_q1},  {"kernel_q2", row.kernel_q2},
                        {"gap_q1", row.gap_q1},        {"gap_q2", row.gap_q2}};
    j["ratio"] = row.degenerate ? nlohmann::json(nullptr) : nlohmann::json(row.ratio);
    js.push_back(j);
  }
  r.payload = {{"rows", js}};
  nlohmann::json atoms_json = nlohmann::json::array();
  for (const auto& k : atoms) atoms_json.push_back(matrix_json(k));
  r.payload["generic_atoms"] = atoms_json;

  auto find = [&](double d) -> const Sl3Row* {
    for (const auto& row : rows) {
      if (row.delta == d) return &row;
    }
    return nullptr;
  };
  if (const Sl3Row* z = find(0.0)) {
    r.add_check("kernel_q1_dim_3", z->kernel_q1 == 3, z->kernel_q1, 3);
    r.add_check("kernel_q2_dim_2", z->kernel_q2 == 2, z->kernel_q2, 2);
    const double gap = std::min(z->gap_q1, z->gap_q2);
    r.add_check("singular_gap_10_orders", gap >= 1e10, gap, 1e10);
  }
  std::vector<double> rd;
  for (double d : {1e-2, 1e-3, 1e-4}) {
    if (const Sl3Row* row = find(d)) rd.push_back(row->ratio * d);
  }
  if (rd.size() >= 2) {
    const auto [lo, hi] = std::minmax_element(rd.begin(), rd.end());
    const double spread = *hi / *lo - 1.0;
    r.add_check("ratio_times_delta_constant", spread <= 0.1, spread, 0.1);
  }
  const Sl3Row* a = find(1e-2);
  const Sl3Row* b = find(2e-2);
  if (a && b) {
    const double q = a->ratio / b->ratio;
    r.add_check("ratio_doubles_when_delta_halves", std::abs(q - 2.0) <= 0.2, q, 0.2);
  }
  out.tables.emplace_back("", std::move(t));
  return out;
}

CommandOutput cmd_sl4(const Sl4Options& opt) {
  const AtomTable table = AtomTable::load_csv(opt.atoms_path);
  const SecondVariationReport sv = run_second_variation(table, opt.which, opt.sv);
  SpaceModel model = SpaceModel::sl4();
  if (opt.sv.printed_b) model = model.with_hessian_scale(std::sqrt(2.0));

  CommandOutput out;
  RunReport& r = out.report;
  r.command = "sl4";
  r.parameters = {{"atoms", opt.atoms_path},      {"weights", opt.which},
                  {"mc_samples", opt.sv.mc_samples}, {"seed", opt.sv.seed},
                  {"eps", opt.sv.eps},            {"t_max", opt.sv.t_max},
                  {"t_points", opt.sv.t_points},  {"fd_step", opt.sv.fd_step},
                  {"printed_b", opt.sv.printed_b}, {"g_range", opt.g_range},
                  {"g_points", opt.g_points}};

  r.add_check("schur_A", sv.schur.err_a <= sv.schur.bound, sv.schur.err_a, sv.schur.bound);
  r.add_check("schur_B", sv.schur.err_b <= sv.schur.bound, sv.schur.err_b, sv.schur.bound);

  CsvTable summary;
  summary.header = {"weights", "mass", "residual", "omega", "omega_printed", "omega_over_printed",
                    "lambda", "omega_mu2", "f_second", "f_first", "f_max_minus_one"};
  CsvTable curve;
  curve.header = {"weights", "t", "f_minus_one"};
  nlohmann::json ws = nlohmann::json::array();
  for (const auto& w : sv.weights) {
    const std::string tag = "w" + std::to_string(w.which) + "_";
    const double ratio = w.omega / w.omega_printed;
    summary.add_row({std::to_string(w.which), fmt(w.mass), fmt(w.residual), fmt(w.omega),
                     fmt(w.omega_printed), fmt(ratio), fmt(w.lambda), fmt(w.omega_mu2),
                     fmt(w.f_second), fmt(w.f_first), fmt(w.f_max_minus_one)});
    for (std::size_t i = 0; i < w.t.size(); ++i) {
      curve.add_row({std::to_string(w.which), fmt(w.t[i]), fmt(w.f_minus_one[i])});
    }
    ws.push_back({{"weights", w.which},
                  {"mass", w.mass},
                  {"residual", w.residual},
                  {"omega", w.omega},
                  {"omega_printed", w.omega_printed},
                  {"omega_over_printed", ratio},
                  {"lambda", w.lambda},
                  {"omega_mu2", w.omega_mu2},
                  {"f_second", w.f_second},
                  {"f_first", w.f_first},
                  {"t", w.t},
                  {"f_minus_one", w.f_minus_one},
                  {"f_max_minus_one", w.f_max_minus_one}});
    const double expected_mu2 = w.omega / ((w.lambda + w.mass) * (w.lambda + w.mass));
    r.add_check(tag + "barycenter_residual", w.residual <= 1e-3, w.residual, 1e-3);
    r.add_check(tag + "omega_positive", w.omega > 0, w.omega, 0.0);
    r.add_check(tag + "omega_mu2_identity", std::abs(w.omega_mu2 - expected_mu2) <= 1e-12,
                std::abs(w.omega_mu2 - expected_mu2), 1e-12, "absolute");
    r.add_check(tag + "omega_mu2_positive", w.omega_mu2 > 0, w.omega_mu2, 0.0);
    r.add_check(tag + "f_second_matches_omega", rel_err(w.f_second, w.omega_mu2) <= 1e-3,
                rel_err(w.f_second, w.omega_mu2), 1e-3);
    r.add_check(tag + "f_first_vanishes", std::abs(w.f_first) <= 1e-6, std::abs(w.f_first), 1e-6);
    r.add_check(tag + "f_exceeds_one", w.f_exceeds_one, w.f_max_minus_one, 0.0);
  }
  r.payload = {{"weights", ws},
               {"schur", {{"err_a", sv.schur.err_a}, {"err_b", sv.schur.err_b},
                          {"bound", sv.schur.bound}}},
               {"g_identity", g_value(model, Matrix::Identity(4, 4))}};
  nlohmann::json grids = nlohmann::json::array();
  out.tables.emplace_back("", std::move(summary));
  out.tables.emplace_back("fcurve", std::move(curve));
  for (int plane = 0; plane < 3; ++plane) {
    const Matrix g = g_grid(model, plane, opt.g_range, opt.g_points);
    grids.push_back(matrix_json(g));
    CsvTable gt;
    gt.header = {"s", "t", "g"};
    for (int i = 0; i < opt.g_points; ++i) {
      for (int j = 0; j < opt.g_points; ++j) {
        const double s = -opt.g_range + 2.0 * opt.g_range * i / (opt.g_points - 1);
        const double t = -opt.g_range + 2.0 * opt.g_range * j / (opt.g_points - 1);
        gt.add_row({fmt(s), fmt(t), fmt(g(i, j))});
      }
    }
    out.tables.emplace_back("g_plane" + std::to_string(plane + 1), std::move(gt));
  }
  r.payload["g_grids"] = grids;
  return out;
}

CommandOutput cmd_bcg(const BcgOptions& opt) {
  CommandOutput out;
  RunReport& r = out.report;
  r.command = "bcg";
  r.parameters = {{"s", opt.s_list},
                  {"s_trend", opt.s_trend},
                  {"sample_points", opt.sample_points},
                  {"max_radius", opt.max_radius},
                  {"tol", opt.tol},
                  {"h_fd", opt.h_fd},
                  {"seed", opt.seed},
                  {"grid", opt.sigma.grid_n},
                  {"radial_nodes", opt.sigma.radial_nodes},
                  {"r_max", opt.sigma.r_max}};
  const auto pts = disk_samples(opt.sample_points, opt.max_radius, opt.seed);

  CsvTable t;
  t.header = {"s", "y_x", "y_y", "jac", "bound", "residual", "certificate"};
  double worst_excess = -std::numeric_limits<double>::infinity();
  double worst_res = 0.0;
  double min_cert = std::numeric_limits<double>::infinity();
  nlohmann::json rows = nlohmann::json::array();
  for (double s : opt.s_list) {
    for (const auto& y : pts) {
      const JacobianCheck c = jacobian_bound_check(y, s, opt.h_fd, opt.sigma);
      worst_excess = std::max(worst_excess, c.jac - c.bound);
      worst_res = std::max(worst_res, c.residual);
      min_cert = std::min(min_cert, c.certificate);
      t.add_row({fmt(s), fmt(y.x()), fmt(y.y()), fmt(c.jac), fmt(c.bound), fmt(c.residual),
                 fmt(c.certificate)});
      rows.push_back({s, y.x(), y.y(), c.jac, c.bound, c.residual, c.certificate});
    }
  }
  r.add_check("jacobian_bound", worst_excess <= 1e-3, worst_excess, 1e-3,
              "max of jac - s^2 over all samples");

  const int n = opt.sigma.grid_n;
  const BarycenterResult bu = barycenter(uniform_measure(n), opt.tol);
  r.add_check("barycenter_uniform_is_origin", bu.x.norm() <= 1e-10, bu.x.norm(), 1e-10);
  double worst_visual = 0.0;
  for (const auto& y : pts) {
    const BarycenterResult b = barycenter(visual_measure(y, n), opt.tol);
    worst_visual = std::max(worst_visual, std::abs(b.x.z() - y.z()));
    worst_res = std::max(worst_res, b.residual);
    min_cert = std::min(min_cert, b.certificate);
  }
  r.add_check("barycenter_visual_measure", worst_visual <= 1e-6, worst_visual, 1e-6);

  nlohmann::json trend = nlohmann::json::array();
  double worst_trend = 0.0;
  const DiskPoint probe(0.3, 0.0);
  for (double s : opt.s_trend) {
    const JacobianCheck c = jacobian_bound_check(DiskPoint(), s, opt.h_fd, opt.sigma);
    const BarycenterResult f = bcg_map(probe, s, opt.sigma);
    const double dist = hyp_distance(f.x, probe);
    worst_trend = std::max({worst_trend, std::abs(c.jac - 1.0), dist});
    worst_res = std::max(worst_res, c.residual);
    min_cert = std::min(min_cert, c.certificate);
    trend.push_back({{"s", s}, {"jac_at_origin", c.jac}, {"displacement_at_probe", dist}});
  }
  r.add_check("equality_regime_as_s_decreases", worst_trend <= 1e-6, worst_trend, 1e-6,
              "|jac(0) - 1| and d(F_s(y), y) at y = (0.3, 0) for each s");

  const double s_ift = opt.s_list.empty() ? 1.5 : opt.s_list.front();
  const double ift = ift_jacobian_at_origin(s_ift, opt.sigma);
  const JacobianCheck c0 = jacobian_bound_check(DiskPoint(), s_ift, opt.h_fd, opt.sigma);
  r.add_check("ift_matches_finite_differences", std::abs(ift - c0.jac) <= 1e-6,
              std::abs(ift - c0.jac), 1e-6);

  double worst_equiv = 0.0;
  for (std::size_t i = 0; i < std::min<std::size_t>(pts.size(), 4); ++i) {
    const double phi = 0.7 + i;
    const BarycenterResult a = bcg_map(rotate(pts[i], phi), opt.s_list.front(), opt.sigma);
    const BarycenterResult b = bcg_map(pts[i], opt.s_list.front(), opt.sigma);
    worst_equiv = std::max(worst_equiv, std::abs(a.x.z() - rotate(b.x, phi).z()));
  }
  r.add_check("rotation_equivariance", worst_equiv <= 1e-8, worst_equiv, 1e-8);
  r.add_check("implicit_residual", worst_res <= opt.tol, worst_res, opt.tol);
  r.add_check("convexity_certificate_positive", min_cert > 0, min_cert, 0.0);
  r.payload = {{"columns", t.header}, {"rows", rows}, {"trend", trend}, {"ift_jacobian", ift}};
  out.tables.emplace_back("", std::move(t));
  return out;
}

}  // namespace bcg
