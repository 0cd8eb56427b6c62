// bcglab: command-line front end for the barycenter-method laboratory.
//
// Exit codes: 0 all embedded checks pass, 1 a numerical check failed,
// 2 usage or I/O error.

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bcg/commands.hpp"
#include "bcg/error.hpp"

namespace {

struct Common {
  std::string out;
  std::string format = "json";
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--out", c.out, "Output path (stdout if omitted)");
  sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

std::string sidecar_path(const std::string& out, const std::string& suffix) {
  std::filesystem::path p(out);
  const std::string ext = p.has_extension() ? p.extension().string() : ".csv";
  p.replace_extension();
  return p.string() + "." + suffix + ext;
}

int emit(const bcg::CommandOutput& res, const Common& c) {
  if (c.format == "json") {
    const std::string text = res.report.to_json().dump(2) + "\n";
    if (c.out.empty()) {
      std::cout << text;
    } else {
      bcg::write_text_file(c.out, text);
    }
  } else {
    for (const auto& [suffix, table] : res.tables) {
      if (c.out.empty()) {
        if (!suffix.empty()) std::cout << "\n# " << suffix << "\n";
        bcg::write_csv(table, std::cout);
      } else {
        bcg::write_text_file(suffix.empty() ? c.out : sidecar_path(c.out, suffix),
                             bcg::to_csv(table));
      }
    }
  }
  for (const auto& chk : res.report.checks) {
    std::cerr << (chk.passed ? "PASS  " : "FAIL  ") << chk.name << "  value="
              << bcg::format_double(chk.value) << "  tol=" << bcg::format_double(chk.tolerance);
    if (!chk.detail.empty()) std::cerr << "  (" << chk.detail << ")";
    std::cerr << '\n';
  }
  return res.report.all_passed() ? 0 : 1;
}

std::vector<int> parse_weights(const std::string& w) {
  if (w == "all") return {1, 2, 3};
  if (w == "1" || w == "2" || w == "3") return {std::stoi(w)};
  throw CLI::ValidationError("--weights", "must be 1, 2, 3 or all");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Barycenter-method numerical laboratory"};
  app.require_subcommand(1);
  Common common;

  bcg::JfuncOptions jf;
  auto* jfunc = app.add_subcommand("jfunc-h2xh2", "J0 surface of mu_{a,b} on H2 x H2");
  jfunc->add_option("--a", jf.a_max, "Upper end of the a range");
  jfunc->add_option("--b", jf.b_max, "Upper end of the b range");
  jfunc->add_option("--points", jf.points, "Surface samples per axis");
  jfunc->add_option("--grid", jf.grid_n, "Torus quadrature grid per axis");
  add_common(jfunc, common);

  bcg::Sl3Options s3;
  auto* sl3 = app.add_subcommand("sl3", "Six-Dirac degeneration in SL(3)/SO(3)");
  sl3->add_option("--delta", s3.deltas, "Delta values (repeatable)");
  sl3->add_option("--seed", s3.seed, "Seed for the generic atoms");
  add_common(sl3, common);

  bcg::Sl4Options s4;
  s4.atoms_path = "data/sl4_atoms.csv";
  std::string weights = "all";
  auto* sl4 = app.add_subcommand("sl4", "Second variation at Haar measure in SL(4)/SO(4)");
  sl4->add_option("--atoms", s4.atoms_path, "Atom table CSV");
  sl4->add_option("--weights", weights, "1, 2, 3 or all");
  sl4->add_option("--mc-samples", s4.sv.mc_samples, "Haar samples for the Schur check");
  sl4->add_option("--seed", s4.sv.seed, "Monte-Carlo seed");
  sl4->add_option("--eps", s4.sv.eps, "Mollifier radius used for positivization");
  sl4->add_option("--t-max", s4.sv.t_max, "Half-width of the f(t) scan");
  sl4->add_option("--grid", s4.g_points, "Points per axis of the g grids");
  sl4->add_flag("--debug-printed-B", s4.sv.printed_b, "Use the printed (sqrt2-scaled) B");
  add_common(sl4, common);

  bcg::BcgOptions bo;
  std::vector<double> s_values;
  auto* bcgc = app.add_subcommand("bcg", "Barycenter map and Jacobian bound on H2");
  bcgc->add_option("--s", s_values, "Entropy parameters s > 1 (repeatable)");
  bcgc->add_option("--tol", bo.tol, "Implicit-equation tolerance");
  bcgc->add_option("--grid", bo.sigma.grid_n, "Circle grid size");
  bcgc->add_option("--mc-samples", bo.sample_points, "Number of sample points");
  bcgc->add_option("--seed", bo.seed, "Sample-point seed");
  add_common(bcgc, common);

  bcg::SelftestOptions st;
  st.atoms_path = "data/sl4_atoms.csv";
  auto* self = app.add_subcommand("selftest", "Full invariant suite");
  self->add_option("--atoms", st.atoms_path, "Atom table CSV");
  self->add_option("--mc-samples", st.mc_samples, "Haar samples for the Schur check");
  self->add_option("--seed", st.seed, "Seed");
  self->add_flag("--debug-printed-B", st.printed_b, "Use the printed (sqrt2-scaled) B");
  add_common(self, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  // Relative default atom path falls back to the source tree.
  auto resolve_atoms = [](std::string& path) {
    if (path == "data/sl4_atoms.csv" && !std::filesystem::exists(path)) {
      path = bcg::default_atoms_path();
    }
  };

  try {
    if (*jfunc) return emit(bcg::cmd_jfunc_h2xh2(jf), common);
    if (*sl3) return emit(bcg::cmd_sl3(s3), common);
    if (*sl4) {
      resolve_atoms(s4.atoms_path);
      s4.which = parse_weights(weights);
      return emit(bcg::cmd_sl4(s4), common);
    }
    if (*bcgc) {
      if (!s_values.empty()) bo.s_list = s_values;
      return emit(bcg::cmd_bcg(bo), common);
    }
    if (*self) {
      resolve_atoms(st.atoms_path);
      return emit(bcg::cmd_selftest(st), common);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const bcg::Error& e) {
    std::cerr << "error [" << bcg::to_string(e.kind()) << "]: " << e.what() << '\n';
    switch (e.kind()) {
      case bcg::ErrorKind::io_error:
      case bcg::ErrorKind::invalid_parameter:
      case bcg::ErrorKind::grid_too_coarse:
      case bcg::ErrorKind::divergent_entropy_parameter:
        return 2;
      default:
        return 1;
    }
  }
  return 2;
}
