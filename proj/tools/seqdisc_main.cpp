// Copyright 2026 The seqdisc developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: evaluates the joint-success optimum, generates
// discord curve data, runs protocol simulations, and emits CSV/JSON.

#include <CLI11.hpp>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "seqdisc/seqdisc.hpp"

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitToleranceBreach = 3;

constexpr double kOracleGapLimit = 2e-3;      // closed form vs definition oracle
constexpr double kOptimizerGapLimit = 1e-5;   // closed form vs numeric maximum
constexpr double kPovmDefectLimit = 1e-10;

std::string sig12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// Flattens a JSON object into (dotted-path, formatted value) columns for the
// single-row CSV renditions of the report commands.
void flatten(const ordered_json& j, const std::string& prefix,
             std::vector<std::pair<std::string, std::string>>& cols) {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      flatten(value, prefix.empty() ? key : prefix + "." + key, cols);
    }
  } else if (j.is_array()) {
    int i = 0;
    for (const auto& value : j) {
      flatten(value, prefix + "." + std::to_string(i++), cols);
    }
  } else if (j.is_null()) {
    cols.emplace_back(prefix, "");
  } else if (j.is_number_float()) {
    cols.emplace_back(prefix, sig12(j.get<double>()));
  } else if (j.is_boolean()) {
    cols.emplace_back(prefix, j.get<bool>() ? "true" : "false");
  } else if (j.is_number()) {
    cols.emplace_back(prefix, j.dump());
  } else {
    cols.emplace_back(prefix, j.get<std::string>());
  }
}

std::string report_to_csv(const ordered_json& j) {
  std::vector<std::pair<std::string, std::string>> cols;
  flatten(j, "", cols);
  std::string header, values;
  for (size_t i = 0; i < cols.size(); ++i) {
    if (i) {
      header += ',';
      values += ',';
    }
    header += cols[i].first;
    values += cols[i].second;
  }
  return header + "\n" + values + "\n";
}

int write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return kExitOk;
  }
  std::ofstream f(out_path);
  if (!f) {
    std::cerr << "error: cannot open output file " << out_path << "\n";
    return kExitUsage;
  }
  f << text;
  return kExitOk;
}

int emit_report(const ordered_json& j, const std::string& format, const std::string& out_path) {
  return write_output(format == "csv" ? report_to_csv(j) : j.dump(2) + "\n", out_path);
}

ordered_json params_json(const seqdisc::ProtocolParams& p) {
  return ordered_json{{"s", p.s},     {"t", p.t},     {"q1b", p.q1b},
                      {"q2b", p.q2b}, {"q1c", p.q1c}, {"q2c", p.q2c}};
}

// ---------------------------------------------------------------------------

struct OptimizeArgs {
  double s = 0.0;
  int grid = 64;
  int refine = 200;
  std::string format = "json";
  std::string out;
};

int run_optimize(const OptimizeArgs& args) {
  const auto closed = seqdisc::pbc_closed_max(args.s);
  const auto numeric = seqdisc::pbc_numeric_max(args.s, args.grid, args.refine);
  const double gap = std::abs(closed.pbc_max - numeric.pbc_max);

  ordered_json j{
      {"command", "optimize"},
      {"s", args.s},
      {"regime_boundary", seqdisc::regime_boundary()},
      {"closed_form",
       {{"pbc_max", closed.pbc_max},
        {"regime", seqdisc::regime_name(closed.regime)},
        {"argmax", params_json(closed.argmax)}}},
      {"numeric",
       {{"pbc_max", numeric.pbc_max},
        {"argmax", params_json(numeric.argmax)},
        {"grid_ties", numeric.grid_ties}}},
      {"abs_difference", gap},
  };
  const int rc = emit_report(j, args.format, args.out);
  if (rc != kExitOk) return rc;
  if (gap > kOptimizerGapLimit) {
    std::cerr << "error: closed-form/numeric gap " << gap << " exceeds " << kOptimizerGapLimit
              << "\n";
    return kExitToleranceBreach;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct CurveArgs {
  std::string figure;
  double pc = -1.0;
  double pb = -1.0;
  double exponent = -1.0;
  int points = 50;
  std::string format = "csv";
  std::string out;
};

int run_curve(const CurveArgs& args) {
  std::string xname, yname;
  std::vector<std::pair<double, std::optional<double>>> rows;
  rows.reserve(args.points);

  if (args.figure == "2a" || args.figure == "2b") {
    const bool fix_charlie = args.figure == "2a";
    const double fixed = fix_charlie ? args.pc : args.pb;
    if (fixed < 0.0) {
      std::cerr << "error: figure " << args.figure << " requires --"
                << (fix_charlie ? "pc" : "pb") << "\n";
      return kExitUsage;
    }
    xname = fix_charlie ? "p_b" : "p_c";
    yname = "d_delta";
    // half-step grid keeps the 0/0 corner of D_delta out of the sweep
    for (int k = 0; k < args.points; ++k) {
      const double x = (k + 0.5) / args.points;
      const double r = fix_charlie ? 1.0 - x : 1.0 - args.pb;
      const double t = fix_charlie ? 1.0 - args.pc : 1.0 - x;
      rows.emplace_back(x, seqdisc::relative_difference(r, t));
    }
  } else if (args.figure == "3") {
    if (args.exponent <= 0.0 || args.exponent >= 1.0) {
      std::cerr << "error: figure 3 requires --exponent in (0,1)\n";
      return kExitUsage;
    }
    xname = "s";
    yname = "d_symm";
    for (int k = 0; k < args.points; ++k) {
      const double s = static_cast<double>(k) / (args.points - 1);
      const double t = std::pow(s, args.exponent);
      const double r = std::pow(s, 1.0 - args.exponent);
      rows.emplace_back(s, seqdisc::symmetrized_discord(r, t));
    }
  } else {
    std::cerr << "error: unknown figure id " << args.figure << "\n";
    return kExitUsage;
  }

  if (args.format == "csv") {
    std::string text = xname + "," + yname + "\n";
    for (const auto& [x, y] : rows) {
      text += sig12(x);
      text += ',';
      if (y.has_value()) text += sig12(*y);
      text += '\n';
    }
    return write_output(text, args.out);
  }

  ordered_json jrows = ordered_json::array();
  for (const auto& [x, y] : rows) {
    jrows.push_back({x, y.has_value() ? ordered_json(*y) : ordered_json(nullptr)});
  }
  ordered_json j{{"command", "curve"}, {"figure", args.figure}};
  if (args.figure == "2a") j["pc"] = args.pc;
  if (args.figure == "2b") j["pb"] = args.pb;
  if (args.figure == "3") j["exponent"] = args.exponent;
  j["points"] = args.points;
  j["columns"] = ordered_json::array({xname, yname});
  j["rows"] = jrows;
  return emit_report(j, "json", args.out);
}

// ---------------------------------------------------------------------------

struct DiscordArgs {
  double r = 0.0;
  double t = 0.0;
  std::string format = "json";
  std::string out;
};

ordered_json discord_json(const seqdisc::DiscordReport& rep) {
  ordered_json j{{"d_right", rep.d_right}, {"d_left", rep.d_left}};
  j["d_delta"] = rep.d_delta.has_value() ? ordered_json(*rep.d_delta) : ordered_json(nullptr);
  j["d_symm"] = rep.d_symm;
  return j;
}

int run_discord(const DiscordArgs& args) {
  const auto ts = seqdisc::tangles(args.r, args.t);
  const auto closed = seqdisc::discord_report_closed(args.r, args.t);
  bool converged = false;
  const auto oracle = seqdisc::discord_report_oracle(args.r, args.t, &converged);
  const double gap_right = std::abs(closed.d_right - oracle.d_right);
  const double gap_left = std::abs(closed.d_left - oracle.d_left);

  ordered_json j{
      {"command", "discord"},
      {"r", args.r},
      {"t", args.t},
      {"tangles",
       {{"tau_abd", ts.tau_abd}, {"tau_a", ts.tau_a}, {"tau_b", ts.tau_b}, {"tau_d", ts.tau_d}}},
      {"closed_form", discord_json(closed)},
      {"oracle", discord_json(oracle)},
  };
  j["oracle"]["converged"] = converged;
  j["gap"] = ordered_json{{"d_right", gap_right}, {"d_left", gap_left}};
  const int rc = emit_report(j, args.format, args.out);
  if (rc != kExitOk) return rc;
  if (gap_right > kOracleGapLimit || gap_left > kOracleGapLimit) {
    std::cerr << "error: oracle gap (" << gap_right << ", " << gap_left << ") exceeds "
              << kOracleGapLimit << "\n";
    return kExitToleranceBreach;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
  double s = 0.0;
  double t = 0.0;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 1;
  int threads = 1;
  std::string format = "json";
  std::string out;
};

int run_simulate(const SimulateArgs& args) {
  if (args.s > args.t) {
    std::cerr << "error: simulate requires s <= t\n";
    return kExitUsage;
  }
  const auto params = seqdisc::ProtocolParams::equal_weight(args.s, args.t);
  const auto stats = seqdisc::run_trials(params, args.trials, args.seed, args.threads);
  const auto emp = seqdisc::empirical_probs(stats);
  const auto unamb = seqdisc::verify_unambiguity(stats);

  const double r = params.r();
  const double ana_b = 1.0 - r;
  const double ana_c = 1.0 - args.t;
  const double ana_bc = ana_b * ana_c;

  auto z_or_null = [](double emp_p, double ana_p, double se) -> ordered_json {
    if (se > 0.0) return (emp_p - ana_p) / se;
    return emp_p == ana_p ? ordered_json(0.0) : ordered_json(nullptr);
  };

  // the worker count is an execution detail; the report must be identical
  // for any --threads value
  ordered_json j{
      {"command", "simulate"},
      {"s", args.s},
      {"t", args.t},
      {"trials", args.trials},
      {"seed", args.seed},
      {"params", params_json(params)},
      {"analytic", {{"p_b", ana_b}, {"p_c", ana_c}, {"p_bc", ana_bc}}},
      {"empirical",
       {{"p_b", emp.p_b},
        {"p_c", emp.p_c},
        {"p_bc", emp.p_bc},
        {"se_b", emp.se_b},
        {"se_c", emp.se_c},
        {"se_bc", emp.se_bc}}},
      {"z",
       {{"p_b", z_or_null(emp.p_b, ana_b, emp.se_b)},
        {"p_c", z_or_null(emp.p_c, ana_c, emp.se_c)},
        {"p_bc", z_or_null(emp.p_bc, ana_bc, emp.se_bc)}}},
      {"unambiguous", unamb.ok},
      {"violations", unamb.violations},
  };
  return emit_report(j, args.format, args.out);
}

// ---------------------------------------------------------------------------

struct PovmArgs {
  double s = 0.0;
  double t = 0.0;
  std::string format = "json";
  std::string out;
};

int run_povm(const PovmArgs& args) {
  if (args.s > args.t) {
    std::cerr << "error: povm requires s <= t\n";
    return kExitUsage;
  }
  const auto params = seqdisc::ProtocolParams::equal_weight(args.s, args.t);
  const auto u = seqdisc::build_bob_unitary(params);
  const auto povm = seqdisc::povm_elements(u);
  auto [psi1, psi2] = seqdisc::prepare_pair(args.s);

  seqdisc::Mat completeness = seqdisc::Mat::Zero(2, 2);
  for (const auto& e : povm.elements) completeness += e;
  const double defect =
      (completeness - seqdisc::Mat::Identity(2, 2)).cwiseAbs().maxCoeff();
  auto expval = [](const seqdisc::StateVector& psi, const seqdisc::Mat& op) {
    return (psi.amplitudes().adjoint() * op * psi.amplitudes())(0, 0).real();
  };
  const double residual_12 = expval(psi2, povm.elements[1]);  // <psi2|Pi1|psi2>
  const double residual_21 = expval(psi1, povm.elements[2]);  // <psi1|Pi2|psi1>

  auto matrix_json = [](const seqdisc::Mat& m) {
    ordered_json re = ordered_json::array(), im = ordered_json::array();
    for (int i = 0; i < m.rows(); ++i) {
      ordered_json re_row = ordered_json::array(), im_row = ordered_json::array();
      for (int jj = 0; jj < m.cols(); ++jj) {
        re_row.push_back(m(i, jj).real());
        im_row.push_back(m(i, jj).imag());
      }
      re.push_back(re_row);
      im.push_back(im_row);
    }
    return ordered_json{{"re", re}, {"im", im}};
  };

  ordered_json j{
      {"command", "povm"},
      {"s", args.s},
      {"t", args.t},
      {"params", params_json(params)},
      {"pi0", matrix_json(povm.elements[0])},
      {"pi1", matrix_json(povm.elements[1])},
      {"pi2", matrix_json(povm.elements[2])},
      {"completeness_defect", defect},
      {"unambiguity_residuals", {{"psi2_pi1", residual_12}, {"psi1_pi2", residual_21}}},
      {"unitarity_defect", u.unitarity_defect()},
  };
  const int rc = emit_report(j, args.format, args.out);
  if (rc != kExitOk) return rc;
  if (defect > kPovmDefectLimit || residual_12 > kPovmDefectLimit ||
      residual_21 > kPovmDefectLimit) {
    std::cerr << "error: POVM defect exceeds " << kPovmDefectLimit << "\n";
    return kExitToleranceBreach;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sequential unambiguous state discrimination: optima, discord curves, simulation"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read key = value defaults (sections per subcommand)");

  const auto unit = CLI::Range(0.0, 1.0);

  OptimizeArgs optimize_args;
  auto* opt = app.add_subcommand("optimize", "Maximize the joint success probability P_bc");
  opt->add_option("--s", optimize_args.s, "A priori overlap <psi1|psi2>")->required()->check(unit);
  opt->add_option("--grid", optimize_args.grid, "Grid density per axis")->check(CLI::Range(2, 512));
  opt->add_option("--refine", optimize_args.refine, "Refinement passes")->check(CLI::Range(0, 10000));
  opt->add_option("--format", optimize_args.format)->check(CLI::IsMember({"csv", "json"}));
  opt->add_option("--out", optimize_args.out, "Output path (default: stdout)");

  CurveArgs curve_args;
  auto* curve = app.add_subcommand("curve", "Generate discord curve data");
  curve->add_option("--figure", curve_args.figure, "Curve family: 2a, 2b, or 3")->required();
  curve->add_option("--pc", curve_args.pc, "Fixed Charlie success probability (figure 2a)")->check(unit);
  curve->add_option("--pb", curve_args.pb, "Fixed Bob success probability (figure 2b)")->check(unit);
  curve->add_option("--exponent", curve_args.exponent, "Exponent alpha in t = s^alpha (figure 3)");
  curve->add_option("--points", curve_args.points, "Number of rows")->check(CLI::Range(2, 1000000));
  curve->add_option("--format", curve_args.format)->check(CLI::IsMember({"csv", "json"}));
  curve->add_option("--out", curve_args.out, "Output path (default: stdout)");

  DiscordArgs discord_args;
  auto* discord = app.add_subcommand("discord", "Closed-form and oracle discords at one (r,t)");
  discord->add_option("--r", discord_args.r, "Ancilla flag overlap r")->required()->check(unit);
  discord->add_option("--t", discord_args.t, "Post-measurement overlap t")->required()->check(unit);
  discord->add_option("--format", discord_args.format)->check(CLI::IsMember({"csv", "json"}));
  discord->add_option("--out", discord_args.out, "Output path (default: stdout)");

  SimulateArgs simulate_args;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo run of the sequential protocol");
  simulate->add_option("--s", simulate_args.s, "A priori overlap")->required()->check(unit);
  simulate->add_option("--t", simulate_args.t, "Post-measurement overlap")->required()->check(unit);
  simulate->add_option("--trials", simulate_args.trials)->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1} << 40));
  simulate->add_option("--seed", simulate_args.seed, "RNG seed");
  simulate->add_option("--threads", simulate_args.threads)->check(CLI::Range(1, 256));
  simulate->add_option("--format", simulate_args.format)->check(CLI::IsMember({"csv", "json"}));
  simulate->add_option("--out", simulate_args.out, "Output path (default: stdout)");

  PovmArgs povm_args;
  auto* povm = app.add_subcommand("povm", "Bob's POVM elements and defects");
  povm->add_option("--s", povm_args.s, "A priori overlap")->required()->check(unit);
  povm->add_option("--t", povm_args.t, "Post-measurement overlap")->required()->check(unit);
  povm->add_option("--format", povm_args.format)->check(CLI::IsMember({"csv", "json"}));
  povm->add_option("--out", povm_args.out, "Output path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (opt->parsed()) return run_optimize(optimize_args);
    if (curve->parsed()) return run_curve(curve_args);
    if (discord->parsed()) return run_discord(discord_args);
    if (simulate->parsed()) return run_simulate(simulate_args);
    if (povm->parsed()) return run_povm(povm_args);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
