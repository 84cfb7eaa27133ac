// Command-line front end: runs the fault-circuit experiments, entropy
// accounting, and recovery models, and emits JSON or CSV. See README.md and
// schemas/output.schema.json for the output contract.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "stuckgate/faultcircuits.hpp"
#include "stuckgate/infocomplexity.hpp"
#include "stuckgate/qcore.hpp"
#include "stuckgate/recovery.hpp"

namespace sg = stuckgate;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitResourceLimit = 3;

double deg_to_rad(double deg) { return deg * M_PI / 180.0; }

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

json amps_json(const sg::StateVector& s) {
  json arr = json::array();
  for (const sg::Complex& a : s.amplitudes())
    arr.push_back(json::array({a.real(), a.imag()}));
  return arr;
}

json matrix_json(const sg::DensityMatrix& rho) {
  json rows = json::array();
  for (std::size_t i = 0; i < rho.dim(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < rho.dim(); ++j) {
      const sg::Complex& e = rho.at(i, j);
      row.push_back(json::array({e.real(), e.imag()}));
    }
    rows.push_back(row);
  }
  return rows;
}

json distribution_json(const sg::RecoveryDistribution& d) {
  static const char* names[] = {"series", "oracle", "exact-born",
                                "monte-carlo"};
  json per_pass = json::array();
  for (const sg::PassProbability& p : d.per_pass) {
    json row{{"pass", p.pass}, {"probability", p.probability}};
    row["exact"] = p.exact ? json(p.exact->to_string()) : json(nullptr);
    row["std_error"] = p.std_error;
    per_pass.push_back(row);
  }
  json out{{"model", names[static_cast<int>(d.model)]},
           {"per_pass", per_pass},
           {"cumulative", d.cumulative},
           {"censored", d.censored}};
  if (d.model == sg::RecoveryModel::monte_carlo) {
    out["sampling"] =
        d.sampling == sg::SamplingModel::idealized ? "idealized" : "exact-born";
    out["trials"] = d.trials;
    out["seed"] = d.seed;
  }
  return out;
}

void emit(const json& config, const json& results, const std::string& csv,
          const std::string& format, const std::string& out_path) {
  std::string payload;
  if (format == "json") {
    const json doc{{"version", kVersion}, {"config", config},
                   {"results", results}};
    payload = doc.dump(2);
    payload += '\n';
  } else {
    payload = csv;
  }
  if (out_path.empty()) {
    std::cout << payload;
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot open output file: " + out_path);
    f << payload;
  }
}

struct AngleOpts {
  double theta = 45.0;
  bool radians = false;
  double rad() const { return radians ? theta : deg_to_rad(theta); }
};

struct AmplitudeOpts {
  double alpha2 = 0.5;
  double phase = 0.0;  // arg(beta/alpha), same unit as theta
  sg::Complex alpha(bool radians) const {
    (void)radians;
    return {std::sqrt(alpha2), 0.0};
  }
  sg::Complex beta(bool radians) const {
    const double phi = radians ? phase : deg_to_rad(phase);
    const double mag = std::sqrt(1.0 - alpha2);
    return {mag * std::cos(phi), mag * std::sin(phi)};
  }
};

std::string state_csv(const std::string& part, const sg::StateVector& s) {
  std::string out;
  for (std::size_t i = 0; i < s.dim(); ++i)
    out += part + "," + std::to_string(i) + "," + g17(s.amp(i).real()) + "," +
           g17(s.amp(i).imag()) + "\n";
  return out;
}

std::string matrix_csv(const std::string& part, const sg::DensityMatrix& m) {
  std::string out;
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j)
      out += part + "," + std::to_string(i) + "_" + std::to_string(j) + "," +
             g17(m.at(i, j).real()) + "," + g17(m.at(i, j).imag()) + "\n";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulator and analyzer for classically mis-set quantum gates"};
  app.require_subcommand(1);

  AngleOpts angle;
  AmplitudeOpts amp;
  std::string format = "json";
  std::string out_path;
  std::uint64_t trials = 1000000;
  std::uint64_t seed = 1;
  int passes = 0;  // 0 = per-model default
  int threads = 1;
  double budget_bits = 64.0;

  auto add_common = [&](CLI::App* cmd, bool with_theta, bool with_amp) {
    if (with_theta) {
      cmd->add_option("--theta", angle.theta,
                      "Gate angle (degrees unless --radians)");
      cmd->add_flag("--radians", angle.radians,
                    "Interpret angles as radians");
    }
    if (with_amp) {
      cmd->add_option("--alpha2", amp.alpha2, "|alpha|^2 of the input state")
          ->check(CLI::Range(0.0, 1.0));
      cmd->add_option("--phase", amp.phase,
                      "Relative phase arg(beta/alpha), same unit as --theta");
    }
    cmd->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--out", out_path, "Write output to a file");
  };

  // entropy
  auto* cmd_entropy = app.add_subcommand(
      "entropy", "Entropy accounting for classically controlled gates");
  double ent_k = 0.0, ent_a = 1.0;
  bool ent_rotation = false;
  std::vector<double> ent_uniform;
  std::string ent_empirical;
  double delta_in = 0.0, delta_out = 0.0;
  cmd_entropy->add_option("--k", ent_k, "Multiplier gate constant k > 0");
  cmd_entropy->add_option("--a", ent_a, "Input interval is uniform (0, a)");
  cmd_entropy->add_flag("--rotation", ent_rotation,
                        "Fixed-angle rotation gate row");
  cmd_entropy
      ->add_option("--uniform", ent_uniform,
                   "Uniform distribution as lo,hi")
      ->delimiter(',')
      ->expected(2);
  cmd_entropy->add_option("--empirical", ent_empirical,
                          "File of samples, one per line");
  cmd_entropy->add_option("--delta-in", delta_in, "Input resolution");
  cmd_entropy->add_option("--delta-out", delta_out, "Output resolution");
  cmd_entropy->add_option("--budget-bits", budget_bits,
                          "Feasibility budget for |H(C)|");
  add_common(cmd_entropy, false, false);

  // fig2 / fig3
  auto* cmd_fig2 = app.add_subcommand(
      "fig2", "Mis-set gate on the upper CNOT input (product-state case)");
  add_common(cmd_fig2, true, false);
  auto* cmd_fig3 = app.add_subcommand(
      "fig3", "Mis-set gate on the lower CNOT input (entangling case)");
  add_common(cmd_fig3, true, false);

  // teleport
  auto* cmd_teleport = app.add_subcommand(
      "teleport", "One pass of the one-bit teleportation circuit");
  add_common(cmd_teleport, true, true);

  // recover
  auto* cmd_recover = app.add_subcommand(
      "recover", "Distribution of the iterative recovery process");
  std::string model = "series";
  double receiver_delta = 0.0;
  cmd_recover->add_option("--model", model, "Recovery model")
      ->check(CLI::IsMember(
          {"series", "oracle", "exact-born", "mc-idealized", "mc-born",
           "quantized"}));
  cmd_recover->add_option("--passes", passes,
                          "Recovery opportunities to report")
      ->check(CLI::NonNegativeNumber);
  cmd_recover->add_option("--trials", trials, "Monte Carlo trials");
  cmd_recover->add_option("--seed", seed, "Monte Carlo seed");
  cmd_recover->add_option("--threads", threads,
                          "Worker threads (does not change results)");
  cmd_recover->add_option("--receiver-delta", receiver_delta,
                          "Receiver angle resolution (quantized model)");
  add_common(cmd_recover, true, true);

  // sweep
  auto* cmd_sweep = app.add_subcommand(
      "sweep", "Purity, entropy and first-pass recovery over a theta grid");
  std::string grid_spec = "0:90:5";
  cmd_sweep->add_option("--grid", grid_spec, "Angle grid lo:hi:step");
  add_common(cmd_sweep, true, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*cmd_entropy) {
      json rows = json::array();
      std::string csv =
          "mode,k,a,lo,hi,delta_in,delta_out,h_in_bits,h_out_bits,"
          "control_entropy_bits,precision_term_bits,absolute_in_bits,"
          "feasible\n";
      const sg::PrecisionModel prec(delta_in > 0.0 ? delta_in : 1.0,
                                    delta_out > 0.0
                                        ? delta_out
                                        : (delta_in > 0.0 ? delta_in : 1.0));

      auto push_report = [&](const std::string& mode, const json& params,
                             const sg::EntropyReport& r,
                             std::optional<double> absolute,
                             const std::string& csv_prefix) {
        json row{{"mode", mode},
                 {"h_in_bits", r.h_in_bits},
                 {"h_out_bits", r.h_out_bits},
                 {"control_entropy_bits", r.control_entropy_bits},
                 {"precision_term_bits", r.precision_term_bits},
                 {"feasible", r.feasible}};
        for (auto& [k, v] : params.items()) row[k] = v;
        if (absolute) row["absolute_in_bits"] = *absolute;
        rows.push_back(row);
        csv += csv_prefix + "," + g17(r.h_in_bits) + "," + g17(r.h_out_bits) +
               "," + g17(r.control_entropy_bits) + "," +
               g17(r.precision_term_bits) + "," +
               (absolute ? g17(*absolute) : "") + "," +
               (r.feasible ? "true" : "false") + "\n";
      };

      bool any = false;
      if (ent_k > 0.0) {
        any = true;
        const sg::EntropyReport r =
            sg::multiplier_gate_complexity(ent_k, ent_a, budget_bits, prec);
        push_report("multiplier", {{"k", ent_k}, {"a", ent_a}}, r,
                    std::nullopt,
                    "multiplier," + g17(ent_k) + "," + g17(ent_a) + ",,," +
                        g17(prec.delta_in) + "," + g17(prec.delta_out));
      }
      if (ent_rotation) {
        any = true;
        const sg::EntropyReport r =
            sg::rotation_gate_complexity(ent_a, budget_bits, prec);
        push_report("rotation", {{"a", ent_a}}, r, std::nullopt,
                    "rotation,," + g17(ent_a) + ",,," + g17(prec.delta_in) +
                        "," + g17(prec.delta_out));
      }
      if (!ent_uniform.empty()) {
        any = true;
        const sg::Distribution d =
            sg::Distribution::uniform(ent_uniform[0], ent_uniform[1]);
        const double h = sg::differential_entropy(d);
        sg::EntropyReport r;
        r.h_in_bits = r.h_out_bits = h;
        r.control_entropy_bits = 0.0;
        r.precision_term_bits = 0.0;
        r.feasible = true;
        std::optional<double> absolute;
        if (delta_in > 0.0) absolute = sg::precision_entropy(d, delta_in);
        push_report("uniform",
                    {{"lo", ent_uniform[0]}, {"hi", ent_uniform[1]}}, r,
                    absolute,
                    "uniform,,," + g17(ent_uniform[0]) + "," +
                        g17(ent_uniform[1]) + "," +
                        (delta_in > 0.0 ? g17(delta_in) : "") + ",");
      }
      if (!ent_empirical.empty()) {
        any = true;
        std::ifstream f(ent_empirical);
        if (!f)
          throw std::invalid_argument("cannot read samples: " + ent_empirical);
        std::vector<double> samples;
        double x;
        while (f >> x) samples.push_back(x);
        const sg::Distribution d = sg::Distribution::empirical(samples);
        const double h = sg::differential_entropy(d);
        sg::EntropyReport r;
        r.h_in_bits = r.h_out_bits = h;
        r.control_entropy_bits = 0.0;
        r.precision_term_bits = 0.0;
        r.feasible = true;
        std::optional<double> absolute;
        if (delta_in > 0.0) absolute = sg::precision_entropy(d, delta_in);
        push_report("empirical",
                    {{"samples", samples.size()},
                     {"path", ent_empirical}},
                    r, absolute,
                    "empirical,,,,," + (delta_in > 0.0 ? g17(delta_in) : "") +
                        ",");
      }
      if (!any)
        throw std::invalid_argument(
            "entropy: give --k, --rotation, --uniform or --empirical");

      const json config{{"subcommand", "entropy"},
                        {"budget_bits", budget_bits},
                        {"delta_in", prec.delta_in},
                        {"delta_out", prec.delta_out}};
      emit(config, json{{"rows", rows}}, csv, format, out_path);
      return kExitOk;
    }

    if (*cmd_fig2) {
      if (cmd_fig2->count("--theta") == 0)
        throw std::invalid_argument("fig2: --theta is required");
      const double t = angle.rad();
      const sg::Fig2Result r = sg::run_fig2(t);
      const auto schmidt = sg::schmidt_coefficients(r.joint_state);
      const json config{{"subcommand", "fig2"},
                        {"theta_radians", t},
                        {"theta_degrees", t * 180.0 / M_PI}};
      const json results{{"joint_state", amps_json(r.joint_state)},
                         {"upper_state", amps_json(r.upper_state)},
                         {"corrected_upper", amps_json(r.corrected_upper)},
                         {"schmidt_coefficients",
                          json::array({schmidt[0], schmidt[1]})}};
      std::string csv = "part,index,re,im\n";
      csv += state_csv("joint_state", r.joint_state);
      csv += state_csv("upper_state", r.upper_state);
      csv += state_csv("corrected_upper", r.corrected_upper);
      emit(config, results, csv, format, out_path);
      return kExitOk;
    }

    if (*cmd_fig3) {
      if (cmd_fig3->count("--theta") == 0)
        throw std::invalid_argument("fig3: --theta is required");
      const double t = angle.rad();
      const sg::Fig3Result r = sg::run_fig3(t);
      const json config{{"subcommand", "fig3"},
                        {"theta_radians", t},
                        {"theta_degrees", t * 180.0 / M_PI}};
      const json results{
          {"joint_state", amps_json(r.joint_state)},
          {"rho_ab", matrix_json(r.rho_ab)},
          {"rho_a", matrix_json(r.rho_a)},
          {"purity", sg::purity(r.rho_a)},
          {"von_neumann_entropy_bits", sg::von_neumann_entropy(r.rho_a)},
          {"locally_correctable", r.locally_correctable}};
      std::string csv = "part,index,re,im\n";
      csv += state_csv("joint_state", r.joint_state);
      csv += matrix_csv("rho_ab", r.rho_ab);
      csv += matrix_csv("rho_a", r.rho_a);
      csv += "purity,," + g17(sg::purity(r.rho_a)) + ",\n";
      csv += "von_neumann_entropy_bits,," +
             g17(sg::von_neumann_entropy(r.rho_a)) + ",\n";
      csv += std::string("locally_correctable,,") +
             (r.locally_correctable ? "true" : "false") + ",\n";
      emit(config, results, csv, format, out_path);
      return kExitOk;
    }

    if (*cmd_teleport) {
      const double t = angle.rad();
      const sg::Complex a = amp.alpha(angle.radians);
      const sg::Complex b = amp.beta(angle.radians);
      const sg::TeleportResult r = sg::teleport_once(a, b, t);
      json branches = json::array();
      for (const sg::MeasurementBranch& br : r.branches) {
        branches.push_back(
            {{"outcome", br.outcome},
             {"probability", br.probability},
             {"post_state",
              br.post_state ? amps_json(*br.post_state) : json(nullptr)}});
      }
      const json config{{"subcommand", "teleport"},
                        {"theta_radians", t},
                        {"alpha2", amp.alpha2},
                        {"alpha", json::array({a.real(), a.imag()})},
                        {"beta", json::array({b.real(), b.imag()})}};
      const json results{
          {"premeasure_state", amps_json(r.premeasure_state)},
          {"branches", branches},
          {"x_plus", r.x_plus ? amps_json(*r.x_plus) : json(nullptr)},
          {"x_minus", r.x_minus ? amps_json(*r.x_minus) : json(nullptr)}};
      std::string csv = "part,index,re,im\n";
      csv += state_csv("premeasure_state", r.premeasure_state);
      csv += "branch_probability,0," + g17(r.branches[0].probability) + ",\n";
      csv += "branch_probability,1," + g17(r.branches[1].probability) + ",\n";
      if (r.x_plus) csv += state_csv("x_plus", *r.x_plus);
      if (r.x_minus) csv += state_csv("x_minus", *r.x_minus);
      emit(config, results, csv, format, out_path);
      return kExitOk;
    }

    if (*cmd_recover) {
      const double t = angle.rad();
      const sg::Complex a = amp.alpha(angle.radians);
      const sg::Complex b = amp.beta(angle.radians);

      json config{{"subcommand", "recover"},
                  {"model", model},
                  {"theta_radians", t},
                  {"alpha2", amp.alpha2}};

      if (model == "quantized") {
        if (!(receiver_delta > 0.0))
          throw std::invalid_argument(
              "recover: quantized model needs --receiver-delta > 0");
        const int mp = passes > 0 ? passes : 50;
        const sg::QuantizedRecoverySummary q = sg::quantized_recovery(
            a, b, t, receiver_delta, trials, seed, mp);
        config["receiver_delta"] = receiver_delta;
        config["trials"] = trials;
        config["seed"] = seed;
        config["passes"] = mp;
        const json results{{"theta_estimate", q.theta_estimate},
                           {"mean_fidelity", q.mean_fidelity},
                           {"min_fidelity", q.min_fidelity},
                           {"declared_fraction", q.declared_fraction},
                           {"declared_trials", q.declared_trials},
                           {"trials", q.trials},
                           {"seed", q.seed}};
        std::string csv =
            "theta_estimate,mean_fidelity,min_fidelity,declared_fraction,"
            "declared_trials,trials,seed\n";
        csv += g17(q.theta_estimate) + "," + g17(q.mean_fidelity) + "," +
               g17(q.min_fidelity) + "," + g17(q.declared_fraction) + "," +
               std::to_string(q.declared_trials) + "," +
               std::to_string(q.trials) + "," + std::to_string(q.seed) + "\n";
        emit(config, results, csv, format, out_path);
        return kExitOk;
      }

      sg::RecoveryDistribution dist;
      if (model == "series") {
        dist = sg::recovery_series(passes > 0 ? passes : 10);
      } else if (model == "oracle") {
        dist = sg::first_passage_oracle(2 * (passes > 0 ? passes : 8));
      } else if (model == "exact-born") {
        dist = sg::exact_recovery_distribution(a, b, t,
                                               passes > 0 ? passes : 20);
      } else {
        const sg::SamplingModel sampling = model == "mc-idealized"
                                               ? sg::SamplingModel::idealized
                                               : sg::SamplingModel::exact_born;
        dist = sg::monte_carlo_recovery(a, b, t, trials, seed, sampling,
                                        passes > 0 ? passes : 50, threads);
        // worker layout deliberately left out of the echo: results are
        // shard-independent and outputs must be byte-identical
        config["trials"] = trials;
        config["seed"] = seed;
      }
      config["passes"] = static_cast<int>(dist.per_pass.size());

      std::string csv = "pass,probability,std_error,cumulative,exact\n";
      for (std::size_t i = 0; i < dist.per_pass.size(); ++i) {
        const sg::PassProbability& p = dist.per_pass[i];
        csv += std::to_string(p.pass) + "," + g17(p.probability) + "," +
               g17(p.std_error) + "," + g17(dist.cumulative[i]) + "," +
               (p.exact ? csv_field(p.exact->to_string()) : "") + "\n";
      }
      emit(config, distribution_json(dist), csv, format, out_path);
      return kExitOk;
    }

    if (*cmd_sweep) {
      double lo = 0.0, hi = 0.0, step = 0.0;
      {
        std::istringstream in(grid_spec);
        char c1 = 0, c2 = 0;
        if (!(in >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':')
          throw std::invalid_argument("sweep: --grid must be lo:hi:step");
      }
      if (!(step > 0.0) || hi < lo)
        throw std::invalid_argument("sweep: empty or invalid grid");
      const sg::Complex a = amp.alpha(angle.radians);
      const sg::Complex b = amp.beta(angle.radians);

      const int count = static_cast<int>(std::floor((hi - lo) / step)) + 1;
      json rows = json::array();
      std::string csv =
          "theta_degrees,theta_radians,purity,von_neumann_entropy_bits,"
          "recovery_pass1_exact\n";
      for (int i = 0; i < count; ++i) {
        const double theta = lo + static_cast<double>(i) * step;
        const double rad = angle.radians ? theta : deg_to_rad(theta);
        const double deg = angle.radians ? theta * 180.0 / M_PI : theta;
        const sg::Fig3Result r = sg::run_fig3(rad);
        const double pur = sg::purity(r.rho_a);
        const double ent = sg::von_neumann_entropy(r.rho_a);
        const double pass1 =
            sg::exact_recovery_distribution(a, b, rad, 1).per_pass[0]
                .probability;
        rows.push_back({{"theta_degrees", deg},
                        {"theta_radians", rad},
                        {"purity", pur},
                        {"von_neumann_entropy_bits", ent},
                        {"recovery_pass1_exact", pass1}});
        csv += g17(deg) + "," + g17(rad) + "," + g17(pur) + "," + g17(ent) +
               "," + g17(pass1) + "\n";
      }
      const json config{{"subcommand", "sweep"},
                        {"grid", {{"lo", lo}, {"hi", hi}, {"step", step}}},
                        {"radians", angle.radians},
                        {"alpha2", amp.alpha2}};
      emit(config, json{{"rows", rows}}, csv, format, out_path);
      return kExitOk;
    }
  } catch (const std::length_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitResourceLimit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitOk;
}
