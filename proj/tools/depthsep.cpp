// Copyright 2026 The depthsep Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "depthsep/depthsep.hpp"

namespace ds = depthsep;
using ds::Json;

namespace {

// Values from a JSON config file fill every option of `app` that was not
// given on the command line. Keys are option names without leading dashes.
void apply_config(CLI::App& app, const std::string& path) {
  const Json cfg = ds::parse_json(ds::read_text_file(path));
  if (!cfg.is_object()) throw ds::ParseError("config file must hold a JSON object");
  for (const auto& [key, value] : cfg.items()) {
    CLI::Option* opt = app.get_option_no_throw("--" + key);
    if (opt == nullptr) throw ds::ParseError("config key '" + key + "' is not an option of '" + app.get_name() + "'");
    if (opt->count() > 0) continue;
    std::string text;
    if (value.is_string())
      text = value.get<std::string>();
    else if (value.is_boolean())
      text = value.get<bool>() ? "true" : "false";
    else
      text = value.dump();
    opt->add_result(text);
    opt->run_callback();
  }
}

void emit(const Json& j, const std::string& out) {
  const std::string text = j.dump(2) + "\n";
  if (out.empty())
    std::cout << text;
  else
    ds::write_text_file(out, text);
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  for (auto part : ds::detail::split(s, ',')) {
    if (part.empty()) continue;
    out.push_back(static_cast<int>(ds::parse_uint(part)));
  }
  return out;
}

// "d<=3", "d=2" or "1,2,3".
std::vector<int> parse_dim_filter(std::string s) {
  s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
  if (s.rfind("d<=", 0) == 0) {
    std::vector<int> out;
    for (int d = 1; d <= static_cast<int>(ds::parse_uint(s.substr(3))); ++d) out.push_back(d);
    return out;
  }
  if (s.rfind("d=", 0) == 0) return {static_cast<int>(ds::parse_uint(s.substr(2)))};
  return parse_int_list(s);
}

// "key=value,key=value" with integer values.
std::map<std::string, int> parse_assignments(const std::string& s) {
  std::map<std::string, int> out;
  for (auto part : ds::detail::split(s, ',')) {
    const auto eq = part.find('=');
    if (eq == std::string_view::npos) throw ds::ParseError("expected key=value, got '" + std::string(part) + "'");
    out[std::string(part.substr(0, eq))] = static_cast<int>(ds::parse_uint(part.substr(eq + 1)));
  }
  return out;
}

ds::InstanceSpec load_or_build_instance(const std::string& path, int d, std::uint64_t seed) {
  if (!path.empty()) return ds::instance_from_json(ds::parse_json(ds::read_text_file(path)));
  return ds::build_instance(d, seed, ds::kDefaultPackingAttempts);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Depth-separation toolkit: instances, constructions, compilers and checks."};
  app.require_subcommand(1);

  int d = 1, big_d = 0;
  std::uint64_t seed = 0;
  std::size_t width = 16, epochs = 20;
  std::string out, config;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "JSON file with option values");
  };

  // build-instance
  std::size_t n_samples = 0;
  std::string samples_out;
  auto* build = app.add_subcommand("build-instance", "Build a packing instance and optional samples");
  build->add_option("--d", d, "Half-dimension d (1..6)");
  build->add_option("--seed", seed, "Seed");
  build->add_option("--out", out, "Instance JSON path (stdout if empty)");
  build->add_option("--samples", n_samples, "Number of U(A_4d) samples to export");
  build->add_option("--samples-out", samples_out, "Samples CSV path");
  common(build);

  // eval
  std::string net_path, instance_path;
  std::size_t eval_n = 10000;
  auto* eval = app.add_subcommand("eval", "Estimate population loss and sup error of a network");
  eval->add_option("--net", net_path, "Network JSON")->required();
  eval->add_option("--instance", instance_path, "Instance JSON (built from --d/--seed if empty)");
  eval->add_option("--d", d, "Half-dimension d");
  eval->add_option("--seed", seed, "Seed");
  eval->add_option("--n", eval_n, "Sample count");
  eval->add_option("--out", out, "Report JSON path");
  common(eval);

  // build-depth3
  double eps = 0.1;
  std::string approximator = "relu", report_path;
  auto* depth3 = app.add_subcommand("build-depth3", "Build a depth-3 network for f_d with a certificate");
  depth3->add_option("--d", d, "Half-dimension d");
  depth3->add_option("--eps", eps, "Target accuracy");
  depth3->add_option("--approximator", approximator, "exact, relu or threshold")
      ->check(CLI::IsMember({"exact", "relu", "threshold"}));
  depth3->add_option("--seed", seed, "Seed for the measured error");
  depth3->add_option("--n", eval_n, "Sample count for the measured error");
  depth3->add_option("--out", out, "Network JSON path");
  depth3->add_option("--report", report_path, "Certificate JSON path (stdout if empty)");
  common(depth3);

  // compile-threshold
  double delta = 0.05;
  auto* compile = app.add_subcommand("compile-threshold", "Compile a depth-2 network to threshold units");
  compile->add_option("--net", net_path, "Network JSON")->required();
  compile->add_option("--delta", delta, "Accuracy");
  compile->add_option("--out", out, "Compiled network JSON path");
  compile->add_option("--report", report_path, "Report JSON path (stdout if empty)");
  compile->add_option("--seed", seed, "Seed for sampled certification above 12 inputs");
  common(compile);

  // reduce
  std::size_t blocks = 16;
  std::string base_path;
  auto* reduce = app.add_subcommand("reduce", "Build the averaged network of the random self-reduction");
  reduce->add_option("--d", d, "Half-dimension d");
  reduce->add_option("--D", big_d, "Padding length (default 100 d)");
  reduce->add_option("--blocks", blocks, "Number of averaged blocks");
  reduce->add_option("--seed", seed, "Seed");
  reduce->add_option("--base", base_path, "Base depth-2 network on 2(4d+D) inputs (random if empty)");
  reduce->add_option("--width", width, "Width of the random base network");
  reduce->add_option("--out", out, "Averaged network JSON path");
  reduce->add_option("--report", report_path, "Report JSON path (stdout if empty)");
  common(reduce);

  // verify-lemmas
  std::string binomial_grid, moment_dims, l2;
  double moment_s = 0.0;
  auto* lemmas = app.add_subcommand("verify-lemmas", "Exact checks of the moment inequalities and L2 bound");
  lemmas->add_option("--binomial", binomial_grid, "Grid 'd1,d2xD1,D2,...' (multiples of 4)");
  lemmas->add_option("--moment", moment_dims, "Dimensions 'd<=3', 'd=2' or '1,2'");
  lemmas->add_option("--moment-s", moment_s, "Exponent s (default 1/(48d))");
  lemmas->add_option("--l2", l2, "Parameters 'd=1,D=100'");
  lemmas->add_option("--out", out, "Report JSON path");
  common(lemmas);

  // train-baseline
  std::string widths_arg, csv_out;
  ds::TrainConfig tcfg;
  std::string optimizer = "adam";
  std::optional<double> clip;
  auto* train = app.add_subcommand("train-baseline", "Train depth-2 baselines and tabulate losses");
  train->add_option("--d", d, "Half-dimension d");
  train->add_option("--seed", seed, "Seed");
  train->add_option("--width", width, "Hidden width");
  train->add_option("--widths", widths_arg, "Comma-separated widths (overrides --width)");
  train->add_option("--epochs", epochs, "Epochs");
  train->add_option("--batch-size", tcfg.batch_size, "Batch size");
  train->add_option("--steps", tcfg.steps_per_epoch, "Steps per epoch");
  train->add_option("--lr", tcfg.learning_rate, "Learning rate");
  train->add_option("--optimizer", optimizer, "sgd or adam")->check(CLI::IsMember({"sgd", "adam"}));
  train->add_option("--activation", tcfg.activation, "relu or sigmoid");
  train->add_option("--clip", clip, "Weight clip C");
  train->add_option("--n", eval_n, "Samples for the population-loss estimate");
  train->add_option("--out", out, "Report JSON path");
  train->add_option("--csv", csv_out, "Report CSV path");
  common(train);

  // report
  std::string in_path;
  auto* report = app.add_subcommand("report", "Convert an experiment report JSON to CSV");
  report->add_option("--in", in_path, "Report JSON")->required();
  report->add_option("--out", out, "CSV path (stdout if empty)");

  // verify-all
  std::vector<std::string> only;
  bool corrupt = false;
  auto* verify = app.add_subcommand("verify-all", "Run the property suite");
  verify->add_option("--seed", seed, "Seed");
  verify->add_option("--only", only, "Restrict to these checks")->delimiter(',');
  verify->add_flag("--corrupt-packing", corrupt, "Inject a packing violation");
  verify->add_option("--out", out, "Summary JSON path");
  common(verify);

  CLI11_PARSE(app, argc, argv);

  try {
    for (auto* sub : app.get_subcommands())
      if (!config.empty()) apply_config(*sub, config);
    if (big_d == 0) big_d = 100 * d;

    if (build->parsed()) {
      const auto spec = ds::build_instance(d, seed, ds::kDefaultPackingAttempts);
      emit(ds::instance_to_json(spec), out);
      if (n_samples > 0) {
        const auto csv = ds::samples_to_csv(d, ds::sample_a4d(spec, n_samples, seed));
        if (samples_out.empty())
          std::cout << csv;
        else
          ds::write_text_file(samples_out, csv);
      }
      return 0;
    }

    if (eval->parsed()) {
      const auto net = ds::network_from_json(ds::parse_json(ds::read_text_file(net_path)));
      const auto spec = load_or_build_instance(instance_path, d, seed);
      const auto est = ds::estimate_population_loss(net, spec, eval_n, seed);
      const double sup = ds::measured_sup_error(net, spec, eval_n, seed);
      emit({{"d", spec.d},
            {"n", est.n},
            {"mean_squared_error", est.mean},
            {"std_error", est.std_error},
            {"ci_low", est.ci_low()},
            {"ci_high", est.ci_high()},
            {"measured_sup_error", sup}},
           out);
      return 0;
    }

    if (depth3->parsed()) {
      const auto spec = ds::build_instance(d, seed, ds::kDefaultPackingAttempts);
      ds::Depth3Build b{ds::build_exact_relu(d), {}};
      if (approximator == "exact") {
        b.accounting = ds::account(b.net, d, 0.0);
      } else {
        b = ds::build_generic(d, eps, approximator == "relu" ? ds::Approximator1D(ds::relu_1d_approximator)
                                                             : ds::Approximator1D(ds::threshold_1d_approximator));
      }
      const double err = ds::measured_sup_error(b.net, spec, eval_n, seed);
      if (!out.empty()) ds::write_text_file(out, ds::network_to_json(b.net).dump() + "\n");
      emit(ds::certificate_to_json(b.accounting, err), report_path);
      return 0;
    }

    if (compile->parsed()) {
      const auto net = ds::network_from_json(ds::parse_json(ds::read_text_file(net_path)));
      const auto comp = ds::compile_network(net, delta);
      const double err = ds::max_error_on_cube(net, comp.net, seed);
      auto rep = ds::compilation_to_json(comp, delta, err);
      rep["error_domain"] = net.input_dim() <= 12 ? "boolean_cube_exhaustive" : "boolean_cube_sampled";
      if (!out.empty()) ds::write_text_file(out, ds::network_to_json(comp.net).dump() + "\n");
      emit(rep, report_path);
      return rep["pass"].get<bool>() ? 0 : 1;
    }

    if (reduce->parsed()) {
      const ds::ReductionConfig cfg{d, big_d, seed, blocks};
      cfg.validate();
      const auto in_dim = static_cast<std::size_t>(2 * cfg.padded_length());
      ds::DenseNetwork base = [&] {
        if (!base_path.empty()) return ds::network_from_json(ds::parse_json(ds::read_text_file(base_path)));
        ds::Rng rng = ds::derive_rng(seed, 0x62617365ULL);
        return ds::random_depth2(in_dim, width, 1.0, ds::Activation::relu(), rng);
      }();
      const auto avg = ds::build_averaged_network(base, cfg, seed);
      const auto ud = static_cast<std::size_t>(d);
      double worst = 0.0;
      std::size_t ip_bad = 0;
      for (std::uint64_t idx = 0; idx < (std::uint64_t{1} << (2 * d)); ++idx) {
        const auto bits = ds::BitVec::from_index(idx, 2 * ud);
        const auto x = bits.slice(0, ud), y = bits.slice(ud, ud);
        double direct = 0.0;
        for (const auto& rec : avg.records) {
          const auto [X, Y] = ds::apply_record(x, y, rec);
          if (ds::ip_mod2(X, Y) != ds::ip_mod2(x, y)) ++ip_bad;
          auto in = X.to_real();
          const auto yr = Y.to_real();
          in.insert(in.end(), yr.begin(), yr.end());
          direct += base.evaluate(std::span<const double>(in));
        }
        direct /= static_cast<double>(avg.records.size());
        const auto xy = bits.to_real();
        worst = std::max(worst, std::abs(avg.net.evaluate(std::span<const double>(xy)) - direct));
      }
      const double bound = ds::output_bound_on_cube(base);
      if (!out.empty()) ds::write_text_file(out, ds::network_to_json(avg.net).dump() + "\n");
      Json rep = {{"d", d},
                  {"D", big_d},
                  {"blocks", blocks},
                  {"seed", seed},
                  {"base_width", base.width()},
                  {"averaged_width", avg.net.width()},
                  {"averaged_max_weight", avg.net.max_weight()},
                  {"max_equivalence_error", worst},
                  {"ip_violations", ip_bad},
                  {"output_bound", bound},
                  {"hoeffding_blocks", ds::hoeffding_block_count(bound, d)},
                  {"pass", ip_bad == 0 && worst <= 1e-9}};
      emit(rep, report_path);
      return rep["pass"].get<bool>() ? 0 : 1;
    }

    if (lemmas->parsed()) {
      Json reports = Json::array();
      bool ok = true;
      if (!binomial_grid.empty()) {
        const auto x = binomial_grid.find('x');
        if (x == std::string::npos) throw ds::ParseError("--binomial expects 'dlistxDlist'");
        for (int dd : parse_int_list(binomial_grid.substr(0, x)))
          for (int DD : parse_int_list(binomial_grid.substr(x + 1))) {
            const auto r = ds::verify_binomial_bound(dd, DD);
            ok = ok && r.pass;
            reports.push_back(ds::lemma_to_json(r));
          }
      }
      if (!moment_dims.empty()) {
        for (int dd : parse_dim_filter(moment_dims)) {
          const ds::Real s = moment_s > 0.0 ? ds::Real(moment_s) : ds::Real(1) / (48 * dd);
          const auto mode = dd <= 3 ? ds::MomentMode::exhaustive : ds::MomentMode::sampled;
          const auto r = ds::verify_moment_bound(dd, s, mode, 256, seed);
          ok = ok && r.pass;
          reports.push_back(ds::lemma_to_json(r));
        }
      }
      if (!l2.empty()) {
        const auto kv = parse_assignments(l2);
        const int dd = kv.count("d") ? kv.at("d") : 1;
        const int DD = kv.count("D") ? kv.at("D") : 100 * dd;
        const auto ud = static_cast<std::size_t>(dd);
        for (std::uint64_t a = 0; a < (std::uint64_t{1} << dd); ++a)
          for (std::uint64_t b = 0; b < (std::uint64_t{1} << dd); ++b) {
            const auto x = ds::BitVec::from_index(a, ud), y = ds::BitVec::from_index(b, ud);
            const auto r = ds::exact_l2_norm_squared(x, y, DD);
            ok = ok && (r.within_bound || !r.bound_armed);
            reports.push_back(ds::l2_to_json(r, dd, DD, x, y));
          }
      }
      emit(reports, out);
      return ok ? 0 : 1;
    }

    if (train->parsed()) {
      tcfg.width = width;
      tcfg.epochs = epochs;
      tcfg.seed = seed;
      tcfg.optimizer = ds::optimizer_from_name(optimizer);
      tcfg.weight_clip = clip;
      std::vector<std::size_t> ws;
      if (widths_arg.empty())
        ws.push_back(width);
      else
        for (int w : parse_int_list(widths_arg)) ws.push_back(static_cast<std::size_t>(w));
      const auto rep = ds::run_separation_experiment(d, ws, tcfg, seed, eval_n);
      if (!csv_out.empty()) ds::write_text_file(csv_out, ds::report_to_csv(rep.rows));
      emit(ds::report_to_json(rep), out);
      return 0;
    }

    if (report->parsed()) {
      const auto rep = ds::report_from_json(ds::parse_json(ds::read_text_file(in_path)));
      const auto csv = ds::report_to_csv(rep.rows);
      if (out.empty())
        std::cout << csv;
      else
        ds::write_text_file(out, csv);
      return 0;
    }

    if (verify->parsed()) {
      ds::VerifyOptions opt;
      opt.seed = seed;
      opt.only = std::set<std::string>(only.begin(), only.end());
      opt.corrupt_packing = corrupt;
      const auto summary = ds::verify_all(opt);
      for (const auto& c : summary.checks)
        std::cerr << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
      emit(summary.to_json(), out);
      return summary.all_pass() ? 0 : 1;
    }
  } catch (const ds::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
