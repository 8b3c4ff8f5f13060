// Command-line harness: run experiments from configs, compare algorithms,
// print stepsize roots, and run the numerical verification checks.

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mmx/certify.hpp"
#include "mmx/harness.hpp"
#include "mmx/mmx.hpp"

namespace {

using namespace mmx;

int cmd_run(const std::string& config_path, const std::string& output_override) {
  const ExperimentConfig cfg = ExperimentConfig::load(config_path);
  const std::vector<Trace> traces = run_experiment(cfg, output_override);
  int diverged = 0;
  for (const Trace& t : traces)
    if (t.status == RunStatus::diverged) ++diverged;
  std::cout << "wrote " << traces.size() << " trace(s) to "
            << (output_override.empty() ? cfg.output : output_override)
            << (diverged ? " (" + std::to_string(diverged) + " diverged)" : "") << '\n';
  return 0;
}

int cmd_compare(const std::vector<std::string>& config_paths, const std::string& output,
                bool gnuplot_stub) {
  std::vector<ExperimentConfig> configs;
  configs.reserve(config_paths.size());
  for (const auto& p : config_paths) configs.push_back(ExperimentConfig::load(p));
  const ComparisonSummary summary = compare(configs);
  if (output.empty()) {
    write_comparison_csv(summary, std::cout);
  } else {
    std::ofstream out(output);
    if (!out) throw std::runtime_error("cannot write " + output);
    write_comparison_csv(summary, out);
    if (gnuplot_stub) {
      std::ofstream gp(output + ".gp");
      write_gnuplot_stub(summary, output, gp);
      std::cout << "wrote " << output << " and " << output << ".gp\n";
    } else {
      std::cout << "wrote " << output << '\n';
    }
  }
  return 0;
}

int cmd_roots(const std::string& kind, int T, double m, double M, double L) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::cout << "index,root,stepsize_magnitude\n";
  if (kind == "bilinear") {
    const std::vector<double> roots = cheb::roots_shifted(T, m, M);
    for (int t = 0; t < T; ++t)
      std::cout << t << ',' << format_double(roots[static_cast<std::size_t>(t)]) << ','
                << format_double(1.0 / std::sqrt(roots[static_cast<std::size_t>(t)])) << '\n';
    std::cout << -1 << ',' << format_double(cheb::extremal_rate_bilinear(T, m, M)) << ','
              << format_double(nan) << '\n';
  } else if (kind == "quadratic") {
    const double smooth = std::isnan(L) ? M : L;
    const std::vector<double> roots = cheb::quadratic_roots(T, smooth);
    for (std::size_t i = 0; i < roots.size(); ++i)
      std::cout << i << ',' << format_double(roots[i]) << ',' << format_double(1.0 / roots[i])
                << '\n';
    std::cout << -1 << ',' << format_double(cheb::extremal_rate_quadratic(T, smooth)) << ','
              << format_double(nan) << '\n';
  } else {
    throw std::domain_error("roots: kind must be bilinear or quadratic");
  }
  return 0;
}

void print_row(int trial, bool ok, double value) {
  std::cout << trial << ',' << (ok ? "ok" : "fail") << ',' << format_double(value) << '\n';
}

// Random L=1 bilinear instance and point for the expansion/hamiltonian trials.
BilinearProblem random_small_bilinear(std::uint64_t s, Point& z, double& h) {
  const int dx = 1 + static_cast<int>(mix64(s, 0) % 7);
  const int dy = 1 + static_cast<int>(mix64(s, 1) % 7);
  Mat B(dx, dy);
  for (int i = 0; i < dx; ++i)
    for (int j = 0; j < dy; ++j)
      B(i, j) = normal01(s, 2 + static_cast<std::uint64_t>(i) * dy + j);
  z = Point::Zero(dx, dy);
  const std::uint64_t zs = derive_seed(s, 101);
  for (int i = 0; i < dx; ++i) z.x(i) = normal01(zs, static_cast<std::uint64_t>(i));
  for (int i = 0; i < dy; ++i) z.y(i) = normal01(zs, static_cast<std::uint64_t>(dx + i));
  h = 1e-3 + 0.25 * uniform01(derive_seed(s, 102), 0);
  return BilinearProblem(B, Vec::Zero(dx), Vec::Zero(dy));
}

int cmd_verify(const std::string& check, int trials, std::uint64_t seed) {
  std::cout << "trial,status,residual_or_margin\n";
  int failures = 0;

  if (check == "two-step") {
    for (int i = 0; i < trials; ++i) {
      const std::uint64_t s = derive_seed(seed, static_cast<std::uint64_t>(i));
      const double mu = 0.9 * uniform01(s, 0);
      const double h = (1.0 / 3.0) * std::max(1e-3, uniform01(s, 1));
      const int d = 1 + static_cast<int>(mix64(s, 2) % 6);
      const ScscQuadratic p = random_scsc(d, mu, derive_seed(s, 3));
      Point z0 = Point::Zero(d, d);
      const std::uint64_t zs = derive_seed(s, 4);
      for (int k = 0; k < d; ++k) z0.x(k) = normal01(zs, static_cast<std::uint64_t>(k));
      for (int k = 0; k < d; ++k) z0.y(k) = normal01(zs, static_cast<std::uint64_t>(d + k));
      const CertificateReport rep = verify_two_step_certificate(p, z0, h);
      const ProgressCheck prog = check_two_step_progress(p, z0, h);
      const double defect =
          std::max({rep.identity_residual / rep.scale, -rep.min_term / rep.scale,
                    -prog.margin / prog.scale});
      const bool ok = rep.identity_residual <= 1e-8 * rep.scale &&
                      rep.min_term >= -1e-10 * rep.scale && prog.margin >= -1e-10 * prog.scale;
      failures += !ok;
      print_row(i, ok, defect);
    }
  } else if (check == "expansion") {
    for (int i = 0; i < trials; ++i) {
      Point z;
      double h;
      const BilinearProblem p = random_small_bilinear(derive_seed(seed, static_cast<std::uint64_t>(i)), z, h);
      const double err = check_second_order_expansion(p, z, h);
      const bool ok = err <= 1e-12 * (1.0 + z.norm());
      failures += !ok;
      print_row(i, ok, err);
    }
  } else if (check == "hamiltonian") {
    for (int i = 0; i < trials; ++i) {
      Point z;
      double h;
      const BilinearProblem p = random_small_bilinear(derive_seed(seed, static_cast<std::uint64_t>(i)), z, h);
      const double res = check_hamiltonian_equivalence(p, z, h);
      const bool ok = res <= 1e-12 * (1.0 + z.norm());
      failures += !ok;
      print_row(i, ok, res);
    }
  } else if (check == "divergence") {
    for (int i = 0; i < trials; ++i) {
      const std::uint64_t s = derive_seed(seed, static_cast<std::uint64_t>(i));
      const int len = 1 + static_cast<int>(mix64(s, 0) % 128);
      const bool symmetric = i % 2 == 1;
      StepPairSchedule sched{ScheduleKind::custom, {}, s};
      for (int t = 0; t < len; ++t) {
        if (symmetric) {
          const double a = 0.3 * uniform_sym(s, static_cast<std::uint64_t>(1 + t));
          sched.steps.push_back({a, a});
        } else {
          sched.steps.push_back({0.3 * uniform01(s, static_cast<std::uint64_t>(1 + 2 * t)),
                                 0.3 * uniform01(s, static_cast<std::uint64_t>(2 + 2 * t))});
        }
      }
      const DivergenceWitness w = check_divergence_witness(
          sched, symmetric ? DivergenceKind::symmetric : DivergenceKind::nonnegative);
      const bool ok = w.lower_bound >= 1.0 - 1e-12 && w.lower_bound <= w.realized + 1e-10;
      failures += !ok;
      print_row(i, ok, w.realized - w.lower_bound);
    }
  } else if (check == "tightness") {
    for (int i = 0; i < trials; ++i) {
      const int T = 1 + i % 8;
      const double kappa = (i / 8) % 2 == 0 ? 4.0 : 100.0;
      const TightnessReport rep = lower_bound_tightness(T, 1.0, kappa);
      const double rel = std::abs(rep.realized - rep.expected) / rep.expected;
      const bool ok = rel <= 1e-6;
      failures += !ok;
      print_row(i, ok, rel);
    }
  } else if (check == "cycling") {
    const CyclingReport rep = check_cycling_counterexamples();
    print_row(0, rep.zero_net_revisits, rep.zero_net_revisits ? 0.0 : 1.0);
    print_row(1, rep.hgd_stationary, rep.hgd_stationary ? 0.0 : 1.0);
    print_row(2, rep.quadratic_branch_moves, rep.quadratic_branch_moves ? 0.0 : 1.0);
    failures += !rep.all_pass();
  } else {
    throw std::domain_error("unknown check: " + check);
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"min-max optimization toolkit"};
  app.require_subcommand(1);

  std::string config_path, output;
  auto* run = app.add_subcommand("run", "run an experiment config");
  run->add_option("config", config_path, "config JSON file")->required();
  run->add_option("--output", output, "override the config's output directory");

  std::vector<std::string> compare_paths;
  std::string compare_output;
  bool gnuplot_stub = false;
  auto* cmp = app.add_subcommand("compare", "aligned comparison of several configs");
  cmp->add_option("configs", compare_paths, "config JSON files")->required()->expected(-1);
  cmp->add_option("--output", compare_output, "comparison CSV path (default stdout)");
  cmp->add_flag("--gnuplot-stub", gnuplot_stub, "also write a gnuplot script next to the CSV");

  std::string roots_kind;
  int roots_T = 1;
  double roots_m = 1.0, roots_M = 1.0;
  double roots_L = std::numeric_limits<double>::quiet_NaN();
  auto* roots = app.add_subcommand("roots", "print stepsize roots and the extremal rate");
  roots->add_option("--kind", roots_kind, "bilinear or quadratic")->required();
  roots->add_option("--T", roots_T, "number of stepsize pairs")->required();
  roots->add_option("--m", roots_m, "lower spectral bound (bilinear)");
  roots->add_option("--M", roots_M, "upper spectral bound; smoothness for quadratic");
  roots->add_option("--L", roots_L, "smoothness (quadratic; defaults to --M)");

  std::string check;
  int trials = 100;
  std::uint64_t seed = 0;
  auto* verify = app.add_subcommand("verify", "numerical verification checks");
  verify->add_option("check", check, "two-step|expansion|divergence|hamiltonian|tightness|cycling")
      ->required();
  verify->add_option("--trials", trials, "number of trials");
  verify->add_option("--seed", seed, "base seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config_path, output);
    if (*cmp) return cmd_compare(compare_paths, compare_output, gnuplot_stub);
    if (*roots) return cmd_roots(roots_kind, roots_T, roots_m, roots_M, roots_L);
    if (*verify) return cmd_verify(check, trials, seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
