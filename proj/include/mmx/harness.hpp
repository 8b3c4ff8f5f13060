#pragma once

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "mmx/io.hpp"
#include "mmx/problems.hpp"
#include "mmx/schedules.hpp"
#include "mmx/solvers.hpp"

namespace mmx {

using json = nlohmann::json;

// Parsed experiment description. `seed` drives everything stochastic:
// per-trial schedule seeds are derived from it, so (config, seed) determines
// every output byte.
struct ExperimentConfig {
  json problem;
  json algorithm;
  json init;  // optional; defaults to the all-ones point
  int record_every = 1;
  int trials = 1;
  std::uint64_t seed = 0;
  std::string output;
  std::string label;

  static ExperimentConfig from_json(const json& j) {
    ExperimentConfig c;
    if (!j.contains("problem") || !j.contains("algorithm"))
      throw std::domain_error("config: needs `problem` and `algorithm`");
    c.problem = j.at("problem");
    c.algorithm = j.at("algorithm");
    c.init = j.value("init", json::object());
    c.record_every = j.value("record_every", 1);
    c.trials = j.value("trials", 1);
    c.seed = j.value("seed", std::uint64_t{0});
    c.output = j.value("output", std::string{});
    c.label = j.value("label", std::string{});
    if (c.trials < 1) throw std::domain_error("config: trials must be >= 1");
    if (c.record_every < 1) throw std::domain_error("config: record_every must be >= 1");
    return c;
  }

  static ExperimentConfig load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    json j;
    in >> j;
    ExperimentConfig c = from_json(j);
    if (c.label.empty()) c.label = std::filesystem::path(path).stem().string();
    return c;
  }
};

namespace detail {

inline Vec json_to_vec(const json& j) {
  Vec v(static_cast<Index>(j.size()));
  for (Index i = 0; i < v.size(); ++i) v(i) = j.at(static_cast<std::size_t>(i)).get<double>();
  return v;
}

}  // namespace detail

// Problem specs understood by the harness; matrices may come from dense CSV
// files (row-major, comma-separated, no header).
inline std::unique_ptr<Problem> make_problem(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "xy") {
    return std::make_unique<BilinearProblem>(Mat::Identity(1, 1), Vec::Zero(1), Vec::Zero(1));
  }
  if (kind == "random_bilinear") {
    return std::make_unique<BilinearProblem>(random_bilinear(
        j.at("d").get<int>(), j.at("M").get<double>(), j.value("seed", std::uint64_t{0})));
  }
  if (kind == "bilinear") {
    Mat B;
    if (j.contains("matrix_file")) {
      B = load_matrix_csv(j.at("matrix_file").get<std::string>());
    } else if (j.contains("diag_geometric")) {
      const auto& g = j.at("diag_geometric");
      const int d = g.at("d").get<int>();
      const double first = g.value("first", 1.0);
      const double ratio = g.at("ratio").get<double>();
      B = Mat::Zero(d, d);
      double v = first;
      for (int i = 0; i < d; ++i, v *= ratio) B(i, i) = v;
    } else {
      throw std::domain_error("bilinear problem: needs matrix_file or diag_geometric");
    }
    Vec xs = j.contains("x_shift") ? detail::json_to_vec(j.at("x_shift")) : Vec::Zero(B.rows());
    Vec ys = j.contains("y_shift") ? detail::json_to_vec(j.at("y_shift")) : Vec::Zero(B.cols());
    std::optional<double> m, M;
    if (j.contains("m")) m = j.at("m").get<double>();
    if (j.contains("M")) M = j.at("M").get<double>();
    return std::make_unique<BilinearProblem>(std::move(B), std::move(xs), std::move(ys), m, M);
  }
  if (kind == "quadratic") {
    const Mat A = load_matrix_csv(j.at("A_file").get<std::string>());
    const Mat B = load_matrix_csv(j.at("B_file").get<std::string>());
    const Mat C = load_matrix_csv(j.at("C_file").get<std::string>());
    Vec xs = j.contains("x_shift") ? detail::json_to_vec(j.at("x_shift")) : Vec::Zero(A.rows());
    Vec ys = j.contains("y_shift") ? detail::json_to_vec(j.at("y_shift")) : Vec::Zero(C.rows());
    std::optional<double> L;
    if (j.contains("L")) L = j.at("L").get<double>();
    return std::make_unique<QuadraticProblem>(A, B, C, std::move(xs), std::move(ys), L);
  }
  if (kind == "scsc_random") {
    return std::make_unique<ScscQuadratic>(
        random_scsc(j.at("d").get<int>(), j.at("mu").get<double>(),
                    j.value("seed", std::uint64_t{0}), j.value("with_linear", true)));
  }
  if (kind == "huber") return std::make_unique<HuberCoupling>();
  if (kind == "logcosh") return std::make_unique<LogCoshProblem>();
  throw std::domain_error("unknown problem kind: " + kind);
}

// Schedule specs. For slingshot/arcsine kinds `T` counts stepsize pairs
// (horizon 2T); for classical kinds it counts iterations.
inline StepPairSchedule make_schedule(const json& j, std::uint64_t trial_seed) {
  const std::string kind = j.at("kind").get<std::string>();
  const int T = j.at("T").get<int>();
  const std::uint64_t seed = j.contains("seed") ? j.at("seed").get<std::uint64_t>() : trial_seed;

  RootOrdering ordering = RootOrdering::automatic;
  if (j.contains("ordering")) {
    const std::string o = j.at("ordering").get<std::string>();
    if (o == "automatic") ordering = RootOrdering::automatic;
    else if (o == "canonical") ordering = RootOrdering::canonical;
    else if (o == "lebedev") ordering = RootOrdering::lebedev;
    else throw std::domain_error("unknown ordering: " + o);
  }

  if (kind == "slingshot_bilinear")
    return slingshot_bilinear(T, j.at("m").get<double>(), j.at("M").get<double>(), ordering);
  if (kind == "slingshot_quadratic")
    return slingshot_quadratic(T, j.at("L").get<double>(),
                               j.contains("ordering") ? ordering : RootOrdering::canonical);
  if (kind == "slingshot_cc") return slingshot_cc(T, j.at("h").get<double>(), seed);
  if (kind == "arcsine")
    return arcsine_random(T, j.at("m").get<double>(), j.at("M").get<double>(), seed);
  if (kind == "constant")
    return classical(ClassicalKind::constant, j.at("alpha").get<double>(),
                     j.at("beta").get<double>(), T);
  if (kind == "alternating")
    return classical(ClassicalKind::alternating, j.at("alpha").get<double>(),
                     j.value("beta", j.at("alpha").get<double>()), T);
  if (kind == "two_timescale")
    return classical(ClassicalKind::two_timescale, j.at("alpha").get<double>(),
                     j.at("beta").get<double>(), T);
  throw std::domain_error("unknown schedule kind: " + kind);
}

inline BaselineKind parse_baseline_kind(const std::string& s) {
  if (s == "extragradient" || s == "eg") return BaselineKind::extragradient;
  if (s == "ogda") return BaselineKind::ogda;
  if (s == "eag") return BaselineKind::eag;
  if (s == "negative_momentum") return BaselineKind::negative_momentum;
  if (s == "hgd") return BaselineKind::hgd;
  if (s == "consensus") return BaselineKind::consensus;
  throw std::domain_error("unknown algorithm kind: " + s);
}

inline Point make_init(const json& j, const Problem& p, std::uint64_t config_seed) {
  const std::string kind = j.value("kind", std::string("ones"));
  if (kind == "ones") return Point::Ones(p.dim_x(), p.dim_y());
  if (kind == "point") {
    return {detail::json_to_vec(j.at("x")), detail::json_to_vec(j.at("y"))};
  }
  if (kind == "gaussian") {
    const double scale = j.value("scale", 1.0);
    const std::uint64_t s = derive_seed(config_seed, 0x1817u);
    Point z = Point::Zero(p.dim_x(), p.dim_y());
    for (Index i = 0; i < z.x.size(); ++i)
      z.x(i) = scale * normal01(s, static_cast<std::uint64_t>(i));
    for (Index i = 0; i < z.y.size(); ++i)
      z.y(i) = scale * normal01(s, static_cast<std::uint64_t>(z.x.size() + i));
    return z;
  }
  throw std::domain_error("unknown init kind: " + kind);
}

// One run per trial. Deterministic schedules make trials identical; for
// stochastic schedules trial t uses the derived seed mix(seed, t).
inline Trace run_trial(const ExperimentConfig& c, const Problem& p, int trial) {
  GdaOptions opt;
  opt.record_every = c.record_every;
  const Point z0 = make_init(c.init, p, c.seed);
  const std::string kind = c.algorithm.at("kind").get<std::string>();
  if (kind == "gda") {
    const StepPairSchedule sched =
        make_schedule(c.algorithm.at("schedule"), derive_seed(c.seed, static_cast<std::uint64_t>(trial)));
    return run_gda(p, sched, z0, opt);
  }
  const BaselineKind bk = parse_baseline_kind(kind);
  BaselineParams params;
  if (c.algorithm.contains("params")) {
    const json& pj = c.algorithm.at("params");
    if (pj.contains("stepsize")) params.stepsize = pj.at("stepsize").get<double>();
    if (pj.contains("momentum")) params.momentum = pj.at("momentum").get<double>();
    if (pj.contains("gamma")) params.gamma = pj.at("gamma").get<double>();
    if (pj.contains("allow_fd")) params.allow_fd = pj.at("allow_fd").get<bool>();
  }
  return run_baseline(p, bk, params, c.algorithm.at("T").get<int>(), z0, opt);
}

inline int worker_count() {
  if (const char* env = std::getenv("MMX_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

// Fan the trials over a worker pool; results land in trial order regardless
// of scheduling, so output bytes are reproducible.
inline std::vector<Trace> run_trials(const ExperimentConfig& c, const Problem& p) {
  std::vector<Trace> traces(static_cast<std::size_t>(c.trials));
  const int workers = std::min(worker_count(), c.trials);
  if (workers <= 1) {
    for (int t = 0; t < c.trials; ++t) traces[static_cast<std::size_t>(t)] = run_trial(c, p, t);
    return traces;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int t = next.fetch_add(1); t < c.trials; t = next.fetch_add(1))
          traces[static_cast<std::size_t>(t)] = run_trial(c, p, t);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return traces;
}

inline std::string trial_name(const char* prefix, int trial, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s_%04d.%s", prefix, trial, ext);
  return buf;
}

inline json final_state_json(const Trace& tr) {
  return json{{"status", to_string(tr.status)},
              {"final_grad_norm_sq", tr.final_grad_norm_sq},
              {"final_dist_sq", tr.final_dist_sq},
              {"T", tr.iterations_run}};
}

// Runs every trial and writes trace_%04d.csv + final_%04d.json per trial and
// a summary.csv. Diverged runs are flagged in the summary, not errors.
inline std::vector<Trace> run_experiment(const ExperimentConfig& c, const std::string& outdir_override = {}) {
  const std::string outdir = outdir_override.empty() ? c.output : outdir_override;
  if (outdir.empty()) throw std::domain_error("run_experiment: no output directory configured");
  std::filesystem::create_directories(outdir);

  const std::unique_ptr<Problem> p = make_problem(c.problem);
  std::vector<Trace> traces = run_trials(c, *p);

  std::ofstream summary(outdir + "/summary.csv");
  if (!summary) throw std::runtime_error("run_experiment: cannot write to " + outdir);
  summary << "trial,status,final_grad_norm_sq,final_dist_sq,cum_grad_evals\n";
  for (int t = 0; t < c.trials; ++t) {
    const Trace& tr = traces[static_cast<std::size_t>(t)];
    {
      std::ofstream out(outdir + "/" + trial_name("trace", t, "csv"));
      write_trace_csv(tr, out);
    }
    {
      std::ofstream out(outdir + "/" + trial_name("final", t, "json"));
      out << final_state_json(tr).dump(2) << '\n';
    }
    summary << t << ',' << to_string(tr.status) << ',' << format_double(tr.final_grad_norm_sq)
            << ',' << format_double(tr.final_dist_sq) << ',' << tr.total_grad_evals << '\n';
  }
  return traces;
}

// Per-algorithm series aligned by cumulative gradient evaluations, with
// mean and standard error over trials.
struct ComparisonSummary {
  struct Row {
    long cum_grad_evals;
    double mean_grad_norm_sq, se_grad_norm_sq;
    double mean_dist_sq, se_dist_sq;
  };
  struct Series {
    std::string label;
    std::vector<Row> rows;
  };
  std::vector<Series> series;
};

inline ComparisonSummary compare(const std::vector<ExperimentConfig>& configs) {
  if (configs.empty()) throw std::domain_error("compare: no configs");
  for (const auto& c : configs)
    if (c.problem != configs.front().problem)
      throw std::domain_error("compare: configs must share the problem instance (and its seed)");

  ComparisonSummary summary;
  for (const auto& c : configs) {
    const std::unique_ptr<Problem> p = make_problem(c.problem);
    const std::vector<Trace> traces = run_trials(c, *p);
    std::size_t len = traces.front().records.size();
    for (const auto& tr : traces) len = std::min(len, tr.records.size());

    ComparisonSummary::Series series;
    series.label = c.label.empty() ? c.algorithm.at("kind").get<std::string>() : c.label;
    const double n = static_cast<double>(traces.size());
    for (std::size_t i = 0; i < len; ++i) {
      ComparisonSummary::Row row{};
      row.cum_grad_evals = traces.front().records[i].cum_grad_evals;
      double sg = 0, sg2 = 0, sd = 0, sd2 = 0;
      for (const auto& tr : traces) {
        const auto& r = tr.records[i];
        sg += r.grad_norm_sq;
        sg2 += r.grad_norm_sq * r.grad_norm_sq;
        sd += r.dist_sq;
        sd2 += r.dist_sq * r.dist_sq;
      }
      row.mean_grad_norm_sq = sg / n;
      row.mean_dist_sq = sd / n;
      if (traces.size() > 1) {
        row.se_grad_norm_sq = std::sqrt(std::max(0.0, (sg2 - sg * sg / n) / (n - 1)) / n);
        row.se_dist_sq = std::sqrt(std::max(0.0, (sd2 - sd * sd / n) / (n - 1)) / n);
      }
      series.rows.push_back(row);
    }
    summary.series.push_back(std::move(series));
  }
  return summary;
}

inline void write_comparison_csv(const ComparisonSummary& s, std::ostream& out) {
  out << "label,cum_grad_evals,mean_grad_norm_sq,se_grad_norm_sq,mean_dist_sq,se_dist_sq\n";
  for (const auto& series : s.series)
    for (const auto& r : series.rows)
      out << series.label << ',' << r.cum_grad_evals << ',' << format_double(r.mean_grad_norm_sq)
          << ',' << format_double(r.se_grad_norm_sq) << ',' << format_double(r.mean_dist_sq) << ','
          << format_double(r.se_dist_sq) << '\n';
}

// Plain-text gnuplot script referencing an already-written comparison CSV.
inline void write_gnuplot_stub(const ComparisonSummary& s, const std::string& csv_path,
                               std::ostream& out) {
  out << "set datafile separator ','\n"
      << "set logscale y\n"
      << "set xlabel 'cumulative gradient evaluations'\n"
      << "set ylabel 'squared gradient norm'\n"
      << "plot ";
  bool first = true;
  for (const auto& series : s.series) {
    if (!first) out << ", \\\n     ";
    first = false;
    out << "'" << csv_path << "' using 2:(stringcolumn(1) eq '" << series.label
        << "' ? $3 : NaN) with lines title '" << series.label << "'";
  }
  out << '\n';
}

}  // namespace mmx
