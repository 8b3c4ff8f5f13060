// Acceptance suite: every rate theorem, counterexample, and verification
// check at its stated tolerance. Prints one line per criterion and exits
// non-zero if any fails.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "mmx/certify.hpp"
#include "mmx/mmx.hpp"

using namespace mmx;

namespace {

bool g_all_pass = true;

void report(int idx, const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%s] %02d %s (%s)\n", pass ? "PASS" : "FAIL", idx, name.c_str(), detail.c_str());
  std::fflush(stdout);
  g_all_pass = g_all_pass && pass;
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Point gaussian_point(Index dx, Index dy, std::uint64_t seed) {
  Point z = Point::Zero(dx, dy);
  for (Index i = 0; i < dx; ++i) z.x(i) = normal01(seed, static_cast<std::uint64_t>(i));
  for (Index i = 0; i < dy; ++i) z.y(i) = normal01(seed, static_cast<std::uint64_t>(dx + i));
  return z;
}

std::string fmt(const char* f, ...) {
  char buf[256];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof(buf), f, args);
  va_end(args);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. bilinear contraction: |z_2T - z*| <= R_T |z0 - z*|
void criterion_bilinear_rate() {
  const auto t0 = std::chrono::steady_clock::now();
  bool pass = true;
  double worst_rel = -1e300;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const BilinearProblem p = random_bilinear(30, 300.0, seed);
    const Point z0 = gaussian_point(30, 30, derive_seed(0xB111, seed));
    for (int T : {1, 2, 4, 8, 16, 32, 64}) {
      const Trace tr = run_gda(p, slingshot_bilinear(T, 1.0, 300.0), z0);
      const double ratio = std::sqrt(tr.final_dist_sq / tr.initial_dist_sq());
      const double bound = cheb::extremal_rate_bilinear(T, 1.0, 300.0);
      const double rel = ratio / bound - 1.0;
      worst_rel = std::max(worst_rel, rel);
      if (!(ratio <= bound * (1.0 + 1e-8))) pass = false;
    }
  }
  const double dt = seconds_since(t0);
  if (dt >= 5.0) pass = false;
  report(1, "bilinear contraction rate, 10 instances x T in {1..64}", pass,
         fmt("worst ratio/bound-1 = %.3g, %.2fs < 5s", worst_rel, dt));
}

// ---------------------------------------------------------------------------
// 2. bilinear lower-bound tightness on the 1-D adversarial instance
void criterion_bilinear_tightness() {
  bool pass = true;
  double worst = 0.0;
  for (double kappa : {4.0, 100.0}) {
    for (int T = 1; T <= 8; ++T) {
      const TightnessReport rep = lower_bound_tightness(T, 1.0, kappa);
      const double rel = std::abs(rep.realized - rep.expected) / rep.expected;
      worst = std::max(worst, rel);
      if (!(rel <= 1e-6)) pass = false;
    }
  }
  report(2, "bilinear tightness, T in {1..8}, kappa in {4,100}", pass,
         fmt("worst relative gap = %.3g <= 1e-6", worst));
}

// ---------------------------------------------------------------------------
// 3. quadratic rate |grad f(z_2T)| <= L/(2T+1) |z0 - z*| and 1-D tightness
double max_abs_lambda_p(const cheb::InducedPolynomial& p, double L) {
  // maximize log|lambda| + log|p(lambda)| over [0, L], grid + golden section
  const int grid = 50001;
  const auto obj = [&](double lam) { return std::log(std::abs(lam)) + p.log_abs(lam); };
  double best_arg = L, best = obj(L);
  for (int i = 1; i < grid; ++i) {
    const double lam = L * static_cast<double>(i) / (grid - 1);
    const double v = obj(lam);
    if (v > best) {
      best = v;
      best_arg = lam;
    }
  }
  const double step = L / (grid - 1);
  double lo = std::max(step, best_arg - step), hi = std::min(L, best_arg + step);
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - invphi * (hi - lo), d = lo + invphi * (hi - lo);
  double fc = obj(c), fd = obj(d);
  for (int it = 0; it < 60; ++it) {
    if (fc > fd) {
      hi = d; d = c; fd = fc; c = hi - invphi * (hi - lo); fc = obj(c);
    } else {
      lo = c; c = d; fc = fd; d = lo + invphi * (hi - lo); fd = obj(d);
    }
  }
  return fc > fd ? c : d;
}

void criterion_quadratic_rate() {
  bool pass = true;
  double worst_rel = -1e300;

  const auto check_instance = [&](const Problem& p, std::uint64_t zseed) {
    const Point z0 = gaussian_point(p.dim_x(), p.dim_y(), zseed);
    for (int T = 1; T <= 32; ++T) {
      const Trace tr = run_gda(p, slingshot_quadratic(T, 1.0), z0);
      const double bound = (1.0 / (2.0 * T + 1.0)) * std::sqrt(tr.initial_dist_sq());
      const double got = std::sqrt(tr.final_grad_norm_sq);
      worst_rel = std::max(worst_rel, got / bound - 1.0);
      if (!(got <= bound * (1.0 + 1e-8))) pass = false;
    }
  };

  for (std::uint64_t inst = 0; inst < 20; ++inst) {
    const int d = 10;
    const std::uint64_t s = derive_seed(0x0A3D, inst);
    Mat G1(d, d), G2(d, d), B(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        G1(i, j) = normal01(s, static_cast<std::uint64_t>(i * d + j));
        G2(i, j) = normal01(s, static_cast<std::uint64_t>(d * d + i * d + j));
        B(i, j) = normal01(s, static_cast<std::uint64_t>(2 * d * d + i * d + j));
      }
    Mat A = G1 * G1.transpose() / d;
    Mat C = G2 * G2.transpose() / d;
    Mat H(2 * d, 2 * d);
    H << A, B, B.transpose(), -C;
    Eigen::SelfAdjointEigenSolver<Mat> es(H);
    const double scale = es.eigenvalues().cwiseAbs().maxCoeff();
    const QuadraticProblem p(A / scale, B / scale, C / scale, Vec::Zero(d), Vec::Zero(d), 1.0);
    check_instance(p, derive_seed(0x0A3E, inst));
  }

  // pure bilinear special case (A = C = 0)
  {
    const int d = 10;
    Mat B(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) B(i, j) = normal01(0xB0B0, static_cast<std::uint64_t>(i * d + j));
    Eigen::JacobiSVD<Mat> svd(B);
    B /= svd.singularValues()(0);
    const QuadraticProblem p(Mat::Zero(d, d), B, Mat::Zero(d, d), Vec::Zero(d), Vec::Zero(d), 1.0);
    check_instance(p, 0xB0B1);
  }

  // tightness: the grid-searched worst 1-D instance realizes >= 0.999 of the bound
  double worst_tight = 1e300;
  for (int T = 1; T <= 32; ++T) {
    const StepPairSchedule sched = slingshot_quadratic(T, 1.0);
    std::vector<double> inv_roots;
    for (const Step& st : sched.steps) inv_roots.push_back(1.0 / st.alpha);
    const cheb::InducedPolynomial poly(inv_roots);
    const double lam = max_abs_lambda_p(poly, 1.0);
    Mat B(1, 1);
    B << lam;
    const BilinearProblem p(B, Vec::Zero(1), Vec::Zero(1));
    Vec x0(1), y0(1);
    x0 << 1.0;
    y0 << 0.0;
    const Trace tr = run_gda(p, sched, Point{x0, y0});
    const double ratio = std::sqrt(tr.final_grad_norm_sq / tr.initial_dist_sq());
    const double bound = 1.0 / (2.0 * T + 1.0);
    worst_tight = std::min(worst_tight, ratio / bound);
    if (!(ratio >= 0.999 * bound)) pass = false;
  }

  report(3, "quadratic gradient rate, 21 instances x T in {1..32} + 1-D tightness", pass,
         fmt("worst ratio/bound-1 = %.3g, tightness >= %.6f", worst_rel, worst_tight));
}

// ---------------------------------------------------------------------------
// 4. convex-concave rate on the ill-conditioned diagonal instance
void criterion_cc_rate() {
  const auto t0 = std::chrono::steady_clock::now();
  const int d = 100, T = 500, n_seeds = 200;
  const double L = 1.0, h = 2.0 / (9.0 * L);

  Mat B = Mat::Zero(d, d);
  double v = 1.0;
  for (int i = 0; i < d; ++i, v *= 0.5) B(i, i) = v;
  const BilinearProblem p(B, Vec::Zero(d), Vec::Zero(d));
  const Point z0 = Point::Ones(d, d);
  const double D0_sq = z0.squared_norm();  // true saddle set is the origin

  std::vector<double> mean_grad_sq(T, 0.0);
  for (int s = 0; s < n_seeds; ++s) {
    const StepPairSchedule sched = slingshot_cc(T, h, derive_seed(0xCC4, static_cast<std::uint64_t>(s)));
    const Trace tr = run_gda(p, sched, z0);
    for (int t = 0; t < T; ++t)
      mean_grad_sq[static_cast<std::size_t>(t)] +=
          tr.records[static_cast<std::size_t>(2 * t)].grad_norm_sq;
  }
  for (double& g : mean_grad_sq) g /= n_seeds;

  double cum = 0.0;
  std::vector<double> running(T);
  for (int t = 0; t < T; ++t) {
    cum += mean_grad_sq[static_cast<std::size_t>(t)];
    running[static_cast<std::size_t>(t)] = cum / (t + 1);
  }
  const double bound = 2.0 * D0_sq / (h * h * (1.0 - 3.0 * L * h) * T);
  bool pass = running.back() <= bound;

  // least-squares log-log slopes over T in [50, 500] of the seed-averaged
  // per-pair gradient series (the plotted curve) and of the cumulative mean
  const auto fit_slope = [&](const std::vector<double>& ys) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (int t = 50; t <= T; ++t) {
      const double x = std::log(static_cast<double>(t));
      const double y = std::log(ys[static_cast<std::size_t>(t - 1)]);
      sx += x; sy += y; sxx += x * x; sxy += x * y;
      ++n;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
  };
  const double slope = fit_slope(mean_grad_sq);
  const double slope_cum = fit_slope(running);
  if (!(slope >= -1.2 && slope <= -0.8)) pass = false;

  const double dt = seconds_since(t0);
  if (dt >= 60.0) pass = false;
  report(4, "convex-concave rate, 200 seeds, d=100 diagonal instance", pass,
         fmt("running mean %.4f <= bound %.1f, slope %.3f in [-1.2,-0.8] "
             "(cumulative-mean slope %.3f), %.1fs < 60s",
             running.back(), bound, slope, slope_cum, dt));
}

// ---------------------------------------------------------------------------
// 5. SCSC contraction (1 - h mu)^T in expectation
void criterion_scsc_contraction() {
  bool pass = true;
  std::ostringstream detail;
  const int n_seeds = 500;
  for (double kappa : {5.0, 50.0}) {
    const double mu = 1.0 / kappa, h = 1.0 / 3.0;
    for (std::uint64_t inst = 0; inst < 2; ++inst) {
      const ScscQuadratic p = random_scsc(10, mu, derive_seed(0x5C5C, 10 * static_cast<std::uint64_t>(kappa) + inst), false);
      const Point z0 = gaussian_point(10, 10, derive_seed(0x5C5D, 10 * static_cast<std::uint64_t>(kappa) + inst));
      const double D0_sq = z0.squared_norm();  // saddle at the origin
      const std::vector<int> Ts{10, 50, 200};
      std::vector<std::vector<double>> samples(Ts.size());
      for (int s = 0; s < n_seeds; ++s) {
        const StepPairSchedule sched = slingshot_cc(200, h, derive_seed(0x5C5E + inst, static_cast<std::uint64_t>(s) + 1000 * static_cast<std::uint64_t>(kappa)));
        const Trace tr = run_gda(p, sched, z0);
        for (std::size_t k = 0; k < Ts.size(); ++k)
          samples[k].push_back(tr.records[static_cast<std::size_t>(2 * Ts[k])].dist_sq);
      }
      for (std::size_t k = 0; k < Ts.size(); ++k) {
        double sum = 0, sumsq = 0;
        for (double x : samples[k]) {
          sum += x;
          sumsq += x * x;
        }
        const double mean = sum / n_seeds;
        const double var = std::max(0.0, (sumsq - sum * sum / n_seeds) / (n_seeds - 1));
        const double se = std::sqrt(var / n_seeds);
        const double bound = std::pow(1.0 - h * mu, Ts[k]) * D0_sq;
        if (!(mean <= bound + 3.0 * se)) {
          pass = false;
          detail << " FAIL kappa=" << kappa << " T=" << Ts[k];
        }
      }
    }
  }
  report(5, "scsc contraction, kappa in {5,50}, 500 seeds, T in {10,50,200}", pass,
         pass ? "all means within bound + 3 SE" : detail.str());
}

// ---------------------------------------------------------------------------
// 6. two-step certificate fuzz
void criterion_certificate_fuzz() {
  bool pass = true;
  double worst_res = 0.0, worst_min = 0.0, worst_margin = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::uint64_t s = derive_seed(0xCE27, static_cast<std::uint64_t>(trial));
    const double mu = 0.9 * uniform01(s, 0);
    const double h = std::max(1e-3, (1.0 / 3.0) * uniform01(s, 1));
    const int d = 1 + static_cast<int>(mix64(s, 2) % 6);
    const ScscQuadratic p = random_scsc(d, mu, derive_seed(s, 3));
    const Point z0 = gaussian_point(d, d, derive_seed(s, 4));
    const CertificateReport rep = verify_two_step_certificate(p, z0, h);
    const ProgressCheck prog = check_two_step_progress(p, z0, h);
    worst_res = std::max(worst_res, rep.identity_residual / rep.scale);
    worst_min = std::min(worst_min, rep.min_term / rep.scale);
    worst_margin = std::min(worst_margin, prog.margin / prog.scale);
    if (rep.identity_residual > 1e-8 * rep.scale) pass = false;
    if (rep.min_term < -1e-10 * rep.scale) pass = false;
    if (prog.margin < -1e-10 * prog.scale) pass = false;
  }
  report(6, "two-step certificate, 1000 fuzz trials", pass,
         fmt("worst residual %.2e, worst term %.2e, worst margin %.2e", worst_res, worst_min,
             worst_margin));
}

// ---------------------------------------------------------------------------
// 7. divergence suite
void criterion_divergence() {
  bool pass = true;
  std::ostringstream why;

  // (a) constant stepsizes expand by exactly sqrt(1.01) per step
  {
    const BilinearProblem xy(Mat::Identity(1, 1), Vec::Zero(1), Vec::Zero(1));
    Vec x0(1), y0(1);
    x0 << 1.0;
    y0 << 0.0;
    const Trace tr = run_gda(xy, classical(ClassicalKind::constant, 0.1, 0.1, 100), Point{x0, y0});
    for (std::size_t i = 1; i < tr.records.size(); ++i) {
      const double ratio = tr.records[i].dist_sq / tr.records[i - 1].dist_sq;
      if (!(std::abs(ratio - 1.01) <= 1e-13)) {
        pass = false;
        why << " constant-growth";
        break;
      }
    }
  }

  // (b) determinant lower bound over 1000 random admissible schedules
  double min_bound = 1e300, worst_slack = 1e300;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::uint64_t s = derive_seed(0xD1E, static_cast<std::uint64_t>(trial));
    const bool symmetric = trial % 2 == 1;
    StepPairSchedule sched{ScheduleKind::custom, {}, s};
    const int len = 1 + static_cast<int>(mix64(s, 0) % 128);
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
    min_bound = std::min(min_bound, w.lower_bound);
    worst_slack = std::min(worst_slack, w.realized - w.lower_bound);
    if (!(w.lower_bound >= 1.0)) pass = false;
    if (!(w.lower_bound <= w.realized + 1e-10)) pass = false;
  }
  if (!pass) why << " det-bound";

  // (c) alternating GDA cycles: bounded, never converging
  {
    const BilinearProblem xy(Mat::Identity(1, 1), Vec::Zero(1), Vec::Zero(1));
    Vec x0(1), y0(1);
    x0 << 1.0;
    y0 << 0.0;
    const Trace tr = run_gda(xy, classical(ClassicalKind::alternating, 0.1, 0.1, 10000), Point{x0, y0});
    double lo = 1e300, hi = 0.0;
    for (const auto& r : tr.records) {
      lo = std::min(lo, std::sqrt(r.dist_sq));
      hi = std::max(hi, std::sqrt(r.dist_sq));
    }
    if (!(lo >= 0.5 && hi <= 2.0)) {
      pass = false;
      why << " alternating-range";
    }
  }

  report(7, "divergence suite: constant growth, det bound x1000, alternating cycle", pass,
         pass ? fmt("min det bound %.6f >= 1, min realized-bound slack %.2e", min_bound, worst_slack)
              : why.str());
}

// ---------------------------------------------------------------------------
// 8. paired slingshot steps = Hamiltonian GD step, to rounding
void criterion_hamiltonian_equivalence() {
  bool pass = true;
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::uint64_t s = derive_seed(0x0B5, static_cast<std::uint64_t>(trial));
    const int dx = 1 + static_cast<int>(mix64(s, 0) % 8);
    const int dy = 1 + static_cast<int>(mix64(s, 1) % 8);
    Mat B(dx, dy);
    for (int i = 0; i < dx; ++i)
      for (int j = 0; j < dy; ++j)
        B(i, j) = normal01(s, 2 + static_cast<std::uint64_t>(i) * dy + j);
    const BilinearProblem p(B, Vec::Zero(dx), Vec::Zero(dy));
    const Point z = gaussian_point(dx, dy, derive_seed(s, 7));
    const double h = std::exp(std::log(1e-3) + std::log(0.5 / 1e-3) * uniform01(s, 99));
    const double res = check_hamiltonian_equivalence(p, z, h);
    const double tol = 1e-12 * (1.0 + z.norm());
    worst = std::max(worst, res / tol);
    if (!(res <= tol)) pass = false;
  }
  report(8, "hamiltonian equivalence, 1000 random (B, z, h)", pass,
         fmt("worst residual/tolerance = %.3g", worst));
}

// ---------------------------------------------------------------------------
// 9. second-order expansion: O(h^3) on log-cosh, exact on bilinear
void criterion_second_order() {
  bool pass = true;
  std::ostringstream detail;
  const LogCoshProblem lc;
  Vec zx(1), zy(1);
  zx << 0.7;
  zy << 0.3;
  const Point z{zx, zy};
  for (double h : {1e-1, 5e-2, 2.5e-2}) {
    const double ratio = check_second_order_expansion(lc, z, h) /
                         check_second_order_expansion(lc, z, h / 2.0);
    detail << fmt("h=%g ratio=%.3f ", h, ratio);
    if (!(ratio >= 6.0 && ratio <= 10.0)) pass = false;
  }
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::uint64_t s = derive_seed(0x2ED, static_cast<std::uint64_t>(trial));
    const int d = 1 + static_cast<int>(mix64(s, 0) % 5);
    Mat B(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        B(i, j) = normal01(s, 1 + static_cast<std::uint64_t>(i) * d + j);
    const BilinearProblem p(B, Vec::Zero(d), Vec::Zero(d));
    const Point zz = gaussian_point(d, d, derive_seed(s, 3));
    const double err = check_second_order_expansion(p, zz, 0.2);
    worst = std::max(worst, err);
    if (!(err <= 1e-14)) pass = false;
  }
  report(9, "second-order expansion: O(h^3) ratios + bilinear exactness", pass,
         detail.str() + fmt("bilinear worst %.2e <= 1e-14", worst));
}

// ---------------------------------------------------------------------------
// 10. counterexample behaviors on the huber instance
void criterion_counterexamples() {
  bool pass = true;
  std::ostringstream why;

  const HuberCoupling huber;
  const double h = 0.5, y0 = 0.25;

  // zero-net pairs from x0 = 3 revisit z0 bit-exactly every 2 steps
  {
    Vec x(1), y(1);
    x << 3.0;
    y << y0;
    Point z{x, y};
    for (int pair = 0; pair < 20; ++pair) {
      Point g = huber.grad(z);
      Point z1{z.x - h * g.x, z.y - h * g.y};
      g = huber.grad(z1);
      z = Point{z1.x + h * g.x, z1.y + h * g.y};
      if (z.x(0) != 3.0 || z.y(0) != y0) {
        pass = false;
        why << " zero-net-drifted";
        break;
      }
    }
  }

  // HGD from x0 = 3 never moves
  {
    Vec x(1), y(1);
    x << 3.0;
    y << y0;
    const Trace tr = run_baseline(huber, BaselineKind::hgd, {}, 100, Point{x, y});
    if (tr.final_iterate.x(0) != 3.0 || tr.final_iterate.y(0) != y0) {
      pass = false;
      why << " hgd-moved";
    }
    for (const auto& r : tr.records)
      if (r.grad_norm_sq != 1.0) {
        pass = false;
        why << " hgd-grad-changed";
        break;
      }
  }

  const CyclingReport rep = check_cycling_counterexamples();
  if (!rep.all_pass()) {
    pass = false;
    why << " cycling-report";
  }

  report(10, "huber counterexamples: exact cycling + stationary HGD", pass,
         pass ? "zero-net pairs revisit exactly; HGD pinned; curved branch moves" : why.str());
}

// ---------------------------------------------------------------------------
// 11. arcsine schedule asymptotic rate on the spectral-edge instance
void criterion_arcsine() {
  const double m = 1.0, M = 100.0;
  const int T = 2000;
  Mat B(1, 1);
  B << std::sqrt(M);
  const BilinearProblem p(B, Vec::Zero(1), Vec::Zero(1), m, M);
  Vec x0(1), y0(1);
  x0 << 1.0;
  y0 << 0.0;
  GdaOptions opt;
  opt.record_every = 2 * T;
  double sum = 0.0;
  bool ok = true;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Trace tr = run_gda(p, arcsine_random(T, m, M, derive_seed(0xA5C, s)), Point{x0, y0}, opt);
    if (tr.status == RunStatus::diverged) ok = false;
    const double C = std::sqrt(tr.final_dist_sq / tr.initial_dist_sq());
    sum += std::exp(std::log(C) / T);
  }
  const double mean = sum / 20.0;
  const double target = 9.0 / 11.0;
  const double dev = std::abs(mean - target) / target;
  const bool pass = ok && dev <= 0.05;
  report(11, "arcsine stepsizes, kappa=100, T=2000, 20 seeds", pass,
         fmt("mean C_T^(1/T) = %.5f vs %.5f, deviation %.4f <= 0.05", mean, target, dev));
}

// ---------------------------------------------------------------------------
// 12. fractal ordering: correctness and stability under gradient noise
void criterion_fractal_ordering() {
  bool pass = true;
  std::ostringstream why;

  for (int T = 2; T <= 512; T *= 2) {
    const auto s = cheb::lebedev_order(T);
    std::vector<bool> seen(static_cast<std::size_t>(T), false);
    for (int v : s) {
      if (v < 0 || v >= T || seen[static_cast<std::size_t>(v)]) {
        pass = false;
        why << " not-a-permutation";
        break;
      }
      seen[static_cast<std::size_t>(v)] = true;
    }
    const auto half = cheb::lebedev_order(T / 2);
    for (int i = 0; i < T / 2; ++i) {
      if (s[static_cast<std::size_t>(2 * i)] != half[static_cast<std::size_t>(i)] ||
          s[static_cast<std::size_t>(2 * i + 1)] != T - 1 - half[static_cast<std::size_t>(i)]) {
        pass = false;
        why << " recursion-broken";
        break;
      }
    }
  }
  if (cheb::lebedev_order(4) != std::vector<int>({0, 3, 1, 2})) {
    pass = false;
    why << " T4-mismatch";
  }

  // stability: with 1e-10 relative gradient noise the fractal order beats the
  // monotone-descending (canonical) order on at least 9 of 10 seeds
  const int T = 512;
  int wins = 0;
  const auto leb = slingshot_bilinear(T, 1.0, 300.0, RootOrdering::lebedev);
  const auto desc = slingshot_bilinear(T, 1.0, 300.0, RootOrdering::canonical);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const BilinearProblem p = random_bilinear(30, 300.0, 9000 + s);
    const Point z0 = gaussian_point(30, 30, derive_seed(0xF7A, s));
    GdaOptions opt;
    opt.record_every = 2 * T;
    opt.grad_perturbation = 1e-10;
    opt.perturbation_seed = derive_seed(0xF7B, s);
    const Trace a = run_gda(p, leb, z0, opt);
    const Trace b = run_gda(p, desc, z0, opt);
    const double ea = a.status == RunStatus::diverged ? std::numeric_limits<double>::infinity()
                                                      : std::sqrt(a.final_dist_sq);
    const double eb = b.status == RunStatus::diverged ? std::numeric_limits<double>::infinity()
                                                      : std::sqrt(b.final_dist_sq);
    if (ea <= eb) ++wins;
  }
  if (wins < 9) {
    pass = false;
    why << " stability-wins=" << wins;
  }

  report(12, "fractal ordering correctness + noise stability", pass,
         pass ? fmt("orders valid up to T=512; fractal beats descending on %d/10 seeds", wins)
              : why.str());
}

}  // namespace

int main() {
  criterion_bilinear_rate();
  criterion_bilinear_tightness();
  criterion_quadratic_rate();
  criterion_cc_rate();
  criterion_scsc_contraction();
  criterion_certificate_fuzz();
  criterion_divergence();
  criterion_hamiltonian_equivalence();
  criterion_second_order();
  criterion_counterexamples();
  criterion_arcsine();
  criterion_fractal_ordering();
  if (!g_all_pass) {
    std::printf("acceptance: FAILURES PRESENT\n");
    return 1;
  }
  std::printf("acceptance: all criteria passed\n");
  return 0;
}
