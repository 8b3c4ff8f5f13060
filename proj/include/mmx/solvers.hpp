#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <vector>

#include "mmx/io.hpp"
#include "mmx/problems.hpp"
#include "mmx/rng.hpp"
#include "mmx/schedules.hpp"

namespace mmx {

enum class RunStatus { completed, converged, diverged };

inline const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::completed: return "completed";
    case RunStatus::converged: return "converged";
    case RunStatus::diverged: return "diverged";
  }
  return "?";
}

struct TraceRecord {
  int t;
  double alpha;          // step applied at t (NaN on the final record)
  double beta;           // baselines store their second parameter here
  double grad_norm_sq;   // |grad f(z_t)|^2
  double dist_sq;        // |z_t - z*|^2, NaN without a saddle projection
  long cum_grad_evals;   // oracle calls consumed to reach z_t
};

struct Trace {
  std::vector<TraceRecord> records;
  Point final_iterate;
  RunStatus status = RunStatus::completed;
  int iterations_run = 0;
  double final_grad_norm_sq = 0.0;
  double final_dist_sq = std::numeric_limits<double>::quiet_NaN();
  long total_grad_evals = 0;

  double initial_dist_sq() const {
    return records.empty() ? std::numeric_limits<double>::quiet_NaN()
                           : records.front().dist_sq;
  }
};

// Bit-exact column order for trace CSV files.
inline void write_trace_csv(const Trace& tr, std::ostream& out) {
  out << "t,alpha,beta,grad_norm_sq,dist_sq,cum_grad_evals\n";
  for (const auto& r : tr.records) {
    out << r.t << ',' << format_double(r.alpha) << ',' << format_double(r.beta) << ','
        << format_double(r.grad_norm_sq) << ',' << format_double(r.dist_sq) << ','
        << r.cum_grad_evals << '\n';
  }
}

struct GdaOptions {
  int record_every = 1;
  double divergence_threshold = 1e100;   // |z| above this aborts with `diverged`
  double grad_perturbation = 0.0;        // relative perturbation per gradient evaluation
  std::uint64_t perturbation_seed = 0;
  double converged_grad_norm_sq = 0.0;   // > 0 enables the `converged` status
};

namespace detail {

struct RunState {
  const Problem& p;
  const GdaOptions& opt;
  std::optional<Point> target;
  Point z;
  Trace trace;
  long evals = 0;
  std::uint64_t perturb_ctr = 0;
  double thresh_sq;

  RunState(const Problem& prob, const Point& z0, const GdaOptions& o)
      : p(prob), opt(o), z(z0) {
    validate_point(z0);
    require_same_shape(z0, prob.dim_x(), prob.dim_y(), "run");
    if (o.record_every < 1) throw std::domain_error("run: record_every must be >= 1");
    if (prob.has_saddle_projection()) target = prob.closest_saddle(z0);
    thresh_sq = o.divergence_threshold * o.divergence_threshold;
  }

  Point gradient() {
    Point g = p.grad(z);
    if (opt.grad_perturbation != 0.0) {
      for (Index i = 0; i < g.x.size(); ++i)
        g.x(i) *= 1.0 + opt.grad_perturbation * uniform_sym(opt.perturbation_seed, perturb_ctr++);
      for (Index i = 0; i < g.y.size(); ++i)
        g.y(i) *= 1.0 + opt.grad_perturbation * uniform_sym(opt.perturbation_seed, perturb_ctr++);
    }
    return g;
  }

  double dist_sq() const {
    if (!target) return std::numeric_limits<double>::quiet_NaN();
    if (!z.all_finite()) return std::numeric_limits<double>::infinity();
    return (z - *target).squared_norm();
  }

  void record(int t, double a, double b, double grad_norm_sq) {
    trace.records.push_back({t, a, b, grad_norm_sq, dist_sq(), evals});
  }

  // True when the iterate left the admissible region; run must stop.
  bool diverged() const { return !z.all_finite() || z.squared_norm() > thresh_sq; }

  Trace finish(int t) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    double gsq = std::numeric_limits<double>::infinity();
    if (z.all_finite()) gsq = p.grad(z).squared_norm();
    trace.records.push_back({t, nan, nan, gsq, dist_sq(), evals});
    trace.final_iterate = z;
    trace.iterations_run = t;
    trace.final_grad_norm_sq = gsq;
    trace.final_dist_sq = dist_sq();
    trace.total_grad_evals = evals;
    if (diverged())
      trace.status = RunStatus::diverged;
    else if (opt.converged_grad_norm_sq > 0.0 && gsq <= opt.converged_grad_norm_sq)
      trace.status = RunStatus::converged;
    else
      trace.status = RunStatus::completed;
    return std::move(trace);
  }
};

}  // namespace detail

// Simultaneous GDA: x_{t+1} = x_t - alpha_t grad_x f, y_{t+1} = y_t + beta_t grad_y f.
// One gradient evaluation per iteration feeds both blocks and the recorded
// metrics. Divergence ends the run with a `diverged` trace, not an error.
inline Trace run_gda(const Problem& p, const StepPairSchedule& schedule, const Point& z0,
                     const GdaOptions& opt = {}) {
  if (schedule.horizon() < 1) throw std::domain_error("run_gda: empty schedule");
  detail::RunState st(p, z0, opt);
  int t = 0;
  for (; t < schedule.horizon(); ++t) {
    const Step s = schedule.steps[static_cast<std::size_t>(t)];
    const Point g = st.gradient();
    if (t % opt.record_every == 0) st.record(t, s.alpha, s.beta, g.squared_norm());
    st.z.x -= s.alpha * g.x;
    st.z.y += s.beta * g.y;
    st.evals += 1;
    if (st.diverged()) {
      ++t;
      break;
    }
  }
  return st.finish(t);
}

enum class BaselineKind { extragradient, ogda, eag, negative_momentum, hgd, consensus };

inline const char* to_string(BaselineKind k) {
  switch (k) {
    case BaselineKind::extragradient: return "extragradient";
    case BaselineKind::ogda: return "ogda";
    case BaselineKind::eag: return "eag";
    case BaselineKind::negative_momentum: return "negative_momentum";
    case BaselineKind::hgd: return "hgd";
    case BaselineKind::consensus: return "consensus";
  }
  return "?";
}

struct BaselineParams {
  std::optional<double> stepsize;  // eta; for consensus the GDA weight h
  std::optional<double> momentum;  // negative momentum coefficient
  std::optional<double> gamma;     // Hamiltonian step (hgd, consensus)
  bool allow_fd = true;            // finite-difference fallback for grad Phi
};

// Standard baselines with the usual prescriptions: extragradient eta = 1/(sqrt(2) L),
// optimistic GDA eta = 1/(3L), anchored extragradient eta = 1/(8L) with anchor
// weight 1/(t+2). Extragradient and the anchored variant consume two gradient
// evaluations per iteration; Hamiltonian descent and consensus consume one
// gradient plus one Hessian-vector application.
inline Trace run_baseline(const Problem& p, BaselineKind kind, const BaselineParams& params,
                          int T, const Point& z0, const GdaOptions& opt = {}) {
  if (T < 1) throw std::domain_error("run_baseline: T must be >= 1");
  const double L = p.smoothness();
  detail::RunState st(p, z0, opt);

  const auto gda_dir = [](const Point& g) { return Point{g.x, -g.y}; };  // J grad f

  int t = 0;
  switch (kind) {
    case BaselineKind::extragradient: {
      const double eta = params.stepsize.value_or(1.0 / (std::sqrt(2.0) * L));
      for (; t < T; ++t) {
        const Point g = st.gradient();
        if (t % opt.record_every == 0) st.record(t, eta, eta, g.squared_norm());
        const Point w = st.z - eta * gda_dir(g);
        const Point gw = p.grad(w);
        st.z -= eta * gda_dir(gw);
        st.evals += 2;
        if (st.diverged()) { ++t; break; }
      }
      break;
    }
    case BaselineKind::ogda: {
      const double eta = params.stepsize.value_or(1.0 / (3.0 * L));
      Point prev_dir;
      for (; t < T; ++t) {
        const Point g = st.gradient();
        if (t % opt.record_every == 0) st.record(t, eta, eta, g.squared_norm());
        const Point dir = gda_dir(g);
        if (t == 0) prev_dir = dir;
        st.z -= eta * (2.0 * dir - prev_dir);
        prev_dir = dir;
        st.evals += 1;
        if (st.diverged()) { ++t; break; }
      }
      break;
    }
    case BaselineKind::eag: {
      const double eta = params.stepsize.value_or(1.0 / (8.0 * L));
      const Point anchor = z0;
      for (; t < T; ++t) {
        const double lam = 1.0 / (t + 2.0);
        const Point g = st.gradient();
        if (t % opt.record_every == 0) st.record(t, eta, lam, g.squared_norm());
        const Point pulled = st.z + lam * (anchor - st.z);
        const Point w = pulled - eta * gda_dir(g);
        const Point gw = p.grad(w);
        st.z = pulled - eta * gda_dir(gw);
        st.evals += 2;
        if (st.diverged()) { ++t; break; }
      }
      break;
    }
    case BaselineKind::negative_momentum: {
      const double eta = params.stepsize.value_or(0.1 / L);
      const double beta = params.momentum.value_or(-0.5);
      Point prev = st.z;
      for (; t < T; ++t) {
        const Point g = st.gradient();
        if (t % opt.record_every == 0) st.record(t, eta, beta, g.squared_norm());
        const Point cur = st.z;
        st.z = cur - eta * gda_dir(g) + beta * (cur - prev);
        prev = cur;
        st.evals += 1;
        if (st.diverged()) { ++t; break; }
      }
      break;
    }
    case BaselineKind::hgd: {
      const double gamma = params.gamma.value_or(1.0 / (L * L));
      if (!p.has_hessian_vec() && !params.allow_fd)
        throw UnsupportedOperation("run_baseline: hgd needs a Hessian-vector oracle or the fallback");
      for (; t < T; ++t) {
        const Point g = st.gradient();
        if (t % opt.record_every == 0) st.record(t, gamma, 0.0, g.squared_norm());
        st.z -= gamma * hamiltonian_grad(p, st.z, params.allow_fd);
        st.evals += 2;
        if (st.diverged()) { ++t; break; }
      }
      break;
    }
    case BaselineKind::consensus: {
      const double h = params.stepsize.value_or(0.1 / L);
      const double gamma = params.gamma.value_or(0.5 / (L * L));
      if (!p.has_hessian_vec() && !params.allow_fd)
        throw UnsupportedOperation("run_baseline: consensus needs a Hessian-vector oracle or the fallback");
      for (; t < T; ++t) {
        const Point g = st.gradient();
        if (t % opt.record_every == 0) st.record(t, h, gamma, g.squared_norm());
        st.z -= h * gda_dir(g) + gamma * hamiltonian_grad(p, st.z, params.allow_fd);
        st.evals += 2;
        if (st.diverged()) { ++t; break; }
      }
      break;
    }
  }
  return st.finish(t);
}

enum class RateBoundKind { bilinear_RT, quadratic_grad, scsc_contraction, cc_average };

struct ProblemConstants {
  double m = 0, M = 0;  // bilinear squared-singular-value bounds
  double L = 0;         // smoothness
  double mu = 0;        // strong convexity
  double h = 0;         // slingshot-cc stepsize parameter
};

struct RateCheck {
  double bound;
  double empirical;
  double margin;  // bound - empirical
  bool pass;
};

// Theoretical bound vs the realized trace quantity. The contraction bounds
// (scsc, cc) hold in expectation over the schedule randomness; on a single
// trace the margin reports the realized comparison.
inline RateCheck check_rate_bound(const Trace& tr, RateBoundKind kind,
                                  const ProblemConstants& c) {
  if (tr.records.empty()) throw std::domain_error("check_rate_bound: empty trace");
  const int T = tr.iterations_run / 2;
  RateCheck out{};
  switch (kind) {
    case RateBoundKind::bilinear_RT: {
      const double d0 = tr.initial_dist_sq();
      if (!std::isfinite(d0)) throw UnsupportedOperation("check_rate_bound: no saddle distances in trace");
      out.bound = cheb::extremal_rate_bilinear(T, c.m, c.M);
      out.empirical = std::sqrt(tr.final_dist_sq / d0);
      out.margin = out.bound - out.empirical;
      out.pass = out.margin >= -1e-8 * out.bound;
      break;
    }
    case RateBoundKind::quadratic_grad: {
      const double d0 = tr.initial_dist_sq();
      if (!std::isfinite(d0)) throw UnsupportedOperation("check_rate_bound: no saddle distances in trace");
      out.bound = cheb::extremal_rate_quadratic(T, c.L) * std::sqrt(d0);
      out.empirical = std::sqrt(tr.final_grad_norm_sq);
      out.margin = out.bound - out.empirical;
      out.pass = out.empirical <= out.bound * (1.0 + 1e-8);
      break;
    }
    case RateBoundKind::scsc_contraction: {
      const double d0 = tr.initial_dist_sq();
      if (!std::isfinite(d0)) throw UnsupportedOperation("check_rate_bound: no saddle distances in trace");
      out.bound = std::pow(1.0 - c.h * c.mu, T) * d0;
      out.empirical = tr.final_dist_sq;
      out.margin = out.bound - out.empirical;
      out.pass = out.margin >= 0.0;
      break;
    }
    case RateBoundKind::cc_average: {
      const double d0 = tr.initial_dist_sq();
      if (!std::isfinite(d0)) throw UnsupportedOperation("check_rate_bound: no saddle distances in trace");
      double sum = 0.0;
      long n = 0;
      for (const auto& r : tr.records) {
        if (r.t % 2 == 0 && r.t < tr.iterations_run) {
          sum += r.grad_norm_sq;
          ++n;
        }
      }
      if (n != T)
        throw UnsupportedOperation("check_rate_bound: cc_average needs record_every = 1");
      out.bound = 2.0 * d0 / (c.h * c.h * (1.0 - 3.0 * c.L * c.h) * T);
      out.empirical = sum / static_cast<double>(T);
      out.margin = out.bound - out.empirical;
      out.pass = out.margin >= 0.0;
      break;
    }
  }
  return out;
}

}  // namespace mmx
