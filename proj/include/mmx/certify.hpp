#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "mmx/chebyshev.hpp"
#include "mmx/problems.hpp"
#include "mmx/schedules.hpp"
#include "mmx/solvers.hpp"

namespace mmx {

// The two equally likely two-step trajectories of the randomized slingshot
// pair: branch (-) runs (h, -h) then (0, h); branch (+) runs (-h, h) then (h, 0).
struct TwoStepTrajectories {
  Point z1m, z2m;
  Point z1p, z2p;
};

inline TwoStepTrajectories two_step_trajectories(const Problem& p, const Point& z0, double h) {
  const Point g0 = p.grad(z0);
  TwoStepTrajectories tr;
  tr.z1m = Point{z0.x - h * g0.x, z0.y - h * g0.y};
  const Point g1m = p.grad(tr.z1m);
  tr.z2m = Point{tr.z1m.x, tr.z1m.y + h * g1m.y};
  tr.z1p = Point{z0.x + h * g0.x, z0.y + h * g0.y};
  const Point g1p = p.grad(tr.z1p);
  tr.z2p = Point{tr.z1p.x - h * g1p.x, tr.z1p.y};
  return tr;
}

// Decomposition of the two-step progress inequality into its certificate
// terms: six co-coercivity terms, one smoothness term, seven squares. For an
// L-smooth mu-SCSC problem with h <= 1/(3L) every term is non-negative and
// the left side equals h times their sum (with the smoothness term halved).
struct CertificateReport {
  double lhs = 0;
  std::array<double, 6> q_terms{};
  double p_term = 0;  // raw smoothness quantity P; enters the sum as P/2
  std::array<double, 7> squares{};
  double identity_residual = 0;
  double min_term = 0;
  double scale = 1;

  double term_sum() const {
    double s = 0.5 * p_term;
    for (double q : q_terms) s += q;
    for (double v : squares) s += v;
    return s;
  }
};

// Gradient-term coefficient of the two-step inequality under the L = 1
// normalization; equals h^2 (1 - 3h) / 2 at mu = 0 and increases in mu.
inline double certificate_coefficient(double h, double mu) {
  return h * h * (1.0 + (4.0 * mu - 5.0) * h + (6.0 - 9.0 * mu + 2.0 * mu * mu) * h * h) /
         (2.0 * (1.0 + (mu - 2.0) * h));
}

namespace detail {

// Interpolation (co-coercivity) quantity for a mu-strongly convex, 1-smooth
// function g; non-negative for every pair of points.
inline double co_coercivity(const std::function<double(const Vec&)>& gval,
                            const std::function<Vec(const Vec&)>& ggrad,
                            const Vec& v, const Vec& w, double mu) {
  const Vec dv = ggrad(v), dw = ggrad(w);
  return gval(v) - gval(w) +
         (2.0 * (dw - mu * dv).dot(w - v) - (dv - dw).squaredNorm() - mu * (v - w).squaredNorm()) /
             (2.0 * (1.0 - mu));
}

}  // namespace detail

// Evaluates the two-step certificate identity at (z0, h). The problem is
// rescaled internally to unit smoothness: (f, h, mu) -> (f/L, hL, mu/L),
// which leaves the iterates unchanged. Requires hL <= 1/3, mu/L in [0, 1),
// and a known saddle.
inline CertificateReport verify_two_step_certificate(const Problem& p, const Point& z0, double h) {
  const double L = p.smoothness();
  if (!(L > 0)) throw std::domain_error("verify_two_step_certificate: smoothness must be positive");
  const double hh = h * L;          // stepsize after rescaling to L = 1
  const double mu = p.strong_convexity() / L;
  if (!(hh > 0) || hh > 1.0 / 3.0 + 1e-12)
    throw std::domain_error("verify_two_step_certificate: need 0 < h <= 1/(3L)");
  if (!(mu >= 0) || mu >= 1.0)
    throw std::domain_error("verify_two_step_certificate: need mu/L in [0, 1)");
  const double rho = 1.0 + hh * mu - hh;
  if (!(rho > 0) || !(rho - hh > 0))
    throw std::domain_error("verify_two_step_certificate: rho out of range");

  const Point zs = p.closest_saddle(z0);
  const TwoStepTrajectories tr = two_step_trajectories(p, z0, h);

  // Oracles of the rescaled objective f/L.
  const auto val = [&](const Vec& x, const Vec& y) { return p.value({x, y}) / L; };
  const auto grd = [&](const Vec& x, const Vec& y) {
    Point g = p.grad({x, y});
    g *= 1.0 / L;
    return g;
  };

  const Vec &x0 = z0.x, &y0 = z0.y, &xs = zs.x, &ys = zs.y;
  const Vec &x1m = tr.z1m.x, &x1p = tr.z1p.x, &y1m = tr.z1m.y, &y1p = tr.z1p.y;

  const Point g0 = grd(x0, y0);
  const Point g1p = grd(x1p, y1p);
  const Point g1m = grd(x1m, y1m);
  const Point gprime = grd(x1m, y1p);   // at z' = (x1m, y1p)
  const Point g_xs_y1p = grd(xs, y1p);
  const Point g_x1m_ys = grd(x1m, ys);

  CertificateReport rep;

  const double c_hmu = certificate_coefficient(hh, mu);
  rep.lhs = (1.0 - hh * mu) * (z0 - zs).squared_norm() - c_hmu * g0.squared_norm() -
            0.5 * ((tr.z2m - zs).squared_norm() + (tr.z2p - zs).squared_norm());

  // Partial objectives: phi = f(., y1p), phi* = f(., y*), psi = -f(x1m, .),
  // psi* = -f(x*, .); all mu-strongly convex and 1-smooth after rescaling.
  const std::function<double(const Vec&)> phi_v = [&](const Vec& u) { return val(u, y1p); };
  const std::function<Vec(const Vec&)> phi_g = [&](const Vec& u) { return grd(u, y1p).x; };
  const std::function<double(const Vec&)> phis_v = [&](const Vec& u) { return val(u, ys); };
  const std::function<Vec(const Vec&)> phis_g = [&](const Vec& u) { return grd(u, ys).x; };
  const std::function<double(const Vec&)> psi_v = [&](const Vec& u) { return -val(x1m, u); };
  const std::function<Vec(const Vec&)> psi_g = [&](const Vec& u) { return Vec(-grd(x1m, u).y); };
  const std::function<double(const Vec&)> psis_v = [&](const Vec& u) { return -val(xs, u); };
  const std::function<Vec(const Vec&)> psis_g = [&](const Vec& u) { return Vec(-grd(xs, u).y); };

  rep.q_terms[0] = detail::co_coercivity(phi_v, phi_g, x1p, x1m, mu);
  rep.q_terms[1] = detail::co_coercivity(phi_v, phi_g, xs, x1p, mu);
  rep.q_terms[2] = detail::co_coercivity(phis_v, phis_g, x1m, xs, mu);
  rep.q_terms[3] = detail::co_coercivity(psi_v, psi_g, y1m, y1p, mu);
  rep.q_terms[4] = detail::co_coercivity(psi_v, psi_g, ys, y1m, mu);
  rep.q_terms[5] = detail::co_coercivity(psis_v, psis_g, y1p, ys, mu);

  const Point zprime{x1m, y1p};
  rep.p_term = (z0 - zprime).squared_norm() - (g0 - gprime).squared_norm();

  rep.squares[0] = (hh * mu * g0.x - g1p.x + g_xs_y1p.x + mu * x0 - mu * xs).squaredNorm() / (2.0 * (1.0 - mu));
  rep.squares[1] = (hh * mu * g0.y - g1m.y + g_x1m_ys.y - mu * y0 + mu * ys).squaredNorm() / (2.0 * (1.0 - mu));
  rep.squares[2] = (hh * mu * g0.x + g_x1m_ys.x - mu * x0 + mu * xs).squaredNorm() / (2.0 * (1.0 - mu));
  rep.squares[3] = (hh * mu * g0.y + g_xs_y1p.y + mu * y0 - mu * ys).squaredNorm() / (2.0 * (1.0 - mu));
  rep.squares[4] = (rho * g1p.x - gprime.x - 2.0 * hh * mu * g0.x).squaredNorm() / (2.0 * rho * (1.0 - mu));
  rep.squares[5] = (rho * g1m.y - gprime.y - 2.0 * hh * mu * g0.y).squaredNorm() / (2.0 * rho * (1.0 - mu));
  rep.squares[6] = ((rho - hh) * gprime - (rho + 2.0 * hh * (hh - 1.0)) * g0).squared_norm() /
                   (2.0 * rho * (rho - hh));

  rep.identity_residual = std::abs(rep.lhs - hh * rep.term_sum());
  rep.min_term = 0.5 * rep.p_term;
  rep.scale = 1.0 + std::abs(rep.lhs) + std::abs(0.5 * rep.p_term);
  for (double q : rep.q_terms) {
    rep.min_term = std::min(rep.min_term, q);
    rep.scale += std::abs(q);
  }
  for (double s : rep.squares) {
    rep.min_term = std::min(rep.min_term, s);
    rep.scale += std::abs(s);
  }
  return rep;
}

struct ProgressCheck {
  double margin;  // bound minus realized expected two-step distance; >= 0 up to noise
  double scale;
};

// Exact expectation over the two equally likely trajectories:
//   (1 - h mu) |z0 - z*|^2 - (h^2 (1 - 3 L h)/2) |grad f(z0)|^2
//     - E[|z2 - z*|^2]  >=  0  for h <= 1/(3L).
inline ProgressCheck check_two_step_progress(const Problem& p, const Point& z0, double h) {
  const double L = p.smoothness();
  const double mu = p.strong_convexity();
  if (!(h > 0) || h * L > 1.0 / 3.0 + 1e-12)
    throw std::domain_error("check_two_step_progress: need 0 < h <= 1/(3L)");
  const Point zs = p.closest_saddle(z0);
  const TwoStepTrajectories tr = two_step_trajectories(p, z0, h);
  const double d0 = (z0 - zs).squared_norm();
  const double g0 = p.grad(z0).squared_norm();
  const double lhs = 0.5 * ((tr.z2m - zs).squared_norm() + (tr.z2p - zs).squared_norm());
  const double rhs = (1.0 - h * mu) * d0 - 0.5 * h * h * (1.0 - 3.0 * L * h) * g0;
  return {rhs - lhs, 1.0 + d0 + g0};
}

// Distance between the expected two-step slingshot movement and the
// combined GDA + Hamiltonian-descent prediction
//   z - (h/2) J grad f(z) - (h^2/2) hess f(z) grad f(z).
// Exact (up to rounding) when grad f is linear; O(h^3) otherwise.
inline double check_second_order_expansion(const Problem& p, const Point& z, double h) {
  if (!p.has_hessian_vec())
    throw UnsupportedOperation("check_second_order_expansion: needs a Hessian-vector oracle");
  const TwoStepTrajectories tr = two_step_trajectories(p, z, h);
  const Point mean = 0.5 * (tr.z2m + tr.z2p);
  const Point g = p.grad(z);
  const Point hg = p.hessian_vec(z, g);
  const Point pred{z.x - 0.5 * h * g.x - 0.5 * h * h * hg.x,
                   z.y + 0.5 * h * g.y - 0.5 * h * h * hg.y};
  return (mean - pred).norm();
}

// Two bilinear slingshot steps of magnitude h versus one gradient-descent
// step of size h^2 on the Hamiltonian; identical for bilinear problems.
inline double check_hamiltonian_equivalence(const BilinearProblem& p, const Point& z, double h) {
  const Point g0 = p.grad(z);
  const Point z1{z.x - h * g0.x, z.y - h * g0.y};
  const Point g1 = p.grad(z1);
  const Point z2{z1.x + h * g1.x, z1.y + h * g1.y};
  const Point hgd = z - h * h * p.hessian_vec(z, p.grad(z));
  return (z2 - hgd).norm();
}

enum class DivergenceKind { constant, nonnegative, symmetric };

struct DivergenceWitness {
  double lower_bound;  // certified lower bound on the final/initial norm ratio
  double realized;     // simulated worst-case ratio on the 1-D xy problem
};

// On min_x max_y xy the update matrices U_t = [[1, -alpha_t], [beta_t, 1]]
// have det = 1 + alpha_t beta_t, so for non-negative or symmetric schedules
// prod sqrt(1 + alpha_t beta_t) >= 1 lower-bounds the worst-case ratio; for
// constant schedules the spectral radius |1 +- i sqrt(alpha beta)| is used.
inline DivergenceWitness check_divergence_witness(const StepPairSchedule& s, DivergenceKind kind) {
  if (s.horizon() < 1) throw std::domain_error("check_divergence_witness: empty schedule");
  switch (kind) {
    case DivergenceKind::constant:
      for (const Step& st : s.steps)
        if (st.alpha != s.steps.front().alpha || st.beta != s.steps.front().beta)
          throw std::domain_error("check_divergence_witness: schedule is not constant");
      break;
    case DivergenceKind::nonnegative:
      for (const Step& st : s.steps)
        if (st.alpha < 0 || st.beta < 0)
          throw std::domain_error("check_divergence_witness: schedule is not non-negative");
      break;
    case DivergenceKind::symmetric:
      for (const Step& st : s.steps)
        if (st.alpha != st.beta)
          throw std::domain_error("check_divergence_witness: schedule is not symmetric");
      break;
  }

  double bound;
  if (kind == DivergenceKind::constant && s.steps.front().alpha * s.steps.front().beta < 0) {
    const double ab = s.steps.front().alpha * s.steps.front().beta;
    bound = std::pow(1.0 + std::sqrt(-ab), s.horizon());
  } else {
    double log_det_prod = 0.0;
    for (const Step& st : s.steps) log_det_prod += 0.5 * std::log1p(st.alpha * st.beta);
    bound = std::exp(log_det_prod);
  }

  Eigen::Matrix2d M = Eigen::Matrix2d::Identity();
  for (const Step& st : s.steps) {
    Eigen::Matrix2d U;
    U << 1.0, -st.alpha, st.beta, 1.0;
    M = U * M;
  }
  Eigen::JacobiSVD<Eigen::Matrix2d> svd(M, Eigen::ComputeFullV);
  const Eigen::Vector2d u = svd.matrixV().col(0);

  const BilinearProblem xy(Mat::Identity(1, 1), Vec::Zero(1), Vec::Zero(1));
  Vec zx(1), zy(1);
  zx << u(0);
  zy << u(1);
  GdaOptions opt;
  opt.record_every = std::max(1, s.horizon());
  const Trace tr = run_gda(xy, s, Point{zx, zy}, opt);
  return {bound, tr.final_iterate.norm()};
}

struct CyclingReport {
  bool zero_net_revisits = false;       // zero-net pairs on the linear branch return exactly
  bool hgd_stationary = false;          // Hamiltonian descent never moves from the flat region
  bool quadratic_branch_moves = false;  // inside the curved branch the pair does move
  bool all_pass() const { return zero_net_revisits && hgd_stationary && quadratic_branch_moves; }
};

inline CyclingReport check_cycling_counterexamples() {
  CyclingReport rep;
  const HuberCoupling huber;
  const double h = 0.5;
  const double y0 = 0.25;

  // (a) zero-net pairs from x0 = 3: iterate returns bit-exactly every 2 steps.
  {
    Vec x(1), y(1);
    x << 3.0;
    y << y0;
    Point z{x, y};
    rep.zero_net_revisits = true;
    for (int pair = 0; pair < 16; ++pair) {
      Point g = huber.grad(z);
      Point z1{z.x - h * g.x, z.y - h * g.y};
      g = huber.grad(z1);
      Point z2{z1.x + h * g.x, z1.y + h * g.y};
      if (z2.x(0) != 3.0 || z2.y(0) != y0) rep.zero_net_revisits = false;
      z = z2;
    }
  }

  // (b) HGD from x0 = 3 is stationary: grad Phi vanishes on the linear branch.
  {
    Vec x(1), y(1);
    x << 3.0;
    y << y0;
    const Trace tr = run_baseline(huber, BaselineKind::hgd, {}, 64, Point{x, y});
    rep.hgd_stationary = tr.final_iterate.x(0) == 3.0 && tr.final_iterate.y(0) == y0;
  }

  // (c) from x0 = 0.9 the gradient is no longer locally constant, so the
  // cancellation is only first-order and the pair moves.
  {
    Vec x(1), y(1);
    x << 0.9;
    y << y0;
    const Point z0{x, y};
    Point g = huber.grad(z0);
    const Point z1{z0.x - h * g.x, z0.y - h * g.y};
    g = huber.grad(z1);
    const Point z2{z1.x + h * g.x, z1.y + h * g.y};
    rep.quadratic_branch_moves = (z2 - z0).norm() > 0.0;
  }
  return rep;
}

struct TightnessReport {
  double lambda_star;  // grid maximizer of |p| on [m, M]
  double realized;     // simulated contraction on the 1-D instance b = sqrt(lambda*)
  double expected;     // R_T
};

// Builds the slingshot schedule's induced polynomial, finds its max over
// [m, M], and realizes that value as the contraction of GDA on the 1-D
// bilinear instance with coupling sqrt(lambda*).
inline TightnessReport lower_bound_tightness(int T, double m, double M) {
  if (T < 1) throw std::domain_error("lower_bound_tightness: T must be >= 1");
  if (!(m > 0) || !(m <= M)) throw std::domain_error("lower_bound_tightness: need 0 < m <= M");
  const double expected = cheb::extremal_rate_bilinear(T, m, M);

  double lambda_star;
  if (m == M) {
    lambda_star = m;
  } else {
    const cheb::InducedPolynomial poly(cheb::roots_shifted(T, m, M));
    lambda_star = cheb::induced_polynomial_max(poly, m, M).arg;
  }

  Mat B(1, 1);
  B << std::sqrt(lambda_star);
  const BilinearProblem prob(B, Vec::Zero(1), Vec::Zero(1), m, M);
  const StepPairSchedule sched = slingshot_bilinear(T, m, M, RootOrdering::canonical);
  Vec x0(1), y0(1);
  x0 << 1.0;
  y0 << 0.0;
  GdaOptions opt;
  opt.record_every = std::max(1, sched.horizon());
  const Trace tr = run_gda(prob, sched, Point{x0, y0}, opt);
  return {lambda_star, std::sqrt(tr.final_dist_sq / tr.initial_dist_sq()), expected};
}

}  // namespace mmx
