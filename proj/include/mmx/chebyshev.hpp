#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace mmx::cheb {

// T_n(x), Chebyshev polynomial of the first kind, three-term recurrence.
inline double eval(int n, double x) {
  if (n < 0) throw std::domain_error("cheb::eval: degree must be >= 0");
  if (n == 0) return 1.0;
  double tm = 1.0, t = x;
  for (int k = 2; k <= n; ++k) {
    const double tn = 2.0 * x * t - tm;
    tm = t;
    t = tn;
  }
  return t;
}

// T_n on a shifted interval [a,b]: T_n(L(x)) with L the affine map [a,b] -> [-1,1].
inline double eval_shifted(int n, double a, double b, double x) {
  return eval(n, (2.0 * x - a - b) / (b - a));
}

// Roots of T_T shifted to [a,b], canonical index order (strictly decreasing):
//   r_t = (a+b)/2 + (b-a)/2 * cos((2t+1) pi / (2T)), t = 0..T-1.
inline std::vector<double> roots_shifted(int T, double a, double b) {
  if (T < 1) throw std::domain_error("cheb::roots_shifted: T must be >= 1");
  if (!(a < b)) throw std::domain_error("cheb::roots_shifted: need a < b");
  std::vector<double> r(static_cast<std::size_t>(T));
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int t = 0; t < T; ++t)
    r[static_cast<std::size_t>(t)] = mid + half * std::cos((2.0 * t + 1.0) * M_PI / (2.0 * T));
  return r;
}

// The 2T non-zero roots of T_{2T+1} shifted to [-L,L], canonical order
// (t ascending over {0..2T}\{T}):
//   rho_t = L cos((2t+1) pi / (4T+2)).
// Roots come in positive/negative pairs, rho_t = -rho_{2T-t}.
inline std::vector<double> quadratic_roots(int T, double L) {
  if (T < 1) throw std::domain_error("cheb::quadratic_roots: T must be >= 1");
  if (!(L > 0)) throw std::domain_error("cheb::quadratic_roots: L must be positive");
  std::vector<double> r;
  r.reserve(2 * static_cast<std::size_t>(T));
  for (int t = 0; t <= 2 * T; ++t) {
    if (t == T) continue;
    r.push_back(L * std::cos((2.0 * t + 1.0) * M_PI / (4.0 * T + 2.0)));
  }
  return r;
}

// Optimal T-pair contraction factor for spectral bounds 0 < m <= M:
//   R_T = 2 (sqrt(k)+1)^T (sqrt(k)-1)^T / ((sqrt(k)+1)^{2T} + (sqrt(k)-1)^{2T})
//       = 1 / cosh(T log((sqrt(k)+1)/(sqrt(k)-1))),  k = M/m.
// The cosh form keeps the computation in the log domain; the direct ratio
// overflows doubles once T log k gets large.
inline double extremal_rate_bilinear(int T, double m, double M) {
  if (T < 1) throw std::domain_error("cheb::extremal_rate_bilinear: T must be >= 1");
  if (!(m > 0) || !(M >= m)) throw std::domain_error("cheb::extremal_rate_bilinear: need 0 < m <= M");
  const double sk = std::sqrt(M / m);
  if (sk == 1.0) return 0.0;
  return 1.0 / std::cosh(T * std::log((sk + 1.0) / (sk - 1.0)));
}

// Reference route for extremal_rate_bilinear: 1 / T_T^{[m,M]}(0) evaluated by
// recurrence. Overflows for large T * log(kappa); the tests cross-check the
// two routes on the ranges where this one is representable.
inline double extremal_rate_bilinear_by_recurrence(int T, double m, double M) {
  if (T < 1) throw std::domain_error("cheb::extremal_rate_bilinear_by_recurrence: T must be >= 1");
  if (!(m > 0) || !(M >= m)) throw std::domain_error("cheb::extremal_rate_bilinear_by_recurrence: need 0 < m <= M");
  return 1.0 / std::abs(eval_shifted(T, m, M, 0.0));
}

// Optimal value of min_p max_{[-L,L]} |lambda p(lambda)| over degree-2T
// polynomials with p(0)=1.
inline double extremal_rate_quadratic(int T, double L) {
  if (T < 1) throw std::domain_error("cheb::extremal_rate_quadratic: T must be >= 1");
  if (!(L > 0)) throw std::domain_error("cheb::extremal_rate_quadratic: L must be positive");
  return L / (2.0 * T + 1.0);
}

// p(lambda) = prod_t (1 - lambda / r_t); p(0) = 1 by construction.
// Evaluation goes through log|.| so long root lists neither overflow nor
// underflow.
struct InducedPolynomial {
  std::vector<double> roots;

  explicit InducedPolynomial(std::vector<double> r = {}) : roots(std::move(r)) {
    for (double v : roots)
      if (v == 0.0 || !std::isfinite(v))
        throw std::domain_error("InducedPolynomial: roots must be finite and non-zero");
  }

  // log |p(lambda)|; -inf at a root.
  double log_abs(double lambda) const {
    double s = 0.0;
    for (double r : roots) s += std::log(std::abs(1.0 - lambda / r));
    return s;
  }

  double abs_value(double lambda) const { return std::exp(log_abs(lambda)); }

  double value(double lambda) const {
    double lg = 0.0;
    int sign = 1;
    for (double r : roots) {
      const double f = 1.0 - lambda / r;
      if (f == 0.0) return 0.0;
      if (f < 0.0) sign = -sign;
      lg += std::log(std::abs(f));
    }
    return sign * std::exp(lg);
  }
};

struct PolyMax {
  double arg;    // maximizing lambda
  double value;  // max |p(lambda)|
};

// Grid scan of |p| over [a,b] (endpoints included) followed by one
// golden-section refinement on the best bracket.
inline PolyMax induced_polynomial_max(const InducedPolynomial& p, double a, double b, int grid = 100000) {
  if (grid < 2) throw std::domain_error("cheb::induced_polynomial_max: grid must be >= 2");
  if (!(a < b)) throw std::domain_error("cheb::induced_polynomial_max: need a < b");
  double best_arg = a, best_log = p.log_abs(a);
  for (int i = 1; i < grid; ++i) {
    const double lam = a + (b - a) * static_cast<double>(i) / (grid - 1);
    const double lg = p.log_abs(lam);
    if (lg > best_log) {
      best_log = lg;
      best_arg = lam;
    }
  }
  const double step = (b - a) / (grid - 1);
  double lo = std::max(a, best_arg - step), hi = std::min(b, best_arg + step);
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - invphi * (hi - lo), d = lo + invphi * (hi - lo);
  double fc = p.log_abs(c), fd = p.log_abs(d);
  for (int it = 0; it < 80; ++it) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - invphi * (hi - lo);
      fc = p.log_abs(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + invphi * (hi - lo);
      fd = p.log_abs(d);
    }
  }
  if (fc > best_log) {
    best_log = fc;
    best_arg = c;
  }
  if (fd > best_log) {
    best_log = fd;
    best_arg = d;
  }
  return {best_arg, std::exp(best_log)};
}

inline bool is_power_of_two(int T) { return T >= 1 && (T & (T - 1)) == 0; }

// Stable fractal ordering: s^1 = [0], s^{2T} = interlace(s^T, 2T-1-s^T).
inline std::vector<int> lebedev_order(int T) {
  if (!is_power_of_two(T))
    throw std::domain_error("cheb::lebedev_order: T must be a power of two");
  std::vector<int> s{0};
  while (static_cast<int>(s.size()) < T) {
    const int n = static_cast<int>(s.size());
    std::vector<int> next;
    next.reserve(2 * static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      next.push_back(s[static_cast<std::size_t>(i)]);
      next.push_back(2 * n - 1 - s[static_cast<std::size_t>(i)]);
    }
    s = std::move(next);
  }
  return s;
}

}  // namespace mmx::cheb
