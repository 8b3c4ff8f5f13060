#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mmx/chebyshev.hpp"
#include "mmx/rng.hpp"

namespace mmx {

enum class ScheduleKind {
  slingshot_bilinear,
  slingshot_quadratic,
  slingshot_cc,
  arcsine,
  constant,
  alternating,
  two_timescale,
  custom,
};

inline const char* to_string(ScheduleKind k) {
  switch (k) {
    case ScheduleKind::slingshot_bilinear: return "slingshot_bilinear";
    case ScheduleKind::slingshot_quadratic: return "slingshot_quadratic";
    case ScheduleKind::slingshot_cc: return "slingshot_cc";
    case ScheduleKind::arcsine: return "arcsine";
    case ScheduleKind::constant: return "constant";
    case ScheduleKind::alternating: return "alternating";
    case ScheduleKind::two_timescale: return "two_timescale";
    case ScheduleKind::custom: return "custom";
  }
  return "?";
}

struct Step {
  double alpha;
  double beta;
};

// Materialized per-iteration stepsize pairs. Stochastic kinds derive every
// pair draw from (seed, pair index), so the realized sequence is independent
// of materialization order.
struct StepPairSchedule {
  ScheduleKind kind;
  std::vector<Step> steps;
  std::optional<std::uint64_t> seed;

  int horizon() const { return static_cast<int>(steps.size()); }
};

// Ordering of the Chebyshev root multiset inside a slingshot schedule.
// `automatic` picks lebedev when the pair count is a power of two, else
// canonical (canonical = descending root values, the raw formula order).
enum class RootOrdering { automatic, canonical, lebedev, custom };

namespace detail {

inline std::vector<int> resolve_ordering(int T, RootOrdering ordering,
                                         const std::vector<int>* permutation) {
  switch (ordering) {
    case RootOrdering::automatic:
      if (cheb::is_power_of_two(T)) return cheb::lebedev_order(T);
      [[fallthrough]];
    case RootOrdering::canonical: {
      std::vector<int> id(static_cast<std::size_t>(T));
      for (int i = 0; i < T; ++i) id[static_cast<std::size_t>(i)] = i;
      return id;
    }
    case RootOrdering::lebedev:
      return cheb::lebedev_order(T);  // throws unless T is a power of two
    case RootOrdering::custom: {
      if (permutation == nullptr || static_cast<int>(permutation->size()) != T)
        throw std::domain_error("schedule: custom ordering needs a permutation of size T");
      std::vector<bool> seen(static_cast<std::size_t>(T), false);
      for (int v : *permutation) {
        if (v < 0 || v >= T || seen[static_cast<std::size_t>(v)])
          throw std::domain_error("schedule: custom ordering is not a permutation");
        seen[static_cast<std::size_t>(v)] = true;
      }
      return *permutation;
    }
  }
  throw std::domain_error("schedule: unknown ordering");
}

}  // namespace detail

// T pairs with magnitudes h_t = r_{pi(t)}^{-1/2}, r_t the roots of the
// Chebyshev polynomial shifted to [m, M], signed
//   alpha_{2t} = -beta_{2t} = -alpha_{2t+1} = beta_{2t+1} = h_t.
inline StepPairSchedule slingshot_bilinear(int T, double m, double M,
                                           RootOrdering ordering = RootOrdering::automatic,
                                           const std::vector<int>* permutation = nullptr) {
  if (T < 1) throw std::domain_error("slingshot_bilinear: T must be >= 1");
  if (!(m > 0) || !(m <= M)) throw std::domain_error("slingshot_bilinear: need 0 < m <= M");
  // m == M collapses every root to m (the interval is a point).
  const std::vector<double> roots =
      m == M ? std::vector<double>(static_cast<std::size_t>(T), m) : cheb::roots_shifted(T, m, M);
  const std::vector<int> order = detail::resolve_ordering(T, ordering, permutation);
  StepPairSchedule s{ScheduleKind::slingshot_bilinear, {}, std::nullopt};
  s.steps.reserve(2 * static_cast<std::size_t>(T));
  for (int t = 0; t < T; ++t) {
    const double h = 1.0 / std::sqrt(roots[static_cast<std::size_t>(order[static_cast<std::size_t>(t)])]);
    s.steps.push_back({h, -h});
    s.steps.push_back({-h, h});
  }
  return s;
}

// 2T iterations with alpha_t = -beta_t = h_t and inverse stepsizes running
// over the 2T non-zero roots of the degree-(2T+1) Chebyshev polynomial on
// [-L, L]. Each positive root is immediately followed by its negative
// partner; `ordering` permutes the T magnitude indices.
inline StepPairSchedule slingshot_quadratic(int T, double L,
                                            RootOrdering ordering = RootOrdering::canonical,
                                            const std::vector<int>* permutation = nullptr) {
  if (T < 1) throw std::domain_error("slingshot_quadratic: T must be >= 1");
  if (!(L > 0)) throw std::domain_error("slingshot_quadratic: L must be positive");
  const std::vector<int> order = detail::resolve_ordering(T, ordering, permutation);
  StepPairSchedule s{ScheduleKind::slingshot_quadratic, {}, std::nullopt};
  s.steps.reserve(2 * static_cast<std::size_t>(T));
  for (int t = 0; t < T; ++t) {
    const int idx = order[static_cast<std::size_t>(t)];
    const double rho = L * std::cos((2.0 * idx + 1.0) * M_PI / (4.0 * T + 2.0));
    const double h = 1.0 / rho;
    s.steps.push_back({h, -h});
    s.steps.push_back({-h, h});
  }
  return s;
}

// Randomized pairs for nonlinear gradients: with probability 1/2 the pair is
// (h, -h), (0, h), otherwise (-h, h), (h, 0). Reproducible from the seed.
inline StepPairSchedule slingshot_cc(int T, double h, std::uint64_t seed) {
  if (T < 1) throw std::domain_error("slingshot_cc: T must be >= 1");
  if (!(h > 0)) throw std::domain_error("slingshot_cc: h must be positive");
  StepPairSchedule s{ScheduleKind::slingshot_cc, {}, seed};
  s.steps.reserve(2 * static_cast<std::size_t>(T));
  for (int t = 0; t < T; ++t) {
    if (uniform01(seed, static_cast<std::uint64_t>(t)) < 0.5) {
      s.steps.push_back({h, -h});
      s.steps.push_back({0.0, h});
    } else {
      s.steps.push_back({-h, h});
      s.steps.push_back({h, 0.0});
    }
  }
  return s;
}

// Random magnitudes with inverse squares r_t i.i.d. Arcsine on (m, M),
// sampled through the cosine map r = (M+m)/2 + (M-m)/2 cos(pi U); signs as
// in the bilinear slingshot pairs.
inline StepPairSchedule arcsine_random(int T, double m, double M, std::uint64_t seed) {
  if (T < 1) throw std::domain_error("arcsine_random: T must be >= 1");
  if (!(m > 0) || !(m < M)) throw std::domain_error("arcsine_random: need 0 < m < M");
  StepPairSchedule s{ScheduleKind::arcsine, {}, seed};
  s.steps.reserve(2 * static_cast<std::size_t>(T));
  for (int t = 0; t < T; ++t) {
    const double u = uniform01(seed, static_cast<std::uint64_t>(t));
    const double r = 0.5 * (M + m) + 0.5 * (M - m) * std::cos(M_PI * u);
    const double h = 1.0 / std::sqrt(r);
    s.steps.push_back({h, -h});
    s.steps.push_back({-h, h});
  }
  return s;
}

enum class ClassicalKind { constant, alternating, two_timescale };

// Classical baselines: constant (alpha, beta) every step; alternating
// (alpha, 0) on even and (0, beta) on odd steps; two-timescale constant with
// alpha != beta.
inline StepPairSchedule classical(ClassicalKind kind, double alpha, double beta, int T) {
  if (T < 1) throw std::domain_error("classical: T must be >= 1");
  if (!(alpha > 0) || !(beta > 0))
    throw std::domain_error("classical: stepsizes must be positive");
  StepPairSchedule s{ScheduleKind::constant, {}, std::nullopt};
  switch (kind) {
    case ClassicalKind::constant:
      s.kind = ScheduleKind::constant;
      for (int t = 0; t < T; ++t) s.steps.push_back({alpha, beta});
      break;
    case ClassicalKind::alternating:
      s.kind = ScheduleKind::alternating;
      for (int t = 0; t < T; ++t)
        s.steps.push_back(t % 2 == 0 ? Step{alpha, 0.0} : Step{0.0, beta});
      break;
    case ClassicalKind::two_timescale:
      if (alpha == beta)
        throw std::domain_error("classical: two-timescale needs alpha != beta");
      s.kind = ScheduleKind::two_timescale;
      for (int t = 0; t < T; ++t) s.steps.push_back({alpha, beta});
      break;
  }
  return s;
}

// Per-pair verdicts for the three slingshot family properties:
// (i) at least one stepsize in the pair strictly negative,
// (ii) alternating products alpha_{2t} beta_{2t+1} >= 0 and
//      alpha_{2t+1} beta_{2t} >= 0,
// (iii) consecutive sums alpha_{2t}+alpha_{2t+1} >= 0 and
//       beta_{2t}+beta_{2t+1} >= 0.
struct SlingshotFamilyCheck {
  struct PairFlags {
    bool has_negative;
    bool products_ok;
    bool sums_ok;
    bool ok() const { return has_negative && products_ok && sums_ok; }
  };
  std::vector<PairFlags> pairs;

  bool all_pass() const {
    for (const auto& p : pairs)
      if (!p.ok()) return false;
    return true;
  }
};

inline SlingshotFamilyCheck validate_slingshot_family(const StepPairSchedule& s) {
  if (s.horizon() % 2 != 0)
    throw std::domain_error("validate_slingshot_family: horizon must be even");
  SlingshotFamilyCheck check;
  check.pairs.reserve(static_cast<std::size_t>(s.horizon() / 2));
  for (int t = 0; t + 1 < s.horizon(); t += 2) {
    const Step& a = s.steps[static_cast<std::size_t>(t)];
    const Step& b = s.steps[static_cast<std::size_t>(t) + 1];
    SlingshotFamilyCheck::PairFlags f;
    f.has_negative = a.alpha < 0 || a.beta < 0 || b.alpha < 0 || b.beta < 0;
    f.products_ok = a.alpha * b.beta >= 0 && b.alpha * a.beta >= 0;
    f.sums_ok = a.alpha + b.alpha >= 0 && a.beta + b.beta >= 0;
    check.pairs.push_back(f);
  }
  return check;
}

}  // namespace mmx
