#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "mmx/solvers.hpp"

using namespace mmx;

namespace {

BilinearProblem xy_problem() {
  return BilinearProblem(Mat::Identity(1, 1), Vec::Zero(1), Vec::Zero(1));
}

Point pt2(double x, double y) {
  Vec vx(1), vy(1);
  vx << x;
  vy << y;
  return {vx, vy};
}

Point random_point(Index dx, Index dy, std::uint64_t seed) {
  Point z = Point::Zero(dx, dy);
  for (Index i = 0; i < dx; ++i) z.x(i) = normal01(seed, static_cast<std::uint64_t>(i));
  for (Index i = 0; i < dy; ++i) z.y(i) = normal01(seed, static_cast<std::uint64_t>(dx + i));
  return z;
}

}  // namespace

TEST_CASE("run_gda closed-form behaviors on the 1-D toy") {
  const auto xy = xy_problem();

  SECTION("slingshot pair with h = 1 lands on the saddle exactly") {
    const Trace tr = run_gda(xy, slingshot_bilinear(1, 1.0, 1.0), pt2(1.0, 0.0));
    CHECK(tr.final_iterate.x(0) == 0.0);
    CHECK(tr.final_iterate.y(0) == 0.0);
    CHECK(tr.status == RunStatus::completed);
  }

  SECTION("constant stepsizes expand by sqrt(1.01) per step") {
    const Trace tr = run_gda(xy, classical(ClassicalKind::constant, 0.1, 0.1, 100), pt2(1.0, 0.0));
    REQUIRE(tr.records.size() == 101);
    for (std::size_t i = 1; i < tr.records.size(); ++i) {
      const double ratio = tr.records[i].dist_sq / tr.records[i - 1].dist_sq;
      CHECK(std::abs(ratio - 1.01) <= 1e-13);
    }
  }

  SECTION("zero schedule leaves the iterate unchanged") {
    StepPairSchedule zero{ScheduleKind::custom, {{0.0, 0.0}, {0.0, 0.0}}, std::nullopt};
    const Trace tr = run_gda(xy, zero, pt2(0.3, -0.7));
    CHECK(tr.final_iterate.x(0) == 0.3);
    CHECK(tr.final_iterate.y(0) == -0.7);
  }
}

TEST_CASE("run_gda is linear in the initial offset") {
  const BilinearProblem p = random_bilinear(6, 300.0, 17);
  const auto sched = slingshot_bilinear(8, 1.0, 300.0);
  const Point z0 = random_point(6, 6, 3);
  const Trace a = run_gda(p, sched, z0);
  const Trace b = run_gda(p, sched, 2.0 * z0);
  CHECK((b.final_iterate - 2.0 * a.final_iterate).norm() <= 1e-12 * (1.0 + a.final_iterate.norm()));
}

TEST_CASE("even iterates follow the decoupled two-step recursion") {
  const int d = 5, T = 6;
  const BilinearProblem p = random_bilinear(d, 300.0, 23);
  const auto sched = slingshot_bilinear(T, 1.0, 300.0, RootOrdering::canonical);
  const Point z0 = random_point(d, d, 41);
  const Trace tr = run_gda(p, sched, z0);

  const Mat& B = p.coupling();
  Vec x = z0.x, y = z0.y;
  for (int t = 0; t < T; ++t) {
    const double h = sched.steps[static_cast<std::size_t>(2 * t)].alpha;
    x = x - h * h * (B * (B.transpose() * x));
    y = y - h * h * (B.transpose() * (B * y));
  }
  CHECK((tr.final_iterate.x - x).norm() <= 1e-12 * (1.0 + x.norm()));
  CHECK((tr.final_iterate.y - y).norm() <= 1e-12 * (1.0 + y.norm()));
}

TEST_CASE("divergence is a first-class outcome") {
  const auto xy = xy_problem();
  const Trace tr = run_gda(xy, classical(ClassicalKind::constant, 0.5, 0.5, 4000), pt2(1.0, 0.0));
  CHECK(tr.status == RunStatus::diverged);
  CHECK(tr.iterations_run < 4000);
  CHECK(std::isfinite(tr.records.front().grad_norm_sq));
}

TEST_CASE("record cadence and gradient-evaluation accounting") {
  const auto xy = xy_problem();
  GdaOptions opt;
  opt.record_every = 3;
  const Trace tr = run_gda(xy, classical(ClassicalKind::constant, 0.01, 0.01, 10), pt2(1.0, 0.0), opt);
  REQUIRE(tr.records.size() == 5);  // t = 0,3,6,9 and the final t = 10
  CHECK(tr.records.back().t == 10);
  for (const auto& r : tr.records)
    if (r.t < 10) CHECK(r.cum_grad_evals == r.t);

  const BilinearProblem p = random_bilinear(4, 300.0, 5);
  const Point z0 = random_point(4, 4, 6);
  const Trace eg = run_baseline(p, BaselineKind::extragradient, {}, 7, z0);
  CHECK(eg.total_grad_evals == 14);
  const Trace og = run_baseline(p, BaselineKind::ogda, {}, 7, z0);
  CHECK(og.total_grad_evals == 7);
  const Trace ea = run_baseline(p, BaselineKind::eag, {}, 7, z0);
  CHECK(ea.total_grad_evals == 14);
  const Trace nm = run_baseline(p, BaselineKind::negative_momentum, {}, 7, z0);
  CHECK(nm.total_grad_evals == 7);
}

TEST_CASE("extragradient contracts on the 1-D toy") {
  const auto xy = xy_problem();
  const Trace tr = run_baseline(xy, BaselineKind::extragradient, {}, 50, pt2(1.0, 0.0));
  for (std::size_t i = 1; i < tr.records.size(); ++i)
    CHECK(tr.records[i].dist_sq < tr.records[i - 1].dist_sq);
  CHECK(tr.final_dist_sq < 1e-6);
}

TEST_CASE("hgd is stationary on the flat huber branch") {
  const HuberCoupling huber;
  const Trace tr = run_baseline(huber, BaselineKind::hgd, {}, 32, pt2(3.0, 0.0));
  CHECK(tr.final_iterate.x(0) == 3.0);
  CHECK(tr.final_iterate.y(0) == 0.0);
  for (const auto& r : tr.records) CHECK(r.grad_norm_sq == 1.0);
}

TEST_CASE("consensus with zero GDA weight reduces to hgd") {
  const BilinearProblem p = random_bilinear(3, 300.0, 8);
  const Point z0 = random_point(3, 3, 9);
  BaselineParams hgd_params;
  hgd_params.gamma = 0.001;
  BaselineParams cons_params;
  cons_params.gamma = 0.001;
  cons_params.stepsize = 0.0;
  const Trace a = run_baseline(p, BaselineKind::hgd, hgd_params, 20, z0);
  const Trace b = run_baseline(p, BaselineKind::consensus, cons_params, 20, z0);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].grad_norm_sq == b.records[i].grad_norm_sq);
    CHECK(a.records[i].dist_sq == b.records[i].dist_sq);
  }
  CHECK(a.final_iterate.x == b.final_iterate.x);
  CHECK(a.final_iterate.y == b.final_iterate.y);
}

TEST_CASE("check_rate_bound") {
  SECTION("bilinear slingshot run passes the R_T bound") {
    const BilinearProblem p = random_bilinear(8, 300.0, 13);
    const Trace tr = run_gda(p, slingshot_bilinear(8, 1.0, 300.0), random_point(8, 8, 14));
    const RateCheck rc = check_rate_bound(tr, RateBoundKind::bilinear_RT, {.m = 1.0, .M = 300.0});
    CHECK(rc.pass);
    CHECK(rc.margin >= -1e-8 * rc.bound);
  }

  SECTION("quadratic slingshot run passes the gradient bound") {
    Mat B(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) B(i, j) = normal01(77, static_cast<std::uint64_t>(3 * i + j));
    Eigen::JacobiSVD<Mat> svd(B);
    B /= svd.singularValues()(0);  // smoothness exactly 1
    const QuadraticProblem p(Mat::Zero(3, 3), B, Mat::Zero(3, 3), Vec::Zero(3), Vec::Zero(3), 1.0);
    const Trace tr = run_gda(p, slingshot_quadratic(6, 1.0), random_point(3, 3, 15));
    const RateCheck rc = check_rate_bound(tr, RateBoundKind::quadratic_grad, {.L = 1.0});
    CHECK(rc.pass);
  }

  SECTION("constant GDA on the toy fails the contraction bound") {
    const auto xy = xy_problem();
    const Trace tr = run_gda(xy, classical(ClassicalKind::constant, 0.1, 0.1, 8), pt2(1.0, 0.0));
    const RateCheck rc = check_rate_bound(tr, RateBoundKind::bilinear_RT, {.m = 1.0, .M = 1.0});
    CHECK(!rc.pass);
    CHECK(rc.margin < 0.0);
  }
}

TEST_CASE("gradient perturbation injection is deterministic") {
  const BilinearProblem p = random_bilinear(4, 300.0, 20);
  GdaOptions opt;
  opt.grad_perturbation = 1e-10;
  opt.perturbation_seed = 55;
  const auto sched = slingshot_bilinear(4, 1.0, 300.0);
  const Point z0 = random_point(4, 4, 21);
  const Trace a = run_gda(p, sched, z0, opt);
  const Trace b = run_gda(p, sched, z0, opt);
  CHECK(a.final_iterate.x == b.final_iterate.x);
  CHECK(a.final_iterate.y == b.final_iterate.y);
  const Trace c = run_gda(p, sched, z0);
  CHECK((a.final_iterate - c.final_iterate).norm() > 0.0);
  CHECK((a.final_iterate - c.final_iterate).norm() < 1e-6);
}

TEST_CASE("trace CSV schema") {
  const auto xy = xy_problem();
  const Trace tr = run_gda(xy, classical(ClassicalKind::constant, 0.1, 0.1, 2), pt2(1.0, 0.0));
  std::ostringstream out;
  write_trace_csv(tr, out);
  const std::string text = out.str();
  CHECK(text.rfind("t,alpha,beta,grad_norm_sq,dist_sq,cum_grad_evals\n", 0) == 0);
  CHECK(text.find("0,0.1,0.1,1,1,0\n") != std::string::npos);
}
