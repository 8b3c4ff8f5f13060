#pragma once

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>

#include "mmx/rng.hpp"
#include "mmx/types.hpp"

namespace mmx {

// Relative cutoff below which singular values / eigenvalues count as zero
// when detecting saddle-set kernels.
inline constexpr double kKernelCutoff = 1e-12;

// Oracle bundle for an unconstrained min-max problem min_x max_y f(x,y).
// Instances are immutable after construction; all oracles are pure.
class Problem {
 public:
  virtual ~Problem() = default;

  virtual Index dim_x() const = 0;
  virtual Index dim_y() const = 0;

  virtual double value(const Point& z) const = 0;
  // True gradient (grad_x f, grad_y f); the GDA field negates the y block.
  virtual Point grad(const Point& z) const = 0;

  virtual bool has_hessian_vec() const { return false; }
  virtual Point hessian_vec(const Point&, const Point&) const {
    throw UnsupportedOperation("problem has no Hessian-vector oracle");
  }

  virtual double smoothness() const = 0;           // L
  virtual double strong_convexity() const { return 0.0; }  // mu

  virtual bool has_saddle_projection() const { return false; }
  virtual Point closest_saddle(const Point&) const {
    throw UnsupportedOperation("problem has no saddle projection");
  }

 protected:
  void check_shape(const Point& z, const char* who) const {
    require_same_shape(z, dim_x(), dim_y(), who);
  }
};

// min_x max_y (x - xs)^T B (y - ys), with every non-zero squared singular
// value of B inside [m, M].
class BilinearProblem : public Problem {
 public:
  BilinearProblem(Mat B, Vec x_shift, Vec y_shift,
                  std::optional<double> m = std::nullopt,
                  std::optional<double> M = std::nullopt)
      : B_(std::move(B)), xs_(std::move(x_shift)), ys_(std::move(y_shift)) {
    if (B_.rows() < 1 || B_.cols() < 1)
      throw std::domain_error("BilinearProblem: empty coupling matrix");
    if (xs_.size() != B_.rows() || ys_.size() != B_.cols())
      throw std::domain_error("BilinearProblem: shift dimensions do not match B");

    Eigen::JacobiSVD<Mat> svd(B_, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vec& s = svd.singularValues();
    const double smax = s(0);
    if (!(smax > 0))
      throw std::domain_error("BilinearProblem: coupling matrix is zero");
    Index rank = 0;
    double smin_nonzero = smax;
    for (Index i = 0; i < s.size(); ++i) {
      if (s(i) > kKernelCutoff * smax) {
        ++rank;
        smin_nonzero = s(i);
      }
    }
    min_sq_ = smin_nonzero * smin_nonzero;
    max_sq_ = smax * smax;
    m_ = m.value_or(min_sq_);
    M_ = M.value_or(max_sq_);
    if (!(m_ > 0) || !(m_ <= M_))
      throw std::domain_error("BilinearProblem: need 0 < m <= M");
    if (min_sq_ < m_ * (1.0 - 1e-9) || max_sq_ > M_ * (1.0 + 1e-9))
      throw std::domain_error("BilinearProblem: spectrum violates declared [m, M]");

    ker_left_ = svd.matrixU().rightCols(B_.rows() - rank);   // Ker(B^T)
    ker_right_ = svd.matrixV().rightCols(B_.cols() - rank);  // Ker(B)
  }

  Index dim_x() const override { return B_.rows(); }
  Index dim_y() const override { return B_.cols(); }

  double value(const Point& z) const override {
    check_shape(z, "BilinearProblem::value");
    return (z.x - xs_).dot(B_ * (z.y - ys_));
  }

  Point grad(const Point& z) const override {
    check_shape(z, "BilinearProblem::grad");
    return {B_ * (z.y - ys_), B_.transpose() * (z.x - xs_)};
  }

  bool has_hessian_vec() const override { return true; }
  Point hessian_vec(const Point& z, const Point& v) const override {
    check_shape(z, "BilinearProblem::hessian_vec");
    check_shape(v, "BilinearProblem::hessian_vec");
    return {B_ * v.y, B_.transpose() * v.x};
  }

  double smoothness() const override { return std::sqrt(M_); }

  bool has_saddle_projection() const override { return true; }
  // Blockwise orthogonal projection onto (xs + Ker(B^T)) x (ys + Ker(B)).
  Point closest_saddle(const Point& z) const override {
    check_shape(z, "BilinearProblem::closest_saddle");
    Point out{xs_, ys_};
    if (ker_left_.cols() > 0) out.x += ker_left_ * (ker_left_.transpose() * (z.x - xs_));
    if (ker_right_.cols() > 0) out.y += ker_right_ * (ker_right_.transpose() * (z.y - ys_));
    return out;
  }

  const Mat& coupling() const { return B_; }
  const Vec& x_shift() const { return xs_; }
  const Vec& y_shift() const { return ys_; }
  double m() const { return m_; }
  double M() const { return M_; }
  double min_squared_singular_value() const { return min_sq_; }
  double max_squared_singular_value() const { return max_sq_; }

 private:
  Mat B_;
  Vec xs_, ys_;
  double m_ = 0, M_ = 0;          // declared bounds on non-zero sigma^2
  double min_sq_ = 0, max_sq_ = 0;  // realized bounds
  Mat ker_left_, ker_right_;
};

namespace detail {

// Largest |eigenvalue| of a symmetric matrix by power iteration on H^2,
// relative tolerance `tol` on the squared estimate.
inline double power_iteration_bound(const Mat& H, double tol = 1e-10, int max_iters = 50000) {
  const Index n = H.rows();
  Vec v(n);
  for (Index i = 0; i < n; ++i) v(i) = uniform_sym(0x9E3779B9u, static_cast<std::uint64_t>(i));
  v.normalize();
  double lam_sq = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    Vec w = H * (H * v);
    const double nw = w.norm();
    if (nw == 0.0) return 0.0;
    v = w / nw;
    const double next = v.dot(H * (H * v));
    if (std::abs(next - lam_sq) <= tol * std::max(1.0, std::abs(next))) {
      lam_sq = next;
      break;
    }
    lam_sq = next;
  }
  return std::sqrt(std::max(0.0, lam_sq));
}

inline void require_symmetric(const Mat& A, const char* who) {
  if (A.rows() != A.cols())
    throw std::domain_error(std::string(who) + ": matrix not square");
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw std::domain_error(std::string(who) + ": matrix not symmetric");
}

inline void require_psd(const Mat& A, const char* who) {
  if (A.size() == 0) return;
  Eigen::SelfAdjointEigenSolver<Mat> es(A);
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  if (es.eigenvalues().minCoeff() < -1e-10 * scale)
    throw std::domain_error(std::string(who) + ": matrix not positive semidefinite");
}

}  // namespace detail

// min_x max_y (1/2) w^T H w with w = z - (xs, ys) and H = [[A, B], [B^T, -C]],
// A and C symmetric PSD, eigenvalues of H inside [-L, L].
class QuadraticProblem : public Problem {
 public:
  QuadraticProblem(const Mat& A, const Mat& B, const Mat& C, Vec x_shift, Vec y_shift,
                   std::optional<double> L = std::nullopt)
      : xs_(std::move(x_shift)), ys_(std::move(y_shift)) {
    detail::require_symmetric(A, "QuadraticProblem A");
    detail::require_symmetric(C, "QuadraticProblem C");
    if (A.rows() != B.rows() || C.rows() != B.cols())
      throw std::domain_error("QuadraticProblem: inconsistent block dimensions");
    if (xs_.size() != A.rows() || ys_.size() != C.rows())
      throw std::domain_error("QuadraticProblem: shift dimensions do not match blocks");
    detail::require_psd(A, "QuadraticProblem A");
    detail::require_psd(C, "QuadraticProblem C");

    dx_ = A.rows();
    dy_ = C.rows();
    H_.resize(dx_ + dy_, dx_ + dy_);
    H_.topLeftCorner(dx_, dx_) = A;
    H_.topRightCorner(dx_, dy_) = B;
    H_.bottomLeftCorner(dy_, dx_) = B.transpose();
    H_.bottomRightCorner(dy_, dy_) = -C;

    L_est_ = detail::power_iteration_bound(H_);
    L_ = L.value_or(L_est_);
    if (!(L_ > 0)) throw std::domain_error("QuadraticProblem: smoothness must be positive");
    if (L_est_ > L_ * (1.0 + 1e-8))
      throw std::domain_error("QuadraticProblem: spectrum of H exceeds declared L");

    Eigen::SelfAdjointEigenSolver<Mat> es(H_);
    const double amax = es.eigenvalues().cwiseAbs().maxCoeff();
    Index nker = 0;
    for (Index i = 0; i < es.eigenvalues().size(); ++i)
      if (std::abs(es.eigenvalues()(i)) <= kKernelCutoff * amax) ++nker;
    ker_.resize(dx_ + dy_, nker);
    Index c = 0;
    for (Index i = 0; i < es.eigenvalues().size(); ++i)
      if (std::abs(es.eigenvalues()(i)) <= kKernelCutoff * amax)
        ker_.col(c++) = es.eigenvectors().col(i);
  }

  Index dim_x() const override { return dx_; }
  Index dim_y() const override { return dy_; }

  double value(const Point& z) const override {
    check_shape(z, "QuadraticProblem::value");
    const Vec w = offset(z);
    return 0.5 * w.dot(H_ * w);
  }

  Point grad(const Point& z) const override {
    check_shape(z, "QuadraticProblem::grad");
    const Vec g = H_ * offset(z);
    return split(g);
  }

  bool has_hessian_vec() const override { return true; }
  Point hessian_vec(const Point& z, const Point& v) const override {
    check_shape(z, "QuadraticProblem::hessian_vec");
    check_shape(v, "QuadraticProblem::hessian_vec");
    Vec vv(dx_ + dy_);
    vv << v.x, v.y;
    return split(H_ * vv);
  }

  double smoothness() const override { return L_; }
  double estimated_smoothness() const { return L_est_; }

  bool has_saddle_projection() const override { return true; }
  // Orthogonal projection onto (xs, ys) + Ker(H).
  Point closest_saddle(const Point& z) const override {
    check_shape(z, "QuadraticProblem::closest_saddle");
    Vec w = offset(z);
    Vec proj = Vec::Zero(dx_ + dy_);
    if (ker_.cols() > 0) proj = ker_ * (ker_.transpose() * w);
    Point out = split(proj);
    out.x += xs_;
    out.y += ys_;
    return out;
  }

  const Mat& H() const { return H_; }

 private:
  Vec offset(const Point& z) const {
    Vec w(dx_ + dy_);
    w << z.x - xs_, z.y - ys_;
    return w;
  }
  Point split(const Vec& v) const { return {v.head(dx_), v.tail(dy_)}; }

  Mat H_;
  Vec xs_, ys_;
  Index dx_ = 0, dy_ = 0;
  double L_ = 0, L_est_ = 0;
  Mat ker_;
};

// 1-D x 1-D instance f(x, y) = huber(x): x^2/2 on |x| <= 1, |x| - 1/2 outside.
// The gradient is constant on each linear branch, which is what makes
// zero-net stepsize pairs cycle and Hamiltonian descent stall there.
class HuberCoupling : public Problem {
 public:
  Index dim_x() const override { return 1; }
  Index dim_y() const override { return 1; }

  double value(const Point& z) const override {
    check_shape(z, "HuberCoupling::value");
    const double x = z.x(0);
    return std::abs(x) <= 1.0 ? 0.5 * x * x : std::abs(x) - 0.5;
  }

  Point grad(const Point& z) const override {
    check_shape(z, "HuberCoupling::grad");
    Point g = Point::Zero(1, 1);
    g.x(0) = std::clamp(z.x(0), -1.0, 1.0);
    return g;
  }

  bool has_hessian_vec() const override { return true; }
  Point hessian_vec(const Point& z, const Point& v) const override {
    check_shape(z, "HuberCoupling::hessian_vec");
    Point out = Point::Zero(1, 1);
    if (std::abs(z.x(0)) <= 1.0) out.x(0) = v.x(0);
    return out;
  }

  double smoothness() const override { return 1.0; }

  bool has_saddle_projection() const override { return true; }
  // Stationary set is {0} x R.
  Point closest_saddle(const Point& z) const override {
    check_shape(z, "HuberCoupling::closest_saddle");
    Point out = z;
    out.x(0) = 0.0;
    return out;
  }
};

inline HuberCoupling make_huber_coupling() { return {}; }

// 1-D x 1-D instance f(x, y) = log cosh(x); smooth convex-concave with
// nonlinear gradient tanh(x), used for the second-order expansion checks.
class LogCoshProblem : public Problem {
 public:
  Index dim_x() const override { return 1; }
  Index dim_y() const override { return 1; }

  double value(const Point& z) const override {
    check_shape(z, "LogCoshProblem::value");
    const double a = std::abs(z.x(0));
    return a + std::log1p(std::exp(-2.0 * a)) - M_LN2;
  }

  Point grad(const Point& z) const override {
    check_shape(z, "LogCoshProblem::grad");
    Point g = Point::Zero(1, 1);
    g.x(0) = std::tanh(z.x(0));
    return g;
  }

  bool has_hessian_vec() const override { return true; }
  Point hessian_vec(const Point& z, const Point& v) const override {
    check_shape(z, "LogCoshProblem::hessian_vec");
    const double t = std::tanh(z.x(0));
    Point out = Point::Zero(1, 1);
    out.x(0) = (1.0 - t * t) * v.x(0);
    return out;
  }

  double smoothness() const override { return 1.0; }

  bool has_saddle_projection() const override { return true; }
  Point closest_saddle(const Point& z) const override {
    check_shape(z, "LogCoshProblem::closest_saddle");
    Point out = z;
    out.x(0) = 0.0;
    return out;
  }
};

// f(x, y) = (mu/2)|x|^2 - (mu/2)|y|^2 + x^T B y + a^T x + b^T y.
// Strongly-convex-strongly-concave when mu > 0, with a closed-form saddle.
class ScscQuadratic : public Problem {
 public:
  ScscQuadratic(Mat B, Vec a, Vec b, double mu)
      : B_(std::move(B)), a_(std::move(a)), b_(std::move(b)), mu_(mu) {
    if (mu_ < 0) throw std::domain_error("ScscQuadratic: mu must be >= 0");
    if (a_.size() != B_.rows() || b_.size() != B_.cols())
      throw std::domain_error("ScscQuadratic: linear term dimensions do not match B");
    const Index dx = B_.rows(), dy = B_.cols();
    Mat K(dx + dy, dx + dy);
    K.topLeftCorner(dx, dx) = mu_ * Mat::Identity(dx, dx);
    K.topRightCorner(dx, dy) = B_;
    K.bottomLeftCorner(dy, dx) = B_.transpose();
    K.bottomRightCorner(dy, dy) = -mu_ * Mat::Identity(dy, dy);

    Eigen::FullPivLU<Mat> lu(K);
    if (!lu.isInvertible())
      throw std::domain_error("ScscQuadratic: degenerate instance (mu = 0 with singular B)");
    Vec rhs(dx + dy);
    rhs << -a_, -b_;
    const Vec zs = lu.solve(rhs);
    saddle_ = {zs.head(dx), zs.tail(dy)};

    Eigen::JacobiSVD<Mat> svd(B_);
    const double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    L_ = std::sqrt(mu_ * mu_ + smax * smax);
  }

  Index dim_x() const override { return B_.rows(); }
  Index dim_y() const override { return B_.cols(); }

  double value(const Point& z) const override {
    check_shape(z, "ScscQuadratic::value");
    return 0.5 * mu_ * z.x.squaredNorm() - 0.5 * mu_ * z.y.squaredNorm() +
           z.x.dot(B_ * z.y) + a_.dot(z.x) + b_.dot(z.y);
  }

  Point grad(const Point& z) const override {
    check_shape(z, "ScscQuadratic::grad");
    return {mu_ * z.x + B_ * z.y + a_, -mu_ * z.y + B_.transpose() * z.x + b_};
  }

  bool has_hessian_vec() const override { return true; }
  Point hessian_vec(const Point& z, const Point& v) const override {
    check_shape(z, "ScscQuadratic::hessian_vec");
    return {mu_ * v.x + B_ * v.y, -mu_ * v.y + B_.transpose() * v.x};
  }

  double smoothness() const override { return L_; }
  double strong_convexity() const override { return mu_; }

  bool has_saddle_projection() const override { return true; }
  Point closest_saddle(const Point&) const override { return saddle_; }
  const Point& saddle() const { return saddle_; }

 private:
  Mat B_;
  Vec a_, b_;
  double mu_ = 0, L_ = 0;
  Point saddle_;
};

// Random coupling B = U (Sigma + I) V^T from an i.i.d. Uniform[0,1] draw,
// so every singular value is at least 1. Deterministic in (d, seed).
inline BilinearProblem random_bilinear(int d, double M_target, std::uint64_t seed) {
  if (d < 1) throw std::domain_error("random_bilinear: d must be >= 1");
  Mat Bt(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      Bt(i, j) = uniform01(seed, static_cast<std::uint64_t>(i) * d + j);
  Eigen::JacobiSVD<Mat> svd(Bt, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Mat B = svd.matrixU() * (svd.singularValues().array() + 1.0).matrix().asDiagonal() *
                svd.matrixV().transpose();
  const double smax = svd.singularValues()(0) + 1.0;
  if (smax * smax > M_target)
    throw std::domain_error("random_bilinear: realized spectrum exceeds M_target");
  return BilinearProblem(B, Vec::Zero(d), Vec::Zero(d), 1.0, M_target);
}

// Random mu-SCSC instance rescaled so L = 1 exactly; used for certificate
// fuzzing and the contraction experiments.
inline ScscQuadratic random_scsc(int d, double mu, std::uint64_t seed, bool with_linear = true) {
  if (d < 1) throw std::domain_error("random_scsc: d must be >= 1");
  if (!(mu >= 0 && mu < 1)) throw std::domain_error("random_scsc: need mu in [0, 1)");
  Mat B(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      B(i, j) = normal01(seed, static_cast<std::uint64_t>(i) * d + j);
  Eigen::JacobiSVD<Mat> svd(B);
  B *= std::sqrt(1.0 - mu * mu) / svd.singularValues()(0);
  Vec a = Vec::Zero(d), b = Vec::Zero(d);
  if (with_linear) {
    const std::uint64_t base = static_cast<std::uint64_t>(d) * d;
    for (int i = 0; i < d; ++i) a(i) = normal01(seed, base + i);
    for (int i = 0; i < d; ++i) b(i) = normal01(seed, base + d + i);
  }
  return ScscQuadratic(std::move(B), std::move(a), std::move(b), mu);
}

inline Point grad(const Problem& p, const Point& z) { return p.grad(z); }

// Hamiltonian Phi(z) = (1/2) |grad f(z)|^2.
inline double hamiltonian(const Problem& p, const Point& z) {
  return 0.5 * p.grad(z).squared_norm();
}

// Central finite difference of grad f along grad f, rescaled by |grad f|:
//   grad Phi(z) ~ |g| * (grad f(z + s u) - grad f(z - s u)) / (2 s),  u = g/|g|.
inline Point hamiltonian_grad_fd(const Problem& p, const Point& z, double step) {
  const Point g = p.grad(z);
  const double gn = g.norm();
  if (gn == 0.0) return Point::Zero(p.dim_x(), p.dim_y());
  const Point u = (1.0 / gn) * g;
  const Point diff = p.grad(z + step * u) - p.grad(z - step * u);
  return (gn / (2.0 * step)) * diff;
}

// grad Phi(z) = hess f(z) grad f(z), via the Hessian-vector oracle when
// present, else the finite-difference fallback with step
// 1e-5 (1 + |z|) / (1 + |grad f(z)|).
inline Point hamiltonian_grad(const Problem& p, const Point& z, bool allow_fd = true) {
  if (p.has_hessian_vec()) return p.hessian_vec(z, p.grad(z));
  if (!allow_fd)
    throw UnsupportedOperation("hamiltonian_grad: no Hessian-vector oracle and fallback disabled");
  const double gn = p.grad(z).norm();
  if (gn == 0.0) return Point::Zero(p.dim_x(), p.dim_y());
  const double step = 1e-5 * (1.0 + z.norm()) / (1.0 + gn);
  return hamiltonian_grad_fd(p, z, step);
}

inline Point closest_saddle(const Problem& p, const Point& z0) { return p.closest_saddle(z0); }

}  // namespace mmx
