#pragma once

#include <Eigen/Dense>

#include <functional>
#include <limits>
#include <memory>
#include <string>

#include "hjsbv/core.hpp"

namespace hjsbv {

/// Uniformly convex Hamiltonian H(p) with its derivatives and the declared
/// convexity constant cH on a box of admissible gradients.
///
/// Models are immutable once built; every member is const and thread-safe.
class HamiltonianModel {
 public:
  enum class Kind { QuadraticForm, Custom };

  using EvalFn = std::function<double(const Point&)>;
  using GradFn = std::function<Point(const Point&)>;
  using HessFn = std::function<Eigen::MatrixXd(const Point&)>;

  /// H(p) = 1/2 <A p, p> + offset. cH <= 0 selects max(lambda_max, 1/lambda_min).
  static HamiltonianModel quadratic(const Eigen::MatrixXd& A, double gradient_bound,
                                    double cH = 0.0, double offset = 0.0) {
    const int n = static_cast<int>(A.rows());
    check_dim(n);
    if (A.cols() != n) throw DomainError("quadratic form matrix must be square");
    if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + A.cwiseAbs().maxCoeff()))
      throw DomainError("quadratic form matrix must be symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (!(lo > 0.0)) throw DomainError("quadratic form matrix must be positive definite");
    if (!(gradient_bound > 0.0)) throw DomainError("gradient bound must be positive");

    HamiltonianModel m;
    m.kind_ = Kind::QuadraticForm;
    m.dim_ = n;
    m.name_ = "quadratic";
    m.A_ = A;
    m.Ainv_ = A.inverse();
    m.offset_ = offset;
    m.cH_ = cH > 0.0 ? cH : std::max(hi, 1.0 / lo);
    m.box_ = symmetric_box(n, gradient_bound);
    m.speed_ = m.corner_speed();
    return m;
  }

  /// User-supplied Hamiltonian; cH is declared by the caller and validated
  /// separately with verify_uniform_convexity.
  static HamiltonianModel custom(int dim, std::string name, EvalFn eval, GradFn grad,
                                 HessFn hess, Box gradient_box, double cH) {
    check_dim(dim);
    if (!(cH > 0.0)) throw DomainError("cH must be positive");
    HamiltonianModel m;
    m.kind_ = Kind::Custom;
    m.dim_ = dim;
    m.name_ = std::move(name);
    m.eval_ = std::move(eval);
    m.grad_ = std::move(grad);
    m.hess_ = std::move(hess);
    m.cH_ = cH;
    m.box_ = gradient_box;
    m.speed_ = m.sampled_speed();
    return m;
  }

  /// Registered smooth family H(p) = |p|^2/2 + beta * sum_i log cosh(p_i).
  /// Its Hessian is diag(1 + beta sech^2 p_i), so cH = 1 + beta is sharp.
  static HamiltonianModel logcosh(int dim, double beta, double gradient_bound, double cH = 0.0) {
    if (!(beta >= 0.0)) throw DomainError("logcosh family needs beta >= 0");
    auto eval = [dim, beta](const Point& p) {
      double s = 0.0;
      for (int a = 0; a < dim; ++a) s += 0.5 * p[a] * p[a] + beta * log_cosh(p[a]);
      return s;
    };
    auto grad = [dim, beta](const Point& p) {
      Point g{0.0, 0.0};
      for (int a = 0; a < dim; ++a) g[a] = p[a] + beta * std::tanh(p[a]);
      return g;
    };
    auto hess = [dim, beta](const Point& p) {
      Eigen::MatrixXd Hm = Eigen::MatrixXd::Zero(dim, dim);
      for (int a = 0; a < dim; ++a) {
        const double c = std::cosh(p[a]);
        Hm(a, a) = 1.0 + beta / (c * c);
      }
      return Hm;
    };
    return custom(dim, "logcosh", eval, grad, hess, symmetric_box(dim, gradient_bound),
                  cH > 0.0 ? cH : 1.0 + beta);
  }

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  const std::string& name() const { return name_; }
  double cH() const { return cH_; }
  const Box& gradient_box() const { return box_; }
  const Eigen::MatrixXd& matrix() const { return A_; }
  double offset() const { return offset_; }

  /// max |DH(p)| over the gradient box: the propagation speed.
  double max_speed() const { return speed_; }

  /// Largest |p| over the gradient box.
  double gradient_norm_bound() const {
    Point c{0.0, 0.0};
    for (int a = 0; a < dim_; ++a) c[a] = std::max(std::abs(box_.lower[a]), std::abs(box_.upper[a]));
    return norm(c, dim_);
  }

  double eval(const Point& p) const {
    if (!all_finite(p, dim_)) throw DomainError("Hamiltonian evaluated at a non-finite point");
    if (kind_ == Kind::QuadraticForm) {
      double s = 0.0;
      for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) s += p[i] * A_(i, j) * p[j];
      return 0.5 * s + offset_;
    }
    return eval_(p);
  }

  Point gradient(const Point& p) const {
    if (kind_ == Kind::QuadraticForm) {
      Point g{0.0, 0.0};
      for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) g[i] += A_(i, j) * p[j];
      return g;
    }
    return grad_(p);
  }

  Eigen::MatrixXd hessian(const Point& p) const {
    if (kind_ == Kind::QuadraticForm) return A_;
    return hess_(p);
  }

  /// L(q) without range checks; closed form for quadratic forms, Newton
  /// inversion of DH otherwise. Used on the hot path of the Hopf-Lax solver.
  double lagrangian(const Point& q) const {
    if (kind_ == Kind::QuadraticForm) {
      double s = 0.0;
      for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) s += q[i] * Ainv_(i, j) * q[j];
      return 0.5 * s - offset_;
    }
    const Point p = newton_invert(q);
    double pq = 0.0;
    for (int a = 0; a < dim_; ++a) pq += p[a] * q[a];
    return pq - eval_(p);
  }

  /// Damped Newton on DH(p) = q with step halving. Throws ConvergenceError.
  Point newton_invert(const Point& q) const {
    const double tol = 1e-10 * (1.0 + norm(q, dim_));
    Point p{0.0, 0.0};
    if (kind_ == Kind::QuadraticForm) {
      for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) p[i] += Ainv_(i, j) * q[j];
    }
    auto residual = [&](const Point& x) {
      Point g = gradient(x);
      for (int a = 0; a < dim_; ++a) g[a] -= q[a];
      return g;
    };
    Point r = residual(p);
    double rn = norm(r, dim_);
    for (int it = 0; it < 100; ++it) {
      if (rn <= 0.01 * tol) return p;
      Eigen::VectorXd rv(dim_);
      for (int a = 0; a < dim_; ++a) rv(a) = r[a];
      Eigen::VectorXd d = hessian(p).ldlt().solve(-rv);
      double lambda = 1.0;
      bool improved = false;
      while (lambda > 1e-10) {
        Point trial = p;
        for (int a = 0; a < dim_; ++a) trial[a] += lambda * d(a);
        Point rt = residual(trial);
        const double rtn = norm(rt, dim_);
        if (rtn < rn) {
          p = trial;
          r = rt;
          rn = rtn;
          improved = true;
          break;
        }
        lambda *= 0.5;
      }
      if (!improved) break;
    }
    if (rn <= tol) return p;
    throw ConvergenceError("gradient inversion did not converge");
  }

  static Box symmetric_box(int dim, double bound) {
    Box b;
    for (int a = 0; a < dim; ++a) {
      b.lower[a] = -bound;
      b.upper[a] = bound;
    }
    return b;
  }

 private:
  static double log_cosh(double x) {
    const double ax = std::abs(x);
    return ax + std::log1p(std::exp(-2.0 * ax)) - std::log(2.0);
  }

  double corner_speed() const {
    double best = 0.0;
    for (int mask = 0; mask < (1 << dim_); ++mask) {
      Point c{0.0, 0.0};
      for (int a = 0; a < dim_; ++a) c[a] = (mask >> a) & 1 ? box_.upper[a] : box_.lower[a];
      best = std::max(best, norm(gradient(c), dim_));
    }
    return best;
  }

  double sampled_speed() const {
    double best = corner_speed();
    const int k = 21;
    const int total = dim_ == 1 ? k : k * k;
    for (int s = 0; s < total; ++s) {
      Point c{0.0, 0.0};
      int idx[2] = {s % k, s / k};
      for (int a = 0; a < dim_; ++a)
        c[a] = box_.lower[a] + (box_.upper[a] - box_.lower[a]) * idx[a] / (k - 1.0);
      best = std::max(best, norm(gradient(c), dim_));
    }
    return best;
  }

  Kind kind_ = Kind::QuadraticForm;
  int dim_ = 1;
  std::string name_;
  Eigen::MatrixXd A_;
  Eigen::MatrixXd Ainv_;
  double offset_ = 0.0;
  EvalFn eval_;
  GradFn grad_;
  HessFn hess_;
  double cH_ = 1.0;
  Box box_;
  double speed_ = 0.0;
};

inline double eval_hamiltonian(const HamiltonianModel& model, const Point& p) { return model.eval(p); }

/// Solves DH(p) = q. The result must lie in the gradient box inflated by 10%.
inline Point invert_gradient(const HamiltonianModel& model, const Point& q) {
  if (!all_finite(q, model.dim())) throw DomainError("non-finite gradient target");
  const Point p = model.newton_invert(q);
  const Box& b = model.gradient_box();
  Point pad{0.0, 0.0};
  for (int a = 0; a < model.dim(); ++a) pad[a] = 0.05 * (b.upper[a] - b.lower[a]);
  if (!b.inflated(pad, model.dim()).contains(p, model.dim()))
    throw RangeError("gradient inversion left the admissible gradient box");
  return p;
}

struct LagrangianSample {
  Point q{0.0, 0.0};
  double value = 0.0;
  Point argmax_p{0.0, 0.0};
};

/// L(q) = sup_p { p.q - H(p) }, attained at the unique p* with DH(p*) = q.
inline LagrangianSample legendre_transform(const HamiltonianModel& model, const Point& q) {
  LagrangianSample s;
  s.q = q;
  s.argmax_p = invert_gradient(model, q);
  double pq = 0.0;
  for (int a = 0; a < model.dim(); ++a) pq += s.argmax_p[a] * q[a];
  s.value = pq - model.eval(s.argmax_p);
  return s;
}

struct ConvexityReport {
  double c_low_observed = 0.0;
  double c_high_observed = 0.0;
  bool pass = false;
};

/// Radical inverse in the given base; the Halton point set in the box.
inline double radical_inverse(unsigned index, unsigned base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (index > 0) {
    r += f * (index % base);
    index /= base;
    f *= inv;
  }
  return r;
}

inline ConvexityReport verify_uniform_convexity(const HamiltonianModel& model, int samples) {
  if (samples < 1) throw DomainError("need at least one sample");
  const int n = model.dim();
  const Box& b = model.gradient_box();
  ConvexityReport rep;
  rep.c_low_observed = std::numeric_limits<double>::infinity();
  rep.c_high_observed = -std::numeric_limits<double>::infinity();
  const unsigned bases[2] = {2, 3};
  for (int s = 0; s < samples; ++s) {
    Point p{0.0, 0.0};
    for (int a = 0; a < n; ++a)
      p[a] = b.lower[a] + (b.upper[a] - b.lower[a]) * radical_inverse(static_cast<unsigned>(s + 1), bases[a]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(model.hessian(p), Eigen::EigenvaluesOnly);
    rep.c_low_observed = std::min(rep.c_low_observed, es.eigenvalues().minCoeff());
    rep.c_high_observed = std::max(rep.c_high_observed, es.eigenvalues().maxCoeff());
  }
  const double cH = model.cH();
  rep.pass = rep.c_low_observed >= (1.0 / cH) * (1.0 - 1e-9) && rep.c_high_observed <= cH * (1.0 + 1e-9);
  return rep;
}

}  // namespace hjsbv
