#include "kernel.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "error.hpp"

namespace kcl {

KernelMode kernel_mode_from_string(const std::string& s) {
  if (s == "learned") return KernelMode::Learned;
  if (s == "polynomial") return KernelMode::FixedPolynomial;
  if (s == "rbf") return KernelMode::FixedGaussianRbf;
  if (s == "linear") return KernelMode::Linear;
  throw Error(ErrorCode::ConfigError, "unknown kernel mode '" + s + "'");
}

const char* kernel_mode_to_string(KernelMode m) {
  switch (m) {
    case KernelMode::Learned: return "learned";
    case KernelMode::FixedPolynomial: return "polynomial";
    case KernelMode::FixedGaussianRbf: return "rbf";
    case KernelMode::Linear: return "linear";
  }
  return "?";
}

CoeffActivation activation_from_string(const std::string& s) {
  if (s == "relu") return CoeffActivation::ReLU;
  if (s == "sigmoid") return CoeffActivation::Sigmoid;
  if (s == "softmax") return CoeffActivation::Softmax;
  if (s == "none") return CoeffActivation::None;
  throw Error(ErrorCode::ConfigError, "unknown coefficient activation '" + s + "'");
}

const char* activation_to_string(CoeffActivation a) {
  switch (a) {
    case CoeffActivation::ReLU: return "relu";
    case CoeffActivation::Sigmoid: return "sigmoid";
    case CoeffActivation::Softmax: return "softmax";
    case CoeffActivation::None: return "none";
  }
  return "?";
}

double default_act_temperature(CoeffActivation a) {
  switch (a) {
    case CoeffActivation::Sigmoid: return 0.1;
    case CoeffActivation::Softmax: return 0.005;
    default: return 1.0;
  }
}

KernelSeries KernelSeries::learned(int order, CoeffActivation act) {
  return learned(order, act, default_act_temperature(act));
}

KernelSeries KernelSeries::learned(int order, CoeffActivation act,
                                   double act_temperature) {
  if (order < 0) throw Error(ErrorCode::InvalidArgument, "order must be >= 0");
  if (act_temperature <= 0.0)
    throw Error(ErrorCode::InvalidArgument, "act_temperature must be positive");
  KernelSeries k;
  k.mode = KernelMode::Learned;
  k.order = order;
  k.alpha_raw = Eigen::VectorXd::Ones(order + 3);
  k.activation = act;
  k.act_temperature = act_temperature;
  return k;
}

KernelSeries KernelSeries::fixed_polynomial(int degree) {
  if (degree < 1) throw Error(ErrorCode::InvalidArgument, "degree must be >= 1");
  KernelSeries k;
  k.mode = KernelMode::FixedPolynomial;
  k.poly_degree = degree;
  k.alpha_raw = Eigen::VectorXd::Ones(k.order + 3);
  return k;
}

KernelSeries KernelSeries::fixed_rbf(double gamma) {
  if (gamma <= 0.0) throw Error(ErrorCode::InvalidArgument, "gamma must be positive");
  KernelSeries k;
  k.mode = KernelMode::FixedGaussianRbf;
  k.rbf_gamma = gamma;
  k.alpha_raw = Eigen::VectorXd::Ones(k.order + 3);
  return k;
}

KernelSeries KernelSeries::linear() {
  KernelSeries k;
  k.mode = KernelMode::Linear;
  k.alpha_raw = Eigen::VectorXd::Ones(k.order + 3);
  return k;
}

Eigen::VectorXd KernelSeries::trainable_get() const {
  if (mode == KernelMode::Learned) return alpha_raw;
  Eigen::VectorXd v(1);
  v[0] = scale_raw;
  return v;
}

void KernelSeries::trainable_set(const Eigen::VectorXd& v) {
  if (v.size() != trainable_count())
    throw Error(ErrorCode::ShapeMismatch, "trainable parameter size mismatch");
  if (mode == KernelMode::Learned)
    alpha_raw = v;
  else
    scale_raw = v[0];
}

namespace {

void require_learned(const KernelSeries& s, const char* op) {
  if (s.mode != KernelMode::Learned)
    throw Error(ErrorCode::InvalidArgument,
                std::string(op) + " requires a Learned-mode series");
  if (s.alpha_raw.size() != s.coeff_count())
    throw Error(ErrorCode::ShapeMismatch, "alpha_raw must have length M+3");
}

double clamp_t(double t) {
  if (!std::isfinite(t))
    throw Error(ErrorCode::InvalidArgument, "kernel argument must be finite");
  return std::clamp(t, -1.0, 1.0);
}

double k_odd(double t, double tol) {
  if (std::abs(t - 1.0) <= tol) return 1.0;
  if (std::abs(t + 1.0) <= tol) return -1.0;
  return 0.0;
}

double k_even(double t, double tol) {
  return (std::abs(t - 1.0) <= tol || std::abs(t + 1.0) <= tol) ? 1.0 : 0.0;
}

double relu_scale(const KernelSeries& s) { return std::max(0.0, s.scale_raw); }

}  // namespace

Eigen::VectorXd activate_coefficients(const KernelSeries& series) {
  require_learned(series, "activate_coefficients");
  const Eigen::VectorXd& a = series.alpha_raw;
  switch (series.activation) {
    case CoeffActivation::ReLU:
      return a.cwiseMax(0.0);
    case CoeffActivation::Sigmoid:
      return a.unaryExpr([](double x) { return 1.0 / (1.0 + std::exp(-x)); });
    case CoeffActivation::Softmax: {
      const double m = a.maxCoeff();
      Eigen::VectorXd e = (a.array() - m).exp();
      return e / e.sum();
    }
    case CoeffActivation::None:
      return a;
  }
  throw Error(ErrorCode::InvalidArgument, "bad activation");
}

double kernel_eval(const KernelSeries& series, double t) {
  t = clamp_t(t);
  switch (series.mode) {
    case KernelMode::FixedPolynomial:
      return relu_scale(series) * std::pow(t, series.poly_degree);
    case KernelMode::FixedGaussianRbf:
      // Gaussian RBF restricted to unit vectors: |u-v|^2 = 2 - 2t.
      return relu_scale(series) * std::exp(-2.0 * series.rbf_gamma * (1.0 - t));
    case KernelMode::Linear:
      return relu_scale(series) * t;
    case KernelMode::Learned:
      break;
  }
  require_learned(series, "kernel_eval");
  const Eigen::VectorXd alpha = activate_coefficients(series);
  // Horner on alpha_0..alpha_M (stored at offsets 2..M+2).
  double poly = 0.0;
  for (int m = series.order; m >= 0; --m) poly = poly * t + alpha[m + 2];
  return poly + alpha[1] * k_odd(t, series.eq_tolerance) +
         alpha[0] * k_even(t, series.eq_tolerance);
}

double kernel_derivative(const KernelSeries& series, double t) {
  t = clamp_t(t);
  switch (series.mode) {
    case KernelMode::FixedPolynomial:
      return relu_scale(series) * series.poly_degree *
             std::pow(t, series.poly_degree - 1);
    case KernelMode::FixedGaussianRbf:
      return relu_scale(series) * 2.0 * series.rbf_gamma *
             std::exp(-2.0 * series.rbf_gamma * (1.0 - t));
    case KernelMode::Linear:
      return relu_scale(series);
    case KernelMode::Learned:
      break;
  }
  require_learned(series, "kernel_derivative");
  const Eigen::VectorXd alpha = activate_coefficients(series);
  // d/dt sum alpha_m t^m = sum_{m>=1} m alpha_m t^{m-1}; the indicator
  // kernels are flat almost everywhere and get subgradient zero at t = +-1.
  double d = 0.0;
  for (int m = series.order; m >= 1; --m) d = d * t + m * alpha[m + 2];
  return d;
}

Eigen::VectorXd kernel_coeff_gradient(const KernelSeries& series, double t) {
  require_learned(series, "kernel_coeff_gradient");
  t = clamp_t(t);
  const int n = series.coeff_count();
  // dk/d alpha_m: the basis values [k_even, k_odd, 1, t, ..., t^M].
  Eigen::VectorXd basis(n);
  basis[0] = k_even(t, series.eq_tolerance);
  basis[1] = k_odd(t, series.eq_tolerance);
  double p = 1.0;
  for (int m = 0; m <= series.order; ++m) {
    basis[m + 2] = p;
    p *= t;
  }
  switch (series.activation) {
    case CoeffActivation::ReLU: {
      Eigen::VectorXd g = basis;
      for (int i = 0; i < n; ++i)
        if (series.alpha_raw[i] <= 0.0) g[i] = 0.0;
      return g;
    }
    case CoeffActivation::Sigmoid: {
      Eigen::VectorXd g(n);
      for (int i = 0; i < n; ++i) {
        const double s = 1.0 / (1.0 + std::exp(-series.alpha_raw[i]));
        g[i] = basis[i] * s * (1.0 - s);
      }
      return g;
    }
    case CoeffActivation::Softmax: {
      // Jacobian diag(alpha) - alpha alpha^T, applied exactly.
      const Eigen::VectorXd alpha = activate_coefficients(series);
      return alpha.cwiseProduct(basis) - alpha * alpha.dot(basis);
    }
    case CoeffActivation::None:
      return basis;
  }
  throw Error(ErrorCode::InvalidArgument, "bad activation");
}

Eigen::VectorXd kernel_trainable_gradient(const KernelSeries& series, double t) {
  if (series.mode == KernelMode::Learned) return kernel_coeff_gradient(series, t);
  t = clamp_t(t);
  double base = 0.0;
  switch (series.mode) {
    case KernelMode::FixedPolynomial:
      base = std::pow(t, series.poly_degree);
      break;
    case KernelMode::FixedGaussianRbf:
      base = std::exp(-2.0 * series.rbf_gamma * (1.0 - t));
      break;
    case KernelMode::Linear:
      base = t;
      break;
    default:
      break;
  }
  Eigen::VectorXd g(1);
  g[0] = series.scale_raw > 0.0 ? base : 0.0;
  return g;
}

GramMatrix gram_matrix(const KernelSeries& series, const Eigen::MatrixXd& points) {
  const int n = static_cast<int>(points.rows());
  for (int i = 0; i < n; ++i) {
    if (std::abs(points.row(i).norm() - 1.0) > 1e-9)
      throw Error(ErrorCode::InvalidArgument,
                  "gram_matrix: point " + std::to_string(i) + " is not unit-norm");
  }
  GramMatrix g;
  g.point_count = n;
  g.values.resize(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double v = kernel_eval(series, points.row(i).dot(points.row(j)));
      g.values(i, j) = v;
      g.values(j, i) = v;
    }
  }
  return g;
}

double min_eigenvalue(const Eigen::MatrixXd& symmetric) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric);
  return solver.eigenvalues().minCoeff();
}

}  // namespace kcl
