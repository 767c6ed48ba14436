#ifndef KCL_KERNEL_HPP
#define KCL_KERNEL_HPP

#include <string>

#include <Eigen/Core>

namespace kcl {

enum class KernelMode { Learned, FixedPolynomial, FixedGaussianRbf, Linear };
enum class CoeffActivation { ReLU, Sigmoid, Softmax, None };

KernelMode kernel_mode_from_string(const std::string& s);
const char* kernel_mode_to_string(KernelMode m);
CoeffActivation activation_from_string(const std::string& s);
const char* activation_to_string(CoeffActivation a);

// Default loss temperature per coefficient activation (divisor applied to
// every kernel value before the exponential in the loss).
double default_act_temperature(CoeffActivation a);

// A learnable positive definite radial kernel on the unit sphere,
//
//   k(t) = sum_{m=0}^{M} alpha_m t^m + alpha_{-1} k_odd(t) + alpha_{-2} k_even(t),
//
// with t the inner product of two unit vectors and k_odd/k_even the indicator
// kernels active only at t = +-1. Coefficients alpha are produced from the raw
// vector alpha_raw by a non-negativity-enforcing activation, which preserves
// positive definiteness. Fixed modes evaluate a classic kernel instead, scaled
// by a single ReLU-activated coefficient so they share the training path.
struct KernelSeries {
  KernelMode mode = KernelMode::Learned;
  int order = 10;  // M, truncation order of the monomial series
  // Raw coefficients, length M+3, laid out [alpha'_{-2}, alpha'_{-1},
  // alpha'_0, ..., alpha'_M]. Ignored by the fixed modes.
  Eigen::VectorXd alpha_raw;
  CoeffActivation activation = CoeffActivation::ReLU;
  double act_temperature = 1.0;
  double eq_tolerance = 1e-9;  // tolerance for the t = +-1 indicators

  // Fixed-mode parameters.
  double rbf_gamma = 1.0;
  int poly_degree = 10;
  double scale_raw = 1.0;  // single learnable coefficient, ReLU-activated

  static KernelSeries learned(int order = 10,
                              CoeffActivation act = CoeffActivation::ReLU);
  static KernelSeries learned(int order, CoeffActivation act,
                              double act_temperature);
  static KernelSeries fixed_polynomial(int degree = 10);
  static KernelSeries fixed_rbf(double gamma = 1.0);
  static KernelSeries linear();

  int coeff_count() const { return order + 3; }
  // Number of raw parameters the optimizer sees: M+3 in Learned mode, 1 for
  // the fixed-kernel scale.
  int trainable_count() const {
    return mode == KernelMode::Learned ? coeff_count() : 1;
  }
  Eigen::VectorXd trainable_get() const;
  void trainable_set(const Eigen::VectorXd& v);
};

struct GramMatrix {
  Eigen::MatrixXd values;
  int point_count = 0;
};

// alpha = activation(alpha_raw). Learned mode only.
Eigen::VectorXd activate_coefficients(const KernelSeries& series);

// k(t) with t clamped into [-1, 1]. Rejects non-finite t.
double kernel_eval(const KernelSeries& series, double t);

// dk/dt. The indicator kernels are piecewise constant and contribute zero.
double kernel_derivative(const KernelSeries& series, double t);

// dk/d alpha_raw (length M+3), chained through the coefficient activation.
// Learned mode only.
Eigen::VectorXd kernel_coeff_gradient(const KernelSeries& series, double t);

// Gradient with respect to the trainable raw parameters: coeff gradient in
// Learned mode, [d k / d scale_raw] for the fixed modes.
Eigen::VectorXd kernel_trainable_gradient(const KernelSeries& series, double t);

// Gram matrix over unit vectors (rows of `points`). Rejects rows whose norm
// deviates from 1 by more than 1e-9.
GramMatrix gram_matrix(const KernelSeries& series, const Eigen::MatrixXd& points);

double min_eigenvalue(const Eigen::MatrixXd& symmetric);

}  // namespace kcl

#endif
