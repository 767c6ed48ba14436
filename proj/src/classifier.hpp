#ifndef KCL_CLASSIFIER_HPP
#define KCL_CLASSIFIER_HPP

#include <optional>

#include <Eigen/Core>

#include "kernel.hpp"
#include "losses.hpp"

namespace kcl {

// v / |v|. Throws DegenerateVector when |v| <= 1e-12.
Eigen::VectorXd normalize(const Eigen::VectorXd& v);

// Jacobian-vector product of normalize: (g - <g, v_hat> v_hat) / |v|.
Eigen::VectorXd normalize_backward(const Eigen::VectorXd& v,
                                   const Eigen::VectorXd& upstream);

enum class ClassifierKind { Kernelized, LinearSoftmax };

// The classification layer. Kernelized mode scores class j as
// k(<w_hat_j, f_hat>) / act_temperature on L2-normalized weights and
// features; the linear softmax baseline scores <w_j, f> + b_j on the raw
// vectors and keeps its additive bias.
struct ClassifierParams {
  ClassifierKind kind = ClassifierKind::Kernelized;
  Eigen::MatrixXd weights;  // L x d, raw (normalized on every forward pass)
  KernelSeries series;
  bool use_bias = false;  // linear baseline only
  Eigen::VectorXd bias;

  int classes() const { return static_cast<int>(weights.rows()); }
  int dim() const { return static_cast<int>(weights.cols()); }

  static ClassifierParams kernelized(int classes, int dim, KernelSeries series,
                                     std::uint64_t init_seed);
  static ClassifierParams linear_softmax(int classes, int dim,
                                         std::uint64_t init_seed);
};

struct LayerGradients {
  Eigen::MatrixXd d_weights;      // L x d
  Eigen::VectorXd d_kernel_raw;   // trainable kernel parameters (M+3 or 1)
  Eigen::VectorXd d_bias;         // L (linear baseline only)
  Eigen::VectorXd d_features;     // d, gradient w.r.t. the raw input features
};

// Either a hard label or an already-softened teacher distribution.
struct Target {
  int label = -1;
  std::optional<Eigen::VectorXd> distribution;

  static Target hard(int label) { return Target{label, std::nullopt}; }
  static Target soft(Eigen::VectorXd dist) { return Target{-1, std::move(dist)}; }
};

// Raw per-class kernel scores (before the temperature divisor).
Eigen::VectorXd raw_scores(const ClassifierParams& params,
                           const Eigen::VectorXd& f);

// Prediction logits: raw scores divided by act_temperature in kernelized
// mode, <w_j, f> + b_j for the linear baseline.
Eigen::VectorXd logits(const ClassifierParams& params, const Eigen::VectorXd& f);

// argmax of logits; ties break toward the lowest class index.
int predict(const ClassifierParams& params, const Eigen::VectorXd& f);
int argmax_lowest(const Eigen::VectorXd& v);

// Loss and exact gradients for one example. Scores are divided by
// loss_temperature before the softmax; pass the series act_temperature for
// plain training and the distillation T for soft targets.
struct ForwardBackward {
  double loss = 0.0;
  LayerGradients grads;
  Eigen::VectorXd scores;  // raw scores, for logging/accuracy
};
ForwardBackward forward_backward(const ClassifierParams& params,
                                 const Eigen::VectorXd& f, const Target& target,
                                 double loss_temperature);

}  // namespace kcl

#endif
