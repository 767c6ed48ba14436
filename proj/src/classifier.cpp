#include "classifier.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "error.hpp"
#include "rng.hpp"

namespace kcl {

Eigen::VectorXd normalize(const Eigen::VectorXd& v) {
  const double n = v.norm();
  if (n <= 1e-12)
    throw Error(ErrorCode::DegenerateVector, "cannot normalize zero vector");
  return v / n;
}

Eigen::VectorXd normalize_backward(const Eigen::VectorXd& v,
                                   const Eigen::VectorXd& upstream) {
  const double n = v.norm();
  if (n <= 1e-12)
    throw Error(ErrorCode::DegenerateVector, "cannot normalize zero vector");
  const Eigen::VectorXd vhat = v / n;
  return (upstream - upstream.dot(vhat) * vhat) / n;
}

ClassifierParams ClassifierParams::kernelized(int classes, int dim,
                                              KernelSeries series,
                                              std::uint64_t init_seed) {
  if (classes < 2 || dim < 2)
    throw Error(ErrorCode::InvalidArgument, "need L >= 2 and d >= 2");
  ClassifierParams p;
  p.kind = ClassifierKind::Kernelized;
  Rng rng(init_seed);
  p.weights = rng.gaussian_matrix(classes, dim);
  p.series = std::move(series);
  p.use_bias = false;
  p.bias = Eigen::VectorXd::Zero(classes);
  return p;
}

ClassifierParams ClassifierParams::linear_softmax(int classes, int dim,
                                                  std::uint64_t init_seed) {
  if (classes < 2 || dim < 2)
    throw Error(ErrorCode::InvalidArgument, "need L >= 2 and d >= 2");
  ClassifierParams p;
  p.kind = ClassifierKind::LinearSoftmax;
  Rng rng(init_seed);
  p.weights = rng.gaussian_matrix(classes, dim);
  p.use_bias = true;
  p.bias = Eigen::VectorXd::Zero(classes);
  return p;
}

Eigen::VectorXd raw_scores(const ClassifierParams& params,
                           const Eigen::VectorXd& f) {
  const int L = params.classes();
  if (f.size() != params.dim())
    throw Error(ErrorCode::ShapeMismatch, "feature dimension mismatch");
  Eigen::VectorXd s(L);
  if (params.kind == ClassifierKind::LinearSoftmax) {
    s = params.weights * f;
    if (params.use_bias) s += params.bias;
    return s;
  }
  const Eigen::VectorXd fhat = normalize(f);
  for (int j = 0; j < L; ++j) {
    const Eigen::VectorXd what = normalize(params.weights.row(j).transpose());
    s[j] = kernel_eval(params.series, what.dot(fhat));
  }
  return s;
}

Eigen::VectorXd logits(const ClassifierParams& params, const Eigen::VectorXd& f) {
  Eigen::VectorXd s = raw_scores(params, f);
  if (params.kind == ClassifierKind::Kernelized)
    s /= params.series.act_temperature;
  return s;
}

int argmax_lowest(const Eigen::VectorXd& v) {
  int best = 0;
  for (int j = 1; j < v.size(); ++j)
    if (v[j] > v[best]) best = j;
  return best;
}

int predict(const ClassifierParams& params, const Eigen::VectorXd& f) {
  return argmax_lowest(logits(params, f));
}

ForwardBackward forward_backward(const ClassifierParams& params,
                                 const Eigen::VectorXd& f, const Target& target,
                                 double loss_temperature) {
  if (loss_temperature <= 0.0)
    throw Error(ErrorCode::InvalidArgument, "loss_temperature must be positive");
  const int L = params.classes();
  const int d = params.dim();
  if (f.size() != d)
    throw Error(ErrorCode::ShapeMismatch, "feature dimension mismatch");

  ForwardBackward out;
  out.grads.d_weights = Eigen::MatrixXd::Zero(L, d);
  out.grads.d_bias = Eigen::VectorXd::Zero(L);
  out.grads.d_features = Eigen::VectorXd::Zero(d);
  out.grads.d_kernel_raw =
      Eigen::VectorXd::Zero(params.kind == ClassifierKind::Kernelized
                                ? params.series.trainable_count()
                                : 0);

  ScalarLoss head;
  if (params.kind == ClassifierKind::LinearSoftmax) {
    Eigen::VectorXd scores = params.weights * f;
    if (params.use_bias) scores += params.bias;
    out.scores = scores;
    const Eigen::VectorXd scaled = scores / loss_temperature;
    head = target.distribution
               ? xent_with_distribution(scaled, *target.distribution)
               : softmax_xent(scaled, target.label);
    const Eigen::VectorXd d_scores = head.gradient / loss_temperature;
    out.loss = head.loss;
    out.grads.d_weights = d_scores * f.transpose();
    if (params.use_bias) out.grads.d_bias = d_scores;
    out.grads.d_features = params.weights.transpose() * d_scores;
    return out;
  }

  // Kernelized path: scores_j = k(<w_hat_j, f_hat>).
  const Eigen::VectorXd fhat = normalize(f);
  Eigen::VectorXd scores(L), ts(L);
  std::vector<Eigen::VectorXd> whats(L);
  for (int j = 0; j < L; ++j) {
    whats[j] = normalize(params.weights.row(j).transpose());
    const double t = std::clamp(whats[j].dot(fhat), -1.0, 1.0);
    ts[j] = t;
    scores[j] = kernel_eval(params.series, t);
  }
  out.scores = scores;
  const Eigen::VectorXd scaled = scores / loss_temperature;
  head = target.distribution
             ? xent_with_distribution(scaled, *target.distribution)
             : softmax_xent(scaled, target.label);
  out.loss = head.loss;
  const Eigen::VectorXd d_scores = head.gradient / loss_temperature;

  Eigen::VectorXd d_fhat = Eigen::VectorXd::Zero(d);
  for (int j = 0; j < L; ++j) {
    const double dt = d_scores[j] * kernel_derivative(params.series, ts[j]);
    out.grads.d_kernel_raw +=
        d_scores[j] * kernel_trainable_gradient(params.series, ts[j]);
    d_fhat += dt * whats[j];
    const Eigen::VectorXd d_what = dt * fhat;
    out.grads.d_weights.row(j) =
        normalize_backward(params.weights.row(j).transpose(), d_what).transpose();
  }
  out.grads.d_features = normalize_backward(f, d_fhat);
  return out;
}

}  // namespace kcl
