#include "trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "error.hpp"
#include "rng.hpp"

namespace kcl {

Eigen::VectorXd Model::features(const Eigen::VectorXd& x) const {
  if (!backbone_config) return x;
  return mlp_forward(*backbone_config, *backbone_params, x);
}

Eigen::VectorXd Model::model_logits(const Eigen::VectorXd& x) const {
  return logits(classifier, features(x));
}

int Model::model_predict(const Eigen::VectorXd& x) const {
  return argmax_lowest(model_logits(x));
}

double lr_at(const TrainConfig& config, long long step) {
  if (step < 0 || step > config.total_steps)
    throw Error(ErrorCode::InvalidArgument, "step out of range");
  if (step < config.warmup_steps)
    return config.base_lr * static_cast<double>(step + 1) / config.warmup_steps;
  const double denom =
      std::max<double>(1.0, static_cast<double>(config.total_steps - config.warmup_steps));
  const double progress = static_cast<double>(step - config.warmup_steps) / denom;
  return config.base_lr * 0.5 * (1.0 + std::cos(M_PI * progress));
}

void sgd_step(Eigen::Ref<Eigen::VectorXd> params, const Eigen::VectorXd& grads,
              Eigen::Ref<Eigen::VectorXd> velocity, double lr, double momentum,
              double weight_decay) {
  if (params.size() != grads.size() || params.size() != velocity.size())
    throw Error(ErrorCode::ShapeMismatch, "sgd_step size mismatch");
  velocity = momentum * velocity + grads + weight_decay * params;
  params -= lr * velocity;
}

namespace {

struct BatchGrads {
  Eigen::MatrixXd d_weights;
  Eigen::VectorXd d_bias;
  Eigen::VectorXd d_kernel;
  std::vector<Eigen::MatrixXd> d_bb_weights;
  std::vector<Eigen::VectorXd> d_bb_biases;

  void reset(const Model& m) {
    d_weights = Eigen::MatrixXd::Zero(m.classifier.classes(), m.classifier.dim());
    d_bias = Eigen::VectorXd::Zero(m.classifier.classes());
    d_kernel = Eigen::VectorXd::Zero(
        m.classifier.kind == ClassifierKind::Kernelized
            ? m.classifier.series.trainable_count()
            : 0);
    d_bb_weights.clear();
    d_bb_biases.clear();
    if (m.backbone_params) {
      for (const auto& w : m.backbone_params->weights)
        d_bb_weights.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
      for (const auto& b : m.backbone_params->biases)
        d_bb_biases.push_back(Eigen::VectorXd::Zero(b.size()));
    }
  }

  void scale(double s) {
    d_weights *= s;
    d_bias *= s;
    d_kernel *= s;
    for (auto& w : d_bb_weights) w *= s;
    for (auto& b : d_bb_biases) b *= s;
  }

  bool all_finite() const {
    if (!d_weights.allFinite() || !d_bias.allFinite() || !d_kernel.allFinite())
      return false;
    for (const auto& w : d_bb_weights)
      if (!w.allFinite()) return false;
    for (const auto& b : d_bb_biases)
      if (!b.allFinite()) return false;
    return true;
  }
};

Eigen::VectorXd snapshot_alpha(const Model& model) {
  if (model.classifier.kind != ClassifierKind::Kernelized)
    return Eigen::VectorXd();
  const KernelSeries& s = model.classifier.series;
  if (s.mode == KernelMode::Learned) return activate_coefficients(s);
  Eigen::VectorXd v(1);
  v[0] = std::max(0.0, s.scale_raw);
  return v;
}

double plain_loss_temperature(const Model& model) {
  return model.classifier.kind == ClassifierKind::Kernelized
             ? model.classifier.series.act_temperature
             : 1.0;
}

Target target_for(const Dataset& ds, int row, const Objective& objective) {
  if (!objective.distill) return Target::hard(ds.labels[row]);
  TeacherTargets teacher{ds.teacher_logits.row(row).transpose(),
                         objective.temperature};
  return Target::soft(soften(teacher));
}

void check_model_finite(const Model& model) {
  const ClassifierParams& c = model.classifier;
  bool ok = c.weights.allFinite() && c.bias.allFinite();
  if (c.kind == ClassifierKind::Kernelized)
    ok = ok && c.series.trainable_get().allFinite();
  if (model.backbone_params) {
    for (const auto& w : model.backbone_params->weights) ok = ok && w.allFinite();
    for (const auto& b : model.backbone_params->biases) ok = ok && b.allFinite();
  }
  if (!ok)
    throw Error(ErrorCode::NonFiniteLoss, "parameters diverged to non-finite values");
}

}  // namespace

std::vector<MetricsRecord> train(Model& model, const Dataset& train_set,
                                 const Dataset* eval_set,
                                 const TrainConfig& config,
                                 const Objective& objective) {
  train_set.validate();
  const int n = train_set.size();
  if (n == 0) throw Error(ErrorCode::EmptyDataset, "empty training set");
  if (config.batch_size < 1)
    throw Error(ErrorCode::InvalidArgument, "batch_size must be positive");
  if (config.momentum < 0.0 || config.momentum >= 1.0)
    throw Error(ErrorCode::InvalidArgument, "momentum must be in [0,1)");
  const int L = model.classifier.classes();
  for (int l : train_set.labels)
    if (l >= L) throw Error(ErrorCode::InvalidTarget, "label out of range");
  if (objective.distill && !train_set.has_teacher())
    throw Error(ErrorCode::InvalidTarget, "distillation needs teacher logits");

  TrainConfig cfg = config;
  const long long steps_per_epoch = (n + cfg.batch_size - 1) / cfg.batch_size;
  if (cfg.total_steps == 0) {
    cfg.total_steps = static_cast<long long>(cfg.epochs) * steps_per_epoch;
    cfg.warmup_steps =
        static_cast<int>(std::llround(cfg.warmup_fraction * cfg.total_steps));
  }
  if (cfg.warmup_steps > cfg.total_steps)
    throw Error(ErrorCode::InvalidArgument, "warmup_steps > total_steps");

  const bool kernelized = model.classifier.kind == ClassifierKind::Kernelized;
  const double loss_temp =
      objective.distill ? objective.temperature : plain_loss_temperature(model);
  // No L2 on the kernel coefficients unless they are ReLU-activated (the
  // bounded activations need none). Fixed-mode scales are ReLU-activated.
  const bool decay_kernel =
      kernelized && (model.classifier.series.mode != KernelMode::Learned ||
                     model.classifier.series.activation == CoeffActivation::ReLU);

  // Momentum state, one buffer per parameter block.
  Eigen::VectorXd vel_weights = Eigen::VectorXd::Zero(model.classifier.weights.size());
  Eigen::VectorXd vel_bias = Eigen::VectorXd::Zero(model.classifier.bias.size());
  Eigen::VectorXd vel_kernel = Eigen::VectorXd::Zero(
      kernelized ? model.classifier.series.trainable_count() : 0);
  std::vector<Eigen::VectorXd> vel_bb_w, vel_bb_b;
  if (model.backbone_params) {
    for (const auto& w : model.backbone_params->weights)
      vel_bb_w.push_back(Eigen::VectorXd::Zero(w.size()));
    for (const auto& b : model.backbone_params->biases)
      vel_bb_b.push_back(Eigen::VectorXd::Zero(b.size()));
  }

  Rng shuffle_rng(cfg.seed);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);

  std::vector<MetricsRecord> history;
  BatchGrads grads;
  long long step = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    double loss_sum = 0.0;
    long long correct = 0;
    for (long long b = 0; b < steps_per_epoch; ++b) {
      const int begin = static_cast<int>(b * cfg.batch_size);
      const int end = std::min(n, begin + cfg.batch_size);
      const int bs = end - begin;
      grads.reset(model);
      double batch_loss = 0.0;
      for (int i = begin; i < end; ++i) {
        const int row = order[i];
        const Eigen::VectorXd x = train_set.features.row(row).transpose();
        MlpCache cache;
        ForwardBackward fb;
        try {
          const Eigen::VectorXd f =
              model.backbone_config
                  ? mlp_forward(*model.backbone_config, *model.backbone_params, x, &cache)
                  : x;
          fb = forward_backward(model.classifier, f,
                                target_for(train_set, row, objective), loss_temp);
        } catch (const Error& e) {
          // Inputs were validated up front, so a mid-training InvalidArgument
          // means the forward pass hit non-finite values: report divergence.
          if (e.code() == ErrorCode::InvalidArgument)
            throw Error(ErrorCode::NonFiniteLoss,
                        "diverged at epoch " + std::to_string(epoch) + " step " +
                            std::to_string(step) + " (" + e.what() + ")");
          throw;
        }
        batch_loss += fb.loss;
        if (argmax_lowest(fb.scores) == train_set.labels[row]) ++correct;
        grads.d_weights += fb.grads.d_weights;
        if (model.classifier.use_bias) grads.d_bias += fb.grads.d_bias;
        if (kernelized) grads.d_kernel += fb.grads.d_kernel_raw;
        if (model.backbone_config) {
          const MlpGradients bb = mlp_backward(*model.backbone_config,
                                               *model.backbone_params, cache,
                                               fb.grads.d_features);
          for (std::size_t l = 0; l < bb.d_weights.size(); ++l) {
            grads.d_bb_weights[l] += bb.d_weights[l];
            grads.d_bb_biases[l] += bb.d_biases[l];
          }
        }
      }
      batch_loss /= bs;
      grads.scale(1.0 / bs);
      if (!std::isfinite(batch_loss) || !grads.all_finite())
        throw Error(ErrorCode::NonFiniteLoss,
                    "non-finite loss at epoch " + std::to_string(epoch) +
                        " step " + std::to_string(step));
      loss_sum += batch_loss;

      const double lr = lr_at(cfg, step);
      ++step;
      {
        Eigen::Map<Eigen::VectorXd> p(model.classifier.weights.data(),
                                      model.classifier.weights.size());
        Eigen::Map<const Eigen::VectorXd> g(grads.d_weights.data(),
                                            grads.d_weights.size());
        sgd_step(p, g, vel_weights, lr, cfg.momentum, cfg.weight_decay);
      }
      if (model.classifier.use_bias)
        sgd_step(model.classifier.bias, grads.d_bias, vel_bias, lr, cfg.momentum,
                 cfg.weight_decay);
      if (kernelized) {
        Eigen::VectorXd kp = model.classifier.series.trainable_get();
        sgd_step(kp, grads.d_kernel, vel_kernel, lr, cfg.momentum,
                 decay_kernel ? cfg.weight_decay : 0.0);
        model.classifier.series.trainable_set(kp);
      }
      if (model.backbone_params) {
        for (std::size_t l = 0; l < model.backbone_params->weights.size(); ++l) {
          Eigen::Map<Eigen::VectorXd> p(model.backbone_params->weights[l].data(),
                                        model.backbone_params->weights[l].size());
          Eigen::Map<const Eigen::VectorXd> g(grads.d_bb_weights[l].data(),
                                              grads.d_bb_weights[l].size());
          sgd_step(p, g, vel_bb_w[l], lr, cfg.momentum, cfg.weight_decay);
          sgd_step(model.backbone_params->biases[l], grads.d_bb_biases[l],
                   vel_bb_b[l], lr, cfg.momentum, cfg.weight_decay);
        }
      }
    }
    check_model_finite(model);

    MetricsRecord rec;
    rec.epoch = epoch + 1;
    rec.train_loss = loss_sum / steps_per_epoch;
    rec.train_accuracy = static_cast<double>(correct) / n;
    if (eval_set) rec.test_accuracy = evaluate(model, *eval_set);
    rec.learned_alpha = snapshot_alpha(model);
    history.push_back(std::move(rec));
  }
  return history;
}

double evaluate(const Model& model, const Dataset& ds) {
  ds.validate();
  if (ds.size() == 0) throw Error(ErrorCode::EmptyDataset, "empty dataset");
  long long correct = 0;
  for (int i = 0; i < ds.size(); ++i) {
    if (model.model_predict(ds.features.row(i).transpose()) == ds.labels[i])
      ++correct;
  }
  return static_cast<double>(correct) / ds.size();
}

double mean_loss(const Model& model, const Dataset& ds, const Objective& objective) {
  ds.validate();
  if (ds.size() == 0) throw Error(ErrorCode::EmptyDataset, "empty dataset");
  const double loss_temp =
      objective.distill ? objective.temperature : plain_loss_temperature(model);
  double sum = 0.0;
  for (int i = 0; i < ds.size(); ++i) {
    const Eigen::VectorXd f = model.features(ds.features.row(i).transpose());
    sum += forward_backward(model.classifier, f, target_for(ds, i, objective),
                            loss_temp)
               .loss;
  }
  return sum / ds.size();
}

double select_base_lr(const Model& model_template, const Dataset& train_set,
                      const TrainConfig& config, const std::vector<double>& grid,
                      const Objective& objective) {
  if (grid.empty())
    throw Error(ErrorCode::InvalidArgument, "empty learning-rate grid");
  if (grid.size() == 1) return grid[0];
  train_set.validate();
  const int n = train_set.size();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng split_rng(config.seed + 1000003);
  split_rng.shuffle(order);
  const int n_fit = std::max(1, (n * 4) / 5);

  auto subset = [&](int begin, int end) {
    Dataset out;
    out.features.resize(end - begin, train_set.dim());
    out.labels.resize(end - begin);
    if (train_set.has_teacher())
      out.teacher_logits.resize(end - begin, train_set.teacher_logits.cols());
    for (int i = begin; i < end; ++i) {
      out.features.row(i - begin) = train_set.features.row(order[i]);
      out.labels[i - begin] = train_set.labels[order[i]];
      if (train_set.has_teacher())
        out.teacher_logits.row(i - begin) = train_set.teacher_logits.row(order[i]);
    }
    return out;
  };
  const Dataset fit = subset(0, n_fit);
  const Dataset held = subset(n_fit, n);

  double best_lr = grid[0];
  double best_acc = -1.0;
  for (double lr : grid) {
    Model candidate = model_template;
    TrainConfig cfg = config;
    cfg.base_lr = lr;
    cfg.total_steps = 0;  // re-derive for the smaller split
    double acc = 0.0;
    try {
      train(candidate, fit, nullptr, cfg, objective);
      acc = evaluate(candidate, held);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NonFiniteLoss) throw;
      acc = -1.0;  // diverged candidates lose
    }
    if (acc > best_acc) {
      best_acc = acc;
      best_lr = lr;
    }
  }
  return best_lr;
}

}  // namespace kcl
