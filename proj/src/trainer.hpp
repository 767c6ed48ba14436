#ifndef KCL_TRAINER_HPP
#define KCL_TRAINER_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "classifier.hpp"
#include "dataset.hpp"
#include "mlp.hpp"

namespace kcl {

// Optional representation learner in front of the classification layer.
struct Model {
  std::optional<MlpConfig> backbone_config;
  std::optional<MlpParams> backbone_params;
  ClassifierParams classifier;

  int input_dim() const {
    return backbone_config ? backbone_config->input_dim() : classifier.dim();
  }
  Eigen::VectorXd features(const Eigen::VectorXd& x) const;
  Eigen::VectorXd model_logits(const Eigen::VectorXd& x) const;
  int model_predict(const Eigen::VectorXd& x) const;
};

struct TrainConfig {
  double base_lr = 0.1;
  int warmup_steps = 0;      // derived from warmup_fraction when total_steps is
  long long total_steps = 0; // derived from epochs * ceil(N/batch) when zero
  double momentum = 0.9;
  double weight_decay = 1e-4;
  int batch_size = 128;
  int epochs = 100;
  std::uint64_t seed = 1;
  double warmup_fraction = 0.05;  // used when warmup_steps is derived
};

struct MetricsRecord {
  int epoch = 0;
  double train_loss = 0.0;
  double train_accuracy = 0.0;
  double test_accuracy = -1.0;  // negative when no eval set was given
  Eigen::VectorXd learned_alpha;
};

// Hard labels by default; distillation targets soften the dataset's teacher
// logits at `temperature` and divide the student scores by the same value.
struct Objective {
  bool distill = false;
  double temperature = 20.0;
};

// Linear warmup to base_lr, then cosine decay to zero.
double lr_at(const TrainConfig& config, long long step);

// v <- momentum v + grad + weight_decay p; p <- p - lr v.
void sgd_step(Eigen::Ref<Eigen::VectorXd> params,
              const Eigen::VectorXd& grads, Eigen::Ref<Eigen::VectorXd> velocity,
              double lr, double momentum, double weight_decay);

std::vector<MetricsRecord> train(Model& model, const Dataset& train_set,
                                 const Dataset* eval_set,
                                 const TrainConfig& config,
                                 const Objective& objective = {});

double evaluate(const Model& model, const Dataset& ds);

// Mean loss of one pass over `ds` at the model's current parameters (no
// updates); used by sanity checks and learning-rate selection.
double mean_loss(const Model& model, const Dataset& ds,
                 const Objective& objective = {});

// Appendix-B style base learning rate selection: train each candidate on
// 80% of `train_set`, compare accuracy on the held-out 20%, ties toward the
// earlier grid entry. Returns the chosen base_lr.
double select_base_lr(const Model& model_template, const Dataset& train_set,
                      const TrainConfig& config, const std::vector<double>& grid,
                      const Objective& objective = {});

}  // namespace kcl

#endif
