#ifndef KCL_MLP_HPP
#define KCL_MLP_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace kcl {

enum class HiddenActivation { ReLU, Tanh };

HiddenActivation hidden_activation_from_string(const std::string& s);
const char* hidden_activation_to_string(HiddenActivation a);

// Fully-connected representation learner. layer_sizes runs from the input
// dimension through the feature dimension; the hidden activation is applied
// after every affine layer except the last, and the final feature vector is
// rectified (ReLU) iff rectify_features is set.
struct MlpConfig {
  std::vector<int> layer_sizes;
  HiddenActivation hidden_activation = HiddenActivation::Tanh;
  bool rectify_features = false;

  int input_dim() const { return layer_sizes.front(); }
  int feature_dim() const { return layer_sizes.back(); }
  int num_layers() const { return static_cast<int>(layer_sizes.size()) - 1; }
  void validate() const;
};

struct MlpParams {
  std::vector<Eigen::MatrixXd> weights;  // out x in per layer
  std::vector<Eigen::VectorXd> biases;

  // He initialization: N(0, 2/fan_in), biases zero.
  static MlpParams init(const MlpConfig& config, std::uint64_t seed);
};

struct MlpCache {
  Eigen::VectorXd input;
  std::vector<Eigen::VectorXd> pre_activations;   // z_i per layer
  std::vector<Eigen::VectorXd> post_activations;  // a_i per layer
};

struct MlpGradients {
  std::vector<Eigen::MatrixXd> d_weights;
  std::vector<Eigen::VectorXd> d_biases;
  Eigen::VectorXd d_input;
};

Eigen::VectorXd mlp_forward(const MlpConfig& config, const MlpParams& params,
                            const Eigen::VectorXd& x, MlpCache* cache = nullptr);

MlpGradients mlp_backward(const MlpConfig& config, const MlpParams& params,
                          const MlpCache& cache,
                          const Eigen::VectorXd& d_features);

}  // namespace kcl

#endif
