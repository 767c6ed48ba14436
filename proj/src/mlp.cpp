#include "mlp.hpp"

#include <cmath>

#include "error.hpp"
#include "rng.hpp"

namespace kcl {

HiddenActivation hidden_activation_from_string(const std::string& s) {
  if (s == "relu") return HiddenActivation::ReLU;
  if (s == "tanh") return HiddenActivation::Tanh;
  throw Error(ErrorCode::ConfigError, "unknown hidden activation '" + s + "'");
}

const char* hidden_activation_to_string(HiddenActivation a) {
  return a == HiddenActivation::ReLU ? "relu" : "tanh";
}

void MlpConfig::validate() const {
  if (layer_sizes.size() < 2)
    throw Error(ErrorCode::InvalidArgument, "need at least one layer");
  for (int s : layer_sizes)
    if (s < 1) throw Error(ErrorCode::InvalidArgument, "layer sizes must be >= 1");
}

MlpParams MlpParams::init(const MlpConfig& config, std::uint64_t seed) {
  config.validate();
  MlpParams p;
  Rng rng(seed);
  for (int l = 0; l < config.num_layers(); ++l) {
    const int fan_in = config.layer_sizes[l];
    const int fan_out = config.layer_sizes[l + 1];
    const double std = std::sqrt(2.0 / fan_in);
    p.weights.push_back(rng.gaussian_matrix(fan_out, fan_in) * std);
    p.biases.push_back(Eigen::VectorXd::Zero(fan_out));
  }
  return p;
}

namespace {

double act(HiddenActivation a, double z) {
  return a == HiddenActivation::ReLU ? std::max(0.0, z) : std::tanh(z);
}

// ReLU uses subgradient 0 at 0.
double act_grad(HiddenActivation a, double z) {
  if (a == HiddenActivation::ReLU) return z > 0.0 ? 1.0 : 0.0;
  const double t = std::tanh(z);
  return 1.0 - t * t;
}

}  // namespace

Eigen::VectorXd mlp_forward(const MlpConfig& config, const MlpParams& params,
                            const Eigen::VectorXd& x, MlpCache* cache) {
  config.validate();
  if (x.size() != config.input_dim())
    throw Error(ErrorCode::ShapeMismatch, "input dimension mismatch");
  if (static_cast<int>(params.weights.size()) != config.num_layers())
    throw Error(ErrorCode::ShapeMismatch, "parameter/config layer mismatch");

  if (cache) {
    cache->input = x;
    cache->pre_activations.clear();
    cache->post_activations.clear();
  }
  Eigen::VectorXd a = x;
  for (int l = 0; l < config.num_layers(); ++l) {
    Eigen::VectorXd z = params.weights[l] * a + params.biases[l];
    const bool last = l == config.num_layers() - 1;
    Eigen::VectorXd out;
    if (!last) {
      out = z.unaryExpr([&](double v) { return act(config.hidden_activation, v); });
    } else if (config.rectify_features) {
      out = z.cwiseMax(0.0);
    } else {
      out = z;
    }
    if (cache) {
      cache->pre_activations.push_back(z);
      cache->post_activations.push_back(out);
    }
    a = std::move(out);
  }
  return a;
}

MlpGradients mlp_backward(const MlpConfig& config, const MlpParams& params,
                          const MlpCache& cache,
                          const Eigen::VectorXd& d_features) {
  const int n = config.num_layers();
  if (static_cast<int>(cache.pre_activations.size()) != n)
    throw Error(ErrorCode::ShapeMismatch, "cache does not match config");
  if (d_features.size() != config.feature_dim())
    throw Error(ErrorCode::ShapeMismatch, "upstream gradient dimension mismatch");

  MlpGradients g;
  g.d_weights.resize(n);
  g.d_biases.resize(n);
  Eigen::VectorXd delta = d_features;
  for (int l = n - 1; l >= 0; --l) {
    const Eigen::VectorXd& z = cache.pre_activations[l];
    const bool last = l == n - 1;
    Eigen::VectorXd dz(z.size());
    if (!last) {
      for (int i = 0; i < z.size(); ++i)
        dz[i] = delta[i] * act_grad(config.hidden_activation, z[i]);
    } else if (config.rectify_features) {
      for (int i = 0; i < z.size(); ++i) dz[i] = z[i] > 0.0 ? delta[i] : 0.0;
    } else {
      dz = delta;
    }
    const Eigen::VectorXd& in =
        l == 0 ? cache.input : cache.post_activations[l - 1];
    g.d_weights[l] = dz * in.transpose();
    g.d_biases[l] = dz;
    delta = params.weights[l].transpose() * dz;
  }
  g.d_input = delta;
  return g;
}

}  // namespace kcl
