#include <doctest.h>

#include <cmath>

#include "error.hpp"
#include "rng.hpp"
#include "synthdata.hpp"
#include "trainer.hpp"

using namespace kcl;

namespace {

// Linearly separable toy set with margin, plus a perceptron run as the
// independent separability oracle.
Dataset separable_toy(Rng& rng, int n, int d) {
  const Eigen::VectorXd w = rng.gaussian_vector(d).normalized();
  const double b = 0.2;
  Dataset ds;
  ds.features.resize(n, d);
  ds.labels.resize(n);
  int row = 0;
  while (row < n) {
    const Eigen::VectorXd x = rng.gaussian_vector(d);
    const double score = w.dot(x) + b;
    if (std::abs(score) < 0.3) continue;  // enforce a margin
    ds.features.row(row) = x.transpose();
    ds.labels[row] = score > 0 ? 1 : 0;
    ++row;
  }
  return ds;
}

bool perceptron_separable(const Dataset& ds, int max_epochs = 200) {
  const int d = ds.dim();
  Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
  double b = 0.0;
  for (int epoch = 0; epoch < max_epochs; ++epoch) {
    int mistakes = 0;
    for (int i = 0; i < ds.size(); ++i) {
      const double y = ds.labels[i] == 1 ? 1.0 : -1.0;
      const Eigen::VectorXd x = ds.features.row(i).transpose();
      if (y * (w.dot(x) + b) <= 0.0) {
        w += y * x;
        b += y;
        ++mistakes;
      }
    }
    if (mistakes == 0) return true;
  }
  return false;
}

Model small_kernel_model(std::uint64_t seed,
                         CoeffActivation act = CoeffActivation::ReLU) {
  Model m;
  m.classifier =
      ClassifierParams::kernelized(2, 3, KernelSeries::learned(10, act), seed);
  return m;
}

bool metrics_equal(const std::vector<MetricsRecord>& a,
                   const std::vector<MetricsRecord>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].epoch != b[i].epoch) return false;
    if (a[i].train_loss != b[i].train_loss) return false;
    if (a[i].train_accuracy != b[i].train_accuracy) return false;
    if (a[i].test_accuracy != b[i].test_accuracy) return false;
    if (a[i].learned_alpha.size() != b[i].learned_alpha.size()) return false;
    for (int j = 0; j < a[i].learned_alpha.size(); ++j)
      if (a[i].learned_alpha[j] != b[i].learned_alpha[j]) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("lr_at: warmup terminus, final step, decay midpoint") {
  TrainConfig cfg;
  cfg.base_lr = 0.4;
  cfg.warmup_steps = 10;
  cfg.total_steps = 110;
  CHECK(lr_at(cfg, 0) == doctest::Approx(0.04));
  CHECK(lr_at(cfg, 9) == doctest::Approx(0.4));   // end of warmup ramp
  CHECK(lr_at(cfg, 10) == doctest::Approx(0.4));  // cos(0)
  CHECK(lr_at(cfg, 60) == doctest::Approx(0.2).epsilon(1e-12));  // cos(pi/2)
  CHECK(lr_at(cfg, 110) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(lr_at(cfg, -1), Error);
  CHECK_THROWS_AS(lr_at(cfg, 111), Error);
}

TEST_CASE("sgd_step: plain descent, no-op, momentum recurrence") {
  Eigen::VectorXd p(2), g(2), v(2);
  p << 1.0, -2.0;
  g << 0.5, 0.25;
  v.setZero();
  sgd_step(p, g, v, 0.1, 0.0, 0.0);
  CHECK(p[0] == doctest::Approx(1.0 - 0.05));
  CHECK(p[1] == doctest::Approx(-2.0 - 0.025));

  Eigen::VectorXd z = Eigen::VectorXd::Zero(2);
  Eigen::VectorXd p2 = p;
  sgd_step(p2, z, z, 0.5, 0.9, 0.0);
  CHECK((p2 - p).norm() == 0.0);

  // Two steps on f(x) = c x^2 / 2 against the hand recurrence.
  const double c = 3.0, lr = 0.05, mu = 0.9;
  double x = 2.0;
  Eigen::VectorXd xp(1), xv(1);
  xp[0] = x;
  xv[0] = 0.0;
  Eigen::VectorXd g1(1);
  g1[0] = c * xp[0];
  sgd_step(xp, g1, xv, lr, mu, 0.0);
  double v_hand = c * x;
  double x_hand = x - lr * v_hand;
  CHECK(xp[0] == doctest::Approx(x_hand).epsilon(1e-15));
  Eigen::VectorXd g2(1);
  g2[0] = c * xp[0];
  sgd_step(xp, g2, xv, lr, mu, 0.0);
  v_hand = mu * v_hand + c * x_hand;
  x_hand = x_hand - lr * v_hand;
  CHECK(xp[0] == doctest::Approx(x_hand).epsilon(1e-15));

  Eigen::VectorXd small(1);
  CHECK_THROWS_AS(sgd_step(small, g, v, 0.1, 0.9, 0.0), Error);
}

TEST_CASE("train: zero epochs is a no-op") {
  Rng rng(1);
  Dataset ds = separable_toy(rng, 64, 3);
  Model m = small_kernel_model(5);
  const Eigen::MatrixXd w_before = m.classifier.weights;
  TrainConfig cfg;
  cfg.epochs = 0;
  const auto history = train(m, ds, nullptr, cfg);
  CHECK(history.empty());
  CHECK((m.classifier.weights - w_before).norm() == 0.0);
}

TEST_CASE("train: linear baseline fits a separable toy set") {
  Rng rng(2);
  Dataset ds = separable_toy(rng, 256, 3);
  REQUIRE(perceptron_separable(ds));  // oracle first
  Model m;
  m.classifier = ClassifierParams::linear_softmax(2, 3, 11);
  TrainConfig cfg;
  cfg.epochs = 50;
  cfg.batch_size = 32;
  cfg.base_lr = 0.5;
  cfg.seed = 3;
  const auto history = train(m, ds, nullptr, cfg);
  CHECK(history.back().train_accuracy == doctest::Approx(1.0));
  CHECK(evaluate(m, ds) == doctest::Approx(1.0));
}

TEST_CASE("train: identical seeds give bit-identical metrics and parameters") {
  Rng rng(4);
  Dataset ds = separable_toy(rng, 100, 3);
  TrainConfig cfg;
  cfg.epochs = 8;
  cfg.batch_size = 16;
  cfg.base_lr = 0.1;
  cfg.seed = 77;

  Model a = small_kernel_model(21);
  Model b = small_kernel_model(21);
  const auto ha = train(a, ds, &ds, cfg);
  const auto hb = train(b, ds, &ds, cfg);
  CHECK(metrics_equal(ha, hb));
  CHECK((a.classifier.weights - b.classifier.weights).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.classifier.series.alpha_raw - b.classifier.series.alpha_raw)
            .cwiseAbs()
            .maxCoeff() == 0.0);
}

TEST_CASE("train: loss on the dataset decreases after the first step") {
  const MixtureSpec spec = generate_centers(300);
  const Dataset ds = generate_dataset(spec, 128, 301);
  Model m = small_kernel_model(9);
  const double before = mean_loss(m, ds);
  TrainConfig cfg;
  cfg.epochs = 1;
  cfg.batch_size = ds.size();  // one full-batch step
  cfg.base_lr = 1e-4;
  cfg.warmup_fraction = 0.0;
  train(m, ds, nullptr, cfg);
  CHECK(mean_loss(m, ds) < before);
}

TEST_CASE("train: bounded activations never signal NonFiniteLoss, unconstrained may") {
  Rng rng(6);
  Dataset ds = separable_toy(rng, 96, 3);
  TrainConfig cfg;
  cfg.epochs = 6;
  cfg.batch_size = 32;
  cfg.base_lr = 0.3;

  for (CoeffActivation act : {CoeffActivation::ReLU, CoeffActivation::Sigmoid,
                              CoeffActivation::Softmax}) {
    Model m = small_kernel_model(33, act);
    CHECK_NOTHROW(train(m, ds, nullptr, cfg));
  }

  // With no activation the coefficients are unconstrained; a hostile
  // learning rate drives them non-finite and training must say so.
  Model diverging = small_kernel_model(33, CoeffActivation::None);
  TrainConfig hostile = cfg;
  hostile.base_lr = 1e308;
  hostile.warmup_fraction = 0.0;
  bool threw = false;
  try {
    train(diverging, ds, nullptr, hostile);
  } catch (const Error& e) {
    threw = true;
    CHECK(e.code() == ErrorCode::NonFiniteLoss);
  }
  CHECK(threw);
}

TEST_CASE("evaluate: hand cases and errors") {
  Model m;
  m.classifier = ClassifierParams::linear_softmax(2, 2, 1);
  m.classifier.weights << 1, 0, -1, 0;
  m.classifier.bias.setZero();
  Dataset one;
  one.features.resize(1, 2);
  one.features << 1.0, 0.0;
  one.labels = {0};
  CHECK(evaluate(m, one) == doctest::Approx(1.0));

  Rng rng(8);
  Dataset ds = separable_toy(rng, 50, 2);
  const double acc = evaluate(m, ds);
  Dataset flipped = ds;
  for (auto& l : flipped.labels) l = 1 - l;
  CHECK(evaluate(m, flipped) == doctest::Approx(1.0 - acc));

  Dataset empty;
  empty.features.resize(0, 2);
  CHECK_THROWS_AS(evaluate(m, empty), Error);
}

TEST_CASE("select_base_lr is deterministic and prefers a sane rate") {
  Rng rng(10);
  Dataset ds = separable_toy(rng, 200, 3);
  Model proto;
  proto.classifier = ClassifierParams::linear_softmax(2, 3, 5);
  TrainConfig cfg;
  cfg.epochs = 12;
  cfg.batch_size = 32;
  cfg.seed = 9;
  const std::vector<double> grid{0.3, 0.1, 0.03, 0.01};
  const double a = select_base_lr(proto, ds, cfg, grid);
  const double b = select_base_lr(proto, ds, cfg, grid);
  CHECK(a == b);
  CHECK(std::find(grid.begin(), grid.end(), a) != grid.end());
}
