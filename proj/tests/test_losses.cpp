#include <doctest.h>

#include <cmath>

#include "error.hpp"
#include "finitediff.hpp"
#include "losses.hpp"
#include "rng.hpp"

using namespace kcl;

TEST_CASE("softmax_xent: values and stabilization") {
  Eigen::Vector2d even(0.0, 0.0);
  const ScalarLoss l = softmax_xent(even, 1);
  CHECK(l.loss == doctest::Approx(std::log(2.0)).epsilon(1e-12));

  Eigen::Vector2d huge(1000.0, 0.0);
  const ScalarLoss stable = softmax_xent(huge, 0);
  CHECK(std::isfinite(stable.loss));
  CHECK(stable.loss == doctest::Approx(0.0));
  CHECK(stable.gradient.allFinite());

  CHECK_THROWS_AS(softmax_xent(even, 2), Error);
  CHECK_THROWS_AS(softmax_xent(even, -1), Error);
}

TEST_CASE("softmax_xent gradient matches finite differences") {
  Rng rng(3);
  for (int rep = 0; rep < 20; ++rep) {
    const Eigen::VectorXd logits = rng.gaussian_vector(5);
    const int label = static_cast<int>(rng.below(5));
    const ScalarLoss l = softmax_xent(logits, label);
    const Eigen::VectorXd fd_grad = fd::gradient(
        [&](const Eigen::VectorXd& z) { return softmax_xent(z, label).loss; },
        logits);
    CHECK(fd::within(l.gradient, fd_grad, 1e-6, 1e-9));
  }
}

TEST_CASE("soften: uniform, limits, direct value") {
  TeacherTargets equal{Eigen::VectorXd::Zero(4), 2.0};
  equal.logits.setConstant(3.0);
  const Eigen::VectorXd u = soften(equal);
  for (int i = 0; i < 4; ++i) CHECK(u[i] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(u.sum() == doctest::Approx(1.0).epsilon(1e-12));

  TeacherTargets distinct{Eigen::Vector3d(3.0, 1.0, -2.0), 1e6};
  const Eigen::VectorXd near_uniform = soften(distinct);
  CHECK(near_uniform.maxCoeff() - near_uniform.minCoeff() < 1e-3);

  TeacherTargets two{Eigen::Vector2d(2.0, 0.0), 1.0};
  const Eigen::VectorXd p = soften(two);
  CHECK(p[0] == doctest::Approx(0.8807970779778823).epsilon(1e-12));
  CHECK(p[1] == doctest::Approx(0.1192029220221177).epsilon(1e-12));
}

TEST_CASE("distill_xent: uniform, self-match entropy, finite differences") {
  TeacherTargets teacher{Eigen::VectorXd::Zero(10), 4.0};
  const ScalarLoss uniform = distill_xent(Eigen::VectorXd::Zero(10), teacher);
  CHECK(uniform.loss == doctest::Approx(std::log(10.0)).epsilon(1e-12));

  Rng rng(11);
  const Eigen::VectorXd h = rng.gaussian_vector(6);
  TeacherTargets t{h, 3.0};
  const Eigen::VectorXd soft = soften(t);
  double entropy = 0.0;
  for (int i = 0; i < 6; ++i) entropy -= soft[i] * std::log(soft[i]);
  CHECK(distill_xent(h, t).loss == doctest::Approx(entropy).epsilon(1e-12));

  for (int rep = 0; rep < 20; ++rep) {
    const Eigen::VectorXd student = rng.gaussian_vector(6);
    TeacherTargets teacher2{rng.gaussian_vector(6), 2.5};
    const ScalarLoss l = distill_xent(student, teacher2);
    const Eigen::VectorXd fd_grad = fd::gradient(
        [&](const Eigen::VectorXd& s) { return distill_xent(s, teacher2).loss; },
        student);
    CHECK(fd::within(l.gradient, fd_grad, 1e-6, 1e-9));
  }

  TeacherTargets short_teacher{Eigen::Vector2d(1.0, 0.0), 1.0};
  CHECK_THROWS_AS(distill_xent(Eigen::Vector3d(1, 2, 3), short_teacher), Error);
}

TEST_CASE("distill_xent with a one-hot teacher at T=1 equals the hard loss") {
  // exp(-2000) underflows to zero, so the softened teacher is exactly one-hot.
  Eigen::Vector3d h(0.0, -2000.0, -2000.0);
  TeacherTargets teacher{h, 1.0};
  Rng rng(5);
  for (int rep = 0; rep < 10; ++rep) {
    const Eigen::VectorXd s = rng.gaussian_vector(3);
    CHECK(std::abs(distill_xent(s, teacher).loss - softmax_xent(s, 0).loss) < 1e-12);
  }
}

TEST_CASE("l2_penalty") {
  const ScalarLoss zero = l2_penalty(Eigen::Vector3d(1, 2, 3), 0.0);
  CHECK(zero.loss == 0.0);
  CHECK(zero.gradient.isZero());

  Eigen::VectorXd one(1);
  one[0] = 2.0;
  const ScalarLoss l = l2_penalty(one, 1e-4);
  CHECK(l.loss == doctest::Approx(2e-4).epsilon(1e-12));
  CHECK(l.gradient[0] == doctest::Approx(2e-4).epsilon(1e-12));

  Rng rng(17);
  const Eigen::VectorXd v = rng.gaussian_vector(8);
  const ScalarLoss r = l2_penalty(v, 0.37);
  const Eigen::VectorXd fd_grad = fd::gradient(
      [&](const Eigen::VectorXd& x) { return l2_penalty(x, 0.37).loss; }, v, 1e-6);
  CHECK(fd::within(r.gradient, fd_grad, 1e-8, 1e-8));
}

TEST_CASE("loss heads are translation invariant in the logits") {
  Rng rng(23);
  for (int rep = 0; rep < 10; ++rep) {
    const Eigen::VectorXd logits = rng.gaussian_vector(5);
    const double shift = rng.uniform(-50.0, 50.0);
    const Eigen::VectorXd shifted = logits.array() + shift;

    const ScalarLoss a = softmax_xent(logits, 2);
    const ScalarLoss b = softmax_xent(shifted, 2);
    CHECK(std::abs(a.loss - b.loss) < 1e-10);
    CHECK(fd::within(a.gradient, b.gradient, 0.0, 1e-10));

    TeacherTargets teacher{rng.gaussian_vector(5), 2.0};
    const ScalarLoss c = distill_xent(logits, teacher);
    const ScalarLoss d = distill_xent(shifted, teacher);
    CHECK(std::abs(c.loss - d.loss) < 1e-10);
    CHECK(fd::within(c.gradient, d.gradient, 0.0, 1e-10));
  }
}
