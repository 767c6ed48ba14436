#include "losses.hpp"

#include <cmath>

#include "error.hpp"

namespace kcl {

ScalarLoss xent_with_distribution(const Eigen::VectorXd& logits,
                                  const Eigen::VectorXd& target) {
  if (logits.size() != target.size())
    throw Error(ErrorCode::InvalidTarget, "target length mismatch");
  if (logits.size() == 0)
    throw Error(ErrorCode::InvalidTarget, "empty logits");
  if (!logits.allFinite())
    throw Error(ErrorCode::InvalidArgument, "non-finite logits");
  if (std::abs(target.sum() - 1.0) > 1e-6)
    throw Error(ErrorCode::InvalidTarget, "target distribution must sum to 1");

  const double m = logits.maxCoeff();
  Eigen::VectorXd z = logits.array() - m;
  const double lse = std::log(z.array().exp().sum());
  Eigen::VectorXd logp = z.array() - lse;

  ScalarLoss out;
  out.loss = -target.dot(logp);
  out.gradient = logp.array().exp().matrix() - target;
  return out;
}

ScalarLoss softmax_xent(const Eigen::VectorXd& logits, int label) {
  if (label < 0 || label >= logits.size())
    throw Error(ErrorCode::InvalidTarget,
                "label " + std::to_string(label) + " out of range");
  Eigen::VectorXd onehot = Eigen::VectorXd::Zero(logits.size());
  onehot[label] = 1.0;
  return xent_with_distribution(logits, onehot);
}

Eigen::VectorXd soften(const TeacherTargets& teacher) {
  if (teacher.temperature <= 0.0)
    throw Error(ErrorCode::InvalidArgument, "temperature must be positive");
  if (!teacher.logits.allFinite())
    throw Error(ErrorCode::InvalidArgument, "non-finite teacher logits");
  Eigen::VectorXd z = teacher.logits / teacher.temperature;
  const double m = z.maxCoeff();
  Eigen::VectorXd e = (z.array() - m).exp();
  return e / e.sum();
}

ScalarLoss distill_xent(const Eigen::VectorXd& student_logits,
                        const TeacherTargets& teacher) {
  if (student_logits.size() != teacher.logits.size())
    throw Error(ErrorCode::InvalidTarget, "student/teacher length mismatch");
  const Eigen::VectorXd soft = soften(teacher);
  ScalarLoss inner =
      xent_with_distribution(student_logits / teacher.temperature, soft);
  inner.gradient /= teacher.temperature;
  return inner;
}

ScalarLoss l2_penalty(const Eigen::VectorXd& v, double decay) {
  if (decay < 0.0)
    throw Error(ErrorCode::InvalidArgument, "decay must be non-negative");
  ScalarLoss out;
  out.loss = 0.5 * decay * v.squaredNorm();
  out.gradient = decay * v;
  return out;
}

}  // namespace kcl
