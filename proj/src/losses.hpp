#ifndef KCL_LOSSES_HPP
#define KCL_LOSSES_HPP

#include <Eigen/Core>

namespace kcl {

// Teacher logits plus the softening temperature T.
struct TeacherTargets {
  Eigen::VectorXd logits;
  double temperature = 1.0;
};

struct ScalarLoss {
  double loss = 0.0;
  Eigen::VectorXd gradient;
};

// Cross-entropy against an arbitrary target distribution, computed with the
// max-subtraction stabilization. gradient = softmax(logits) - target.
ScalarLoss xent_with_distribution(const Eigen::VectorXd& logits,
                                  const Eigen::VectorXd& target);

// Softmax cross-entropy with a hard label.
ScalarLoss softmax_xent(const Eigen::VectorXd& logits, int label);

// Temperature softmax of the teacher logits; sums to 1.
Eigen::VectorXd soften(const TeacherTargets& teacher);

// Distillation cross-entropy: -sum_j soften(h)_j log softmax(s/T)_j.
// gradient is with respect to the raw student logits s.
ScalarLoss distill_xent(const Eigen::VectorXd& student_logits,
                        const TeacherTargets& teacher);

// decay/2 * |v|^2 and its gradient.
ScalarLoss l2_penalty(const Eigen::VectorXd& v, double decay);

}  // namespace kcl

#endif
