#ifndef KCL_DATASET_HPP
#define KCL_DATASET_HPP

#include <string>
#include <vector>

#include <Eigen/Core>

namespace kcl {

// Rows of feature vector + integer label, plus optional per-row teacher
// logits when used as a distillation target set.
struct Dataset {
  Eigen::MatrixXd features;        // N x d
  std::vector<int> labels;         // N
  Eigen::MatrixXd teacher_logits;  // N x L when present, 0 x 0 otherwise

  int size() const { return static_cast<int>(features.rows()); }
  int dim() const { return static_cast<int>(features.cols()); }
  int num_classes() const;
  bool has_teacher() const { return teacher_logits.size() > 0; }
  void validate() const;
};

// CSV schema: one header line "x1,...,xd,label", then one row per example
// with %.17g-formatted coordinates. Deterministic row order.
void save_csv(const Dataset& ds, const std::string& path);
Dataset load_csv(const std::string& path);

}  // namespace kcl

#endif
