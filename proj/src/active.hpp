#ifndef KCL_ACTIVE_HPP
#define KCL_ACTIVE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace kcl {

// Pool of candidates for batch subset selection: seed-model embeddings and
// class prediction scores for every point, the already-labeled seed indices,
// and the number of additional points to pick.
struct PoolState {
  Eigen::MatrixXd embeddings;        // N x d
  Eigen::MatrixXd prediction_scores; // N x L
  std::vector<int> labeled_indices;
  int budget = 0;

  int pool_size() const { return static_cast<int>(embeddings.rows()); }
  void validate() const;
};

// Uniform sample without replacement from the unlabeled indices, in draw
// order. Deterministic given the seed.
std::vector<int> select_random(const PoolState& state, std::uint64_t seed);

// The `budget` unlabeled points with the smallest top-two score margins,
// in increasing margin order; ties break toward the lower index.
std::vector<int> select_margin(const PoolState& state);

// Greedy farthest-first in cosine distance (1 - cosine similarity of
// embeddings): repeatedly add the unlabeled point farthest from the nearest
// already-selected-or-labeled point. Returned in selection order; ties break
// toward the lower index.
std::vector<int> select_kcenter(const PoolState& state);

double cosine_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

// max over all points of the cosine distance to the nearest center.
double covering_radius(const Eigen::MatrixXd& embeddings,
                       const std::vector<int>& centers);

}  // namespace kcl

#endif
