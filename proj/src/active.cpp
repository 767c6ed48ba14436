#include "active.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "error.hpp"
#include "rng.hpp"

namespace kcl {

void PoolState::validate() const {
  const int n = pool_size();
  if (prediction_scores.rows() != n)
    throw Error(ErrorCode::ShapeMismatch, "embeddings/scores row mismatch");
  for (int i : labeled_indices)
    if (i < 0 || i >= n)
      throw Error(ErrorCode::InvalidArgument, "labeled index out of range");
  const int unlabeled = n - static_cast<int>(labeled_indices.size());
  if (budget < 0 || budget > unlabeled)
    throw Error(ErrorCode::BudgetExceeded,
                "budget " + std::to_string(budget) + " exceeds unlabeled pool " +
                    std::to_string(unlabeled));
}

namespace {

std::vector<int> unlabeled_of(const PoolState& state) {
  std::vector<char> labeled(state.pool_size(), 0);
  for (int i : state.labeled_indices) labeled[i] = 1;
  std::vector<int> out;
  out.reserve(state.pool_size());
  for (int i = 0; i < state.pool_size(); ++i)
    if (!labeled[i]) out.push_back(i);
  return out;
}

}  // namespace

std::vector<int> select_random(const PoolState& state, std::uint64_t seed) {
  state.validate();
  std::vector<int> pool = unlabeled_of(state);
  Rng rng(seed);
  // Partial Fisher-Yates: the first `budget` slots are the sample.
  std::vector<int> out;
  out.reserve(state.budget);
  for (int k = 0; k < state.budget; ++k) {
    const std::size_t j = k + rng.below(pool.size() - k);
    std::swap(pool[k], pool[j]);
    out.push_back(pool[k]);
  }
  return out;
}

std::vector<int> select_margin(const PoolState& state) {
  state.validate();
  if (state.prediction_scores.cols() < 2)
    throw Error(ErrorCode::InvalidArgument, "margin needs at least two classes");
  std::vector<std::pair<double, int>> margins;
  for (int i : unlabeled_of(state)) {
    double top = -std::numeric_limits<double>::infinity();
    double second = top;
    for (int j = 0; j < state.prediction_scores.cols(); ++j) {
      const double s = state.prediction_scores(i, j);
      if (s > top) {
        second = top;
        top = s;
      } else if (s > second) {
        second = s;
      }
    }
    margins.emplace_back(top - second, i);
  }
  std::sort(margins.begin(), margins.end());  // (margin, index) lexicographic
  std::vector<int> out;
  out.reserve(state.budget);
  for (int k = 0; k < state.budget; ++k) out.push_back(margins[k].second);
  return out;
}

double cosine_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double na = a.norm(), nb = b.norm();
  if (na <= 1e-12 || nb <= 1e-12)
    throw Error(ErrorCode::DegenerateVector, "zero-norm embedding");
  return 1.0 - a.dot(b) / (na * nb);
}

std::vector<int> select_kcenter(const PoolState& state) {
  state.validate();
  if (state.labeled_indices.empty())
    throw Error(ErrorCode::EmptySeedSet, "k-center needs a labeled seed set");
  const int n = state.pool_size();
  std::vector<char> chosen(n, 0);
  for (int i : state.labeled_indices) chosen[i] = 1;

  // min cosine distance from each point to the chosen set, updated
  // incrementally as centers are added.
  std::vector<double> min_dist(n, std::numeric_limits<double>::infinity());
  for (int i = 0; i < n; ++i)
    for (int c : state.labeled_indices)
      min_dist[i] = std::min(min_dist[i], cosine_distance(state.embeddings.row(i).transpose(),
                                                          state.embeddings.row(c).transpose()));

  std::vector<int> out;
  out.reserve(state.budget);
  for (int k = 0; k < state.budget; ++k) {
    int best = -1;
    double best_dist = -1.0;
    for (int i = 0; i < n; ++i) {
      if (chosen[i]) continue;
      if (min_dist[i] > best_dist) {
        best_dist = min_dist[i];
        best = i;
      }
    }
    chosen[best] = 1;
    out.push_back(best);
    for (int i = 0; i < n; ++i) {
      if (chosen[i]) continue;
      min_dist[i] = std::min(min_dist[i], cosine_distance(state.embeddings.row(i).transpose(),
                                                          state.embeddings.row(best).transpose()));
    }
  }
  return out;
}

double covering_radius(const Eigen::MatrixXd& embeddings,
                       const std::vector<int>& centers) {
  if (centers.empty())
    throw Error(ErrorCode::EmptySeedSet, "covering radius of empty center set");
  double radius = 0.0;
  for (int i = 0; i < embeddings.rows(); ++i) {
    double d = std::numeric_limits<double>::infinity();
    for (int c : centers)
      d = std::min(d, cosine_distance(embeddings.row(i).transpose(), embeddings.row(c).transpose()));
    radius = std::max(radius, d);
  }
  return radius;
}

}  // namespace kcl
