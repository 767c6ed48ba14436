#ifndef KCL_SYNTHDATA_HPP
#define KCL_SYNTHDATA_HPP

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "dataset.hpp"

namespace kcl {

// Two-class blue/orange mixture on S^2: per class, 10 cluster centers drawn
// from N(mean_c, center_cov I3); observations pick a center uniformly, add
// N(0, sample_cov I3) noise, and are projected onto the sphere.
struct MixtureSpec {
  Eigen::MatrixXd centers_blue;    // 10 x 3
  Eigen::MatrixXd centers_orange;  // 10 x 3
  double center_cov = 0.5;
  double sample_cov = 0.02;
  int clusters_per_class = 10;
  int samples_per_class = 5000;

  const Eigen::MatrixXd& centers(int cls) const {
    return cls == 0 ? centers_blue : centers_orange;
  }
};

MixtureSpec generate_centers(std::uint64_t seed);

// Balanced dataset: class-0 block then class-1 block, unit-norm rows.
Dataset generate_dataset(const MixtureSpec& spec, int n_per_class,
                         std::uint64_t seed);

// Posterior probability of the blue class at unit vector u, under equal
// class priors. The class density on the sphere integrates the 3-D mixture
// density along the ray r*u with the r^2 Jacobian,
//
//   p_c(u) ∝ sum_i (1/10) ∫_0^∞ N(r u; mu_i, sample_cov I3) r^2 dr,
//
// evaluated with fixed 512-node Gauss-Legendre quadrature over (0, r_max].
// Throws QuadratureFailure when the truncated tail mass cannot be bounded
// below 1e-12 of the total.
double bayes_posterior(const MixtureSpec& spec, const Eigen::Vector3d& u);

// Same, with an explicit truncation radius (r_max <= 0 selects the default
// 1 + 10 sqrt(sample_cov) + max center norm).
double bayes_posterior(const MixtureSpec& spec, const Eigen::Vector3d& u,
                       double r_max);

// Accuracy of thresholding bayes_posterior at 1/2 on the dataset.
double bayes_accuracy(const MixtureSpec& spec, const Dataset& ds);

// Gauss-Legendre nodes/weights on [-1, 1] (Newton iteration on the Legendre
// recurrence), exposed for tests.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace kcl

#endif
