#include "synthdata.hpp"

#include <cmath>

#include "error.hpp"
#include "rng.hpp"

namespace kcl {

MixtureSpec generate_centers(std::uint64_t seed) {
  MixtureSpec spec;
  Rng rng(seed);
  const double std = std::sqrt(spec.center_cov);
  const Eigen::Vector3d mean_blue(1.0, 0.0, 0.0);
  const Eigen::Vector3d mean_orange(0.0, 1.0, 0.0);
  spec.centers_blue.resize(spec.clusters_per_class, 3);
  spec.centers_orange.resize(spec.clusters_per_class, 3);
  for (int i = 0; i < spec.clusters_per_class; ++i)
    spec.centers_blue.row(i) = (mean_blue + std * rng.gaussian3()).transpose();
  for (int i = 0; i < spec.clusters_per_class; ++i)
    spec.centers_orange.row(i) = (mean_orange + std * rng.gaussian3()).transpose();
  return spec;
}

Dataset generate_dataset(const MixtureSpec& spec, int n_per_class,
                         std::uint64_t seed) {
  if (n_per_class < 1)
    throw Error(ErrorCode::InvalidArgument, "n_per_class must be >= 1");
  Rng rng(seed);
  const double std = std::sqrt(spec.sample_cov);
  Dataset ds;
  ds.features.resize(2 * n_per_class, 3);
  ds.labels.resize(2 * n_per_class);
  int row = 0;
  for (int cls = 0; cls < 2; ++cls) {
    const Eigen::MatrixXd& centers = spec.centers(cls);
    for (int i = 0; i < n_per_class; ++i, ++row) {
      Eigen::Vector3d x;
      double norm = 0.0;
      do {  // a zero-norm draw has measure zero; resample if it ever happens
        const int c = static_cast<int>(rng.below(spec.clusters_per_class));
        x = centers.row(c).transpose() + std * rng.gaussian3();
        norm = x.norm();
      } while (norm <= 1e-12);
      ds.features.row(row) = (x / norm).transpose();
      ds.labels[row] = cls;
    }
  }
  return ds;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Chebyshev estimate of the i-th root, then Newton.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
    weights[n - 1 - i] = weights[i];
  }
}

namespace {

constexpr int kQuadratureNodes = 512;

struct QuadTable {
  std::vector<double> nodes, weights;
  QuadTable() { gauss_legendre(kQuadratureNodes, nodes, weights); }
};

// Closed-form tail of the ray integral, used only to verify that the chosen
// truncation radius keeps the discarded mass negligible:
//   int_lo^inf r^2 exp(-(r-a)^2 / (2 s2)) dr.
double ray_tail(double a, double s2, double lo) {
  const double sig = std::sqrt(s2);
  const double s1 = (lo - a) / (sig * std::sqrt(2.0));
  const double A = 0.5 * std::sqrt(M_PI) * std::erfc(s1);
  const double B = 0.5 * std::exp(-s1 * s1);
  const double C = 0.25 * std::sqrt(M_PI) * std::erfc(s1) + 0.5 * s1 * std::exp(-s1 * s1);
  return sig * std::sqrt(2.0) * (a * a * A + 2.0 * std::sqrt(2.0) * a * sig * B + 2.0 * s2 * C);
}

double default_r_max(const MixtureSpec& spec) {
  double max_norm = 0.0;
  for (int i = 0; i < spec.clusters_per_class; ++i) {
    max_norm = std::max(max_norm, spec.centers_blue.row(i).norm());
    max_norm = std::max(max_norm, spec.centers_orange.row(i).norm());
  }
  return 1.0 + 10.0 * std::sqrt(spec.sample_cov) + max_norm;
}

}  // namespace

double bayes_posterior(const MixtureSpec& spec, const Eigen::Vector3d& u) {
  return bayes_posterior(spec, u, 0.0);
}

double bayes_posterior(const MixtureSpec& spec, const Eigen::Vector3d& u,
                       double r_max) {
  if (std::abs(u.norm() - 1.0) > 1e-9)
    throw Error(ErrorCode::InvalidArgument, "bayes_posterior needs a unit vector");
  static const QuadTable quad;
  if (r_max <= 0.0) r_max = default_r_max(spec);
  const double s2 = spec.sample_cov;

  // Per-center decomposition: |r u - mu|^2 = (r - a)^2 + d_perp^2 with
  // a = <u, mu>. The constant factors common to both classes cancel in the
  // posterior; the perpendicular terms are rescaled by their maximum so the
  // sums stay in range even for far-away query points.
  const int nc = spec.clusters_per_class;
  Eigen::VectorXd a(2 * nc), perp(2 * nc);
  for (int cls = 0; cls < 2; ++cls) {
    const Eigen::MatrixXd& centers = spec.centers(cls);
    for (int i = 0; i < nc; ++i) {
      const Eigen::Vector3d mu = centers.row(i).transpose();
      const double ai = u.dot(mu);
      a[cls * nc + i] = ai;
      perp[cls * nc + i] = mu.squaredNorm() - ai * ai;
    }
  }
  const double perp_min = perp.minCoeff();

  double density[2] = {0.0, 0.0};
  double tail[2] = {0.0, 0.0};
  for (int cls = 0; cls < 2; ++cls) {
    for (int i = 0; i < nc; ++i) {
      const double ai = a[cls * nc + i];
      const double scale = std::exp(-(perp[cls * nc + i] - perp_min) / (2.0 * s2));
      double q = 0.0;
      for (int k = 0; k < kQuadratureNodes; ++k) {
        const double r = 0.5 * r_max * (quad.nodes[k] + 1.0);
        const double w = 0.5 * r_max * quad.weights[k];
        const double dr = r - ai;
        q += w * r * r * std::exp(-dr * dr / (2.0 * s2));
      }
      density[cls] += scale * q;
      tail[cls] += scale * ray_tail(ai, s2, r_max);
    }
  }

  const double total = density[0] + density[1];
  if (!(total > 0.0))
    throw Error(ErrorCode::QuadratureFailure, "zero total density");
  if (tail[0] + tail[1] > 1e-12 * total)
    throw Error(ErrorCode::QuadratureFailure,
                "truncated tail mass above 1e-12 of total; increase r_max");
  return density[0] / total;
}

double bayes_accuracy(const MixtureSpec& spec, const Dataset& ds) {
  ds.validate();
  if (ds.size() == 0) throw Error(ErrorCode::EmptyDataset, "empty dataset");
  if (ds.dim() != 3)
    throw Error(ErrorCode::ShapeMismatch, "mixture data lives on S^2");
  long long correct = 0;
  for (int i = 0; i < ds.size(); ++i) {
    const double p = bayes_posterior(spec, ds.features.row(i).transpose());
    const int pred = p >= 0.5 ? 0 : 1;
    if (pred == ds.labels[i]) ++correct;
  }
  return static_cast<double>(correct) / ds.size();
}

}  // namespace kcl
