#ifndef KCL_RNG_HPP
#define KCL_RNG_HPP

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Core>

namespace kcl {

// Deterministic random source used everywhere randomness is needed.
//
// All draws are derived from std::mt19937_64 with explicit, fully specified
// transformations (53-bit uniform doubles, Lemire bounded integers,
// Box-Muller gaussians, Fisher-Yates shuffles). std::mt19937_64 output is
// pinned by the C++ standard and none of the transformations below depend on
// implementation-defined library behaviour, so identical seeds produce
// identical streams on any platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1): top 53 bits of the generator output.
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n) via the Lemire multiply-shift reduction.
  std::uint64_t below(std::uint64_t n);

  // Standard normal via Box-Muller on (0,1] x [0,1) uniforms.
  double gaussian();

  Eigen::Vector3d gaussian3() {
    Eigen::Vector3d v;
    v << gaussian(), gaussian(), gaussian();
    return v;
  }

  Eigen::VectorXd gaussian_vector(int n);
  Eigen::MatrixXd gaussian_matrix(int rows, int cols);

  // In-place Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace kcl

#endif
