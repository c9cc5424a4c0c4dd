#ifndef IMITATION_RNG_HPP
#define IMITATION_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace imitation {

// Deterministic random source. std::uniform_real_distribution is
// implementation-defined, so doubles are derived from the raw engine output
// directly; the same seed yields the same stream on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // uniform in [0, 1)
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  int uniform_int(int n) {
    // n is tiny here; modulo bias is irrelevant but keep it exact anyway
    std::uint64_t bound = static_cast<std::uint64_t>(n);
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return static_cast<int>(v % bound);
  }

  // Uniform sample from the unit simplex (flat Dirichlet), via normalized
  // exponential spacings.
  Eigen::VectorXd simplex(int n) {
    Eigen::VectorXd v(n);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      double u;
      do {
        u = uniform01();
      } while (u <= 0.0);
      v[i] = -std::log(u);
      total += v[i];
    }
    return v / total;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace imitation

#endif
