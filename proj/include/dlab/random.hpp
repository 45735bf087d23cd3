#pragma once

#include <cstdint>
#include <random>

#include "dlab/operator.hpp"

namespace dlab {

// Deterministic random source. mt19937_64 output is fixed by the standard and
// the distributions below are hand-rolled, so streams are reproducible across
// platforms and standard libraries for a given seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform in {0, ..., n-1}.
  int uniform_int(int n) {
    int v = static_cast<int>(uniform() * n);
    return v >= n ? n - 1 : v;
  }

  // Standard normal via Box-Muller.
  double gaussian();

  // Complex with independent standard-normal parts.
  Cplx cgaussian() { return Cplx(gaussian(), gaussian()); }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Random Hermitian matrix with Gaussian entries, normalized so the spectral
// norm equals `spectral_norm` (skipped when the draw is numerically zero).
Operator random_hermitian(Eigen::Index dim, Rng& rng, double spectral_norm = 1.0);

// Haar-ish random unitary: QR of a complex Gaussian matrix with the phase
// convention fixed by the R diagonal.
Operator random_unitary(Eigen::Index dim, Rng& rng);

// Random unit-norm state vector.
StateVector random_state(Eigen::Index dim, Rng& rng);

}  // namespace dlab
