#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace bqr {

// Deterministic RNG built on mt19937_64 with explicit variate transforms.
// Standard-library distribution objects are implementation-defined, so all
// transforms live here to keep seeded runs bit-reproducible.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on (0,1); never returns 0 or 1.
  double uniform() {
    double u = (engine_() >> 11) * 0x1.0p-53;
    return u > 0.0 ? u : 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Polar Box-Muller; the spare is cached.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    have_spare_ = true;
    return u * m;
  }

  double normal(double mean, double sd) { return mean + sd * normal(); }

  double exponential(double mean) { return -mean * std::log(uniform()); }

  // Laplace with unit variance scaling handled by the caller; scale b here.
  double laplace(double scale) {
    double u = uniform() - 0.5;
    return -scale * std::copysign(std::log(1.0 - 2.0 * std::fabs(u)), u);
  }

  // Marsaglia-Tsang for shape >= 1, boosted for shape < 1.
  double gamma(double shape, double rate) {
    if (shape < 1.0) {
      double u = uniform();
      return gamma(shape + 1.0, rate) * std::pow(u, 1.0 / shape);
    }
    double d = shape - 1.0 / 3.0;
    double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x = normal();
      double v = 1.0 + c * x;
      if (v <= 0.0) continue;
      v = v * v * v;
      double u = uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v / rate;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v / rate;
    }
  }

  double inverse_gamma(double shape, double rate) { return 1.0 / gamma(shape, rate); }

  // Michael-Schucany-Haas. mu > 0, lambda > 0.
  double inverse_gaussian(double mu, double lambda) {
    double nu = normal();
    double y = nu * nu;
    double x = mu + mu * mu * y / (2.0 * lambda) -
               mu / (2.0 * lambda) * std::sqrt(4.0 * mu * lambda * y + mu * mu * y * y);
    if (x <= 0.0) x = mu * mu / (x < 0.0 ? -x : mu);  // fold numerical underflow
    double u = uniform();
    if (u <= mu / (mu + x)) return x;
    return mu * mu / x;
  }

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// splitmix64; used to derive independent per-replication seeds.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace bqr
