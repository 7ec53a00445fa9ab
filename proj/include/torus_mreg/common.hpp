// Shared infrastructure: error types, deterministic RNG, parallel loops.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace torus_mreg {

using cplx = std::complex<double>;

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a frequency symbol that must be inverted is numerically singular.
class SingularSymbolError : public Error {
 public:
  SingularSymbolError(int k, const std::string& what)
      : Error(what), frequency(k) {}
  int frequency;
};

// Raised when the mean-mode equation b(0) u0 = f0 has no solution.
class MeanObstructionError : public Error {
 public:
  explicit MeanObstructionError(const std::string& what) : Error(what) {}
};

// Deterministic PRNG. mt19937_64 has a fully specified sequence; the
// uniform/gaussian maps below avoid std::distributions, whose output is
// implementation defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() { return state_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(state_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(uniform() * (static_cast<double>(hi) - lo + 1));
  }

  // Marsaglia polar method; consumes a variable number of uniforms but the
  // sequence is still reproducible for a fixed seed.
  double gaussian() {
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
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    have_spare_ = true;
    return u * f;
  }

  cplx gaussian_cplx() {
    const double re = gaussian();
    const double im = gaussian();
    return {re, im};
  }

 private:
  std::mt19937_64 state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Runs fn(i) for i in [0, n). Each index writes only its own outputs, so the
// result is identical for every thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                  int threads = 1);

// Global default used by parallel_for call sites that do not pass a count.
// Set once at startup (CLI flag or TORUS_MREG_THREADS); harmless default 1.
int default_thread_count();
void set_default_thread_count(int threads);

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

double binomial(int n, int k);

}  // namespace torus_mreg
