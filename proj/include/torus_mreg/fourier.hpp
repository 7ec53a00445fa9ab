// Trigonometric polynomials on the unit circle and their grid samples.
//
// Conventions, used consistently everywhere:
//   * the circle carries the unnormalized arclength measure dt on [-pi, pi),
//   * Fourier coefficients  fhat(k) = (1/2pi) Int f(e^{it}) e^{-ikt} dt,
//   * sample grids are powers of two, t_g = -pi + 2pi g / G,
//   * sgn(0) = 0.
#pragma once

#include <Eigen/Dense>

#include "torus_mreg/common.hpp"

namespace torus_mreg::fourier {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

// Finite Fourier series with values in C^dim and frequencies |k| <= order.
// Coefficients are stored densely; untouched entries are zero.
class TrigPolynomial {
 public:
  TrigPolynomial(int dim, int order);

  int dim() const { return dim_; }
  int order() const { return order_; }

  const VectorXcd& coeff(int k) const;
  void set_coeff(int k, const VectorXcd& value);

  // Returns a copy with the same coefficients and order >= new_order.
  TrigPolynomial with_order(int new_order) const;

  // Direct evaluation of sum_k fhat(k) e^{ikt}; O(dim * order) per point.
  VectorXcd value_at(double t) const;

  double max_coeff_norm() const;

 private:
  int dim_;
  int order_;
  std::vector<VectorXcd> table_;
};

// Values of a C^dim function on the uniform grid t_g = -pi + 2pi g / G.
struct SampledFunction {
  int dim = 1;
  int grid = 0;
  std::vector<VectorXcd> values;

  SampledFunction() = default;
  SampledFunction(int dim_, int grid_);

  double t(int g) const { return -kPi + kTwoPi * g / grid; }

  // Pointwise Euclidean magnitude |f(t_g)|, a nonnegative scalar sequence.
  std::vector<double> magnitudes() const;
};

// Smallest power of two >= max(2K + 2, 4).
int default_grid(int order);

// Unnormalized complex DFT of power-of-two length: sign = -1 computes
// sum_n x_n e^{-2pi i kn/N}, sign = +1 the conjugate sum. Building block for
// quadrature of Fourier integrals on the line.
std::vector<cplx> dft(std::vector<cplx> x, int sign);

bool is_power_of_two(int n);

// Evaluates the series on a grid of G points via FFT. Requires G a power of
// two with G >= 2*order + 2, so distinct frequencies map to distinct bins.
SampledFunction synthesize(const TrigPolynomial& f, int grid);

// Recovers coefficients |k| <= order from grid samples via FFT quadrature.
// Exact (to roundoff) whenever the samples come from a series of order
// <= (grid - 2) / 2. Requires grid >= 2*order + 2.
TrigPolynomial analyze(const SampledFunction& samples, int order);

// Applies the Fourier multiplier fhat(k) -> m(k) fhat(k). The callable must
// return a matrix with m(k).cols() == f.dim(); the output dimension is
// m(k).rows(), constant across k.
TrigPolynomial apply_multiplier(const std::function<MatrixXcd(int)>& m,
                                const TrigPolynomial& f);

// Scalar multiplier convenience overload.
TrigPolynomial apply_scalar_multiplier(const std::function<cplx(int)>& m,
                                       const TrigPolynomial& f);

// d/dt, i.e. the multiplier ik.
TrigPolynomial derivative(const TrigPolynomial& f);

// Normalized convolution (f * g)(t) = (1/2pi) Int f(t-s) g(s) ds, so that
// coefficients multiply. One factor may be scalar; otherwise dimensions must
// match and the product is componentwise.
TrigPolynomial convolve(const TrigPolynomial& f, const TrigPolynomial& g);

// Fejer mean of order N: coefficients scale by max(0, 1 - |k|/(N+1)).
TrigPolynomial fejer_mean(const TrigPolynomial& f, int N);

// Dirichlet partial sum: keeps frequencies |k| <= l.
TrigPolynomial dirichlet_sum(const TrigPolynomial& f, int l);

// Keeps frequencies a <= k <= b (inclusive, possibly asymmetric).
TrigPolynomial interval_projection(const TrigPolynomial& f, int a, int b);

// Multiplier -i sgn(k) with sgn(0) = 0.
TrigPolynomial hilbert_transform(const TrigPolynomial& f);

// Seeded dense random series: independent complex gaussian coefficients,
// scaled by decay(|k|) when given. Used by probe batteries.
TrigPolynomial random_trig_polynomial(
    Rng& rng, int dim, int order,
    const std::function<double(int)>& decay = nullptr);

}  // namespace torus_mreg::fourier
