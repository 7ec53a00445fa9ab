// The explicit extension kernel lambda: a compactly supported C^J function
// with lambda(k) = delta_{k,0} on Z whose integer translates both partition
// unity and cancel in the difference identities that transfer discrete
// Marcinkiewicz bounds to the line. Plus the piecewise-affine baselines it is
// measured against.
#pragma once

#include <array>

#include "torus_mreg/polynomial.hpp"
#include "torus_mreg/symbols.hpp"

namespace torus_mreg::jodeit {

using symbols::ContinuousSymbol;
using symbols::MatrixXcd;
using symbols::OperatorSymbol;

// Piecewise polynomial on [-1,3], zero outside. Segment n covers
// [n-1, n) in local coordinates u = t - n, u in [-1,0). The base segment
// (n = 0) is the minimal-degree Hermite interpolant of the endpoint data
//   lambda(-1)=0, lambda(0)=1, lambda'(-1)=0, lambda'(0-)=3/2,
//   lambda''(-1)=0, lambda''(0-)=1, lambda^(j)(-1)=lambda^(j)(0-)=0, 3<=j<=J;
// segments 1..3 are alpha_n * base + quadratic tails with alpha = -3, 3, -1.
class JodeitKernel {
 public:
  int smoothness() const { return J_; }

  // r-th derivative at t, exact piecewise evaluation; 0 outside [-1,3).
  double value(double t, int r = 0) const;

  // One-sided evaluation in segment-local coordinates, n in 0..3 and
  // u in [-1,0]; u = 0 reads the left limit at the junction t = n.
  double segment_value(int n, double u, int r = 0) const;

  const Polynomial<long double>& segment(int n) const;

 private:
  friend JodeitKernel build_kernel(int J);
  friend JodeitKernel build_corrupted_kernel(int J);
  JodeitKernel() = default;
  static JodeitKernel assemble(int J, const Polynomial<long double>& base,
                               const Polynomial<long double>& generator);
  int J_ = 0;
  // derivs_[n][r] is the r-th derivative of segment n, r = 0..J.
  std::array<std::vector<Polynomial<long double>>, 4> derivs_;
};

// J >= 3. The kernel is C^J across all junctions and supported in [-1,3].
JodeitKernel build_kernel(int J);

// Negative control: the base segment is refit with lambda'(0-) = 1 instead
// of 3/2 while segments 1..3 keep the clean generator. Rebuilding the derived
// segments from the corrupted base would satisfy the difference identities
// verbatim (they cancel algebraically for any generator), so the corruption
// must break the cross-segment consistency instead.
JodeitKernel build_corrupted_kernel(int J);

struct KernelReport {
  int smoothness = 0;
  int grid = 0;
  double tolerance = 0.0;
  // Max absolute residuals over the verification grid of [-1,0]:
  //   sum_{n=0..3} lambda'(u+n) = 0
  double lambda1_residual = 0.0;
  //   3 lambda''(u) + 2 lambda''(u+1) + lambda''(u+2) = 0
  //   -2 lambda''(u) - lambda''(u+1) + lambda''(u+3) = 0
  std::array<double, 2> lambda2_residuals{};
  //   3 lambda'''(u) + lambda'''(u+1) = 0
  //   -3 lambda'''(u) + lambda'''(u+2) = 0
  //   lambda'''(u) + lambda'''(u+3) = 0
  std::array<double, 3> lambda3_residuals{};
  double partition_residual = 0.0;  // sum_n lambda(t - n) vs 1
  // max over junctions {-1,0,1,2,3} of one-sided mismatch, per order 0..J-1.
  std::vector<double> junction_residuals;
  double max_junction_residual = 0.0;
  // max of |lambda(0)-1|, |lambda(-1)|, |lambda(1)|, |lambda(2)|, |lambda(3)|.
  double endpoint_value_residual = 0.0;
  bool pass1 = false, pass2 = false, pass3 = false;
};

// Evaluates all residuals on a uniform grid of [-1,0] with `grid` points.
KernelReport verify_kernel(const JodeitKernel& kernel, int grid,
                           double tolerance = 1e-8);

// e(kernel, m)(t) = sum_n kernel(t - n) m(n); the sum has at most four
// nonzero terms. Errors when a term with nonzero kernel weight needs m
// outside its declared range.
MatrixXcd extend_symbol_at(const JodeitKernel& kernel, const OperatorSymbol& m,
                           double t, int deriv_order = 0);

// The extension as a ContinuousSymbol with analytic derivatives up to gamma
// (<= J), differentiating the kernel factors exactly.
ContinuousSymbol extend_symbol(const JodeitKernel& kernel,
                               const OperatorSymbol& m, int gamma);

// Scalar baseline kernels sharing the extension interface but with limited
// smoothness; their extensions are value-backed, so derivative probes fall
// to finite differences.
struct BaselineKernel {
  std::string name;
  double support = 1.0;  // kernel vanishes for |t| >= support
  std::function<double(double)> value;
};

// delta(t) = max(0, 1 - |t|); extension = piecewise-linear interpolation.
// Preserves first-order symbol bounds only: second differences across the
// kinks form a spike train.
BaselineKernel piecewise_affine_delta();

// 2 delta(2t) - delta(4t); vanishes at nonzero integers, value 1 at 0, but
// does not partition unity.
BaselineKernel de_la_vallee_poussin_kernel();

MatrixXcd extend_symbol_at(const BaselineKernel& kernel,
                           const OperatorSymbol& m, double t);

ContinuousSymbol extend_symbol(const BaselineKernel& kernel,
                               const OperatorSymbol& m, int gamma);

// CSV with columns t, lambda, lambda', lambda'', lambda''' sampled uniformly
// on [-1.25, 3.25].
std::string kernel_csv(const JodeitKernel& kernel, int points);

}  // namespace torus_mreg::jodeit
