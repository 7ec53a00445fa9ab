#include "torus_mreg/jodeit.hpp"

#include <Eigen/LU>

#include <cmath>
#include <cstdio>

namespace torus_mreg::jodeit {

namespace {

using LongPoly = Polynomial<long double>;
using LongMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using LongVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

// Monomial u^s as a polynomial, for assembling interpolation conditions.
LongPoly monomial(int s) {
  std::vector<long double> c(s + 1, 0.0L);
  c[s] = 1.0L;
  return LongPoly(std::move(c));
}

// Minimal-degree polynomial b of degree 2J+1 on [-1,0] with prescribed jet at
// both ends. The jet at 0 fixes the low coefficients directly
// (c_r = b^(r)(0) / r!); the J+1 high coefficients come from the linear
// system expressing the vanishing jet at -1.
LongPoly hermite_base(int J, long double slope_at_zero) {
  std::vector<long double> low(J + 1, 0.0L);
  low[0] = 1.0L;               // b(0) = 1
  low[1] = slope_at_zero;      // b'(0-) = 3/2 (corrupted control: 1)
  low[2] = 0.5L;               // b''(0-) = 1
  const LongPoly known(low);

  const int unknowns = J + 1;
  LongMatrix a(unknowns, unknowns);
  LongVector rhs(unknowns);
  for (int j = 0; j <= J; ++j) {
    rhs(j) = -known.derivative(j)(-1.0L);
    for (int s = 0; s < unknowns; ++s)
      a(j, s) = monomial(J + 1 + s).derivative(j)(-1.0L);
  }
  const LongVector high = Eigen::FullPivLU<LongMatrix>(a).solve(rhs);

  std::vector<long double> coeffs(2 * J + 2, 0.0L);
  for (int r = 0; r <= J; ++r) coeffs[r] = low[r];
  for (int s = 0; s < unknowns; ++s) coeffs[J + 1 + s] = high(s);
  return LongPoly(std::move(coeffs));
}

// Quadratic tails of the derived segments in local coordinates u = t - n.
LongPoly quadratic_tail(int n) {
  switch (n) {
    case 1:
      return LongPoly({3.0L, 2.5L, 0.5L});
    case 2:
      return LongPoly({-3.0L, -4.0L, -1.0L});
    case 3:
      return LongPoly({1.0L, 1.5L, 0.5L});
    default:
      throw Error("quadratic_tail: segment must be 1..3");
  }
}

constexpr long double kAlpha[4] = {1.0L, -3.0L, 3.0L, -1.0L};

// The fitted base vanishes at the endpoints only to solver precision
// (~1e-18), so integer translates carry phantom weights there. Anything this
// small is the exact zero the construction intends; treating it as a live
// term would demand symbol values the sum never really uses.
constexpr double kWeightFloor = 1e-14;

}  // namespace

JodeitKernel JodeitKernel::assemble(int J, const LongPoly& base_segment,
                                    const LongPoly& generator) {
  JodeitKernel kernel;
  kernel.J_ = J;
  for (int n = 0; n < 4; ++n) {
    LongPoly seg = (n == 0) ? base_segment
                            : generator * kAlpha[n] + quadratic_tail(n);
    auto& ladder = kernel.derivs_[n];
    ladder.reserve(J + 1);
    for (int r = 0; r <= J; ++r) ladder.push_back(seg.derivative(r));
  }
  return kernel;
}

JodeitKernel build_kernel(int J) {
  if (J < 3) throw Error("build_kernel: smoothness order must be >= 3");
  const LongPoly base = hermite_base(J, 1.5L);
  return JodeitKernel::assemble(J, base, base);
}

JodeitKernel build_corrupted_kernel(int J) {
  if (J < 3) throw Error("build_corrupted_kernel: smoothness order must be >= 3");
  const LongPoly clean = hermite_base(J, 1.5L);
  const LongPoly corrupted = hermite_base(J, 1.0L);
  return JodeitKernel::assemble(J, corrupted, clean);
}

double JodeitKernel::value(double t, int r) const {
  if (r < 0 || r > J_)
    throw Error("JodeitKernel::value: derivative order exceeds smoothness");
  if (t < -1.0 || t >= 3.0) return 0.0;
  const int n = static_cast<int>(std::floor(t)) + 1;
  const long double u = static_cast<long double>(t) - n;
  return static_cast<double>(derivs_[n][r](u));
}

double JodeitKernel::segment_value(int n, double u, int r) const {
  if (n < 0 || n > 3) throw Error("JodeitKernel::segment_value: segment 0..3");
  if (r < 0 || r > J_)
    throw Error("JodeitKernel::segment_value: derivative order exceeds smoothness");
  if (u < -1.0 - 1e-12 || u > 1e-12)
    throw Error("JodeitKernel::segment_value: u outside [-1,0]");
  return static_cast<double>(derivs_[n][r](static_cast<long double>(u)));
}

const Polynomial<long double>& JodeitKernel::segment(int n) const {
  if (n < 0 || n > 3) throw Error("JodeitKernel::segment: segment 0..3");
  return derivs_[n][0];
}

KernelReport verify_kernel(const JodeitKernel& kernel, int grid,
                           double tolerance) {
  if (grid < 2) throw Error("verify_kernel: grid must have >= 2 points");
  KernelReport report;
  report.smoothness = kernel.smoothness();
  report.grid = grid;
  report.tolerance = tolerance;

  for (int i = 0; i < grid; ++i) {
    const double u = -1.0 + static_cast<double>(i) / (grid - 1);
    double l0[4], l1[4], l2[4], l3[4];
    for (int n = 0; n < 4; ++n) {
      l0[n] = kernel.value(u + n, 0);
      l1[n] = kernel.value(u + n, 1);
      l2[n] = kernel.value(u + n, 2);
      l3[n] = kernel.value(u + n, 3);
    }
    report.lambda1_residual = std::max(
        report.lambda1_residual, std::abs(l1[0] + l1[1] + l1[2] + l1[3]));
    report.lambda2_residuals[0] =
        std::max(report.lambda2_residuals[0],
                 std::abs(3.0 * l2[0] + 2.0 * l2[1] + l2[2]));
    report.lambda2_residuals[1] =
        std::max(report.lambda2_residuals[1],
                 std::abs(-2.0 * l2[0] - l2[1] + l2[3]));
    report.lambda3_residuals[0] =
        std::max(report.lambda3_residuals[0], std::abs(3.0 * l3[0] + l3[1]));
    report.lambda3_residuals[1] =
        std::max(report.lambda3_residuals[1], std::abs(-3.0 * l3[0] + l3[2]));
    report.lambda3_residuals[2] =
        std::max(report.lambda3_residuals[2], std::abs(l3[0] + l3[3]));
    report.partition_residual =
        std::max(report.partition_residual,
                 std::abs(l0[0] + l0[1] + l0[2] + l0[3] - 1.0));
  }

  const int orders = std::max(1, kernel.smoothness());
  report.junction_residuals.assign(orders, 0.0);
  for (int r = 0; r < orders; ++r) {
    for (int junction = -1; junction <= 3; ++junction) {
      const double left =
          (junction == -1) ? 0.0 : kernel.segment_value(junction, 0.0, r);
      const double right =
          (junction == 3) ? 0.0 : kernel.segment_value(junction + 1, -1.0, r);
      report.junction_residuals[r] =
          std::max(report.junction_residuals[r], std::abs(left - right));
    }
    report.max_junction_residual =
        std::max(report.max_junction_residual, report.junction_residuals[r]);
  }

  report.endpoint_value_residual = std::abs(kernel.value(0.0) - 1.0);
  for (double t : {-1.0, 1.0, 2.0})
    report.endpoint_value_residual =
        std::max(report.endpoint_value_residual, std::abs(kernel.value(t)));
  report.endpoint_value_residual = std::max(
      report.endpoint_value_residual, std::abs(kernel.segment_value(3, 0.0)));

  report.pass1 = report.lambda1_residual <= tolerance;
  report.pass2 = std::max(report.lambda2_residuals[0],
                          report.lambda2_residuals[1]) <= tolerance;
  report.pass3 = std::max({report.lambda3_residuals[0],
                           report.lambda3_residuals[1],
                           report.lambda3_residuals[2]}) <= tolerance;
  return report;
}

MatrixXcd extend_symbol_at(const JodeitKernel& kernel, const OperatorSymbol& m,
                           double t, int deriv_order) {
  MatrixXcd acc = MatrixXcd::Zero(m.out_dim(), m.in_dim());
  const int lo = static_cast<int>(std::ceil(t - 3.0));
  const int hi = static_cast<int>(std::floor(t + 1.0));
  for (int n = lo; n <= hi; ++n) {
    const double w = kernel.value(t - n, deriv_order);
    if (std::abs(w) <= kWeightFloor) continue;
    if (!m.defined_at(n))
      throw Error("extend_symbol: symbol undefined at required integer");
    acc += w * m.value(n);
  }
  return acc;
}

ContinuousSymbol extend_symbol(const JodeitKernel& kernel,
                               const OperatorSymbol& m, int gamma) {
  if (gamma < 0) throw Error("extend_symbol: gamma must be >= 0");
  if (gamma > kernel.smoothness())
    throw Error("extend_symbol: gamma exceeds kernel smoothness");
  std::vector<ContinuousSymbol::Evaluator> ladder;
  for (int r = 0; r <= gamma; ++r)
    ladder.push_back([kernel, m, r](double t) {
      return extend_symbol_at(kernel, m, t, r);
    });
  return ContinuousSymbol(m.out_dim(), m.in_dim(), std::move(ladder),
                          "extension of " + m.family());
}

BaselineKernel piecewise_affine_delta() {
  BaselineKernel k;
  k.name = "piecewise_affine";
  k.support = 1.0;
  k.value = [](double t) { return std::max(0.0, 1.0 - std::abs(t)); };
  return k;
}

BaselineKernel de_la_vallee_poussin_kernel() {
  BaselineKernel k;
  k.name = "de_la_vallee_poussin";
  k.support = 0.5;
  k.value = [](double t) {
    const double d2 = std::max(0.0, 1.0 - std::abs(2.0 * t));
    const double d4 = std::max(0.0, 1.0 - std::abs(4.0 * t));
    return 2.0 * d2 - d4;
  };
  return k;
}

MatrixXcd extend_symbol_at(const BaselineKernel& kernel,
                           const OperatorSymbol& m, double t) {
  MatrixXcd acc = MatrixXcd::Zero(m.out_dim(), m.in_dim());
  const int lo = static_cast<int>(std::ceil(t - kernel.support));
  const int hi = static_cast<int>(std::floor(t + kernel.support));
  for (int n = lo; n <= hi; ++n) {
    const double w = kernel.value(t - n);
    if (w == 0.0) continue;
    if (!m.defined_at(n))
      throw Error("extend_symbol: symbol undefined at required integer");
    acc += w * m.value(n);
  }
  return acc;
}

ContinuousSymbol extend_symbol(const BaselineKernel& kernel,
                               const OperatorSymbol& m, int gamma) {
  if (gamma < 0) throw Error("extend_symbol: gamma must be >= 0");
  return ContinuousSymbol::from_values(
      m.out_dim(), m.in_dim(),
      [kernel, m](double t) { return extend_symbol_at(kernel, m, t); }, gamma,
      "extension of " + m.family() + " by " + kernel.name);
}

std::string kernel_csv(const JodeitKernel& kernel, int points) {
  if (points < 2) throw Error("kernel_csv: need >= 2 points");
  std::string out = "t,lambda,dlambda,d2lambda,d3lambda\n";
  char line[160];
  for (int i = 0; i < points; ++i) {
    const double t = -1.25 + 4.5 * static_cast<double>(i) / (points - 1);
    std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%.17g,%.17g\n", t,
                  kernel.value(t, 0), kernel.value(t, 1), kernel.value(t, 2),
                  kernel.value(t, 3));
    out += line;
  }
  return out;
}

}  // namespace torus_mreg::jodeit
