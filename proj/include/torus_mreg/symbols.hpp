// Matrix-valued symbol sequences on Z, continuous symbols on R, the forward
// difference calculus, and the Marcinkiewicz-type condition seminorms
// (discrete, continuous, joint, variational, and the uniform-norm stand-in
// for R-boundedness).
#pragma once

#include <climits>
#include <string>

#include "torus_mreg/fourier.hpp"
#include "torus_mreg/spaces.hpp"

namespace torus_mreg::symbols {

using Eigen::MatrixXcd;

double operator_norm(const MatrixXcd& m);

// A sequence k -> complex out_dim x in_dim matrix, either a closed form
// (defined on all of Z) or a dense table on a declared window.
class OperatorSymbol {
 public:
  static OperatorSymbol closed_form(int out_dim, int in_dim,
                                    std::function<MatrixXcd(int)> eval,
                                    std::string family);
  static OperatorSymbol from_table(int k_min, std::vector<MatrixXcd> values,
                                   std::string family = "table");

  MatrixXcd value(int k) const;
  bool defined_at(int k) const { return k_min_ <= k && k <= k_max_; }

  int in_dim() const { return in_dim_; }
  int out_dim() const { return out_dim_; }
  int k_min() const { return k_min_; }
  int k_max() const { return k_max_; }
  const std::string& family() const { return family_; }

  // The associated Fourier multiplier action.
  fourier::TrigPolynomial apply(const fourier::TrigPolynomial& f) const;

 private:
  OperatorSymbol() = default;
  int out_dim_ = 1, in_dim_ = 1;
  int k_min_ = INT_MIN, k_max_ = INT_MAX;
  std::function<MatrixXcd(int)> eval_;
  std::vector<MatrixXcd> table_;
  std::string family_;
};

OperatorSymbol identity_symbol(int dim);
OperatorSymbol scalar_symbol(std::function<cplx(int)> f, std::string name);
OperatorSymbol diagonal_symbol(std::vector<std::function<cplx(int)>> diag,
                               std::string name);
// 2x2 rotation by angle k*theta; a unitary family.
OperatorSymbol rotation_symbol(double theta);
// Bounded, smooth in the discrete Marcinkiewicz sense: a seeded combination
// of bump profiles 1/(1+(k/lambda)^2) with random matrix amplitudes.
OperatorSymbol seeded_random_smooth(std::uint64_t seed, int out_dim,
                                    int in_dim, int terms = 6);

// (Delta^l m)(k) = sum_{j<=l} binom(l,j) (-1)^{l-j} m(k+j).
MatrixXcd forward_difference(const OperatorSymbol& m, int l, int k);

// One difference order within a windowed sup: sups over |k| <= K/2 and
// |k| <= K plus the maximizer, feeding the growth heuristic.
struct OrderSup {
  int l = 0;
  double sup_half = 0.0;
  double sup_full = 0.0;
  int argmax_k = 0;
  bool growth = false;
};

struct SeminormReport {
  double value = 0.0;  // max over orders of the full-window sup
  int gamma = 0;
  int window = 0;
  std::vector<OrderSup> orders;
  bool growth_flag = false;  // any order grew between the half and full window
  std::string family;
};

// Windowed discrete seminorm max_{l<=gamma} sup_{|k|<=K} ||k^l Delta^l m(k)||.
// A full-window sup exceeding 1.2x the half-window sup raises growth_flag;
// the sup over Z is an asymptotic notion, so a finite tool reports trends.
SeminormReport marcinkiewicz_seminorm(const OperatorSymbol& m, int gamma,
                                      int K);

struct VariationalReport {
  double value = 0.0;  // sup ||m|| plus the largest dyadic variation sum
  double sup_norm = 0.0;
  double max_block_sum = 0.0;
  int argmax_block = 0;
  std::vector<double> block_sums;  // j = 0 .. Jmax
  bool growth_flag = false;
  std::string family;
};

// sup_k ||m(k)|| + sup_{j <= Jmax} sum_{2^j <= |k| < 2^{j+1}} ||m(k+1)-m(k)||.
VariationalReport variational_seminorm(const OperatorSymbol& m, int Jmax);

// All the condition seminorms of one symbol in a single sweep: the discrete
// seminorms at orders 1..3 over the window plus the dyadic variation with
// Jmax = floor(log2 K).
struct ConditionReport {
  int window = 0;
  SeminormReport gamma1, gamma2, gamma3;
  VariationalReport var;
};

ConditionReport condition_report(const OperatorSymbol& m, int K);

// Joint condition: max_{l<=gamma} sup_k ||k^l (Delta^l d)(k) a(k+l)||.
// Requires the product shape d.in_dim == a.out_dim.
SeminormReport joint_seminorm(const OperatorSymbol& d, const OperatorSymbol& a,
                              int gamma, int K);

// [d]_{M^0(a)} + sup_{j <= Jmax} sum_{2^j <= |k| < 2^{j+1}} ||Delta d(k) a(k+1)||.
VariationalReport joint_variational(const OperatorSymbol& d,
                                    const OperatorSymbol& a, int Jmax);

// A function t -> matrix with derivatives up to gamma_max, either analytic
// (a ladder of derivative evaluators) or finite-difference from values
// (central differences with Richardson extrapolation; default step
// 1e-4 (1+|t|), overridable per call so grid sweeps can tie the step to
// their resolution).
class ContinuousSymbol {
 public:
  using Evaluator = std::function<MatrixXcd(double)>;

  ContinuousSymbol(int out_dim, int in_dim, std::vector<Evaluator> derivatives,
                   std::string family);
  static ContinuousSymbol from_values(int out_dim, int in_dim, Evaluator value,
                                      int gamma_max, std::string family);

  MatrixXcd value(double t) const;
  MatrixXcd derivative(double t, int r, double step_hint = 0.0) const;

  bool analytic() const { return analytic_; }
  int gamma_max() const { return gamma_max_; }
  int in_dim() const { return in_dim_; }
  int out_dim() const { return out_dim_; }
  const std::string& family() const { return family_; }

 private:
  int out_dim_ = 1, in_dim_ = 1;
  int gamma_max_ = 0;
  bool analytic_ = true;
  std::vector<Evaluator> derivs_;  // analytic: index r; fd: only entry 0
  std::string family_;
};

struct ContinuousOrderSup {
  int l = 0;
  double sup_half = 0.0;
  double sup_full = 0.0;
  double argmax_t = 0.0;
  bool growth = false;
};

struct ContinuousSeminormReport {
  double value = 0.0;
  int gamma = 0;
  double t_max = 0.0;
  int points = 0;
  bool tilde = false;
  std::vector<ContinuousOrderSup> orders;
  bool growth_flag = false;
  std::string family;
};

// Grid max of ||t^l m^(l)(t)|| over a symmetric grid (t = 0 excluded), or the
// tilde variant ||(1+|t|)^l m^(l)(t)|| including 0. Finite-difference-backed
// symbols are differentiated with step = half the grid spacing, so grid
// refinement genuinely probes finer scales.
ContinuousSeminormReport continuous_m_seminorm(const ContinuousSymbol& m,
                                               int gamma, double t_max,
                                               int points, bool tilde = false);

struct DyadicBoundResult {
  double l1_majorant = 0.0;   // L1 norm of the even decreasing majorant
  double bound = 0.0;         // c * l1 * maximal-operator norm
  double tail_fraction = 0.0; // mass attributed to beyond the x-window
  double c = 0.0;             // arc comparison constant used
  int j = 0;
};

struct DyadicBoundOptions {
  int log2_points = 15;   // FFT size for the kernel transform
  int pad_factor = 32;    // window half-width = pad * block support
  double tail_tol = 0.01; // error out above this tail fraction
};

// Upper bound for the dyadic multiplier block norm ||(psi_j m)(D)||_{Phi -> Phi}:
// transforms psi_j * m to the line, fits the least even decreasing majorant,
// and multiplies its L1 norm by the maximal-operator norm and the arc
// comparison constant c = pi/2.
DyadicBoundResult dyadic_operator_norm_bound(const ContinuousSymbol& m, int j,
                                             const spaces::LittlewoodPaley& lp,
                                             double maximal_norm,
                                             const DyadicBoundOptions& opts = {});

struct RBoundProxyResult {
  double value = 0.0;
  bool proxy = true;  // uniform-norm stand-in, not a randomized-sum bound
};

// sup of operator norms over the family. R-boundedness has no finite
// certificate in general Banach geometry; this is the finite-dimensional
// Hilbert-space stand-in and every report carries the proxy marker.
RBoundProxyResult r_bounded_proxy(const std::vector<MatrixXcd>& family);

}  // namespace torus_mreg::symbols
