// The periodic evolution problem  d(P du) + B du + A u + c * u = f  on the
// circle: frequency-side assembly b(k) = -k^2 P + ikB + A + chat(k), the
// spectral solve u-hat(k) = b(k)^{-1} f-hat(k), the forward-difference
// identity calculus relating differences of b(k)^{-1} to differences of b,
// and the well-posedness / maximal-regularity characterization flags read
// off windowed sups of the four resolvent-type families.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "torus_mreg/common.hpp"
#include "torus_mreg/fourier.hpp"
#include "torus_mreg/spaces.hpp"
#include "torus_mreg/symbols.hpp"

namespace torus_mreg::aee {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using fourier::TrigPolynomial;
using spaces::LittlewoodPaley;
using spaces::SpaceDescriptor;
using symbols::OperatorSymbol;
using symbols::RBoundProxyResult;
using symbols::SeminormReport;

// Convolutor that contributes nothing: chat(k) = 0 for every k.
OperatorSymbol zero_convolutor(int dim);

// Coefficients of the problem together with the truncation order K of the
// frequency window. P, B, A act on C^d; conv holds the convolutor symbol
// chat, which must be defined on {-K-3 .. K+3}: three indices of headroom so
// third-order forward differences stay inside the table.
struct AeeProblem {
  int dim;
  MatrixXcd P, B, A;
  OperatorSymbol conv;
  int K;

  AeeProblem(MatrixXcd P_, MatrixXcd B_, MatrixXcd A_, OperatorSymbol conv_,
             int K_);
  AeeProblem(MatrixXcd P_, MatrixXcd B_, MatrixXcd A_, int K_);
};

// Graph-type solution-space norm max(|y|, |Ay|, |By|, |Py|).
double y_norm(const AeeProblem& pb, const VectorXcd& y);

// b(k) = -k^2 P + ikB + A + chat(k). Requires |k| <= K + 3 and chat
// defined at k.
MatrixXcd assemble_b(const AeeProblem& pb, int k);

// Relative singularity threshold: a matrix counts as singular when its
// smallest singular value is <= 1e-10 times its largest.
inline constexpr double kSingularTol = 1e-10;

// SVD inverse, or nullopt when the matrix is singular per kSingularTol.
std::optional<MatrixXcd> try_invert(const MatrixXcd& b);

// The solution symbol family on {-K .. K}:
//   a(k)  = b(k)^{-1}  (k != 0),    a(0) = 0,
//   a0(k) = ikB a(k),   a1(k) = -k^2 P a(k),
//   a2(k) = ik a(k),    a3(k) = ikP a(k),
// all vanishing at k = 0. The k = 0 inverse is kept apart because the mean
// mode is handled separately from the derivative channels; it is absent
// when b(0) is singular.
struct SolutionSymbols {
  OperatorSymbol a, a0, a1, a2, a3;
  std::optional<MatrixXcd> b0_inv;
};

// Requires b(k) invertible for every 0 < |k| <= K; throws
// SingularSymbolError naming the first offending frequency otherwise.
// A singular b(0) is not an error here: b0_inv is simply absent.
SolutionSymbols solution_symbols(const AeeProblem& pb);

// u with u-hat(k) = b(k)^{-1} f-hat(k) for 0 < |k| <= K and
// u-hat(0) = b(0)^{-1} f-hat(0). Throws MeanObstructionError when b(0) is
// singular but f-hat(0) != 0; requires f.order() <= K.
TrigPolynomial solve(const AeeProblem& pb, const TrigPolynomial& f);

// Largest coefficient norms of the strong-solution ingredients. All six are
// trig polynomials here, so membership in L^1 is automatic; the magnitudes
// make the report comparable across problems.
struct IngredientReport {
  double du = 0.0;      // d u
  double p_du = 0.0;    // P d u
  double d_p_du = 0.0;  // d (P d u)
  double b_du = 0.0;    // B d u
  double au = 0.0;      // A u
  double cu = 0.0;      // c * u
};

struct ResidualReport {
  double value = 0.0;  // max over |k| <= K of |b(k) u-hat(k) - f-hat(k)|
  double scale = 0.0;  // max coefficient norm of f
  IngredientReport ingredients;
};

ResidualReport residual(const AeeProblem& pb, const TrigPolynomial& u,
                        const TrigPolynomial& f);

// Maximal relative residuals of the difference identities over
// 0 < |k| <= K - 3, with atilde(k) = b(k)^{-1} the true inverse family:
//   (Delta b)(k)   = -(2k+1) P + iB + (Delta chat)(k)
//   (Delta^2 b)(k) = -2P + (Delta^2 chat)(k)
//   (Delta^3 b)(k) = (Delta^3 chat)(k)
//   (Delta atilde)(k)   = -atilde(k) (Delta b)(k) atilde(k+1)
//   (Delta^2 atilde)(k) = -2 (Delta atilde)(k) (Delta b)(k+1) atilde(k+2)
//                         - atilde(k) (Delta^2 b)(k) atilde(k+2)
//   (Delta^3 atilde)(k) = -3 (Delta^2 atilde)(k) (Delta b)(k+2) atilde(k+3)
//                         - 3 (Delta atilde)(k) (Delta^2 b)(k+1) atilde(k+3)
//                         - atilde(k) (Delta^3 b)(k) atilde(k+3)
//   (Delta a0)(k)  = iB atilde(k+1) + ikB (Delta atilde)(k)
// Each residual is ||L - R|| / (1 + ||L||), with both sides computed
// independently (left by tabulating and differencing, right by the closed
// form). Stencils that touch k = 0 while b(0) is singular are skipped and
// counted; a singular b elsewhere in the range throws.
struct IdentityReport {
  int window = 0;
  int skipped = 0;
  double delta_b = 0.0;
  double delta2_b = 0.0;
  double delta3_b = 0.0;
  double delta_a = 0.0;
  double delta2_a = 0.0;
  double delta3_a = 0.0;
  double delta_a0 = 0.0;
  double max_residual = 0.0;
};

IdentityReport verify_difference_identities(const AeeProblem& pb, int K);

// One resolvent-family sup over the window, with the shared growth
// heuristic: full-window sup exceeding 1.2x the half-window sup flags
// unbounded-looking growth.
struct WindowedSup {
  double sup_half = 0.0;
  double sup_full = 0.0;
  int argmax_k = 0;
  bool growth = false;
};

// Boundedness evidence for the four families b(k)^{-1}, kB b(k)^{-1},
// k^2 P b(k)^{-1}, k b(k)^{-1}, the Marcinkiewicz reports of the solution
// symbols, and the joint condition on the convolutor. Verdicts:
//   mr_flag = every b(k) invertible on the window and no growth in
//             {binv, kb_binv, k2p_binv};
//   wp_flag = mr_flag and no growth in k_binv.
// Singular frequencies are findings, not errors: they are listed, the
// symbol tables carry zero blocks there, and both flags are false.
// The r_* entries are uniform-norm proxies (value 0 when every b(k) on the
// window is singular).
struct CharacterizationReport {
  int window = 0;
  std::vector<int> singular_ks;
  WindowedSup binv, kb_binv, k2p_binv, k_binv;
  SeminormReport a_m, a0_m, a1_m, a2_m;
  SeminormReport conv_joint;
  RBoundProxyResult r_binv, r_kb_binv, r_k2p_binv;
  bool mr_flag = false;
  bool wp_flag = false;
};

CharacterizationReport characterize(const AeeProblem& pb, int K);

// Convolutor of delay form: chat(k) = h(k) + ik g(k). Closed-form inputs
// give a closed-form result; otherwise the table covers the common window.
OperatorSymbol delay_symbol(const OperatorSymbol& h, const OperatorSymbol& g);

// Lower and upper estimates for one dyadic multiplier block norm
// ||(psi_j m)(D)||_{Phi -> Phi}: lower from random probes supported on the
// block, upper from the kernel-majorant bound of the extended symbol.
struct DyadicNormRow {
  int j = 0;
  double lower = 0.0;
  double upper = 0.0;
};

struct SymbolExperiment {
  std::string name;  // "a", "a0", or "a1"
  std::vector<DyadicNormRow> rows;
  double sup_lower = 0.0;
  double sup_upper = 0.0;
};

struct MrExperimentReport {
  std::string space;
  double maximal_norm = 0.0;  // probe estimate feeding the upper bounds
  int j_max = 0;
  std::vector<SymbolExperiment> experiments;
};

// For m in {a, a0, a1}: per-block lower estimates (probe max over seeded
// random polynomials localized on block j) against the kernel-majorant
// upper bound. Blocks reach j_max, which must keep the extension stencil
// inside the table: 2^{j_max + 1} + 3 <= K; j_max < 0 selects the largest
// admissible value. Throws when probes_per_j < 1.
MrExperimentReport maximal_regularity_experiment(const AeeProblem& pb,
                                                 const SpaceDescriptor& phi,
                                                 const LittlewoodPaley& lp,
                                                 int j_max = -1,
                                                 int probes_per_j = 6,
                                                 std::uint64_t seed = 4242);

// Seeded admissible problem: coefficients drawn near well-conditioned
// centers (P near I, A near 2I), redrawn deterministically until every b(k)
// on the window, k = 0 included, is invertible.
AeeProblem seeded_problem(std::uint64_t seed, int dim, int K,
                          bool with_conv = true);

}  // namespace torus_mreg::aee
