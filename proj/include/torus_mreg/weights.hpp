// Muckenhoupt weight laboratory: the grid maximal function, A_p constants,
// probe-based maximal-operator norm estimates, the Rubio de Francia
// majorant iteration, factored A_q weights, periodization to the line, and
// the torus-to-line restriction comparison for continuous symbols.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "torus_mreg/fourier.hpp"
#include "torus_mreg/spaces.hpp"
#include "torus_mreg/symbols.hpp"
#include "torus_mreg/weight.hpp"

namespace torus_mreg::weights {

using fourier::SampledFunction;
using fourier::TrigPolynomial;
using spaces::SpaceDescriptor;

// Centered maximal function M f(t) = sup_eps (1/eps) Int_{|s-t|<eps} |f|,
// evaluated at grid points with the sup taken over grid-aligned arcs plus the
// full circle. For |f| piecewise constant on grid cells the grid-aligned sup
// is the exact continuous sup, since (1/eps) Int is monotone between cell
// boundaries. Constants c map to the constant 2c. Requires grid >= 8.
SampledFunction maximal_function(const SampledFunction& f);

// Grid Muckenhoupt characteristic: the maximum over all cell arcs (wrapping
// allowed, lengths 1..G) of avg(w) * avg(w^{1-p'})^{p-1}. Every arc value is
// >= 1 by Holder, with equality exactly for constant weights.
struct ApReport {
  double value = 0.0;
  double p = 0.0;
  int arc_start = 0;           // first cell of the maximizing arc
  int arc_length = 0;          // cells in the maximizing arc
  double refined_value = 0.0;  // constant recomputed on the doubled grid;
                               // 0 when the weight cannot be resampled
  bool growth_flag = false;    // refined value exceeds 1.2x the base value
};

ApReport ap_constant(const Weight& w, double p);

// Deterministic probe battery on a given grid: a constant, dyadic indicator
// arcs down to a single cell, and a few seeded rough samples. Used to
// estimate operator norms of M from below.
std::vector<SampledFunction> standard_probes(int grid, unsigned seed = 2024u,
                                             int random_count = 3);

// Lower estimate of ||M||_{Phi -> Phi} from probe ratios, inflated by a
// safety factor sigma for downstream use. Every probe ratio is >= 2 because
// the smallest centered arc already gives M f >= 2 |f| pointwise, so the
// estimate is always >= 1. The divergence flag is set when an internal
// sweep over shrinking indicator arcs keeps climbing at the resolution
// limit, the signature of a space on which M is unbounded.
struct MaximalEstimate {
  double probe_max = 0.0;
  double sigma = 1.0;
  double value = 0.0;  // sigma * probe_max
  std::string space;
  bool diverging = false;
};

MaximalEstimate maximal_norm_estimate(const SpaceDescriptor& phi,
                                      const std::vector<SampledFunction>& probes,
                                      double sigma = 1.5);

// Rubio de Francia majorant R g = sum_k M^k |g| / (2 ||M||)^k, truncated once
// a measured-ratio geometric bound puts the dropped tail below tol * ||g||.
// The result satisfies R g >= |g| pointwise, ||R g|| <= 2 ||g||, and
// M(R g) <= 2 ||M|| R g up to the reported defect; it is returned as a
// strictly positive weight.
struct RubioReport {
  Weight weight;
  int terms = 0;                    // series terms summed, >= 2
  double tail_bound = 0.0;          // Phi-norm bound on the dropped tail
  double norm_ratio = 0.0;          // ||R g||_Phi / ||g||_Phi, at most 2
  double majorization_defect = 0.0; // max over cells of the relative excess
                                    // of M(R g) over 2 ||M|| R g
};

RubioReport rubio_de_francia(const SampledFunction& g,
                             const SpaceDescriptor& phi,
                             const MaximalEstimate& m_norm, double tol = 1e-8);

// Factored weight w = (R g)^{1-q} R' h, where R runs in Phi and R' in the
// dual space. Its A_q constant is bounded by 2^q ||M||_Phi^{q-1} ||M||_Phi',
// evaluated here with the probe estimates; the measured grid constant is
// reported next to that bound.
struct AqReport {
  Weight weight;
  double q = 0.0;
  double measured = 0.0;  // grid A_q constant of the built weight
  double bound = 0.0;     // 2^q ||M||^{q-1} ||M'|| from the probe estimates
  MaximalEstimate m_norm, m_dual_norm;
  RubioReport left, right;
};

AqReport build_aq_weight(const SampledFunction& g, const SampledFunction& h,
                         double q, const SpaceDescriptor& phi);

// Tiles w over [-W pi, W pi) and measures the line A_p constant over all
// non-wrapping index intervals of the tiled samples. For W >= 2 every torus
// arc occurs as such an interval, so the line constant dominates the torus
// constant; for W = 1 the samples are returned unchanged.
struct LineExtensionReport {
  std::vector<double> samples;
  double p = 0.0;
  double line_value = 0.0;
  double torus_value = 0.0;
  int arc_start = 0;
  int arc_length = 0;
};

LineExtensionReport periodic_extension(const Weight& w, int periods, double p);

// Restriction comparison: the multiplier norm of m restricted to integer
// frequencies, estimated on the torus by a probe battery, against a line
// estimate of the norm of m itself. For unweighted L^2 the line side is the
// exact sup of ||m(t)||; otherwise probes are damped by a wide gaussian,
// windowed over several periods, and transported through m by quadrature of
// the Fourier integrals. The check passes when the torus estimate does not
// exceed the line estimate by more than 5%; probe mass escaping the window
// (over 1% in the outer tenth) raises an error instead of a silent bias.
struct DeleeuwReport {
  double torus_estimate = 0.0;
  double line_estimate = 0.0;
  bool pass = false;
  double p = 0.0;
  std::string mode;  // "sup" for the exact unweighted L^2 path, else "probe"
  double tail_fraction = 0.0;
  int probes = 0;
};

DeleeuwReport deleeuw_restriction_check(const symbols::ContinuousSymbol& m,
                                        double p,
                                        const std::optional<Weight>& w =
                                            std::nullopt);

}  // namespace torus_mreg::weights
