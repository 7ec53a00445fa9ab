#include "torus_mreg/weights.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "torus_mreg/common.hpp"

namespace torus_mreg::weights {
namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using fourier::dft;
using fourier::is_power_of_two;
using symbols::operator_norm;

SampledFunction to_samples(const std::vector<double>& v) {
  SampledFunction f(1, static_cast<int>(v.size()));
  for (int g = 0; g < f.grid; ++g) f.values[g](0) = v[g];
  return f;
}

double samples_norm(const std::vector<double>& v, const SpaceDescriptor& phi) {
  return spaces::phi_norm(to_samples(v), phi);
}

// Maximum over cell arcs of avg(s) * avg(s^{1-p'})^{p-1}. Arcs are contiguous
// index ranges; on the circle they wrap and run over lengths 1..G, on the
// line they stay inside the sample window.
struct ArcMax {
  double value = 0.0;
  int start = 0;
  int length = 0;
};

ArcMax arc_ap_max(const std::vector<double>& s, double p, bool circle) {
  const int n = static_cast<int>(s.size());
  const double dual_exp = -1.0 / (p - 1.0);
  const int doubled = circle ? 2 * n : n;
  std::vector<double> sum1(doubled + 1, 0.0), sum2(doubled + 1, 0.0);
  for (int i = 0; i < doubled; ++i) {
    const double w = s[i % n];
    sum1[i + 1] = sum1[i] + w;
    sum2[i + 1] = sum2[i] + std::pow(w, dual_exp);
  }
  ArcMax best;
  for (int start = 0; start < n; ++start) {
    const int max_len = circle ? n : n - start;
    for (int len = 1; len <= max_len; ++len) {
      const double a1 = (sum1[start + len] - sum1[start]) / len;
      const double a2 = (sum2[start + len] - sum2[start]) / len;
      const double value = a1 * std::pow(a2, p - 1.0);
      if (value > best.value) best = {value, start, len};
    }
  }
  return best;
}

std::vector<double> indicator_arc(int grid, int center, int width) {
  std::vector<double> v(grid, 0.0);
  for (int i = 0; i < width; ++i)
    v[(center - width / 2 + i + grid) % grid] = 1.0;
  return v;
}

}  // namespace

SampledFunction maximal_function(const SampledFunction& f) {
  const int G = f.grid;
  if (G < 8 || !is_power_of_two(G))
    throw Error("maximal_function: grid must be a power of two >= 8");
  const std::vector<double> mag = f.magnitudes();
  double total = 0.0;
  for (double v : mag) total += v;
  const double full_circle = total * (kTwoPi / G) / kPi;
  SampledFunction out(1, G);
  for (int g = 0; g < G; ++g) {
    double running = mag[g];
    double best = std::max(full_circle, 2.0 * running);
    for (int m = 1; 2 * m + 1 < G; ++m) {
      running += mag[(g + m) % G] + mag[(g - m + G) % G];
      best = std::max(best, 2.0 * running / (2 * m + 1));
    }
    out.values[g](0) = best;
  }
  return out;
}

ApReport ap_constant(const Weight& w, double p) {
  w.validate();
  if (!(p > 1.0) || !std::isfinite(p))
    throw Error("ap_constant: p must lie in (1, inf)");
  ApReport report;
  report.p = p;
  const ArcMax best = arc_ap_max(w.samples, p, /*circle=*/true);
  report.value = best.value;
  report.arc_start = best.start;
  report.arc_length = best.length;
  if (w.tag != Weight::Tag::samples) {
    const Weight fine = resample_weight(w, 2 * w.grid());
    report.refined_value = arc_ap_max(fine.samples, p, /*circle=*/true).value;
    report.growth_flag = report.refined_value > 1.2 * report.value;
  }
  return report;
}

std::vector<SampledFunction> standard_probes(int grid, unsigned seed,
                                             int random_count) {
  if (grid < 8 || !is_power_of_two(grid))
    throw Error("standard_probes: grid must be a power of two >= 8");
  std::vector<SampledFunction> probes;
  probes.push_back(to_samples(std::vector<double>(grid, 1.0)));
  for (int width = grid / 4; width >= 1; width /= 4)
    probes.push_back(to_samples(indicator_arc(grid, grid / 2, width)));
  probes.push_back(to_samples(indicator_arc(grid, grid / 8, 1)));
  Rng rng(seed);
  for (int r = 0; r < random_count; ++r) {
    std::vector<double> v(grid);
    for (double& x : v) x = std::abs(rng.gaussian());
    probes.push_back(to_samples(v));
  }
  return probes;
}

MaximalEstimate maximal_norm_estimate(const SpaceDescriptor& phi,
                                      const std::vector<SampledFunction>& probes,
                                      double sigma) {
  if (probes.empty()) throw Error("maximal_norm_estimate: no probes");
  if (sigma < 1.0) throw Error("maximal_norm_estimate: sigma must be >= 1");
  MaximalEstimate est;
  est.sigma = sigma;
  est.space = phi.label();
  int grid = 0;
  for (const SampledFunction& f : probes) {
    const double nf = spaces::phi_norm(f, phi);
    if (nf == 0.0) continue;
    grid = std::max(grid, f.grid);
    est.probe_max =
        std::max(est.probe_max, spaces::phi_norm(maximal_function(f), phi) / nf);
  }
  if (est.probe_max == 0.0)
    throw Error("maximal_norm_estimate: all probes vanish");
  est.value = sigma * est.probe_max;

  // Divergence sweep: ratios of shrinking indicator arcs. On spaces where M
  // is bounded these ratios level off; if the narrowest arc still improves
  // on the 4x wider one by more than 15% the sweep is climbing at the
  // resolution limit and the estimate is flagged.
  std::vector<double> sweep;
  for (int width = grid / 4; width >= 1; width /= 2) {
    const SampledFunction f = to_samples(indicator_arc(grid, grid / 2, width));
    sweep.push_back(spaces::phi_norm(maximal_function(f), phi) /
                    spaces::phi_norm(f, phi));
  }
  const int n = static_cast<int>(sweep.size());
  if (n >= 3) {
    const double last = sweep[n - 1];
    const double wider = sweep[n - 3];
    const bool is_peak = last >= *std::max_element(sweep.begin(), sweep.end());
    est.diverging = is_peak && last > 1.15 * wider;
  }
  return est;
}

RubioReport rubio_de_francia(const SampledFunction& g,
                             const SpaceDescriptor& phi,
                             const MaximalEstimate& m_norm, double tol) {
  if (m_norm.diverging)
    throw Error("rubio_de_francia: maximal operator unbounded on this space");
  if (!(tol > 0.0)) throw Error("rubio_de_francia: tolerance must be positive");
  const int G = g.grid;
  std::vector<double> term = g.magnitudes();
  const double norm_g = samples_norm(term, phi);
  if (norm_g == 0.0) throw Error("rubio_de_francia: input vanishes identically");
  const double denom = 2.0 * m_norm.value;

  std::vector<double> sum = term;
  double prev_norm = norm_g;
  RubioReport report;
  report.terms = 1;
  for (;;) {
    const SampledFunction mf = maximal_function(to_samples(term));
    for (int c = 0; c < G; ++c) term[c] = mf.values[c](0).real() / denom;
    for (int c = 0; c < G; ++c) sum[c] += term[c];
    ++report.terms;
    const double n = samples_norm(term, phi);
    // Measured contraction ratio, clamped away from 1 so the geometric tail
    // bound stays finite; the true ratio is at most 1/2 by construction.
    const double r = std::min(0.95, std::max(n / prev_norm, 0.5));
    report.tail_bound = n * r / (1.0 - r);
    prev_norm = n;
    if (report.tail_bound <= tol * norm_g) break;
    if (report.terms > 400)
      throw Error("rubio_de_francia: series did not contract");
  }

  report.weight = weight_from_samples(sum);
  report.norm_ratio = samples_norm(sum, phi) / norm_g;
  const SampledFunction msum = maximal_function(to_samples(sum));
  for (int c = 0; c < G; ++c) {
    const double excess = msum.values[c](0).real() - denom * sum[c];
    report.majorization_defect =
        std::max(report.majorization_defect, excess / (denom * sum[c]));
  }
  return report;
}

AqReport build_aq_weight(const SampledFunction& g, const SampledFunction& h,
                         double q, const SpaceDescriptor& phi) {
  if (!(q > 1.0) || !std::isfinite(q))
    throw Error("build_aq_weight: q must lie in (1, inf)");
  if (g.grid != h.grid)
    throw Error("build_aq_weight: factor grids differ");
  AqReport report;
  report.q = q;
  const SpaceDescriptor dual = phi.dual();
  const std::vector<SampledFunction> probes = standard_probes(g.grid);
  report.m_norm = maximal_norm_estimate(phi, probes);
  report.m_dual_norm = maximal_norm_estimate(dual, probes);
  report.left = rubio_de_francia(g, phi, report.m_norm);
  report.right = rubio_de_francia(h, dual, report.m_dual_norm);

  std::vector<double> w(g.grid);
  for (int c = 0; c < g.grid; ++c)
    w[c] = std::pow(report.left.weight.samples[c], 1.0 - q) *
           report.right.weight.samples[c];
  report.weight = weight_from_samples(std::move(w));
  report.measured = ap_constant(report.weight, q).value;
  report.bound =
      std::pow(2.0, q) * std::pow(report.m_norm.value, q - 1.0) *
      report.m_dual_norm.value;
  return report;
}

LineExtensionReport periodic_extension(const Weight& w, int periods, double p) {
  w.validate();
  if (periods < 1) throw Error("periodic_extension: periods must be >= 1");
  if (!(p > 1.0) || !std::isfinite(p))
    throw Error("periodic_extension: p must lie in (1, inf)");
  LineExtensionReport report;
  report.p = p;
  const int G = w.grid();
  report.samples.reserve(static_cast<size_t>(periods) * G);
  for (int rep = 0; rep < periods; ++rep)
    report.samples.insert(report.samples.end(), w.samples.begin(),
                          w.samples.end());
  const ArcMax line = arc_ap_max(report.samples, p, /*circle=*/false);
  report.line_value = line.value;
  report.arc_start = line.start;
  report.arc_length = line.length;
  report.torus_value = arc_ap_max(w.samples, p, /*circle=*/true).value;
  return report;
}

namespace {

// Torus-side probe battery: pure modes carry the exact per-frequency norm
// ||m(k)|| (their ratio is |m(k) x| / |x| for the top singular vector x),
// rough seeded series mix frequencies.
std::vector<TrigPolynomial> restriction_probes(const symbols::ContinuousSymbol& m,
                                               int mode_range) {
  std::vector<TrigPolynomial> probes;
  for (int k = -mode_range; k <= mode_range; ++k) {
    const MatrixXcd mk = m.value(static_cast<double>(k));
    Eigen::JacobiSVD<MatrixXcd> svd(mk, Eigen::ComputeThinV);
    TrigPolynomial f(m.in_dim(), std::abs(k));
    f.set_coeff(k, svd.matrixV().col(0));
    probes.push_back(std::move(f));
  }
  Rng rng(7711u);
  for (int r = 0; r < 8; ++r)
    probes.push_back(fourier::random_trig_polynomial(
        rng, m.in_dim(), 24,
        [](int k) { return 1.0 / std::sqrt(1.0 + k * k); }));
  return probes;
}

struct LineQuadrature {
  int points = 0;       // samples across the window, a power of two
  int torus_grid = 0;   // weight grid tiled across the window
  double half_width = 0.0;
};

// One probe transported through m on the line: sample the damped probe,
// pass to frequency space by quadrature of the Fourier integral, multiply by
// m pointwise, return, and compare weighted L^p norms. The grid x_q =
// -T + 2T q / N turns both integrals into plain DFTs because the phase
// factors (-1)^r from the endpoints cancel between the two passes.
double line_probe_ratio(const symbols::ContinuousSymbol& m,
                        const TrigPolynomial& f, double p,
                        const std::optional<Weight>& w,
                        const LineQuadrature& quad, double* tail_fraction) {
  const int N = quad.points;
  const double T = quad.half_width;
  const double dx = 2.0 * T / N;
  const double beta = T / 6.0;
  const int G = quad.torus_grid;

  const int d_in = f.dim();
  const int d_out = m.out_dim();
  std::vector<std::vector<cplx>> comp(d_in, std::vector<cplx>(N));
  std::vector<double> wtilde(N, 1.0);
  double total_mass = 0.0, outer_mass = 0.0;
  for (int q = 0; q < N; ++q) {
    const double x = -T + dx * q;
    const double damp = std::exp(-kPi * x * x / (p * beta * beta));
    const VectorXcd fx = f.value_at(x) * damp;
    for (int i = 0; i < d_in; ++i) comp[i][q] = fx(i);
    if (w) wtilde[q] = w->samples[(q + G / 2) % G];
    const double mass = std::pow(fx.norm(), p) * wtilde[q] * dx;
    total_mass += mass;
    if (std::abs(x) > 0.9 * T) outer_mass += mass;
  }
  if (total_mass == 0.0) return 0.0;
  *tail_fraction = std::max(*tail_fraction, outer_mass / total_mass);

  for (int i = 0; i < d_in; ++i) comp[i] = dft(std::move(comp[i]), -1);
  std::vector<std::vector<cplx>> out(d_out, std::vector<cplx>(N));
  VectorXcd bin(d_in);
  for (int b = 0; b < N; ++b) {
    const int r = (b < N / 2) ? b : b - N;
    const double xi = kPi * r / T;
    for (int i = 0; i < d_in; ++i) bin(i) = comp[i][b];
    const VectorXcd image = m.value(xi) * bin;
    for (int i = 0; i < d_out; ++i) out[i][b] = image(i);
  }
  for (int i = 0; i < d_out; ++i) out[i] = dft(std::move(out[i]), +1);

  double image_mass = 0.0;
  for (int q = 0; q < N; ++q) {
    double norm_sq = 0.0;
    for (int i = 0; i < d_out; ++i) norm_sq += std::norm(out[i][q] / double(N));
    image_mass += std::pow(std::sqrt(norm_sq), p) * wtilde[q] * dx;
  }
  return std::pow(image_mass / total_mass, 1.0 / p);
}

}  // namespace

DeleeuwReport deleeuw_restriction_check(const symbols::ContinuousSymbol& m,
                                        double p,
                                        const std::optional<Weight>& w) {
  if (!(p > 1.0) || !std::isfinite(p))
    throw Error("deleeuw_restriction_check: p must lie in (1, inf)");
  if (w) w->validate();
  const SpaceDescriptor phi =
      w ? SpaceDescriptor::weighted_lp(p, *w) : SpaceDescriptor::lp(p);

  DeleeuwReport report;
  report.p = p;
  const std::vector<TrigPolynomial> probes = restriction_probes(m, 12);
  report.probes = static_cast<int>(probes.size());
  for (const TrigPolynomial& f : probes) {
    const double nf = spaces::phi_norm(f, phi);
    if (nf == 0.0) continue;
    const TrigPolynomial image = fourier::apply_multiplier(
        [&m](int k) { return m.value(static_cast<double>(k)); }, f);
    report.torus_estimate =
        std::max(report.torus_estimate, spaces::phi_norm(image, phi) / nf);
  }

  if (!w && p == 2.0) {
    // Plancherel: the line multiplier norm on unweighted L^2 is the sup of
    // the pointwise operator norm. Two sweep resolutions guard against the
    // sup slipping between grid points.
    report.mode = "sup";
    for (int points : {8193, 16385}) {
      for (int i = 0; i < points; ++i) {
        const double t = -64.0 + 128.0 * i / (points - 1);
        report.line_estimate =
            std::max(report.line_estimate, operator_norm(m.value(t)));
      }
    }
  } else {
    report.mode = "probe";
    LineQuadrature quad;
    quad.torus_grid = w ? w->grid() : 512;
    const int periods = 16;
    quad.points = periods * quad.torus_grid;
    quad.half_width = periods * kPi;
    for (const TrigPolynomial& f : probes) {
      const double ratio =
          line_probe_ratio(m, f, p, w, quad, &report.tail_fraction);
      report.line_estimate = std::max(report.line_estimate, ratio);
    }
    if (report.tail_fraction > 0.01)
      throw Error("deleeuw_restriction_check: probe mass escapes the window");
  }

  report.pass = report.torus_estimate <= 1.05 * report.line_estimate;
  return report;
}

}  // namespace torus_mreg::weights
