// Acceptance battery: ten desk-scale properties, one printed line each.
// Exit status is the number of failed criteria.

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "torus_mreg/aee.hpp"
#include "torus_mreg/scenarios.hpp"
#include "torus_mreg/serialization.hpp"

using namespace torus_mreg;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using fourier::TrigPolynomial;
using spaces::SpaceDescriptor;
using spaces::SmoothnessSpace;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct Criterion {
  std::vector<std::string> details;

  void check(bool ok, const std::string& what) {
    if (!ok) details.push_back(what);
  }
  void close(double value, double bound, const std::string& what) {
    check(value <= bound,
          what + " (" + fmt(value) + " > " + fmt(bound) + ")");
  }
};

int run(int id, const char* label,
        const std::function<void(Criterion&)>& body) {
  Criterion c;
  try {
    body(c);
  } catch (const std::exception& e) {
    c.check(false, std::string("exception: ") + e.what());
  }
  std::printf("criterion %2d: %s - %s\n", id,
              c.details.empty() ? "PASS" : "FAIL", label);
  for (const auto& d : c.details) std::printf("              %s\n", d.c_str());
  std::fflush(stdout);
  return c.details.empty() ? 0 : 1;
}

MatrixXcd m1(cplx z) {
  MatrixXcd m(1, 1);
  m(0, 0) = z;
  return m;
}

aee::AeeProblem heat_problem(int K) {
  return aee::AeeProblem(m1(0.0), m1(1.0), m1(1.0), K);
}

aee::AeeProblem square_problem(int root, int K) {
  return aee::AeeProblem(m1(1.0), m1(0.0),
                         m1(cplx(static_cast<double>(root) * root, 0.0)), K);
}

double inv_square_decay(int k) {
  return 1.0 / (1.0 + static_cast<double>(k) * k);
}

}  // namespace

int main() {
  int failed = 0;

  failed += run(1, "interpolation kernel identities", [](Criterion& c) {
    const auto kernel = jodeit::build_kernel(4);
    const auto rep = jodeit::verify_kernel(kernel, 4096, 1e-8);
    c.close(rep.lambda1_residual, 1e-8, "first moment identity");
    c.close(std::max(rep.lambda2_residuals[0], rep.lambda2_residuals[1]),
            1e-8, "second moment identities");
    c.close(std::max({rep.lambda3_residuals[0], rep.lambda3_residuals[1],
                      rep.lambda3_residuals[2]}),
            1e-8, "third moment identities");
    c.close(rep.endpoint_value_residual, 1e-12, "integer endpoint values");
    c.close(rep.partition_residual, 1e-10, "partition of unity");
    c.check(rep.junction_residuals.size() >= 4,
            "junction orders 0..3 reported");
    c.close(rep.max_junction_residual, 1e-10, "junction derivatives");
    const auto bad =
        jodeit::verify_kernel(jodeit::build_corrupted_kernel(4), 4096, 1e-8);
    c.check(bad.lambda1_residual > 1e-2,
            "corrupted kernel must fail the first identity by more than 1e-2");
  });

  failed += run(2, "symbol extension to the line", [](Criterion& c) {
    const auto kernel = jodeit::build_kernel(4);
    for (std::uint64_t s = 1; s <= 10; ++s) {
      const int d = 1 + static_cast<int>(s % 4);
      const auto m = symbols::seeded_random_smooth(s, d, d);
      double worst = 0.0;
      for (int k = -64; k <= 64; ++k)
        worst = std::max(
            worst, (jodeit::extend_symbol_at(kernel, m, static_cast<double>(k)) -
                    m.value(k))
                       .norm());
      c.close(worst, 1e-12,
              "integer restriction, seed " + std::to_string(s));
    }
    for (std::uint64_t s = 1; s <= 4; ++s) {
      const auto raw = symbols::seeded_random_smooth(s, 2, 2);
      const double scale =
          std::max(1.0, symbols::marcinkiewicz_seminorm(raw, 3, 64).value);
      const auto m = symbols::OperatorSymbol::closed_form(
          2, 2,
          [raw, scale](int k) -> MatrixXcd { return raw.value(k) / scale; },
          raw.family());
      const auto ext = jodeit::extend_symbol(kernel, m, 3);
      const auto coarse = symbols::continuous_m_seminorm(ext, 3, 64.0, 2049);
      const auto fine = symbols::continuous_m_seminorm(ext, 3, 64.0, 4097);
      c.check(std::isfinite(fine.value) && fine.value > 0.0,
              "extension seminorm finite, seed " + std::to_string(s));
      c.close(std::abs(fine.value - coarse.value), 0.10 * coarse.value,
              "third-order seminorm stable under grid doubling, seed " +
                  std::to_string(s));
    }
    const auto delta = jodeit::piecewise_affine_delta();
    int blowups = 0;
    for (std::uint64_t s = 1; s <= 4; ++s) {
      const auto m = symbols::seeded_random_smooth(s, 2, 2);
      const auto ext = jodeit::extend_symbol(delta, m, 3);
      const auto coarse = symbols::continuous_m_seminorm(ext, 3, 32.0, 2049);
      const auto fine = symbols::continuous_m_seminorm(ext, 3, 32.0, 4097);
      if (fine.value > 1.5 * coarse.value) ++blowups;
    }
    c.check(blowups >= 1,
            "piecewise-affine baseline must fail the stability check");
  });

  failed += run(3, "difference calculus identities", [](Criterion& c) {
    for (int s = 0; s < 20; ++s) {
      const auto pb = aee::seeded_problem(900 + s, 1 + (s % 4), 64);
      const auto rep = aee::verify_difference_identities(pb, 64);
      c.close(rep.max_residual, 1e-10,
              "identity residual, seed " + std::to_string(900 + s));
      c.check(rep.skipped == 0, "no skipped stencils expected");
    }
  });

  failed += run(4, "spectral solve and round trip", [](Criterion& c) {
    for (int s = 0; s < 10; ++s) {
      const auto pb = aee::seeded_problem(40 + s, 1 + (s % 4), 32);
      Rng rng(777 + static_cast<std::uint64_t>(s));
      const auto f = fourier::random_trig_polynomial(rng, pb.dim, pb.K,
                                                     inv_square_decay);
      const auto rep = aee::residual(pb, aee::solve(pb, f), f);
      c.close(rep.value, 1e-9 * rep.scale + 1e-30,
              "solve residual, seed " + std::to_string(40 + s));
    }
    Rng rng(4040);
    const auto f = fourier::random_trig_polynomial(rng, 2, 256);
    const auto back = fourier::analyze(fourier::synthesize(f, 2048), 256);
    double worst = 0.0;
    for (int k = -256; k <= 256; ++k)
      worst = std::max(worst, (back.coeff(k) - f.coeff(k)).norm());
    c.close(worst / f.max_coeff_norm(), 1e-12,
            "analyze-synthesize round trip at K=256, G=2048");
    const auto pb = square_problem(3, 16);
    for (int k = -16; k <= 16; ++k) {
      const bool singular = !aee::try_invert(assemble_b(pb, k)).has_value();
      c.check(singular == (std::abs(k) == 3),
              "singularity exactly at |k| = 3, k = " + std::to_string(k));
    }
    TrigPolynomial e1(1, 1);
    e1.set_coeff(1, VectorXcd::Ones(1));
    try {
      aee::solve(pb, e1);
      c.check(false, "solve on the perfect-square family must throw");
    } catch (const SingularSymbolError& e) {
      c.check(std::abs(e.frequency) == 3,
              "singular frequency must be +-3, got " +
                  std::to_string(e.frequency));
    }
  });

  failed += run(5, "smoothness-scale norms", [](Criterion& c) {
    const auto lp4 = spaces::make_littlewood_paley(4);
    double worst_gap = 0.0;
    for (double s : {0.5, 1.3})
      for (double q : {1.0, 2.0, spaces::kInf})
        for (double p : {1.5, 2.0, 4.0})
          for (int k : {1, 3, 17}) {
            VectorXcd x(2);
            x << cplx(0.6, 0.0), cplx(0.0, 0.8);
            TrigPolynomial f(2, k);
            f.set_coeff(k, x);
            const auto sp =
                SmoothnessSpace::besov(s, q, SpaceDescriptor::lp(p), 4);
            double bf = 0.0;
            for (int j = 0; j <= spaces::max_block_index(k); ++j) {
              const double wj = std::pow(2.0, s * j) *
                                lp4.psi_j(j, static_cast<double>(k));
              bf = (q == spaces::kInf) ? std::max(bf, wj)
                                       : bf + std::pow(wj, q);
            }
            if (q != spaces::kInf) bf = std::pow(bf, 1.0 / q);
            const double closed =
                bf * std::pow(kTwoPi, 1.0 / p) * x.norm();
            const double measured = spaces::besov_norm(f, sp);
            worst_gap = std::max(
                worst_gap, std::abs(measured - closed) / std::max(1.0, closed));
            }
    c.close(worst_gap, 1e-9, "single-mode closed form over the sweep");
    for (double q : {1.5, 2.0, 3.0}) {
      Rng rng(31 + static_cast<std::uint64_t>(q * 10));
      const auto f = fourier::random_trig_polynomial(rng, 2, 24);
      const double b = spaces::besov_norm(
          f, SmoothnessSpace::besov(0.7, q, SpaceDescriptor::lp(q), 4));
      const double t = spaces::triebel_lizorkin_norm(
          f,
          SmoothnessSpace::triebel_lizorkin(0.7, q, SpaceDescriptor::lp(q), 4));
      c.close(std::abs(b - t), 1e-9 * std::max(1.0, b),
              "scales agree on matching exponent q = " + fmt(q));
    }
    {
      Rng rng(26);
      const auto f = fourier::random_trig_polynomial(rng, 1, 10);
      const auto sp =
          SmoothnessSpace::besov(0.5, 2.0, SpaceDescriptor::lp(2.0), 4);
      auto remainder = [&](int N) {
        return fourier::apply_scalar_multiplier(
            [&](int k) {
              return cplx(
                  1.0 - lp4.psi(std::ldexp(static_cast<double>(k), -N)), 0.0);
            },
            f);
      };
      c.check(spaces::besov_norm(remainder(5), sp) == 0.0,
              "partial-sum remainder exactly zero once the plateau covers K");
      c.check(spaces::besov_norm(remainder(3), sp) > 0.0,
              "partial-sum remainder nonzero while the plateau misses K");
    }
    {
      const auto sp =
          SmoothnessSpace::besov(0.5, 2.0, SpaceDescriptor::lp(2.0), 4);
      auto bracket = [&](std::uint64_t base) {
        double lo = spaces::kInf, hi = 0.0;
        Rng rng(base);
        for (int t = 0; t < 200; ++t) {
          auto f = fourier::random_trig_polynomial(rng, 2, 32);
          f.set_coeff(0, VectorXcd::Zero(2));
          const double r = spaces::derivative_equivalence_ratio(f, sp);
          lo = std::min(lo, r);
          hi = std::max(hi, r);
        }
        return std::make_pair(lo, hi);
      };
      const auto [lo1, hi1] = bracket(27);
      const auto [lo2, hi2] = bracket(9001);
      c.close(std::abs(lo1 - lo2), 0.05 * lo1,
              "bracket lower endpoint stable under reseeding");
      c.close(std::abs(hi1 - hi2), 0.05 * hi1,
              "bracket upper endpoint stable under reseeding");
    }
  });

  failed += run(6, "conjugate function and projections", [](Criterion& c) {
    const auto l2 = SpaceDescriptor::lp(2.0);
    Rng rng(606);
    for (int t = 0; t < 5; ++t) {
      auto f = fourier::random_trig_polynomial(rng, 2, 48);
      f.set_coeff(0, VectorXcd::Zero(2));
      const double nf = spaces::phi_norm(f, l2);
      const double nh = spaces::phi_norm(fourier::hilbert_transform(f), l2);
      c.close(std::abs(nh - nf), 1e-10 * std::max(1.0, nf),
              "mean-zero isometry, trial " + std::to_string(t));
    }
    const auto f = fourier::random_trig_polynomial(rng, 2, 20);
    auto sgn = [](int v) { return (v > 0) ? 1.0 : (v < 0 ? -1.0 : 0.0); };
    for (auto [a, b] : std::vector<std::pair<int, int>>{
             {-20, 20}, {-3, 17}, {0, 5}, {4, 4}, {-20, -1}}) {
      const auto direct = fourier::interval_projection(f, a, b);
      const auto rebuilt = fourier::apply_scalar_multiplier(
          [&](int k) {
            double v = 0.5 * sgn(k - a) - 0.5 * sgn(k - b);
            if (k == a) v += 0.5;
            if (k == b) v += 0.5;
            return cplx(v, 0.0);
          },
          f);
      double worst = 0.0;
      for (int k = -20; k <= 20; ++k)
        worst = std::max(worst, (direct.coeff(k) - rebuilt.coeff(k)).norm());
      c.close(worst, 1e-14,
              "half-weight endpoint decomposition for [" + std::to_string(a) +
                  "," + std::to_string(b) + "]");
    }
    for (int N : {0, 1, 5, 19}) {
      const auto fejer = fourier::fejer_mean(f, N);
      TrigPolynomial averaged(f.dim(), f.order());
      for (int l = 0; l <= N; ++l) {
        const auto dl = fourier::dirichlet_sum(f, l);
        for (int k = -f.order(); k <= f.order(); ++k)
          averaged.set_coeff(
              k, averaged.coeff(k) + dl.coeff(k) / double(N + 1));
      }
      double worst = 0.0;
      for (int k = -f.order(); k <= f.order(); ++k)
        worst = std::max(worst, (fejer.coeff(k) - averaged.coeff(k)).norm());
      c.close(worst, 1e-14,
              "averaged partial sums at N = " + std::to_string(N));
    }
  });

  failed += run(7, "weight classes and majorants", [](Criterion& c) {
    for (double p : {1.5, 2.0, 3.0})
      c.check(weights::ap_constant(constant_weight(1.0, 256), p).value == 1.0,
              "unit weight constant exactly 1 at p = " + fmt(p));
    const auto half = weights::ap_constant(power_weight(0.5, 256), 2.0);
    c.check(!half.growth_flag, "square-root cusp refinement-stable");
    c.close(std::abs(half.refined_value - half.value), 0.05 * half.value,
            "square-root cusp constant moves under 5% on refinement");
    c.check(weights::ap_constant(power_weight(2.0, 256), 2.0).growth_flag,
            "quadratic cusp must be growth-flagged");
    const auto phi = SpaceDescriptor::lp(2.0);
    const auto m_est =
        weights::maximal_norm_estimate(phi, weights::standard_probes(256));
    for (std::uint64_t s = 0; s < 10; ++s) {
      Rng rng(7000 + s);
      fourier::SampledFunction g(1, 256);
      for (int i = 0; i < 256; ++i)
        g.values[i] = VectorXcd::Constant(1, rng.gaussian_cplx());
      const auto rub = weights::rubio_de_francia(g, phi, m_est);
      const auto mags = g.magnitudes();
      double gap = 0.0;
      for (int i = 0; i < 256; ++i)
        gap = std::max(gap, mags[i] - rub.weight.samples[i]);
      c.close(gap, 1e-12,
              "majorant dominates pointwise, seed " + std::to_string(s));
      c.close(rub.majorization_defect, 1e-6,
              "maximal image controlled, seed " + std::to_string(s));
      c.close(rub.norm_ratio, 2.0 + 1e-9,
              "majorant norm ratio, seed " + std::to_string(s));
    }
    for (std::uint64_t s = 0; s < 10; ++s) {
      Rng rng(8000 + s);
      fourier::SampledFunction g(1, 256), h(1, 256);
      for (int i = 0; i < 256; ++i)
        g.values[i] = VectorXcd::Constant(1, rng.gaussian_cplx());
      for (int i = 0; i < 256; ++i)
        h.values[i] = VectorXcd::Constant(1, rng.gaussian_cplx());
      const auto aq = weights::build_aq_weight(g, h, 2.0, phi);
      c.close(aq.measured, 1.05 * aq.bound,
              "factored weight under its bound, seed " + std::to_string(s));
    }
  });

  failed += run(8, "torus-line transference", [](Criterion& c) {
    auto scalar_line = [](std::function<double(double)> f, std::string name) {
      return symbols::ContinuousSymbol::from_values(
          1, 1,
          [f](double t) -> MatrixXcd {
            MatrixXcd m(1, 1);
            m(0, 0) = cplx(f(t), 0.0);
            return m;
          },
          0, std::move(name));
    };
    const auto conj = symbols::ContinuousSymbol::from_values(
        1, 1,
        [](double t) -> MatrixXcd {
          MatrixXcd m(1, 1);
          m(0, 0) = cplx(0.0, -((t > 0.0) - (t < 0.0)));
          return m;
        },
        0, "i-sgn-line");
    const auto rep = weights::deleeuw_restriction_check(conj, 2.0);
    c.check(rep.pass, "conjugate-function symbol certified");
    c.close(std::abs(rep.torus_estimate - 1.0), 1e-3,
            "torus estimate near one");
    c.close(std::abs(rep.line_estimate - 1.0), 1e-3, "line estimate near one");
    const auto one =
        weights::deleeuw_restriction_check(
            scalar_line([](double) { return 1.0; }, "identity-line"), 2.0);
    c.check(one.pass, "constant symbol certified");
    const auto lp = spaces::make_littlewood_paley(4);
    const auto plateau = weights::deleeuw_restriction_check(
        scalar_line([lp](double t) { return lp.psi(t); }, "plateau"), 2.0);
    c.check(plateau.pass, "frequency-cutoff symbol certified");
  });

  failed += run(9, "characterization coherence", [](Criterion& c) {
    const auto heat = aee::characterize(heat_problem(64), 64);
    c.check(heat.mr_flag && heat.wp_flag,
            "scalar dissipative case must carry both flags");
    const auto square = aee::characterize(square_problem(3, 16), 16);
    c.check(!square.mr_flag, "perfect-square family must fail");
    const bool freqs = square.singular_ks.size() == 2 &&
                       square.singular_ks[0] == -3 &&
                       square.singular_ks[1] == 3;
    c.check(freqs, "singular frequencies must be exactly {-3, 3}");
    int hypotheses = 0, counterexamples = 0;
    for (int s = 0; s < 10; ++s) {
      const auto pb = aee::seeded_problem(300 + s, 1 + (s % 3), 32);
      const auto rep = aee::characterize(pb, 32);
      if (!(rep.mr_flag && rep.wp_flag)) continue;
      ++hypotheses;
      for (const auto* sr : {&rep.a_m, &rep.a0_m, &rep.a1_m})
        if (!std::isfinite(sr->value) || sr->growth_flag) ++counterexamples;
    }
    c.check(hypotheses >= 1, "implication battery must not be vacuous");
    c.check(counterexamples == 0,
            "no counterexample to the solution-multiplier implication");
    const auto j = serialization::characterization_json(heat);
    for (const char* key : {"r_binv", "r_kb_binv", "r_k2p_binv"})
      c.check(j.contains(key) && j[key]["proxy"] == true,
              std::string("report must mark ") + key + " as a proxy");
  });

  failed += run(10, "deterministic payloads", [](Criterion& c) {
    for (const auto& name : scenarios::scenario_names()) {
      scenarios::ExperimentConfig cfg;
      cfg.scenario = name;
      cfg.seed = 7;
      set_default_thread_count(1);
      const std::string one = scenarios::run_scenario(cfg).payload.dump();
      set_default_thread_count(4);
      const std::string four = scenarios::run_scenario(cfg).payload.dump();
      set_default_thread_count(1);
      c.check(one == four,
              name + " payload identical across thread counts");
      c.check(!one.empty(), name + " payload nonempty");
    }
  });

  std::printf("%s: %d of 10 criteria passed\n",
              failed == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL",
              10 - failed);
  return failed;
}
