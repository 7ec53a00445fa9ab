#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "torus_mreg/fourier.hpp"

using namespace torus_mreg;
using namespace torus_mreg::fourier;

namespace {

// Slow quadrature oracle: fhat(k) = (1/G) sum_g s_g e^{-ik t_g}. Independent
// of the FFT path, O(G) complex exponentials per coefficient.
VectorXcd slow_coefficient(const SampledFunction& s, int k) {
  VectorXcd acc = VectorXcd::Zero(s.dim);
  for (int g = 0; g < s.grid; ++g)
    acc += s.values[g] * std::exp(cplx(0.0, -k * s.t(g)));
  return acc / static_cast<double>(s.grid);
}

double coeff_distance(const TrigPolynomial& a, const TrigPolynomial& b) {
  REQUIRE(a.dim() == b.dim());
  const int order = std::max(a.order(), b.order());
  double d = 0.0;
  for (int k = -order; k <= order; ++k) {
    VectorXcd ca = (std::abs(k) <= a.order()) ? a.coeff(k)
                                              : VectorXcd::Zero(a.dim());
    VectorXcd cb = (std::abs(k) <= b.order()) ? b.coeff(k)
                                              : VectorXcd::Zero(b.dim());
    d = std::max(d, (ca - cb).norm());
  }
  return d;
}

TrigPolynomial unit_mode(int dim, int order, int k, int component = 0) {
  TrigPolynomial f(dim, order);
  VectorXcd x = VectorXcd::Zero(dim);
  x(component) = 1.0;
  f.set_coeff(k, x);
  return f;
}

}  // namespace

TEST_CASE("synthesize matches direct series evaluation") {
  Rng rng(11);
  const int K = 17;
  TrigPolynomial f = random_trig_polynomial(rng, 3, K);
  const int G = default_grid(K);
  SampledFunction s = synthesize(f, G);
  for (int g = 0; g < G; g += 7) {
    CHECK((s.values[g] - f.value_at(s.t(g))).norm() < 1e-11);
  }
}

TEST_CASE("analyze agrees with slow DFT quadrature and inverts synthesize") {
  Rng rng(12);
  const int K = 25;
  TrigPolynomial f = random_trig_polynomial(rng, 2, K);
  const int G = 128;
  SampledFunction s = synthesize(f, G);
  TrigPolynomial back = analyze(s, K);
  CHECK(coeff_distance(back, f) < 1e-12 * std::max(1.0, f.max_coeff_norm()));
  for (int k : {-K, -7, 0, 3, K}) {
    CHECK((slow_coefficient(s, k) - back.coeff(k)).norm() < 1e-12);
  }
}

TEST_CASE("analyze of cos recovers the two half coefficients") {
  const int G = 64;
  SampledFunction s(1, G);
  for (int g = 0; g < G; ++g) s.values[g](0) = std::cos(s.t(g));
  TrigPolynomial f = analyze(s, 4);
  CHECK(std::abs(f.coeff(1)(0) - 0.5) < 1e-14);
  CHECK(std::abs(f.coeff(-1)(0) - 0.5) < 1e-14);
  CHECK(std::abs(f.coeff(0)(0)) < 1e-14);
  CHECK(std::abs(f.coeff(2)(0)) < 1e-14);
}

TEST_CASE("Plancherel with the unnormalized measure") {
  Rng rng(13);
  const int K = 30;
  TrigPolynomial f = random_trig_polynomial(rng, 2, K);
  const int G = default_grid(K);
  SampledFunction s = synthesize(f, G);
  double quad = 0.0;
  for (int g = 0; g < G; ++g) quad += s.values[g].squaredNorm();
  quad *= kTwoPi / G;
  double series = 0.0;
  for (int k = -K; k <= K; ++k) series += f.coeff(k).squaredNorm();
  series *= kTwoPi;
  CHECK(quad == doctest::Approx(series).epsilon(1e-10));
}

TEST_CASE("scalar multiplier example i*sgn(k)") {
  TrigPolynomial f = unit_mode(1, 2, 1);
  VectorXcd x = VectorXcd::Ones(1);
  f.set_coeff(-1, x);
  TrigPolynomial g = apply_scalar_multiplier(
      [](int k) {
        const double s = (k > 0) ? 1.0 : (k < 0 ? -1.0 : 0.0);
        return cplx(0.0, s);
      },
      f);
  CHECK(std::abs(g.coeff(1)(0) - cplx(0, 1)) == 0.0);
  CHECK(std::abs(g.coeff(-1)(0) - cplx(0, -1)) == 0.0);
  CHECK(g.coeff(0)(0) == cplx(0, 0));
}

TEST_CASE("matrix multiplier changes dimension consistently") {
  Rng rng(14);
  TrigPolynomial f = random_trig_polynomial(rng, 2, 3);
  auto m = [](int k) {
    MatrixXcd a(3, 2);
    a.setZero();
    a(0, 0) = 1.0;
    a(1, 1) = cplx(0, k);
    a(2, 0) = 2.0;
    return a;
  };
  TrigPolynomial g = apply_multiplier(m, f);
  CHECK(g.dim() == 3);
  for (int k = -3; k <= 3; ++k) {
    CHECK((g.coeff(k) - m(k) * f.coeff(k)).norm() == 0.0);
  }
}

TEST_CASE("derivative is the multiplier ik") {
  TrigPolynomial f = unit_mode(2, 5, 4, 1);
  TrigPolynomial df = derivative(f);
  CHECK(df.coeff(4)(1) == cplx(0, 4));
  // cos' = -sin checked through values.
  const int G = 64;
  SampledFunction s(1, G);
  for (int g = 0; g < G; ++g) s.values[g](0) = std::cos(s.t(g));
  TrigPolynomial c = analyze(s, 2);
  SampledFunction ds = synthesize(derivative(c), G);
  for (int g = 0; g < G; g += 5)
    CHECK(std::abs(ds.values[g](0) - cplx(-std::sin(s.t(g)), 0)) < 1e-13);
}

TEST_CASE("convolution multiplies coefficients") {
  TrigPolynomial e1 = unit_mode(1, 2, 1);
  TrigPolynomial h = convolve(e1, e1);
  CHECK(std::abs(h.coeff(1)(0) - 1.0) == 0.0);
  CHECK(std::abs(h.coeff(0)(0)) == 0.0);

  Rng rng(15);
  TrigPolynomial a = random_trig_polynomial(rng, 1, 6);
  TrigPolynomial b = random_trig_polynomial(rng, 3, 6);
  TrigPolynomial ab = convolve(a, b);
  TrigPolynomial ba = convolve(b, a);
  CHECK(coeff_distance(ab, ba) == 0.0);
  for (int k = -6; k <= 6; ++k)
    CHECK((ab.coeff(k) - a.coeff(k)(0) * b.coeff(k)).norm() == 0.0);
}

TEST_CASE("Fejer mean equals the averaged Dirichlet oracle") {
  Rng rng(16);
  const int K = 12;
  TrigPolynomial f = random_trig_polynomial(rng, 2, K);
  for (int N : {0, 1, 5, 11, 20}) {
    TrigPolynomial fast = fejer_mean(f, N);
    // Oracle: sigma_N f = (1/(N+1)) sum_{l=0}^{N} S_l f.
    TrigPolynomial acc(f.dim(), f.order());
    for (int l = 0; l <= N; ++l) {
      TrigPolynomial sl = dirichlet_sum(f, l);
      for (int k = -K; k <= K; ++k)
        acc.set_coeff(k, acc.coeff(k) + sl.coeff(k));
    }
    for (int k = -K; k <= K; ++k) acc.set_coeff(k, acc.coeff(k) / (N + 1.0));
    CHECK(coeff_distance(fast, acc) < 1e-14);
  }
}

TEST_CASE("Fejer mean of order one halves the first mode") {
  TrigPolynomial f = unit_mode(3, 1, 1, 2);
  TrigPolynomial g = fejer_mean(f, 1);
  CHECK(std::abs(g.coeff(1)(2) - 0.5) == 0.0);
}

TEST_CASE("full-band projection is the identity") {
  Rng rng(17);
  const int K = 9;
  TrigPolynomial f = random_trig_polynomial(rng, 2, K);
  CHECK(coeff_distance(interval_projection(f, -K, K), f) == 0.0);
}

TEST_CASE("projection equals its sgn decomposition") {
  Rng rng(18);
  const int K = 20;
  TrigPolynomial f = random_trig_polynomial(rng, 2, K);
  auto sgn = [](int v) { return (v > 0) ? 1.0 : (v < 0 ? -1.0 : 0.0); };
  for (auto [a, b] : std::vector<std::pair<int, int>>{
           {-20, 20}, {-3, 17}, {0, 5}, {4, 4}, {-20, -1}}) {
    TrigPolynomial direct = interval_projection(f, a, b);
    // With sgn(0) = 0 the endpoint atoms carry weight one half.
    TrigPolynomial rebuilt = apply_scalar_multiplier(
        [&](int k) {
          double v = 0.5 * sgn(k - a) - 0.5 * sgn(k - b);
          if (k == a) v += 0.5;
          if (k == b) v += 0.5;
          return cplx(v, 0.0);
        },
        f);
    CHECK(coeff_distance(direct, rebuilt) < 1e-14);
  }
}

TEST_CASE("Hilbert transform basics") {
  TrigPolynomial c = unit_mode(2, 3, 0, 1);
  CHECK(hilbert_transform(c).max_coeff_norm() == 0.0);

  Rng rng(19);
  const int K = 16;
  TrigPolynomial f = random_trig_polynomial(rng, 2, K);
  f.set_coeff(0, VectorXcd::Zero(2));
  TrigPolynomial hf = hilbert_transform(f);
  double nf = 0.0, nh = 0.0;
  for (int k = -K; k <= K; ++k) {
    nf += f.coeff(k).squaredNorm();
    nh += hf.coeff(k).squaredNorm();
  }
  CHECK(std::sqrt(nh) == doctest::Approx(std::sqrt(nf)).epsilon(1e-10));

  // H^2 = -(identity minus mean) on the torus.
  TrigPolynomial g = random_trig_polynomial(rng, 1, 5);
  TrigPolynomial hh = hilbert_transform(hilbert_transform(g));
  for (int k = -5; k <= 5; ++k) {
    VectorXcd want = (k == 0) ? VectorXcd::Zero(1) : VectorXcd(-g.coeff(k));
    CHECK((hh.coeff(k) - want).norm() == 0.0);
  }
}

TEST_CASE("precondition violations throw") {
  TrigPolynomial f(1, 10);
  CHECK_THROWS_AS(synthesize(f, 16), Error);         // 16 < 2*10+2
  CHECK_THROWS_AS(synthesize(f, 24), Error);         // not a power of two
  SampledFunction s(1, 16);
  CHECK_THROWS_AS(analyze(s, 8), Error);             // 16 < 2*8+2
  CHECK_THROWS_AS(interval_projection(f, 3, 1), Error);
  auto bad = [](int) { return MatrixXcd::Identity(2, 2); };
  CHECK_THROWS_AS(apply_multiplier(bad, f), Error);  // needs 1 column
}

TEST_CASE("seeded generation is reproducible") {
  Rng a(777), b(777);
  TrigPolynomial fa = random_trig_polynomial(a, 3, 8);
  TrigPolynomial fb = random_trig_polynomial(b, 3, 8);
  CHECK(coeff_distance(fa, fb) == 0.0);
}
