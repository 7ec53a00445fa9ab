#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "torus_mreg/jodeit.hpp"

using namespace torus_mreg;
using namespace torus_mreg::jodeit;
using symbols::scalar_symbol;
using symbols::seeded_random_smooth;

TEST_CASE("base segment has the minimal Hermite degree") {
  for (int J : {3, 4, 5}) {
    auto kernel = build_kernel(J);
    CHECK(kernel.segment(0).degree() == 2 * J + 1);
    CHECK(kernel.smoothness() == J);
  }
  CHECK_THROWS_AS(build_kernel(2), Error);
}

TEST_CASE("kernel endpoint data") {
  auto kernel = build_kernel(4);
  CHECK(std::abs(kernel.value(0.0) - 1.0) < 1e-14);
  for (double t : {-1.0, 1.0, 2.0}) CHECK(std::abs(kernel.value(t)) < 1e-14);
  CHECK(std::abs(kernel.segment_value(3, 0.0)) < 1e-14);
  CHECK(kernel.segment_value(0, 0.0, 1) == doctest::Approx(1.5));
  CHECK(kernel.segment_value(0, 0.0, 2) == doctest::Approx(1.0));
  CHECK(std::abs(kernel.segment_value(0, 0.0, 3)) < 1e-12);
  CHECK(std::abs(kernel.segment_value(0, -1.0, 1)) < 1e-14);
  CHECK(std::abs(kernel.segment_value(0, -1.0, 2)) < 1e-13);
}

TEST_CASE("kernel vanishes outside its support") {
  auto kernel = build_kernel(4);
  CHECK(kernel.value(-1.5) == 0.0);
  CHECK(kernel.value(3.5) == 0.0);
  CHECK(kernel.value(5.0, 2) == 0.0);
  CHECK_THROWS_AS(kernel.value(0.5, 5), Error);
  CHECK_THROWS_AS(kernel.segment_value(4, 0.0), Error);
}

TEST_CASE("clean kernel passes all six identity rows") {
  for (int J : {3, 4, 6}) {
    auto report = verify_kernel(build_kernel(J), 4096);
    CHECK(report.lambda1_residual < 1e-10);
    CHECK(report.lambda2_residuals[0] < 1e-10);
    CHECK(report.lambda2_residuals[1] < 1e-10);
    CHECK(report.lambda3_residuals[0] < 1e-10);
    CHECK(report.lambda3_residuals[1] < 1e-10);
    CHECK(report.lambda3_residuals[2] < 1e-10);
    CHECK(report.partition_residual < 1e-10);
    CHECK(report.endpoint_value_residual < 1e-12);
    CHECK(report.pass1);
    CHECK(report.pass2);
    CHECK(report.pass3);
    for (int r = 0; r < J - 1; ++r)
      CHECK(report.junction_residuals[r] < (J <= 4 ? 1e-12 : 1e-10));
    CHECK(report.max_junction_residual < 1e-10);
  }
}

TEST_CASE("corrupted base breaks the identities across segments") {
  auto report = verify_kernel(build_corrupted_kernel(4), 4096);
  CHECK(report.lambda1_residual > 1e-2);
  CHECK_FALSE(report.pass1);
  CHECK_FALSE(report.pass2);
  CHECK_FALSE(report.pass3);
}

TEST_CASE("identity implications hold across the whole battery") {
  // The rows are differentially linked: d/du of each identity is a
  // combination of the next one's rows, so a kernel cannot pass a later
  // stage while failing an earlier one.
  std::vector<KernelReport> reports;
  for (int J : {3, 4, 5, 6}) reports.push_back(verify_kernel(build_kernel(J), 512));
  reports.push_back(verify_kernel(build_corrupted_kernel(4), 512));
  reports.push_back(verify_kernel(build_corrupted_kernel(5), 512));
  for (const auto& r : reports) {
    const bool skips_second = r.pass3 && !r.pass2;
    const bool skips_first = r.pass2 && !r.pass1;
    CHECK_FALSE(skips_second);
    CHECK_FALSE(skips_first);
  }
}

TEST_CASE("translates partition unity, so constants extend to constants") {
  auto kernel = build_kernel(4);
  auto id = symbols::identity_symbol(2);
  Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const double t = rng.uniform(-20.0, 20.0);
    const MatrixXcd e = extend_symbol_at(kernel, id, t);
    CHECK((e - MatrixXcd::Identity(2, 2)).norm() < 1e-12);
  }
}

TEST_CASE("extension interpolates the symbol at the integers") {
  auto kernel = build_kernel(4);
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    auto m = seeded_random_smooth(seed, 3, 3);
    for (int k = -64; k <= 64; k += 13) {
      const MatrixXcd e = extend_symbol_at(kernel, m, static_cast<double>(k));
      CHECK((e - m.value(k)).norm() < 1e-12);
    }
  }
}

TEST_CASE("extension is the visible four-term sum") {
  auto kernel = build_kernel(4);
  auto m = scalar_symbol(
      [](int k) { return cplx(1.0 / (1.0 + k * k), 0.0); }, "bump");
  const double t = 0.5;
  cplx expected = 0.0;
  for (int n : {-2, -1, 0, 1})
    expected += kernel.value(t - n) * (1.0 / (1.0 + n * n));
  const MatrixXcd e = extend_symbol_at(kernel, m, t);
  CHECK(std::abs(e(0, 0) - expected) < 1e-15);
}

TEST_CASE("extension as a continuous symbol differentiates the kernel") {
  auto kernel = build_kernel(4);
  auto m = seeded_random_smooth(5, 2, 2);
  auto ext = extend_symbol(kernel, m, 3);
  CHECK(ext.analytic());
  CHECK(ext.gamma_max() == 3);
  // Finite differences of the extension values must reproduce the analytic
  // kernel-derivative ladder wherever the kernel pieces are smooth.
  auto values_only = symbols::ContinuousSymbol::from_values(
      2, 2, [&](double t) { return extend_symbol_at(kernel, m, t); }, 3,
      "fd probe");
  for (double t : {-2.3, -0.45, 0.37, 1.6, 3.2}) {
    CHECK((ext.derivative(t, 1) - values_only.derivative(t, 1)).norm() < 1e-7);
    CHECK((ext.derivative(t, 2) - values_only.derivative(t, 2)).norm() < 1e-4);
  }
  CHECK_THROWS_AS(extend_symbol(kernel, m, 5), Error);
}

TEST_CASE("extension demands the symbol only where the kernel lives") {
  auto kernel = build_kernel(4);
  auto smooth = seeded_random_smooth(2, 2, 2);
  std::vector<MatrixXcd> values;
  for (int k = -2; k <= 2; ++k) values.push_back(smooth.value(k));
  auto table = symbols::OperatorSymbol::from_table(-2, values);
  CHECK_NOTHROW(extend_symbol_at(kernel, table, 2.0));
  CHECK_NOTHROW(extend_symbol_at(kernel, table, 1.3));
  CHECK_THROWS_AS(extend_symbol_at(kernel, table, 2.5), Error);
  CHECK_THROWS_AS(extend_symbol_at(kernel, table, -2.5), Error);
}

TEST_CASE("piecewise-affine baseline linearly interpolates") {
  auto delta = piecewise_affine_delta();
  CHECK(delta.value(0.0) == 1.0);
  CHECK(delta.value(1.0) == 0.0);
  auto m = seeded_random_smooth(8, 2, 2);
  for (int k = -5; k <= 5; ++k) {
    CHECK((extend_symbol_at(delta, m, static_cast<double>(k)) - m.value(k))
              .norm() < 1e-15);
    const MatrixXcd mid = extend_symbol_at(delta, m, k + 0.5);
    CHECK((mid - 0.5 * (m.value(k) + m.value(k + 1))).norm() < 1e-15);
  }
}

TEST_CASE("de la Vallee Poussin baseline has a unit plateau") {
  auto v = de_la_vallee_poussin_kernel();
  CHECK(v.value(0.0) == doctest::Approx(1.0));
  CHECK(v.value(0.2) == doctest::Approx(1.0));
  CHECK(v.value(0.3) == doctest::Approx(0.8));
  CHECK(v.value(0.5) == 0.0);
  auto m = seeded_random_smooth(8, 2, 2);
  for (int k = -3; k <= 3; ++k)
    CHECK((extend_symbol_at(v, m, static_cast<double>(k)) - m.value(k)).norm() <
          1e-15);
  CHECK((extend_symbol_at(v, m, 1.2) - m.value(1)).norm() < 1e-15);
}

TEST_CASE("smooth extension keeps third-order seminorms stable under refinement") {
  auto kernel = build_kernel(4);
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    auto m = seeded_random_smooth(seed, 2, 2);
    auto ext = extend_symbol(kernel, m, 3);
    auto coarse = symbols::continuous_m_seminorm(ext, 3, 32.0, 2049);
    auto fine = symbols::continuous_m_seminorm(ext, 3, 32.0, 4097);
    auto wide = symbols::continuous_m_seminorm(ext, 3, 64.0, 4097);
    CHECK(fine.value == doctest::Approx(coarse.value).epsilon(0.10));
    CHECK(wide.value == doctest::Approx(fine.value).epsilon(0.10));
    CHECK_FALSE(fine.growth_flag);
  }
}

TEST_CASE("affine baseline extension blows up at third order") {
  auto delta = piecewise_affine_delta();
  int failures = 0;
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    auto m = seeded_random_smooth(seed, 2, 2);
    auto ext = extend_symbol(delta, m, 3);
    auto coarse = symbols::continuous_m_seminorm(ext, 3, 32.0, 2049);
    auto fine = symbols::continuous_m_seminorm(ext, 3, 32.0, 4097);
    if (fine.value > 1.5 * coarse.value) ++failures;
  }
  CHECK(failures >= 1);
}

TEST_CASE("kernel csv export carries the derivative columns") {
  auto kernel = build_kernel(4);
  const std::string csv = kernel_csv(kernel, 11);
  CHECK(csv.rfind("t,lambda,dlambda,d2lambda,d3lambda\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 12);
  CHECK_THROWS_AS(kernel_csv(kernel, 1), Error);
}
