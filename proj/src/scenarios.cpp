#include "torus_mreg/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <utility>
#include <vector>

#include "torus_mreg/serialization.hpp"

namespace torus_mreg::scenarios {

namespace {

using json = nlohmann::json;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using fourier::SampledFunction;
using fourier::TrigPolynomial;
using spaces::SpaceDescriptor;
using symbols::OperatorSymbol;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string cell(double v) { return fmt(v); }
std::string cell(int v) { return std::to_string(v); }

CsvTable make_table(std::string name, const std::vector<std::string>& header,
                    const std::vector<std::vector<std::string>>& rows) {
  std::string text;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) text += ',';
    text += header[i];
  }
  text += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) text += ',';
      text += row[i];
    }
    text += '\n';
  }
  return CsvTable{std::move(name), std::move(text)};
}

// Accumulates named checks; numeric checks pass when value <= bound.
struct CheckSet {
  json arr = json::array();
  std::vector<std::string> findings;
  bool all = true;

  void numeric(const std::string& name, double value, double bound) {
    const bool ok = value <= bound;
    arr.push_back(
        {{"name", name}, {"value", value}, {"bound", bound}, {"pass", ok}});
    if (!ok) {
      all = false;
      findings.push_back(name + ": value " + fmt(value) + " exceeds bound " +
                         fmt(bound));
    }
  }

  void flag(const std::string& name, bool ok, const std::string& why_failed) {
    arr.push_back({{"name", name}, {"pass", ok}});
    if (!ok) {
      all = false;
      findings.push_back(name + ": " + why_failed);
    }
  }
};

ScenarioReport finish(const ExperimentConfig& cfg, json result,
                      CheckSet checks, std::vector<CsvTable> tables) {
  ScenarioReport rep;
  rep.pass = checks.all;
  rep.findings = std::move(checks.findings);
  rep.tables = std::move(tables);
  rep.payload = {{"scenario", cfg.scenario}, {"seed", cfg.seed},
                 {"params", cfg.params},     {"checks", std::move(checks.arr)},
                 {"findings", rep.findings}, {"pass", rep.pass},
                 {"result", std::move(result)}};
  return rep;
}

[[noreturn]] void bad_param(const std::string& path, const std::string& what) {
  throw Error(path + ": " + what);
}

int p_int(const json& P, const char* key, int fallback) {
  if (!P.is_object() || !P.contains(key)) return fallback;
  const json& v = P[key];
  if (!v.is_number_integer())
    bad_param(std::string("config.params.") + key, "expected an integer");
  return v.get<int>();
}

double p_num(const json& P, const char* key, double fallback) {
  if (!P.is_object() || !P.contains(key)) return fallback;
  const json& v = P[key];
  if (!v.is_number())
    bad_param(std::string("config.params.") + key, "expected a number");
  return v.get<double>();
}

bool p_bool(const json& P, const char* key, bool fallback) {
  if (!P.is_object() || !P.contains(key)) return fallback;
  const json& v = P[key];
  if (!v.is_boolean())
    bad_param(std::string("config.params.") + key, "expected a boolean");
  return v.get<bool>();
}

std::string p_str(const json& P, const char* key, const std::string& fallback) {
  if (!P.is_object() || !P.contains(key)) return fallback;
  const json& v = P[key];
  if (!v.is_string())
    bad_param(std::string("config.params.") + key, "expected a string");
  return v.get<std::string>();
}

// Exponent parameters admit "inf".
double p_exponent(const json& P, const char* key, double fallback) {
  if (!P.is_object() || !P.contains(key)) return fallback;
  const json& v = P[key];
  if (v.is_string() && v.get<std::string>() == "inf") return spaces::kInf;
  if (v.is_number()) return v.get<double>();
  bad_param(std::string("config.params.") + key,
            "expected a number or \"inf\"");
}

double tol_or(const ExperimentConfig& cfg, const char* key, double fallback) {
  if (!cfg.tolerances.is_object() || !cfg.tolerances.contains(key))
    return fallback;
  const json& v = cfg.tolerances[key];
  if (!v.is_number())
    bad_param(std::string("config.tolerances.") + key, "expected a number");
  return v.get<double>();
}

SpaceDescriptor space_param(const json& P, const char* key,
                            const SpaceDescriptor& fallback) {
  if (!P.is_object() || !P.contains(key)) return fallback;
  return serialization::space_from_json(P[key],
                                        std::string("config.params.") + key);
}

OperatorSymbol symbol_param(const json& P, const char* key,
                            const json& fallback_json) {
  const json& chosen =
      (P.is_object() && P.contains(key)) ? P[key] : fallback_json;
  return serialization::symbol_from_json(chosen,
                                         std::string("config.params.") + key);
}

json scalar_heat_problem(int K) {
  json j = json::parse(
      R"({"dim":1,"P":[[[0,0]]],"B":[[[1,0]]],"A":[[[1,0]]]})");
  j["K"] = K;
  return j;
}

VectorXcd unit_vector(int dim) {
  VectorXcd v = VectorXcd::Zero(dim);
  v(0) = 1.0;
  return v;
}

SampledFunction seeded_samples(Rng& rng, int grid) {
  SampledFunction g(1, grid);
  for (int i = 0; i < grid; ++i)
    g.values[i] = VectorXcd::Constant(1, rng.gaussian_cplx());
  return g;
}

// ---------------------------------------------------------------- scenarios

ScenarioReport run_jodeit_verify(const ExperimentConfig& cfg) {
  const json& P = cfg.params;
  const int smoothness = p_int(P, "smoothness", 4);
  const int grid = p_int(P, "grid", 4096);
  const bool corrupted = p_bool(P, "corrupted", false);
  const double recovery_tol = tol_or(cfg, "recovery", 1e-8);
  const double structure_tol = tol_or(cfg, "structure", 1e-10);

  const auto kernel = corrupted ? jodeit::build_corrupted_kernel(smoothness)
                                : jodeit::build_kernel(smoothness);
  const auto rep = jodeit::verify_kernel(kernel, grid, recovery_tol);

  CheckSet checks;
  checks.numeric("first-derivative-recovery", rep.lambda1_residual,
                 recovery_tol);
  checks.numeric(
      "second-derivative-recovery",
      std::max(rep.lambda2_residuals[0], rep.lambda2_residuals[1]),
      recovery_tol);
  checks.numeric("third-derivative-recovery",
                 std::max({rep.lambda3_residuals[0], rep.lambda3_residuals[1],
                           rep.lambda3_residuals[2]}),
                 recovery_tol);
  checks.numeric("partition-of-unity", rep.partition_residual, structure_tol);
  checks.numeric("junction-smoothness", rep.max_junction_residual,
                 structure_tol);
  checks.numeric("endpoint-values", rep.endpoint_value_residual,
                 structure_tol);

  std::vector<CsvTable> tables;
  tables.push_back(CsvTable{"kernel", jodeit::kernel_csv(kernel, 512)});
  return finish(cfg, serialization::kernel_report_json(rep), std::move(checks),
                std::move(tables));
}

ScenarioReport run_symbol_check(const ExperimentConfig& cfg) {
  const json& P = cfg.params;
  const auto m = symbol_param(P, "symbol", json{{"kind", "i-sgn"}});
  const int window = p_int(P, "window", 256);
  if (window < 4) bad_param("config.params.window", "must be at least 4");

  const auto rep = symbols::condition_report(m, window);
  std::vector<MatrixXcd> family;
  family.reserve(2 * window + 1);
  for (int k = -window; k <= window; ++k) family.push_back(m.value(k));
  const auto proxy = symbols::r_bounded_proxy(family);

  CheckSet checks;
  checks.flag("first-order-window-stable", !rep.gamma1.growth_flag,
              "order-1 sup grew past the half window");
  checks.flag("second-order-window-stable", !rep.gamma2.growth_flag,
              "order-2 sup grew past the half window");
  checks.flag("third-order-window-stable", !rep.gamma3.growth_flag,
              "order-3 sup grew past the half window");
  checks.flag("dyadic-variation-stable", !rep.var.growth_flag,
              "dyadic variation sums grew with the block index");

  json result = serialization::condition_json(rep);
  result["family"] = m.family();
  result["r_proxy"] = {{"value", proxy.value}, {"proxy", proxy.proxy}};

  std::vector<std::vector<std::string>> order_rows;
  for (const auto* sr : {&rep.gamma1, &rep.gamma2, &rep.gamma3})
    for (const auto& o : sr->orders)
      order_rows.push_back({cell(sr->gamma), cell(o.l), cell(o.sup_half),
                            cell(o.sup_full), cell(o.argmax_k),
                            cell(o.growth ? 1 : 0)});
  std::vector<std::vector<std::string>> block_rows;
  for (std::size_t jdx = 0; jdx < rep.var.block_sums.size(); ++jdx)
    block_rows.push_back(
        {cell(static_cast<int>(jdx)), cell(rep.var.block_sums[jdx])});

  std::vector<CsvTable> tables;
  tables.push_back(make_table(
      "orders", {"gamma", "l", "sup_half", "sup_full", "argmax_k", "growth"},
      order_rows));
  tables.push_back(make_table("variation-blocks", {"j", "block_sum"},
                              block_rows));
  return finish(cfg, std::move(result), std::move(checks), std::move(tables));
}

ScenarioReport run_besov_norm(const ExperimentConfig& cfg) {
  const json& P = cfg.params;
  const std::string kind = p_str(P, "kind", "besov");
  if (kind != "besov" && kind != "triebel-lizorkin")
    bad_param("config.params.kind",
              "expected \"besov\" or \"triebel-lizorkin\"");
  const double s = p_num(P, "s", 0.5);
  const double q = p_exponent(P, "q", 2.0);
  const int J = p_int(P, "smoothness", 4);
  const auto base = space_param(P, "base", SpaceDescriptor::lp(2.0));
  const auto space = kind == "besov"
                         ? spaces::SmoothnessSpace::besov(s, q, base, J)
                         : spaces::SmoothnessSpace::triebel_lizorkin(s, q,
                                                                     base, J);

  TrigPolynomial f = [&] {
    if (P.is_object() && P.contains("f"))
      return serialization::poly_from_json(P["f"], "config.params.f");
    Rng rng(cfg.seed);
    return fourier::random_trig_polynomial(
        rng, p_int(P, "dim", 1), p_int(P, "order", 32), [](int k) {
          return 1.0 / std::sqrt(1.0 + static_cast<double>(k) * k);
        });
  }();

  auto norm_of = [&](const TrigPolynomial& g) {
    return kind == "besov" ? spaces::besov_norm(g, space)
                           : spaces::triebel_lizorkin_norm(g, space);
  };

  CheckSet checks;
  json result;
  result["kind"] = kind;
  result["s"] = s;
  result["q"] = q == spaces::kInf ? json("inf") : json(q);
  result["base"] = serialization::space_json(base);
  const double primary = norm_of(f);
  result["norm"] = primary;

  // The two scales agree when the integrability and summability exponents
  // coincide on an unweighted base.
  if (base.kind == SpaceDescriptor::Kind::Lp && !base.weight &&
      q != spaces::kInf && base.p == q) {
    const double b = spaces::besov_norm(
        f, spaces::SmoothnessSpace::besov(s, q, base, J));
    const double t = spaces::triebel_lizorkin_norm(
        f, spaces::SmoothnessSpace::triebel_lizorkin(s, q, base, J));
    checks.numeric("scales-agree-on-matching-exponent", std::abs(b - t),
                   tol_or(cfg, "scale_agreement", 1e-9) * std::max(1.0, b));
    result["besov_value"] = b;
    result["triebel_lizorkin_value"] = t;
  }

  // Single-frequency closed form: block weights from psi_j, measure factor
  // from the base norm of a unimodular function.
  const auto lp = spaces::make_littlewood_paley(J);
  TrigPolynomial mode(f.dim(), 3);
  mode.set_coeff(3, unit_vector(f.dim()));
  const double measured = norm_of(mode);
  double block_factor = 0.0;
  for (int j = 0; j <= spaces::max_block_index(3); ++j) {
    const double wj = std::pow(2.0, s * j) * lp.psi_j(j, 3.0);
    if (q == spaces::kInf)
      block_factor = std::max(block_factor, wj);
    else
      block_factor += std::pow(wj, q);
  }
  if (q != spaces::kInf) block_factor = std::pow(block_factor, 1.0 / q);
  TrigPolynomial constant_mode(f.dim(), 0);
  constant_mode.set_coeff(0, unit_vector(f.dim()));
  const double closed = block_factor * spaces::phi_norm(constant_mode, base);
  checks.numeric("single-frequency-closed-form", std::abs(measured - closed),
                 tol_or(cfg, "closed_form", 1e-9) * std::max(1.0, closed));
  result["single_frequency"] = {{"measured", measured},
                                {"closed_form", closed}};

  // Derivative equivalence on the mean-zero part.
  TrigPolynomial f0 = f;
  f0.set_coeff(0, VectorXcd::Zero(f.dim()));
  if (f0.max_coeff_norm() > 0.0) {
    const double ratio = spaces::derivative_equivalence_ratio(f0, space);
    checks.flag("derivative-ratio-finite",
                std::isfinite(ratio) && ratio > 0.0,
                "derivative norm ratio degenerate");
    result["derivative_ratio"] = ratio;
  }

  std::vector<std::vector<std::string>> rows;
  for (int j = 0; j <= spaces::max_block_index(f.order()); ++j) {
    const double nb = std::pow(2.0, s * j) *
                      spaces::phi_norm(spaces::dyadic_block(f, j, lp), base);
    rows.push_back({cell(j), cell(nb)});
  }
  std::vector<CsvTable> tables;
  tables.push_back(make_table("blocks", {"j", "weighted_block_norm"}, rows));
  return finish(cfg, std::move(result), std::move(checks), std::move(tables));
}

ScenarioReport run_multiplier_bound(const ExperimentConfig& cfg) {
  const json& P = cfg.params;
  const auto m = symbol_param(P, "symbol", json{{"kind", "i-sgn"}});
  const int K = p_int(P, "window", 64);
  if (K < 8) bad_param("config.params.window", "must be at least 8");
  const auto phi = space_param(P, "space", SpaceDescriptor::lp(2.0));
  const int J = p_int(P, "smoothness", 4);
  const int probes = p_int(P, "probes", 6);
  if (probes < 1) bad_param("config.params.probes", "must be positive");

  std::vector<MatrixXcd> tab;
  tab.reserve(2 * K + 1);
  for (int k = -K; k <= K; ++k) tab.push_back(m.value(k));
  const auto table_sym =
      OperatorSymbol::from_table(-K, std::move(tab), m.family());

  int j_cap = -1;
  while ((1 << (j_cap + 2)) + 3 <= K) ++j_cap;
  const int j_max = std::min(p_int(P, "j_max", j_cap), j_cap);

  const auto lp = spaces::make_littlewood_paley(J);
  const int grid = phi.weight ? phi.weight->grid() : 256;
  const auto m_est =
      weights::maximal_norm_estimate(phi, weights::standard_probes(grid));
  const auto kernel = jodeit::build_kernel(3);
  const auto ext = jodeit::extend_symbol(kernel, table_sym, 3);

  CheckSet checks;
  json block_rows = json::array();
  std::vector<std::vector<std::string>> csv_rows;
  for (int j = 0; j <= j_max; ++j) {
    const auto bound = symbols::dyadic_operator_norm_bound(ext, j, lp,
                                                           m_est.value);
    const int lo = (j == 0) ? 0 : (1 << (j - 1));
    const int hi = std::min(1 << (j + 1), K);
    Rng rng(cfg.seed + 7919ull * static_cast<std::uint64_t>(j) + 13);
    double lower = 0.0;
    for (int p = 0; p < probes; ++p) {
      TrigPolynomial fp(m.in_dim(), hi);
      for (int k = lo; k <= hi; ++k) {
        VectorXcd plus(m.in_dim()), minus(m.in_dim());
        for (int r = 0; r < m.in_dim(); ++r) plus(r) = rng.gaussian_cplx();
        for (int r = 0; r < m.in_dim(); ++r) minus(r) = rng.gaussian_cplx();
        fp.set_coeff(k, plus);
        if (k > 0) fp.set_coeff(-k, minus);
      }
      const auto img = spaces::dyadic_block(table_sym.apply(fp), j, lp);
      const double nf = spaces::phi_norm(fp, phi);
      if (nf > 0.0)
        lower = std::max(lower, spaces::phi_norm(img, phi) / nf);
    }
    checks.numeric("block-" + std::to_string(j) + "-bracket", lower,
                   bound.bound + 1e-9);
    block_rows.push_back({{"j", j},
                          {"lower", lower},
                          {"upper", bound.bound},
                          {"l1_majorant", bound.l1_majorant},
                          {"tail_fraction", bound.tail_fraction}});
    csv_rows.push_back({cell(j), cell(lower), cell(bound.bound),
                        cell(bound.l1_majorant), cell(bound.tail_fraction)});
  }

  json result = {{"family", m.family()},
                 {"window", K},
                 {"maximal", serialization::maximal_estimate_json(m_est)},
                 {"blocks", std::move(block_rows)}};
  std::vector<CsvTable> tables;
  tables.push_back(make_table(
      "blocks", {"j", "lower", "upper", "l1_majorant", "tail_fraction"},
      csv_rows));
  return finish(cfg, std::move(result), std::move(checks), std::move(tables));
}

ScenarioReport run_weights_lab(const ExperimentConfig& cfg) {
  const json& P = cfg.params;
  const double alpha = p_num(P, "alpha", 0.5);
  const double p = p_num(P, "p", 2.0);
  const double q = p_num(P, "q", 2.0);
  const int grid = p_int(P, "grid", 256);

  CheckSet checks;
  const auto cst = weights::ap_constant(constant_weight(1.0, grid), p);
  checks.flag("constant-weight-exact", cst.value == 1.0,
              "grid constant of the unit weight must equal 1 exactly");

  const auto ap = weights::ap_constant(power_weight(alpha, grid), p);
  checks.numeric("power-weight-holder-floor", 1.0 - ap.value, 1e-12);
  checks.flag("power-weight-refinement-stable", !ap.growth_flag,
              "doubling the grid grew the measured constant");

  const auto phi = SpaceDescriptor::lp(p);
  const auto m_est =
      weights::maximal_norm_estimate(phi, weights::standard_probes(grid));

  Rng rng(cfg.seed + 17);
  const auto g = seeded_samples(rng, grid);
  const auto rub = weights::rubio_de_francia(g, phi, m_est);
  checks.numeric("majorant-series-defect", rub.majorization_defect,
                 tol_or(cfg, "majorization", 1e-6));
  checks.numeric("majorant-norm-ratio", rub.norm_ratio, 2.0 + 1e-9);
  double worst_gap = 0.0;
  const auto mags = g.magnitudes();
  for (int i = 0; i < grid; ++i)
    worst_gap = std::max(worst_gap, mags[i] - rub.weight.samples[i]);
  checks.numeric("majorant-dominates", worst_gap, 1e-12);

  const auto g2 = seeded_samples(rng, grid);
  const auto h2 = seeded_samples(rng, grid);
  const auto aq = weights::build_aq_weight(g2, h2, q, phi);
  checks.numeric("factored-weight-bound", aq.measured, 1.05 * aq.bound);

  json result = {{"constant", serialization::ap_json(cst)},
                 {"power", serialization::ap_json(ap)},
                 {"maximal", serialization::maximal_estimate_json(m_est)},
                 {"majorant", serialization::rubio_json(rub)},
                 {"factored", serialization::aq_json(aq)}};

  const auto pw = power_weight(alpha, grid);
  std::vector<std::vector<std::string>> wrows;
  for (int i = 0; i < grid; ++i)
    wrows.push_back({cell(i), cell(-kPi + kTwoPi * i / grid),
                     cell(pw.samples[i])});
  std::vector<std::vector<std::string>> mrows;
  for (int i = 0; i < grid; ++i)
    mrows.push_back({cell(i), cell(mags[i]), cell(rub.weight.samples[i])});
  std::vector<CsvTable> tables;
  tables.push_back(make_table("power-weight", {"g", "t", "w"}, wrows));
  tables.push_back(make_table("majorant", {"g", "abs_g", "w"}, mrows));
  return finish(cfg, std::move(result), std::move(checks), std::move(tables));
}

ScenarioReport run_extrapolate(const ExperimentConfig& cfg) {
  const json& P = cfg.params;
  const auto m = symbol_param(P, "symbol", json{{"kind", "i-sgn"}});
  const double p0 = p_num(P, "p0", 2.0);
  const int pairs = p_int(P, "pairs", 3);
  const int grid = p_int(P, "grid", 256);
  const int order = p_int(P, "order", 24);
  const int probes = p_int(P, "probes", 4);
  const double factor = p_num(P, "factor", 4.0);
  std::vector<double> targets = {1.5, 3.0};
  if (P.is_object() && P.contains("targets")) {
    const json& t = P["targets"];
    if (!t.is_array() || t.empty())
      bad_param("config.params.targets", "expected a nonempty array");
    targets.clear();
    for (const json& v : t) {
      if (!v.is_number())
        bad_param("config.params.targets", "expected numbers");
      targets.push_back(v.get<double>());
    }
  }

  auto probe_norm = [&](const SpaceDescriptor& phi, std::uint64_t seed) {
    double best = 0.0;
    for (int k : {1, -1, 2, -2, 4, -4, 8, -8, 16, -16}) {
      Eigen::JacobiSVD<MatrixXcd> svd(m.value(k), Eigen::ComputeThinV);
      TrigPolynomial mode(m.in_dim(), std::abs(k));
      mode.set_coeff(k, svd.matrixV().col(0));
      const double nf = spaces::phi_norm(mode, phi);
      if (nf > 0.0)
        best = std::max(best, spaces::phi_norm(m.apply(mode), phi) / nf);
    }
    Rng rng(seed);
    for (int i = 0; i < probes; ++i) {
      const auto f = fourier::random_trig_polynomial(
          rng, m.in_dim(), order, [](int k) {
            return 1.0 / std::sqrt(1.0 + static_cast<double>(k) * k);
          });
      const double nf = spaces::phi_norm(f, phi);
      if (nf > 0.0)
        best = std::max(best, spaces::phi_norm(m.apply(f), phi) / nf);
    }
    return best;
  };

  CheckSet checks;
  double battery_sup = 0.0;
  json battery = json::array();
  std::vector<std::vector<std::string>> battery_rows;
  for (int i = 0; i < pairs; ++i) {
    Rng rng(cfg.seed + 1000 + static_cast<std::uint64_t>(i));
    const auto g = seeded_samples(rng, grid);
    const auto h = seeded_samples(rng, grid);
    const auto aq = weights::build_aq_weight(g, h, p0,
                                             SpaceDescriptor::lp(p0));
    const auto phi_w = SpaceDescriptor::weighted_lp(p0, aq.weight);
    const double val =
        probe_norm(phi_w, cfg.seed + 300 + static_cast<std::uint64_t>(i));
    battery_sup = std::max(battery_sup, val);
    battery.push_back({{"a_q_measured", aq.measured},
                       {"a_q_bound", aq.bound},
                       {"norm", val}});
    battery_rows.push_back(
        {cell(i), cell(aq.measured), cell(aq.bound), cell(val)});
  }
  checks.flag("weighted-battery-finite",
              std::isfinite(battery_sup) && battery_sup > 0.0,
              "weighted probe battery degenerate");

  json target_rows = json::array();
  std::vector<std::vector<std::string>> target_csv;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const double pt = targets[i];
    const double val = probe_norm(SpaceDescriptor::lp(pt),
                                  cfg.seed + 500 + static_cast<std::uint64_t>(i));
    char name[64];
    std::snprintf(name, sizeof name, "target-p-%g-bounded", pt);
    checks.numeric(name, val, factor * std::max(battery_sup, 1e-12));
    target_rows.push_back({{"p", pt}, {"norm", val}});
    target_csv.push_back({cell(pt), cell(val)});
  }

  json result = {{"family", m.family()},
                 {"p0", p0},
                 {"battery", std::move(battery)},
                 {"battery_sup", battery_sup},
                 {"factor", factor},
                 {"targets", std::move(target_rows)}};
  std::vector<CsvTable> tables;
  tables.push_back(make_table(
      "battery", {"pair", "a_q_measured", "a_q_bound", "norm"}, battery_rows));
  tables.push_back(make_table("targets", {"p", "norm"}, target_csv));
  return finish(cfg, std::move(result), std::move(checks), std::move(tables));
}

ScenarioReport run_deleeuw(const ExperimentConfig& cfg) {
  const json& P = cfg.params;
  const std::string family = p_str(P, "family", "i-sgn-line");
  const double p = p_num(P, "p", 2.0);
  std::optional<Weight> w;
  if (P.is_object() && P.contains("weight"))
    w = serialization::weight_from_json(P["weight"], "config.params.weight");

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

  symbols::ContinuousSymbol m = [&] {
    if (family == "i-sgn-line")
      return symbols::ContinuousSymbol::from_values(
          1, 1,
          [](double t) -> MatrixXcd {
            MatrixXcd v(1, 1);
            v(0, 0) = cplx(0.0, -((t > 0.0) - (t < 0.0)));
            return v;
          },
          0, "i-sgn-line");
    if (family == "identity-line")
      return scalar_line([](double) { return 1.0; }, "identity-line");
    if (family == "plateau") {
      const auto lp = spaces::make_littlewood_paley(4);
      return scalar_line([lp](double t) { return lp.psi(t); }, "plateau");
    }
    bad_param("config.params.family",
              "expected i-sgn-line, identity-line, or plateau");
  }();

  const auto rep = weights::deleeuw_restriction_check(m, p, w);
  CheckSet checks;
  checks.flag("restriction-dominated-by-line", rep.pass,
              "torus estimate exceeds 1.05 x the line estimate");
  checks.numeric("window-tail-fraction", rep.tail_fraction, 0.01 + 1e-12);
  return finish(cfg, serialization::deleeuw_json(rep), std::move(checks), {});
}

ScenarioReport run_aee_solve(const ExperimentConfig& cfg) {
  const json& P = cfg.params;
  const json problem_json =
      (P.is_object() && P.contains("problem")) ? P["problem"]
                                               : scalar_heat_problem(16);
  const auto pb =
      serialization::problem_from_json(problem_json, "config.params.problem");

  TrigPolynomial f = [&] {
    if (P.is_object() && P.contains("f"))
      return serialization::poly_from_json(P["f"], "config.params.f");
    if (P.is_object() && P.contains("random_order")) {
      Rng rng(cfg.seed);
      return fourier::random_trig_polynomial(
          rng, pb.dim, std::min(p_int(P, "random_order", pb.K), pb.K),
          [](int k) { return 1.0 / (1.0 + static_cast<double>(k) * k); });
    }
    TrigPolynomial g(pb.dim, 1);
    g.set_coeff(0, unit_vector(pb.dim));
    g.set_coeff(1, unit_vector(pb.dim));
    return g;
  }();

  const auto u = aee::solve(pb, f);
  const auto rep = aee::residual(pb, u, f);
  const double tol = tol_or(cfg, "residual_rel", 1e-9);

  CheckSet checks;
  checks.numeric("solve-residual", rep.value, tol * rep.scale + 1e-30);

  json result = {{"residual", serialization::residual_json(rep)},
                 {"u", serialization::poly_json(u)}};
  std::vector<std::vector<std::string>> rows;
  for (int k = -u.order(); k <= u.order(); ++k) {
    const VectorXcd fk = (k >= -f.order() && k <= f.order())
                             ? f.coeff(k)
                             : VectorXcd::Zero(pb.dim).eval();
    const double defect = (assemble_b(pb, k) * u.coeff(k) - fk).norm();
    rows.push_back(
        {cell(k), cell(fk.norm()), cell(u.coeff(k).norm()), cell(defect)});
  }
  std::vector<CsvTable> tables;
  tables.push_back(
      make_table("solution", {"k", "f_norm", "u_norm", "defect"}, rows));
  return finish(cfg, std::move(result), std::move(checks), std::move(tables));
}

ScenarioReport run_aee_characterize(const ExperimentConfig& cfg) {
  const json& P = cfg.params;
  const json problem_json =
      (P.is_object() && P.contains("problem")) ? P["problem"]
                                               : scalar_heat_problem(64);
  const auto pb =
      serialization::problem_from_json(problem_json, "config.params.problem");
  const int window = std::min(p_int(P, "window", pb.K), pb.K);
  const int gamma = p_int(P, "gamma", 2);

  const auto rep = aee::characterize(pb, window);

  CheckSet checks;
  checks.flag("every-frequency-invertible", rep.singular_ks.empty(),
              "singular symbol values on the window");
  checks.flag("resolvent-family-bounded", !rep.binv.growth,
              "sup of the inverse family grew past the half window");
  checks.flag("first-derivative-channel-bounded", !rep.kb_binv.growth,
              "sup of the kB-inverse family grew past the half window");
  checks.flag("second-derivative-channel-bounded", !rep.k2p_binv.growth,
              "sup of the k^2 P-inverse family grew past the half window");
  checks.flag("derivative-family-bounded", !rep.k_binv.growth,
              "sup of the k-inverse family grew past the half window");

  json result = serialization::characterization_json(rep);
  if (gamma >= 3 && rep.singular_ks.empty()) {
    const auto sym = aee::solution_symbols(pb);
    result["a_condition"] = serialization::condition_json(
        symbols::condition_report(sym.a, window));
  }

  std::vector<std::vector<std::string>> rows;
  for (int k = -window; k <= window; ++k) {
    const auto inv = aee::try_invert(assemble_b(pb, k));
    if (!inv) continue;
    const double kk = std::abs(static_cast<double>(k));
    const double nb = symbols::operator_norm(*inv);
    rows.push_back({cell(k), cell(nb),
                    cell(kk * symbols::operator_norm(pb.B * *inv)),
                    cell(kk * kk * symbols::operator_norm(pb.P * *inv)),
                    cell(kk * nb)});
  }
  std::vector<CsvTable> tables;
  tables.push_back(make_table(
      "families", {"k", "binv", "kb_binv", "k2p_binv", "k_binv"}, rows));
  return finish(cfg, std::move(result), std::move(checks), std::move(tables));
}

ScenarioReport run_aee_mr_experiment(const ExperimentConfig& cfg) {
  const json& P = cfg.params;
  const json problem_json =
      (P.is_object() && P.contains("problem")) ? P["problem"]
                                               : scalar_heat_problem(32);
  const auto pb =
      serialization::problem_from_json(problem_json, "config.params.problem");
  const auto phi = space_param(P, "space", SpaceDescriptor::lp(2.0));
  const int j_max = p_int(P, "j_max", -1);
  const int probes = p_int(P, "probes", 6);
  const int J = p_int(P, "smoothness", 4);

  const auto rep = aee::maximal_regularity_experiment(
      pb, phi, spaces::make_littlewood_paley(J), j_max, probes,
      cfg.seed == 0 ? 4242 : cfg.seed);

  CheckSet checks;
  std::vector<std::vector<std::string>> rows;
  for (const auto& ex : rep.experiments) {
    double worst_gap = -std::numeric_limits<double>::infinity();
    for (const auto& row : ex.rows) {
      worst_gap = std::max(worst_gap, row.lower - row.upper);
      rows.push_back(
          {ex.name, cell(row.j), cell(row.lower), cell(row.upper)});
    }
    checks.numeric("block-bounds-" + ex.name, worst_gap, 1e-9);
  }

  std::vector<CsvTable> tables;
  tables.push_back(
      make_table("blocks", {"symbol", "j", "lower", "upper"}, rows));
  return finish(cfg, serialization::mr_experiment_json(rep),
                std::move(checks), std::move(tables));
}

}  // namespace

ExperimentConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error("config: expected a JSON object");
  ExperimentConfig cfg;
  for (const auto& [key, value] : j.items()) {
    if (key == "scenario") {
      if (!value.is_string()) throw Error("config.scenario: expected a string");
      cfg.scenario = value.get<std::string>();
    } else if (key == "params") {
      if (!value.is_object()) throw Error("config.params: expected an object");
      cfg.params = value;
    } else if (key == "seed") {
      if (!value.is_number_integer() || value.get<std::int64_t>() < 0)
        throw Error("config.seed: expected a nonnegative integer");
      cfg.seed = value.get<std::uint64_t>();
    } else if (key == "threads") {
      if (!value.is_number_integer() || value.get<int>() < 0)
        throw Error("config.threads: expected a nonnegative integer");
      cfg.threads = value.get<int>();
    } else if (key == "tolerances") {
      if (!value.is_object())
        throw Error("config.tolerances: expected an object");
      cfg.tolerances = value;
    } else {
      throw Error("config." + key + ": unknown key");
    }
  }
  return cfg;
}

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = {
      "jodeit-verify",    "symbol-check", "besov-norm",
      "multiplier-bound", "weights-lab",  "extrapolate",
      "deleeuw",          "aee-solve",    "aee-characterize",
      "aee-mr-experiment"};
  return names;
}

ScenarioReport run_scenario(const ExperimentConfig& cfg) {
  using Runner = ScenarioReport (*)(const ExperimentConfig&);
  static const std::map<std::string, Runner> runners = {
      {"jodeit-verify", &run_jodeit_verify},
      {"symbol-check", &run_symbol_check},
      {"besov-norm", &run_besov_norm},
      {"multiplier-bound", &run_multiplier_bound},
      {"weights-lab", &run_weights_lab},
      {"extrapolate", &run_extrapolate},
      {"deleeuw", &run_deleeuw},
      {"aee-solve", &run_aee_solve},
      {"aee-characterize", &run_aee_characterize},
      {"aee-mr-experiment", &run_aee_mr_experiment}};
  const auto it = runners.find(cfg.scenario);
  if (it == runners.end()) {
    std::string msg = "unknown scenario '" + cfg.scenario +
                      "'; expected one of:";
    for (const auto& n : scenario_names()) msg += " " + n;
    throw Error(msg);
  }
  return it->second(cfg);
}

}  // namespace torus_mreg::scenarios
