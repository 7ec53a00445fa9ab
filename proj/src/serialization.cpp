#include "torus_mreg/serialization.hpp"

#include <utility>
#include <vector>

namespace torus_mreg::serialization {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw Error(where + ": " + what);
}

const json& require(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) fail(where + "." + key, "missing");
  return *it;
}

double number_at(const json& j, const char* key, const std::string& where) {
  const json& v = require(j, key, where);
  if (!v.is_number()) fail(where + "." + key, "expected a number");
  return v.get<double>();
}

double number_or(const json& j, const char* key, double fallback,
                 const std::string& where) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return number_at(j, key, where);
}

int int_at(const json& j, const char* key, const std::string& where) {
  const json& v = require(j, key, where);
  if (!v.is_number_integer()) fail(where + "." + key, "expected an integer");
  return v.get<int>();
}

int int_or(const json& j, const char* key, int fallback,
           const std::string& where) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return int_at(j, key, where);
}

std::string string_at(const json& j, const char* key,
                      const std::string& where) {
  const json& v = require(j, key, where);
  if (!v.is_string()) fail(where + "." + key, "expected a string");
  return v.get<std::string>();
}

}  // namespace

json matrix_json(const MatrixXcd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

MatrixXcd matrix_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where, "expected a nonempty array of rows");
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  MatrixXcd m;
  for (std::size_t r = 0; r < rows; ++r) {
    const json& row = j[r];
    if (!row.is_array() || row.empty())
      fail(where, "row " + std::to_string(r) + " is not a nonempty array");
    if (r == 0) {
      cols = row.size();
      m.resize(static_cast<Eigen::Index>(rows),
               static_cast<Eigen::Index>(cols));
    } else if (row.size() != cols) {
      fail(where, "ragged rows");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      const json& e = row[c];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() ||
          !e[1].is_number())
        fail(where, "entry (" + std::to_string(r) + "," + std::to_string(c) +
                        ") must be [re, im]");
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          cplx(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

json poly_json(const fourier::TrigPolynomial& f) {
  json coeffs = json::array();
  for (int k = -f.order(); k <= f.order(); ++k) {
    const VectorXcd& v = f.coeff(k);
    if (v.norm() == 0.0) continue;
    json re = json::array(), im = json::array();
    for (Eigen::Index r = 0; r < v.size(); ++r) {
      re.push_back(v(r).real());
      im.push_back(v(r).imag());
    }
    coeffs.push_back(
        {{"k", k}, {"re", std::move(re)}, {"im", std::move(im)}});
  }
  return {{"dim", f.dim()}, {"order", f.order()}, {"coeffs", std::move(coeffs)}};
}

fourier::TrigPolynomial poly_from_json(const json& j,
                                       const std::string& where) {
  const int dim = int_at(j, "dim", where);
  const int order = int_at(j, "order", where);
  if (dim < 1 || order < 0) fail(where, "need dim >= 1 and order >= 0");
  fourier::TrigPolynomial f(dim, order);
  const json& coeffs = require(j, "coeffs", where);
  if (!coeffs.is_array()) fail(where + ".coeffs", "expected an array");
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const std::string at = where + ".coeffs[" + std::to_string(i) + "]";
    const json& c = coeffs[i];
    const int k = int_at(c, "k", at);
    if (k < -order || k > order) fail(at, "|k| exceeds order");
    const json& re = require(c, "re", at);
    const json& im = require(c, "im", at);
    if (!re.is_array() || !im.is_array() ||
        re.size() != static_cast<std::size_t>(dim) ||
        im.size() != static_cast<std::size_t>(dim))
      fail(at, "re and im must be arrays of length dim");
    VectorXcd v(dim);
    for (int r = 0; r < dim; ++r)
      v(r) = cplx(re[r].get<double>(), im[r].get<double>());
    f.set_coeff(k, v);
  }
  return f;
}

json weight_json(const Weight& w) {
  switch (w.tag) {
    case Weight::Tag::constant:
      return {{"kind", "constant"}, {"value", w.param}, {"grid", w.grid()}};
    case Weight::Tag::power:
      return {{"kind", "power"}, {"alpha", w.param}, {"grid", w.grid()}};
    case Weight::Tag::samples:
      break;
  }
  return {{"kind", "samples"}, {"samples", w.samples}};
}

Weight weight_from_json(const json& j, const std::string& where) {
  const std::string kind = string_at(j, "kind", where);
  if (kind == "constant")
    return constant_weight(number_at(j, "value", where),
                           int_at(j, "grid", where));
  if (kind == "power")
    return power_weight(number_at(j, "alpha", where),
                        int_at(j, "grid", where));
  if (kind == "samples") {
    const json& s = require(j, "samples", where);
    if (!s.is_array() || s.empty())
      fail(where + ".samples", "expected a nonempty array");
    std::vector<double> samples;
    samples.reserve(s.size());
    for (const json& v : s) {
      if (!v.is_number()) fail(where + ".samples", "expected numbers");
      samples.push_back(v.get<double>());
    }
    return weight_from_samples(std::move(samples));
  }
  fail(where + ".kind", "unknown weight kind '" + kind + "'");
}

json space_json(const spaces::SpaceDescriptor& phi) {
  json out;
  out["kind"] =
      phi.kind == spaces::SpaceDescriptor::Kind::Lp ? "Lp" : "WeightedLp";
  if (phi.p == spaces::kInf)
    out["p"] = "inf";
  else
    out["p"] = phi.p;
  if (phi.weight) out["weight"] = weight_json(*phi.weight);
  return out;
}

spaces::SpaceDescriptor space_from_json(const json& j,
                                        const std::string& where) {
  const std::string kind = string_at(j, "kind", where);
  const json& pv = require(j, "p", where);
  double p = 0.0;
  if (pv.is_string() && pv.get<std::string>() == "inf")
    p = spaces::kInf;
  else if (pv.is_number())
    p = pv.get<double>();
  else
    fail(where + ".p", "expected a number or \"inf\"");
  if (kind == "Lp") return spaces::SpaceDescriptor::lp(p);
  if (kind == "WeightedLp")
    return spaces::SpaceDescriptor::weighted_lp(
        p, weight_from_json(require(j, "weight", where), where + ".weight"));
  fail(where + ".kind", "unknown space kind '" + kind + "'");
}

symbols::OperatorSymbol symbol_from_json(const json& j,
                                         const std::string& where) {
  const std::string kind = string_at(j, "kind", where);
  if (kind == "identity") return symbols::identity_symbol(int_at(j, "dim", where));
  if (kind == "zero") return aee::zero_convolutor(int_at(j, "dim", where));
  if (kind == "i-sgn")
    return symbols::scalar_symbol(
        [](int k) {
          const double s = (k > 0) ? 1.0 : (k < 0 ? -1.0 : 0.0);
          return cplx(0.0, s);
        },
        "i-sgn");
  if (kind == "ramp")
    return symbols::scalar_symbol(
        [](int k) { return cplx(static_cast<double>(k), 0.0); }, "ramp");
  if (kind == "rotation")
    return symbols::rotation_symbol(number_at(j, "theta", where));
  if (kind == "cauchy") {
    const int dim = int_at(j, "dim", where);
    const double scale = number_or(j, "scale", 1.0, where);
    if (dim < 1) fail(where + ".dim", "must be positive");
    return symbols::OperatorSymbol::closed_form(
        dim, dim,
        [dim, scale](int k) -> MatrixXcd {
          return MatrixXcd::Identity(dim, dim) *
                 (scale / (1.0 + static_cast<double>(k) * k));
        },
        "cauchy");
  }
  if (kind == "random-smooth") {
    const int out = int_at(j, "out_dim", where);
    const int in = int_or(j, "in_dim", out, where);
    return symbols::seeded_random_smooth(
        static_cast<std::uint64_t>(int_or(j, "seed", 1, where)), out, in,
        int_or(j, "terms", 6, where));
  }
  if (kind == "table") {
    const int k_min = int_at(j, "k_min", where);
    const json& vals = require(j, "values", where);
    if (!vals.is_array() || vals.empty())
      fail(where + ".values", "expected a nonempty array of matrices");
    std::vector<MatrixXcd> table;
    table.reserve(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i)
      table.push_back(matrix_from_json(
          vals[i], where + ".values[" + std::to_string(i) + "]"));
    return symbols::OperatorSymbol::from_table(k_min, std::move(table),
                                               "table");
  }
  if (kind == "delay")
    return aee::delay_symbol(
        symbol_from_json(require(j, "h", where), where + ".h"),
        symbol_from_json(require(j, "g", where), where + ".g"));
  fail(where + ".kind", "unknown symbol kind '" + kind + "'");
}

aee::AeeProblem problem_from_json(const json& j, const std::string& where) {
  const int dim = int_at(j, "dim", where);
  if (dim < 1) fail(where + ".dim", "must be positive");
  const MatrixXcd P = matrix_from_json(require(j, "P", where), where + ".P");
  const MatrixXcd B = matrix_from_json(require(j, "B", where), where + ".B");
  const MatrixXcd A = matrix_from_json(require(j, "A", where), where + ".A");
  if (P.rows() != dim || P.cols() != dim)
    fail(where + ".P", "dimension disagrees with dim");
  const int K = int_at(j, "K", where);
  if (j.contains("conv"))
    return aee::AeeProblem(P, B, A,
                           symbol_from_json(j["conv"], where + ".conv"), K);
  return aee::AeeProblem(P, B, A, K);
}

json kernel_report_json(const jodeit::KernelReport& rep) {
  return {{"smoothness", rep.smoothness},
          {"grid", rep.grid},
          {"tolerance", rep.tolerance},
          {"lambda1_residual", rep.lambda1_residual},
          {"lambda2_residuals",
           {rep.lambda2_residuals[0], rep.lambda2_residuals[1]}},
          {"lambda3_residuals",
           {rep.lambda3_residuals[0], rep.lambda3_residuals[1],
            rep.lambda3_residuals[2]}},
          {"partition_residual", rep.partition_residual},
          {"junction_residuals", rep.junction_residuals},
          {"max_junction_residual", rep.max_junction_residual},
          {"endpoint_value_residual", rep.endpoint_value_residual},
          {"pass1", rep.pass1},
          {"pass2", rep.pass2},
          {"pass3", rep.pass3}};
}

json order_sup_json(const symbols::OrderSup& s) {
  return {{"l", s.l},
          {"sup_half", s.sup_half},
          {"sup_full", s.sup_full},
          {"argmax_k", s.argmax_k},
          {"growth", s.growth}};
}

json seminorm_json(const symbols::SeminormReport& rep) {
  json orders = json::array();
  for (const auto& s : rep.orders) orders.push_back(order_sup_json(s));
  return {{"value", rep.value},        {"gamma", rep.gamma},
          {"window", rep.window},      {"orders", std::move(orders)},
          {"growth", rep.growth_flag}, {"family", rep.family}};
}

json variational_json(const symbols::VariationalReport& rep) {
  return {{"value", rep.value},
          {"sup_norm", rep.sup_norm},
          {"max_block_sum", rep.max_block_sum},
          {"argmax_block", rep.argmax_block},
          {"block_sums", rep.block_sums},
          {"growth", rep.growth_flag},
          {"family", rep.family}};
}

json condition_json(const symbols::ConditionReport& rep) {
  return {{"window", rep.window},
          {"gamma1", seminorm_json(rep.gamma1)},
          {"gamma2", seminorm_json(rep.gamma2)},
          {"gamma3", seminorm_json(rep.gamma3)},
          {"variation", variational_json(rep.var)}};
}

json dyadic_bound_json(const symbols::DyadicBoundResult& rep) {
  return {{"j", rep.j},
          {"l1_majorant", rep.l1_majorant},
          {"bound", rep.bound},
          {"tail_fraction", rep.tail_fraction},
          {"arc_constant", rep.c}};
}

json maximal_estimate_json(const weights::MaximalEstimate& rep) {
  return {{"probe_max", rep.probe_max},
          {"sigma", rep.sigma},
          {"value", rep.value},
          {"space", rep.space},
          {"diverging", rep.diverging}};
}

json ap_json(const weights::ApReport& rep) {
  return {{"value", rep.value},
          {"p", rep.p},
          {"arc_start", rep.arc_start},
          {"arc_length", rep.arc_length},
          {"refined_value", rep.refined_value},
          {"growth", rep.growth_flag}};
}

json rubio_json(const weights::RubioReport& rep) {
  return {{"terms", rep.terms},
          {"tail_bound", rep.tail_bound},
          {"norm_ratio", rep.norm_ratio},
          {"majorization_defect", rep.majorization_defect},
          {"grid", rep.weight.grid()}};
}

json aq_json(const weights::AqReport& rep) {
  return {{"q", rep.q},
          {"measured", rep.measured},
          {"bound", rep.bound},
          {"maximal", maximal_estimate_json(rep.m_norm)},
          {"maximal_dual", maximal_estimate_json(rep.m_dual_norm)},
          {"left", rubio_json(rep.left)},
          {"right", rubio_json(rep.right)},
          {"grid", rep.weight.grid()}};
}

json line_extension_json(const weights::LineExtensionReport& rep) {
  return {{"p", rep.p},
          {"line_value", rep.line_value},
          {"torus_value", rep.torus_value},
          {"arc_start", rep.arc_start},
          {"arc_length", rep.arc_length},
          {"samples", static_cast<int>(rep.samples.size())}};
}

json deleeuw_json(const weights::DeleeuwReport& rep) {
  return {{"torus_estimate", rep.torus_estimate},
          {"line_estimate", rep.line_estimate},
          {"pass", rep.pass},
          {"p", rep.p},
          {"mode", rep.mode},
          {"tail_fraction", rep.tail_fraction},
          {"probes", rep.probes}};
}

json residual_json(const aee::ResidualReport& rep) {
  return {{"value", rep.value},
          {"scale", rep.scale},
          {"ingredients",
           {{"du", rep.ingredients.du},
            {"p_du", rep.ingredients.p_du},
            {"d_p_du", rep.ingredients.d_p_du},
            {"b_du", rep.ingredients.b_du},
            {"au", rep.ingredients.au},
            {"cu", rep.ingredients.cu}}}};
}

json identity_json(const aee::IdentityReport& rep) {
  return {{"window", rep.window},
          {"skipped", rep.skipped},
          {"delta_b", rep.delta_b},
          {"delta2_b", rep.delta2_b},
          {"delta3_b", rep.delta3_b},
          {"delta_a", rep.delta_a},
          {"delta2_a", rep.delta2_a},
          {"delta3_a", rep.delta3_a},
          {"delta_a0", rep.delta_a0},
          {"max_residual", rep.max_residual}};
}

json windowed_sup_json(const aee::WindowedSup& s) {
  return {{"sup_half", s.sup_half},
          {"sup_full", s.sup_full},
          {"argmax_k", s.argmax_k},
          {"growth", s.growth}};
}

json characterization_json(const aee::CharacterizationReport& rep) {
  return {{"window", rep.window},
          {"singular_ks", rep.singular_ks},
          {"binv", windowed_sup_json(rep.binv)},
          {"kb_binv", windowed_sup_json(rep.kb_binv)},
          {"k2p_binv", windowed_sup_json(rep.k2p_binv)},
          {"k_binv", windowed_sup_json(rep.k_binv)},
          {"a", seminorm_json(rep.a_m)},
          {"a0", seminorm_json(rep.a0_m)},
          {"a1", seminorm_json(rep.a1_m)},
          {"a2", seminorm_json(rep.a2_m)},
          {"conv_joint", seminorm_json(rep.conv_joint)},
          {"r_binv", {{"value", rep.r_binv.value}, {"proxy", rep.r_binv.proxy}}},
          {"r_kb_binv",
           {{"value", rep.r_kb_binv.value}, {"proxy", rep.r_kb_binv.proxy}}},
          {"r_k2p_binv",
           {{"value", rep.r_k2p_binv.value}, {"proxy", rep.r_k2p_binv.proxy}}},
          {"mr", rep.mr_flag},
          {"wp", rep.wp_flag}};
}

json mr_experiment_json(const aee::MrExperimentReport& rep) {
  json experiments = json::array();
  for (const auto& ex : rep.experiments) {
    json rows = json::array();
    for (const auto& row : ex.rows)
      rows.push_back(
          {{"j", row.j}, {"lower", row.lower}, {"upper", row.upper}});
    experiments.push_back({{"name", ex.name},
                           {"rows", std::move(rows)},
                           {"sup_lower", ex.sup_lower},
                           {"sup_upper", ex.sup_upper}});
  }
  return {{"space", rep.space},
          {"maximal_norm", rep.maximal_norm},
          {"j_max", rep.j_max},
          {"experiments", std::move(experiments)}};
}

}  // namespace torus_mreg::serialization
