#include "torus_mreg/symbols.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace torus_mreg::symbols {

double operator_norm(const MatrixXcd& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  Eigen::JacobiSVD<MatrixXcd> svd(m);
  return svd.singularValues()(0);
}

OperatorSymbol OperatorSymbol::closed_form(int out_dim, int in_dim,
                                           std::function<MatrixXcd(int)> eval,
                                           std::string family) {
  if (out_dim < 1 || in_dim < 1)
    throw Error("OperatorSymbol: dimensions must be >= 1");
  if (!eval) throw Error("OperatorSymbol: missing evaluator");
  OperatorSymbol m;
  m.out_dim_ = out_dim;
  m.in_dim_ = in_dim;
  m.eval_ = std::move(eval);
  m.family_ = std::move(family);
  return m;
}

OperatorSymbol OperatorSymbol::from_table(int k_min,
                                          std::vector<MatrixXcd> values,
                                          std::string family) {
  if (values.empty()) throw Error("OperatorSymbol: empty table");
  OperatorSymbol m;
  m.out_dim_ = static_cast<int>(values.front().rows());
  m.in_dim_ = static_cast<int>(values.front().cols());
  if (m.out_dim_ < 1 || m.in_dim_ < 1)
    throw Error("OperatorSymbol: table entries must be nonempty matrices");
  for (const auto& v : values)
    if (v.rows() != m.out_dim_ || v.cols() != m.in_dim_)
      throw Error("OperatorSymbol: table entries differ in shape");
  m.k_min_ = k_min;
  m.k_max_ = k_min + static_cast<int>(values.size()) - 1;
  m.table_ = std::move(values);
  m.family_ = std::move(family);
  return m;
}

MatrixXcd OperatorSymbol::value(int k) const {
  if (!defined_at(k))
    throw Error("OperatorSymbol::value: k outside declared range (family " +
                family_ + ")");
  if (!table_.empty()) return table_[k - k_min_];
  MatrixXcd v = eval_(k);
  if (v.rows() != out_dim_ || v.cols() != in_dim_)
    throw Error("OperatorSymbol::value: evaluator shape mismatch");
  return v;
}

fourier::TrigPolynomial OperatorSymbol::apply(
    const fourier::TrigPolynomial& f) const {
  return fourier::apply_multiplier([this](int k) { return value(k); }, f);
}

OperatorSymbol identity_symbol(int dim) {
  return OperatorSymbol::closed_form(
      dim, dim, [dim](int) { return MatrixXcd::Identity(dim, dim); },
      "identity");
}

OperatorSymbol scalar_symbol(std::function<cplx(int)> f, std::string name) {
  if (!f) throw Error("scalar_symbol: missing evaluator");
  return OperatorSymbol::closed_form(
      1, 1,
      [f = std::move(f)](int k) {
        MatrixXcd v(1, 1);
        v(0, 0) = f(k);
        return v;
      },
      std::move(name));
}

OperatorSymbol diagonal_symbol(std::vector<std::function<cplx(int)>> diag,
                               std::string name) {
  const int d = static_cast<int>(diag.size());
  if (d < 1) throw Error("diagonal_symbol: empty diagonal");
  for (const auto& f : diag)
    if (!f) throw Error("diagonal_symbol: missing evaluator");
  return OperatorSymbol::closed_form(
      d, d,
      [diag = std::move(diag), d](int k) {
        MatrixXcd v = MatrixXcd::Zero(d, d);
        for (int j = 0; j < d; ++j) v(j, j) = diag[j](k);
        return v;
      },
      std::move(name));
}

OperatorSymbol rotation_symbol(double theta) {
  return OperatorSymbol::closed_form(
      2, 2,
      [theta](int k) {
        const double a = k * theta;
        MatrixXcd v(2, 2);
        v(0, 0) = std::cos(a);
        v(0, 1) = -std::sin(a);
        v(1, 0) = std::sin(a);
        v(1, 1) = std::cos(a);
        return v;
      },
      "rotation");
}

OperatorSymbol seeded_random_smooth(std::uint64_t seed, int out_dim,
                                    int in_dim, int terms) {
  if (out_dim < 1 || in_dim < 1)
    throw Error("seeded_random_smooth: dimensions must be >= 1");
  if (terms < 1) throw Error("seeded_random_smooth: terms must be >= 1");
  Rng rng(seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(terms) *
                                       std::max(out_dim, in_dim));
  std::vector<MatrixXcd> amps;
  std::vector<double> widths;
  MatrixXcd base(out_dim, in_dim);
  for (int r = 0; r < out_dim; ++r)
    for (int c = 0; c < in_dim; ++c) base(r, c) = scale * rng.gaussian_cplx();
  for (int t = 0; t < terms; ++t) {
    MatrixXcd a(out_dim, in_dim);
    for (int r = 0; r < out_dim; ++r)
      for (int c = 0; c < in_dim; ++c) a(r, c) = scale * rng.gaussian_cplx();
    amps.push_back(std::move(a));
    widths.push_back(std::exp(rng.uniform(0.0, std::log(32.0))));
  }
  return OperatorSymbol::closed_form(
      out_dim, in_dim,
      [base, amps, widths](int k) {
        MatrixXcd v = base;
        for (std::size_t t = 0; t < amps.size(); ++t) {
          const double u = k / widths[t];
          v += amps[t] / (1.0 + u * u);
        }
        return v;
      },
      "seeded_random_smooth");
}

MatrixXcd forward_difference(const OperatorSymbol& m, int l, int k) {
  if (l < 0) throw Error("forward_difference: order must be >= 0");
  MatrixXcd acc = MatrixXcd::Zero(m.out_dim(), m.in_dim());
  for (int j = 0; j <= l; ++j) {
    const double sign = ((l - j) % 2 == 0) ? 1.0 : -1.0;
    acc += sign * static_cast<double>(binomial(l, j)) * m.value(k + j);
  }
  return acc;
}

namespace {

// Restricts [-K, K] to indices where m(k) .. m(k + l) are all defined.
std::pair<int, int> difference_window(const OperatorSymbol& m, int l, int K) {
  const int lo = std::max(-K, m.k_min());
  int hi = std::min(K, m.k_max());
  if (m.k_max() < INT_MAX - l) hi = std::min(hi, m.k_max() - l);
  return {lo, hi};
}

bool grew(double half, double full) { return full > 1.2 * half + 1e-12; }

double dyadic_pow(int j) { return std::ldexp(1.0, j); }

}  // namespace

SeminormReport marcinkiewicz_seminorm(const OperatorSymbol& m, int gamma,
                                      int K) {
  if (gamma < 0) throw Error("marcinkiewicz_seminorm: gamma must be >= 0");
  if (K < 1) throw Error("marcinkiewicz_seminorm: window must be >= 1");
  SeminormReport report;
  report.gamma = gamma;
  report.window = K;
  report.family = m.family();
  for (int l = 0; l <= gamma; ++l) {
    OrderSup order;
    order.l = l;
    const auto [lo, hi] = difference_window(m, l, K);
    for (int k = lo; k <= hi; ++k) {
      const double term =
          std::pow(std::abs(static_cast<double>(k)), l) *
          operator_norm(forward_difference(m, l, k));
      if (term > order.sup_full) {
        order.sup_full = term;
        order.argmax_k = k;
      }
      if (std::abs(k) <= K / 2) order.sup_half = std::max(order.sup_half, term);
    }
    order.growth = grew(order.sup_half, order.sup_full);
    report.value = std::max(report.value, order.sup_full);
    report.growth_flag = report.growth_flag || order.growth;
    report.orders.push_back(order);
  }
  return report;
}

VariationalReport variational_seminorm(const OperatorSymbol& m, int Jmax) {
  if (Jmax < 0) throw Error("variational_seminorm: Jmax must be >= 0");
  VariationalReport report;
  report.family = m.family();
  const int reach = (Jmax + 1 < 30) ? (1 << (Jmax + 1)) : INT_MAX / 2;
  const auto [lo0, hi0] = difference_window(m, 0, reach);
  for (int k = lo0; k <= hi0; ++k)
    report.sup_norm = std::max(report.sup_norm, operator_norm(m.value(k)));
  for (int j = 0; j <= Jmax; ++j) {
    double sum = 0.0;
    const int lo = 1 << j;
    const int hi = (1 << (j + 1)) - 1;
    for (int k = lo; k <= hi; ++k) {
      if (m.defined_at(k) && m.defined_at(k + 1))
        sum += operator_norm(m.value(k + 1) - m.value(k));
      if (m.defined_at(-k) && m.defined_at(-k + 1))
        sum += operator_norm(m.value(-k + 1) - m.value(-k));
    }
    report.block_sums.push_back(sum);
    if (sum > report.max_block_sum) {
      report.max_block_sum = sum;
      report.argmax_block = j;
    }
  }
  double early = 0.0, late = 0.0;
  for (int j = 0; j <= Jmax; ++j) {
    double& side = (j <= Jmax / 2) ? early : late;
    side = std::max(side, report.block_sums[j]);
  }
  report.growth_flag = grew(early, late);
  report.value = report.sup_norm + report.max_block_sum;
  return report;
}

ConditionReport condition_report(const OperatorSymbol& m, int K) {
  if (K < 1) throw Error("condition_report: window must be >= 1");
  ConditionReport report;
  report.window = K;
  report.gamma1 = marcinkiewicz_seminorm(m, 1, K);
  report.gamma2 = marcinkiewicz_seminorm(m, 2, K);
  report.gamma3 = marcinkiewicz_seminorm(m, 3, K);
  int jmax = 0;
  while ((2 << jmax) <= K) ++jmax;
  report.var = variational_seminorm(m, jmax);
  return report;
}

SeminormReport joint_seminorm(const OperatorSymbol& d, const OperatorSymbol& a,
                              int gamma, int K) {
  if (gamma < 0) throw Error("joint_seminorm: gamma must be >= 0");
  if (K < 1) throw Error("joint_seminorm: window must be >= 1");
  if (d.in_dim() != a.out_dim())
    throw Error("joint_seminorm: d(k) a(k) product shape mismatch");
  SeminormReport report;
  report.gamma = gamma;
  report.window = K;
  report.family = d.family() + " against " + a.family();
  for (int l = 0; l <= gamma; ++l) {
    OrderSup order;
    order.l = l;
    const auto [lo, hi] = difference_window(d, l, K);
    for (int k = lo; k <= hi; ++k) {
      if (!a.defined_at(k + l)) continue;
      const double term =
          std::pow(std::abs(static_cast<double>(k)), l) *
          operator_norm(forward_difference(d, l, k) * a.value(k + l));
      if (term > order.sup_full) {
        order.sup_full = term;
        order.argmax_k = k;
      }
      if (std::abs(k) <= K / 2) order.sup_half = std::max(order.sup_half, term);
    }
    order.growth = grew(order.sup_half, order.sup_full);
    report.value = std::max(report.value, order.sup_full);
    report.growth_flag = report.growth_flag || order.growth;
    report.orders.push_back(order);
  }
  return report;
}

VariationalReport joint_variational(const OperatorSymbol& d,
                                    const OperatorSymbol& a, int Jmax) {
  if (Jmax < 0) throw Error("joint_variational: Jmax must be >= 0");
  if (d.in_dim() != a.out_dim())
    throw Error("joint_variational: d(k) a(k) product shape mismatch");
  VariationalReport report;
  report.family = d.family() + " against " + a.family();
  const int reach = (Jmax + 1 < 30) ? (1 << (Jmax + 1)) : INT_MAX / 2;
  for (int k = -reach; k <= reach; ++k) {
    if (!d.defined_at(k) || !a.defined_at(k)) continue;
    report.sup_norm =
        std::max(report.sup_norm, operator_norm(d.value(k) * a.value(k)));
  }
  for (int j = 0; j <= Jmax; ++j) {
    double sum = 0.0;
    for (int k = 1 << j; k <= (1 << (j + 1)) - 1; ++k) {
      for (int s : {k, -k}) {
        if (!d.defined_at(s) || !d.defined_at(s + 1) || !a.defined_at(s + 1))
          continue;
        sum += operator_norm((d.value(s + 1) - d.value(s)) * a.value(s + 1));
      }
    }
    report.block_sums.push_back(sum);
    if (sum > report.max_block_sum) {
      report.max_block_sum = sum;
      report.argmax_block = j;
    }
  }
  double early = 0.0, late = 0.0;
  for (int j = 0; j <= Jmax; ++j) {
    double& side = (j <= Jmax / 2) ? early : late;
    side = std::max(side, report.block_sums[j]);
  }
  report.growth_flag = grew(early, late);
  report.value = report.sup_norm + report.max_block_sum;
  return report;
}

ContinuousSymbol::ContinuousSymbol(int out_dim, int in_dim,
                                   std::vector<Evaluator> derivatives,
                                   std::string family)
    : out_dim_(out_dim),
      in_dim_(in_dim),
      gamma_max_(static_cast<int>(derivatives.size()) - 1),
      analytic_(true),
      derivs_(std::move(derivatives)),
      family_(std::move(family)) {
  if (out_dim_ < 1 || in_dim_ < 1)
    throw Error("ContinuousSymbol: dimensions must be >= 1");
  if (derivs_.empty()) throw Error("ContinuousSymbol: missing value evaluator");
  for (const auto& f : derivs_)
    if (!f) throw Error("ContinuousSymbol: missing derivative evaluator");
}

ContinuousSymbol ContinuousSymbol::from_values(int out_dim, int in_dim,
                                               Evaluator value, int gamma_max,
                                               std::string family) {
  if (!value) throw Error("ContinuousSymbol: missing value evaluator");
  if (gamma_max < 0) throw Error("ContinuousSymbol: gamma_max must be >= 0");
  ContinuousSymbol m(out_dim, in_dim, {std::move(value)}, std::move(family));
  m.analytic_ = false;
  m.gamma_max_ = gamma_max;
  return m;
}

MatrixXcd ContinuousSymbol::value(double t) const {
  MatrixXcd v = derivs_[0](t);
  if (v.rows() != out_dim_ || v.cols() != in_dim_)
    throw Error("ContinuousSymbol: evaluator shape mismatch");
  return v;
}

namespace {

// Second-order central stencils; Richardson over h and h/2 lifts them to
// fourth order on smooth input.
MatrixXcd central_stencil(const std::function<MatrixXcd(double)>& f, double t,
                          int r, double h) {
  switch (r) {
    case 1:
      return (f(t + h) - f(t - h)) / (2.0 * h);
    case 2:
      return (f(t + h) - 2.0 * f(t) + f(t - h)) / (h * h);
    case 3:
      return (f(t + 2 * h) - 2.0 * f(t + h) + 2.0 * f(t - h) - f(t - 2 * h)) /
             (2.0 * h * h * h);
    default:
      throw Error("ContinuousSymbol: finite differences support orders 1..3");
  }
}

}  // namespace

MatrixXcd ContinuousSymbol::derivative(double t, int r,
                                       double step_hint) const {
  if (r < 0) throw Error("ContinuousSymbol::derivative: order must be >= 0");
  if (r == 0) return value(t);
  if (r > gamma_max_)
    throw Error("ContinuousSymbol::derivative: order exceeds gamma_max");
  if (analytic_) return derivs_[r](t);
  const double h =
      step_hint > 0.0 ? step_hint : 1e-4 * (1.0 + std::abs(t));
  const auto& f = derivs_[0];
  const MatrixXcd coarse = central_stencil(f, t, r, h);
  const MatrixXcd fine = central_stencil(f, t, r, h / 2.0);
  return (4.0 * fine - coarse) / 3.0;
}

ContinuousSeminormReport continuous_m_seminorm(const ContinuousSymbol& m,
                                               int gamma, double t_max,
                                               int points, bool tilde) {
  if (gamma < 0) throw Error("continuous_m_seminorm: gamma must be >= 0");
  if (gamma > m.gamma_max())
    throw Error("continuous_m_seminorm: gamma exceeds symbol gamma_max");
  if (!(t_max > 0.0)) throw Error("continuous_m_seminorm: t_max must be > 0");
  if (points < 9) throw Error("continuous_m_seminorm: too few grid points");
  ContinuousSeminormReport report;
  report.gamma = gamma;
  report.t_max = t_max;
  report.points = points;
  report.tilde = tilde;
  report.family = m.family();
  const double spacing = 2.0 * t_max / (points - 1);
  const double step = spacing / 2.0;
  for (int l = 0; l <= gamma; ++l) {
    ContinuousOrderSup order;
    order.l = l;
    for (int i = 0; i < points; ++i) {
      const double t = -t_max + spacing * i;
      if (!tilde && std::abs(t) < 1e-12) continue;
      const double w = tilde ? std::pow(1.0 + std::abs(t), l)
                             : std::pow(std::abs(t), l);
      const double term = w * operator_norm(m.derivative(t, l, step));
      if (term > order.sup_full) {
        order.sup_full = term;
        order.argmax_t = t;
      }
      if (std::abs(t) <= t_max / 2.0 + 1e-12)
        order.sup_half = std::max(order.sup_half, term);
    }
    order.growth = grew(order.sup_half, order.sup_full);
    report.value = std::max(report.value, order.sup_full);
    report.growth_flag = report.growth_flag || order.growth;
    report.orders.push_back(order);
  }
  return report;
}

DyadicBoundResult dyadic_operator_norm_bound(const ContinuousSymbol& m, int j,
                                             const spaces::LittlewoodPaley& lp,
                                             double maximal_norm,
                                             const DyadicBoundOptions& opts) {
  if (j < 0) throw Error("dyadic_operator_norm_bound: j must be >= 0");
  if (!(maximal_norm > 0.0))
    throw Error("dyadic_operator_norm_bound: maximal norm must be > 0");
  if (opts.log2_points < 8 || opts.log2_points > 24)
    throw Error("dyadic_operator_norm_bound: log2_points out of range");
  if (opts.pad_factor < 2)
    throw Error("dyadic_operator_norm_bound: pad_factor must be >= 2");

  const int n = 1 << opts.log2_points;
  const double support = dyadic_pow(j + 1);  // psi_j vanishes for |t| > 2^{j+1}
  const double T = opts.pad_factor * support;
  const double dt = 2.0 * T / n;
  const int rows = m.out_dim(), cols = m.in_dim();

  // eta = psi_j * m sampled on [-T, T); its transform back to the line is
  // u(x) = (1/2pi) Int eta(t) e^{ixt} dt, evaluated at x_q = pi q / T via one
  // DFT per matrix entry.
  std::vector<std::vector<cplx>> entry(rows * cols, std::vector<cplx>(n));
  for (int i = 0; i < n; ++i) {
    const double t = -T + dt * i;
    const double cut = lp.psi_j(j, t);
    if (cut == 0.0) continue;
    const MatrixXcd v = cut * m.value(t);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) entry[r * cols + c][i] = v(r, c);
  }
  for (auto& e : entry) e = fourier::dft(std::move(e), +1);

  const int half = n / 2;
  std::vector<double> norm_at(n);
  MatrixXcd u(rows, cols);
  for (int q = -half; q < half; ++q) {
    const int bin = (q % n + n) % n;
    const double phase = (q % 2 == 0) ? 1.0 : -1.0;
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c)
        u(r, c) = (dt / kTwoPi) * phase * entry[r * cols + c][bin];
    norm_at[q + half] = operator_norm(u);
  }

  // Least even decreasing majorant on the x-grid: fold the two signs together
  // and take the suffix max.
  std::vector<double> folded(half);
  for (int q = 0; q < half; ++q)
    folded[q] = std::max(norm_at[half + q], norm_at[half - q]);
  folded[half - 1] = std::max(folded[half - 1], norm_at[0]);
  std::vector<double> majorant(half);
  double running = 0.0;
  for (int q = half - 1; q >= 0; --q) {
    running = std::max(running, folded[q]);
    majorant[q] = running;
  }

  const double dx = kPi / T;
  double integral = 0.5 * majorant[0];
  for (int q = 1; q < half - 1; ++q) integral += majorant[q];
  integral += 0.5 * majorant[half - 1];
  integral *= dx;

  DyadicBoundResult result;
  result.j = j;
  result.c = kPi / 2.0;
  const double x_max = dx * (half - 1);
  const double tail = majorant[half - 1] * x_max;
  result.l1_majorant = 2.0 * integral;
  result.tail_fraction = (result.l1_majorant + 2.0 * tail) > 0.0
                             ? 2.0 * tail / (result.l1_majorant + 2.0 * tail)
                             : 0.0;
  if (result.tail_fraction > opts.tail_tol)
    throw Error("dyadic_operator_norm_bound: majorant tail mass exceeds "
                "tolerance; enlarge the window or grid");
  result.bound = result.c * result.l1_majorant * maximal_norm;
  return result;
}

RBoundProxyResult r_bounded_proxy(const std::vector<MatrixXcd>& family) {
  if (family.empty())
    throw Error("r_bounded_proxy: empty family has no uniform bound");
  RBoundProxyResult result;
  for (const auto& m : family)
    result.value = std::max(result.value, operator_norm(m));
  return result;
}

}  // namespace torus_mreg::symbols
