#include "torus_mreg/aee.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <utility>

#include "torus_mreg/jodeit.hpp"
#include "torus_mreg/weights.hpp"

namespace torus_mreg::aee {

namespace {

// Mean coefficients below this relative size count as zero, so a singular
// b(0) obstructs the solve only when f genuinely has a mean component.
constexpr double kMeanTol = 1e-13;

cplx imag_unit() { return cplx(0.0, 1.0); }

VectorXcd coeff_or_zero(const TrigPolynomial& f, int k) {
  if (k < -f.order() || k > f.order()) return VectorXcd::Zero(f.dim());
  return f.coeff(k);
}

// Shared growth heuristic: the full-window sup exceeding 1.2x the
// half-window sup reads as unbounded-looking growth.
bool grew(double half, double full) { return full > 1.2 * half + 1e-12; }

WindowedSup windowed_sup(const std::vector<std::pair<int, double>>& vals,
                         int K) {
  WindowedSup s;
  for (const auto& [k, v] : vals) {
    if (std::abs(k) <= K / 2) s.sup_half = std::max(s.sup_half, v);
    if (v > s.sup_full) {
      s.sup_full = v;
      s.argmax_k = k;
    }
  }
  s.growth = grew(s.sup_half, s.sup_full);
  return s;
}

double rel_residual(const MatrixXcd& left, const MatrixXcd& right) {
  return (left - right).norm() / (1.0 + left.norm());
}

}  // namespace

OperatorSymbol zero_convolutor(int dim) {
  if (dim < 1) throw Error("zero_convolutor: dimension must be positive");
  return OperatorSymbol::closed_form(
      dim, dim, [dim](int) { return MatrixXcd::Zero(dim, dim); }, "zero");
}

AeeProblem::AeeProblem(MatrixXcd P_, MatrixXcd B_, MatrixXcd A_,
                       OperatorSymbol conv_, int K_)
    : dim(static_cast<int>(P_.rows())),
      P(std::move(P_)),
      B(std::move(B_)),
      A(std::move(A_)),
      conv(std::move(conv_)),
      K(K_) {
  if (dim < 1) throw Error("AeeProblem: dimension must be positive");
  for (const MatrixXcd* m : {&P, &B, &A})
    if (m->rows() != dim || m->cols() != dim)
      throw Error("AeeProblem: P, B, A must be square matrices of one size");
  if (conv.out_dim() != dim || conv.in_dim() != dim)
    throw Error("AeeProblem: convolutor dimension mismatch");
  if (K < 4) throw Error("AeeProblem: truncation order must be at least 4");
  if (!conv.defined_at(-K - 3) || !conv.defined_at(K + 3))
    throw Error("AeeProblem: convolutor must cover {-K-3 .. K+3}");
}

AeeProblem::AeeProblem(MatrixXcd P_, MatrixXcd B_, MatrixXcd A_, int K_)
    : AeeProblem(P_, std::move(B_), std::move(A_),
                 zero_convolutor(static_cast<int>(P_.rows())), K_) {}

double y_norm(const AeeProblem& pb, const VectorXcd& y) {
  if (y.size() != pb.dim) throw Error("y_norm: dimension mismatch");
  return std::max({y.norm(), (pb.A * y).norm(), (pb.B * y).norm(),
                   (pb.P * y).norm()});
}

MatrixXcd assemble_b(const AeeProblem& pb, int k) {
  if (std::abs(k) > pb.K + 3)
    throw Error("assemble_b: |k| exceeds the covered window");
  if (!pb.conv.defined_at(k))
    throw Error("assemble_b: convolutor undefined at k");
  const double kk = static_cast<double>(k);
  return -kk * kk * pb.P + imag_unit() * kk * pb.B + pb.A + pb.conv.value(k);
}

std::optional<MatrixXcd> try_invert(const MatrixXcd& b) {
  Eigen::JacobiSVD<MatrixXcd> svd(b,
                                  Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const int n = static_cast<int>(s.size());
  if (n == 0 || s(n - 1) <= kSingularTol * s(0)) return std::nullopt;
  MatrixXcd vs = svd.matrixV();
  for (int j = 0; j < n; ++j) vs.col(j) /= s(j);
  return vs * svd.matrixU().adjoint();
}

SolutionSymbols solution_symbols(const AeeProblem& pb) {
  const int d = pb.dim;
  const int K = pb.K;
  const MatrixXcd zero = MatrixXcd::Zero(d, d);
  std::vector<MatrixXcd> a_tab, a0_tab, a1_tab, a2_tab, a3_tab;
  for (auto* t : {&a_tab, &a0_tab, &a1_tab, &a2_tab, &a3_tab})
    t->reserve(2 * K + 1);
  std::optional<MatrixXcd> b0_inv;

  for (int k = -K; k <= K; ++k) {
    if (k == 0) {
      b0_inv = try_invert(assemble_b(pb, 0));
      for (auto* t : {&a_tab, &a0_tab, &a1_tab, &a2_tab, &a3_tab})
        t->push_back(zero);
      continue;
    }
    const auto inv = try_invert(assemble_b(pb, k));
    if (!inv)
      throw SingularSymbolError(
          k, "solution_symbols: b(k) singular at k = " + std::to_string(k));
    const double kk = static_cast<double>(k);
    const cplx ik = imag_unit() * kk;
    a_tab.push_back(*inv);
    a0_tab.push_back(ik * (pb.B * *inv));
    a1_tab.push_back(-kk * kk * (pb.P * *inv));
    a2_tab.push_back(ik * *inv);
    a3_tab.push_back(ik * (pb.P * *inv));
  }

  return SolutionSymbols{OperatorSymbol::from_table(-K, std::move(a_tab), "a"),
                         OperatorSymbol::from_table(-K, std::move(a0_tab), "a0"),
                         OperatorSymbol::from_table(-K, std::move(a1_tab), "a1"),
                         OperatorSymbol::from_table(-K, std::move(a2_tab), "a2"),
                         OperatorSymbol::from_table(-K, std::move(a3_tab), "a3"),
                         b0_inv};
}

TrigPolynomial solve(const AeeProblem& pb, const TrigPolynomial& f) {
  if (f.dim() != pb.dim) throw Error("solve: dimension mismatch");
  if (f.order() > pb.K)
    throw Error("solve: right-hand side order exceeds the problem window");
  const auto sym = solution_symbols(pb);
  TrigPolynomial u(pb.dim, f.order());
  const double scale = f.max_coeff_norm();
  for (int k = -f.order(); k <= f.order(); ++k) {
    const VectorXcd& fk = f.coeff(k);
    if (k == 0) {
      if (sym.b0_inv)
        u.set_coeff(0, *sym.b0_inv * fk);
      else if (fk.norm() > kMeanTol * scale)
        throw MeanObstructionError(
            "solve: b(0) is singular and the mean of f is nonzero");
      continue;
    }
    u.set_coeff(k, sym.a.value(k) * fk);
  }
  return u;
}

ResidualReport residual(const AeeProblem& pb, const TrigPolynomial& u,
                        const TrigPolynomial& f) {
  if (u.dim() != pb.dim || f.dim() != pb.dim)
    throw Error("residual: dimension mismatch");
  if (u.order() > pb.K || f.order() > pb.K)
    throw Error("residual: orders exceed the problem window");

  ResidualReport rep;
  rep.scale = f.max_coeff_norm();
  for (int k = -pb.K; k <= pb.K; ++k) {
    const VectorXcd r =
        assemble_b(pb, k) * coeff_or_zero(u, k) - coeff_or_zero(f, k);
    rep.value = std::max(rep.value, r.norm());
  }

  const TrigPolynomial du = fourier::derivative(u);
  auto mat_image_norm = [&](const MatrixXcd& M, const TrigPolynomial& g) {
    double worst = 0.0;
    for (int k = -g.order(); k <= g.order(); ++k)
      worst = std::max(worst, (M * g.coeff(k)).norm());
    return worst;
  };
  rep.ingredients.du = du.max_coeff_norm();
  rep.ingredients.p_du = mat_image_norm(pb.P, du);
  // d(P du) multiplies each P du-hat(k) by ik.
  double worst = 0.0;
  for (int k = -du.order(); k <= du.order(); ++k)
    worst = std::max(worst, std::abs(static_cast<double>(k)) *
                                (pb.P * du.coeff(k)).norm());
  rep.ingredients.d_p_du = worst;
  rep.ingredients.b_du = mat_image_norm(pb.B, du);
  rep.ingredients.au = mat_image_norm(pb.A, u);
  rep.ingredients.cu = pb.conv.apply(u).max_coeff_norm();
  return rep;
}

IdentityReport verify_difference_identities(const AeeProblem& pb, int K) {
  if (K < 4 || K > pb.K)
    throw Error(
        "verify_difference_identities: window must satisfy 4 <= K <= problem "
        "order");
  const int d = pb.dim;

  std::vector<MatrixXcd> b_tab(2 * K + 1);
  std::vector<std::optional<MatrixXcd>> inv(2 * K + 1);
  for (int k = -K; k <= K; ++k) {
    b_tab[k + K] = assemble_b(pb, k);
    inv[k + K] = try_invert(b_tab[k + K]);
    if (!inv[k + K] && k != 0)
      throw SingularSymbolError(
          k, "verify_difference_identities: b(k) singular at k = " +
                 std::to_string(k));
  }
  auto a_at = [&](int k) -> const MatrixXcd& { return *inv[k + K]; };
  auto has_a = [&](int k) { return static_cast<bool>(inv[k + K]); };
  auto c_at = [&](int k) { return pb.conv.value(k); };

  // Forward differences of a table column: sum_j binom(l,j) (-1)^{l-j} m(k+j).
  auto table_diff = [&](const std::function<MatrixXcd(int)>& m, int l, int k) {
    MatrixXcd s = MatrixXcd::Zero(d, d);
    for (int j = 0; j <= l; ++j) {
      const double sign = ((l - j) % 2 == 0) ? 1.0 : -1.0;
      s += binomial(l, j) * sign * m(k + j);
    }
    return s;
  };
  auto b_diff = [&](int l, int k) {
    return table_diff([&](int q) { return b_tab[q + K]; }, l, k);
  };
  auto a_diff = [&](int l, int k) {
    return table_diff([&](int q) { return a_at(q); }, l, k);
  };
  // Closed Delta^l b forms: the polynomial part differences exactly.
  auto closed_db = [&](int k) -> MatrixXcd {
    return -(2.0 * k + 1.0) * pb.P + imag_unit() * pb.B +
           (c_at(k + 1) - c_at(k));
  };
  auto closed_d2b = [&](int k) -> MatrixXcd {
    return -2.0 * pb.P + table_diff(c_at, 2, k);
  };
  auto closed_d3b = [&](int k) -> MatrixXcd { return table_diff(c_at, 3, k); };

  IdentityReport rep;
  rep.window = K;
  for (int k = -(K - 3); k <= K - 3; ++k) {
    if (k == 0) continue;
    rep.delta_b = std::max(rep.delta_b, rel_residual(b_diff(1, k), closed_db(k)));
    rep.delta2_b =
        std::max(rep.delta2_b, rel_residual(b_diff(2, k), closed_d2b(k)));
    rep.delta3_b =
        std::max(rep.delta3_b, rel_residual(b_diff(3, k), closed_d3b(k)));

    const bool touches_zero = k >= -3 && k <= 0 && !has_a(0);
    if (touches_zero) {
      ++rep.skipped;
      continue;
    }

    const MatrixXcd da = a_diff(1, k);
    const MatrixXcd d2a = a_diff(2, k);
    rep.delta_a = std::max(
        rep.delta_a, rel_residual(da, -a_at(k) * closed_db(k) * a_at(k + 1)));
    rep.delta2_a = std::max(
        rep.delta2_a,
        rel_residual(d2a, -2.0 * da * closed_db(k + 1) * a_at(k + 2) -
                              a_at(k) * closed_d2b(k) * a_at(k + 2)));
    rep.delta3_a = std::max(
        rep.delta3_a,
        rel_residual(a_diff(3, k),
                     -3.0 * d2a * closed_db(k + 2) * a_at(k + 3) -
                         3.0 * da * closed_d2b(k + 1) * a_at(k + 3) -
                         a_at(k) * closed_d3b(k) * a_at(k + 3)));
    const MatrixXcd a0_l =
        imag_unit() * (k + 1.0) * (pb.B * a_at(k + 1)) -
        imag_unit() * static_cast<double>(k) * (pb.B * a_at(k));
    const MatrixXcd a0_r = imag_unit() * (pb.B * a_at(k + 1)) +
                           imag_unit() * static_cast<double>(k) * (pb.B * da);
    rep.delta_a0 = std::max(rep.delta_a0, rel_residual(a0_l, a0_r));
  }
  rep.max_residual =
      std::max({rep.delta_b, rep.delta2_b, rep.delta3_b, rep.delta_a,
                rep.delta2_a, rep.delta3_a, rep.delta_a0});
  return rep;
}

CharacterizationReport characterize(const AeeProblem& pb, int K) {
  if (K < 4 || K > pb.K)
    throw Error("characterize: window must satisfy 4 <= K <= problem order");
  const int d = pb.dim;
  const MatrixXcd zero = MatrixXcd::Zero(d, d);

  CharacterizationReport rep;
  rep.window = K;

  std::vector<MatrixXcd> a_tab(2 * K + 1, zero), a0_tab(2 * K + 1, zero),
      a1_tab(2 * K + 1, zero), a2_tab(2 * K + 1, zero);
  std::vector<std::pair<int, double>> n_binv, n_kb, n_k2p, n_k;
  std::vector<MatrixXcd> fam_binv, fam_kb, fam_k2p;

  for (int k = -K; k <= K; ++k) {
    const auto inv = try_invert(assemble_b(pb, k));
    if (!inv) {
      rep.singular_ks.push_back(k);
      continue;
    }
    const double kk = static_cast<double>(k);
    const MatrixXcd kb = imag_unit() * kk * (pb.B * *inv);
    const MatrixXcd k2p = -kk * kk * (pb.P * *inv);
    const double nb = symbols::operator_norm(*inv);
    n_binv.emplace_back(k, nb);
    n_kb.emplace_back(k, symbols::operator_norm(kb));
    n_k2p.emplace_back(k, symbols::operator_norm(k2p));
    n_k.emplace_back(k, std::abs(kk) * nb);
    fam_binv.push_back(*inv);
    fam_kb.push_back(kb);
    fam_k2p.push_back(k2p);
    if (k != 0) {
      a_tab[k + K] = *inv;
      a0_tab[k + K] = kb;
      a1_tab[k + K] = k2p;
      a2_tab[k + K] = imag_unit() * kk * *inv;
    }
  }

  rep.binv = windowed_sup(n_binv, K);
  rep.kb_binv = windowed_sup(n_kb, K);
  rep.k2p_binv = windowed_sup(n_k2p, K);
  rep.k_binv = windowed_sup(n_k, K);

  const auto a_sym = OperatorSymbol::from_table(-K, std::move(a_tab), "a");
  rep.a_m = symbols::marcinkiewicz_seminorm(a_sym, 2, K);
  rep.a0_m = symbols::marcinkiewicz_seminorm(
      OperatorSymbol::from_table(-K, std::move(a0_tab), "a0"), 2, K);
  rep.a1_m = symbols::marcinkiewicz_seminorm(
      OperatorSymbol::from_table(-K, std::move(a1_tab), "a1"), 2, K);
  rep.a2_m = symbols::marcinkiewicz_seminorm(
      OperatorSymbol::from_table(-K, std::move(a2_tab), "a2"), 2, K);
  rep.conv_joint = symbols::joint_seminorm(pb.conv, a_sym, 2, K);

  if (!fam_binv.empty()) {
    rep.r_binv = symbols::r_bounded_proxy(fam_binv);
    rep.r_kb_binv = symbols::r_bounded_proxy(fam_kb);
    rep.r_k2p_binv = symbols::r_bounded_proxy(fam_k2p);
  }

  rep.mr_flag = rep.singular_ks.empty() && !rep.binv.growth &&
                !rep.kb_binv.growth && !rep.k2p_binv.growth;
  rep.wp_flag = rep.mr_flag && !rep.k_binv.growth;
  return rep;
}

OperatorSymbol delay_symbol(const OperatorSymbol& h, const OperatorSymbol& g) {
  if (h.out_dim() != g.out_dim() || h.in_dim() != g.in_dim())
    throw Error("delay_symbol: dimension mismatch");
  const std::string fam = "delay(" + h.family() + "," + g.family() + ")";
  const bool closed = h.k_min() == INT_MIN && h.k_max() == INT_MAX &&
                      g.k_min() == INT_MIN && g.k_max() == INT_MAX;
  if (closed) {
    return OperatorSymbol::closed_form(
        h.out_dim(), h.in_dim(),
        [h, g](int k) -> MatrixXcd {
          return h.value(k) + imag_unit() * static_cast<double>(k) * g.value(k);
        },
        fam);
  }
  const int lo = std::max(h.k_min(), g.k_min());
  const int hi = std::min(h.k_max(), g.k_max());
  if (lo > hi) throw Error("delay_symbol: empty common window");
  std::vector<MatrixXcd> tab;
  tab.reserve(hi - lo + 1);
  for (int k = lo; k <= hi; ++k)
    tab.push_back(h.value(k) +
                  imag_unit() * static_cast<double>(k) * g.value(k));
  return OperatorSymbol::from_table(lo, std::move(tab), fam);
}

MrExperimentReport maximal_regularity_experiment(const AeeProblem& pb,
                                                 const SpaceDescriptor& phi,
                                                 const LittlewoodPaley& lp,
                                                 int j_max, int probes_per_j,
                                                 std::uint64_t seed) {
  if (probes_per_j < 1)
    throw Error("maximal_regularity_experiment: probe set empty");
  int j_cap = -1;
  while ((1 << (j_cap + 2)) + 3 <= pb.K) ++j_cap;
  if (j_cap < 0)
    throw Error(
        "maximal_regularity_experiment: window too small for any dyadic "
        "block");
  if (j_max < 0) j_max = j_cap;
  if (j_max > j_cap)
    throw Error(
        "maximal_regularity_experiment: block extension stencil leaves the "
        "symbol table");

  const auto sym = solution_symbols(pb);

  MrExperimentReport rep;
  rep.space = phi.label();
  rep.j_max = j_max;
  const int grid = phi.weight ? phi.weight->grid() : 256;
  const auto m_est =
      weights::maximal_norm_estimate(phi, weights::standard_probes(grid));
  rep.maximal_norm = m_est.value;

  const auto kernel = jodeit::build_kernel(3);
  const std::pair<const char*, const OperatorSymbol*> items[] = {
      {"a", &sym.a}, {"a0", &sym.a0}, {"a1", &sym.a1}};

  int item_index = 0;
  for (const auto& [name, msym] : items) {
    SymbolExperiment ex;
    ex.name = name;
    const auto ext = jodeit::extend_symbol(kernel, *msym, 3);
    for (int j = 0; j <= j_max; ++j) {
      DyadicNormRow row;
      row.j = j;
      row.upper =
          symbols::dyadic_operator_norm_bound(ext, j, lp, m_est.value).bound;

      const int lo = (j == 0) ? 0 : (1 << (j - 1));
      const int hi = std::min(1 << (j + 1), pb.K);
      Rng rng(seed + 1000003ull * static_cast<std::uint64_t>(item_index) +
              7919ull * static_cast<std::uint64_t>(j));
      for (int p = 0; p < probes_per_j; ++p) {
        TrigPolynomial f(pb.dim, hi);
        for (int k = lo; k <= hi; ++k) {
          VectorXcd plus(pb.dim), minus(pb.dim);
          for (int r = 0; r < pb.dim; ++r) plus(r) = rng.gaussian_cplx();
          for (int r = 0; r < pb.dim; ++r) minus(r) = rng.gaussian_cplx();
          f.set_coeff(k, plus);
          if (k > 0) f.set_coeff(-k, minus);
        }
        TrigPolynomial img(pb.dim, hi);
        for (int k = -hi; k <= hi; ++k) {
          const double w = lp.psi_j(j, static_cast<double>(k));
          if (w == 0.0) continue;
          img.set_coeff(k, w * (msym->value(k) * f.coeff(k)));
        }
        const double nf = spaces::phi_norm(f, phi);
        if (nf <= 0.0) continue;
        row.lower = std::max(row.lower, spaces::phi_norm(img, phi) / nf);
      }
      ex.sup_lower = std::max(ex.sup_lower, row.lower);
      ex.sup_upper = std::max(ex.sup_upper, row.upper);
      ex.rows.push_back(row);
    }
    rep.experiments.push_back(std::move(ex));
    ++item_index;
  }
  return rep;
}

AeeProblem seeded_problem(std::uint64_t seed, int dim, int K, bool with_conv) {
  if (dim < 1 || K < 4)
    throw Error("seeded_problem: need dim >= 1 and K >= 4");
  for (int attempt = 0; attempt < 64; ++attempt) {
    Rng rng(seed + 0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(attempt + 1));
    auto draw = [&](double scale) {
      MatrixXcd m(dim, dim);
      for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c)
          m(r, c) = scale * rng.gaussian_cplx() / std::sqrt(2.0 * dim);
      return m;
    };
    const MatrixXcd P = MatrixXcd::Identity(dim, dim) + draw(0.25);
    const MatrixXcd B = draw(0.5);
    const MatrixXcd A = 2.0 * MatrixXcd::Identity(dim, dim) + draw(0.5);
    const OperatorSymbol conv =
        with_conv ? symbols::seeded_random_smooth(
                        seed * 131ull + static_cast<std::uint64_t>(attempt),
                        dim, dim)
                  : zero_convolutor(dim);
    AeeProblem pb(P, B, A, conv, K);
    // Admissible means comfortably invertible: a conditioning floor keeps
    // identity residuals of the battery well inside tolerance.
    bool ok = true;
    for (int k = -K; k <= K && ok; ++k) {
      const MatrixXcd bk = assemble_b(pb, k);
      const auto inv = try_invert(bk);
      ok = inv && symbols::operator_norm(*inv) * symbols::operator_norm(bk) <=
                      1e4;
    }
    if (ok) return pb;
  }
  throw Error("seeded_problem: no admissible draw found");
}

}  // namespace torus_mreg::aee
