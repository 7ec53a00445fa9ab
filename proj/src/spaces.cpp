#include "torus_mreg/spaces.hpp"

#include <cmath>
#include <sstream>

namespace torus_mreg::spaces {

namespace {

double conjugate_exponent(double p) {
  if (p == 1.0) return kInf;
  if (p == kInf) return 1.0;
  return p / (p - 1.0);
}

// Weight value aligned with a finer sample grid; requires divisibility.
const Weight& check_weight(const SpaceDescriptor& phi) {
  if (!phi.weight) throw Error("SpaceDescriptor: missing weight");
  return *phi.weight;
}

int weight_stride(const Weight& w, int grid) {
  if (grid % w.grid() != 0)
    throw Error("phi_norm: weight grid does not divide the sample grid");
  return grid / w.grid();
}

}  // namespace

SpaceDescriptor SpaceDescriptor::lp(double p) {
  if (!(p >= 1.0))
    throw Error("SpaceDescriptor: Lp requires p in [1, inf]");
  SpaceDescriptor d;
  d.kind = Kind::Lp;
  d.p = p;
  return d;
}

SpaceDescriptor SpaceDescriptor::weighted_lp(double p, Weight w) {
  if (!(p > 1.0) || p == kInf)
    throw Error("SpaceDescriptor: WeightedLp requires p in (1, inf)");
  w.validate();
  SpaceDescriptor d;
  d.kind = Kind::WeightedLp;
  d.p = p;
  d.weight = std::move(w);
  return d;
}

SpaceDescriptor SpaceDescriptor::dual() const {
  if (kind == Kind::Lp) return lp(conjugate_exponent(p));
  const double pc = conjugate_exponent(p);
  return weighted_lp(pc, weight_pow(*weight, 1.0 - pc));
}

std::string SpaceDescriptor::label() const {
  std::ostringstream os;
  os << (kind == Kind::Lp ? "L" : "weighted-L");
  if (p == kInf)
    os << "inf";
  else
    os << p;
  return os.str();
}

double phi_norm(const SampledFunction& f, const SpaceDescriptor& phi) {
  if (f.grid <= 0 || f.values.empty()) throw Error("phi_norm: empty grid");
  const std::vector<double> mag = f.magnitudes();
  if (phi.kind == SpaceDescriptor::Kind::Lp && phi.p == kInf) {
    double m = 0.0;
    for (double v : mag) m = std::max(m, v);
    return m;
  }
  const double h = kTwoPi / f.grid;
  double acc = 0.0;
  if (phi.kind == SpaceDescriptor::Kind::Lp) {
    for (double v : mag) acc += std::pow(v, phi.p);
  } else {
    const Weight& w = check_weight(phi);
    const int stride = weight_stride(w, f.grid);
    for (int g = 0; g < f.grid; ++g)
      acc += std::pow(mag[g], phi.p) * w.samples[g / stride];
  }
  return std::pow(acc * h, 1.0 / phi.p);
}

namespace {
int quadrature_grid(int order, const SpaceDescriptor& phi) {
  int grid = 4 * fourier::default_grid(order);
  if (phi.kind == SpaceDescriptor::Kind::WeightedLp)
    grid = std::max(grid, check_weight(phi).grid());
  return grid;
}
}  // namespace

double phi_norm(const TrigPolynomial& f, const SpaceDescriptor& phi) {
  return phi_norm(fourier::synthesize(f, quadrature_grid(f.order(), phi)), phi);
}

// Smoothstep of order N: S(0)=0, S(1)=1, derivatives 1..N vanish at both
// ends. Coefficients are integers, so the plateau joins are exact.
namespace {
Polynomial<double> smoothstep(int N) {
  std::vector<double> c(2 * N + 2, 0.0);
  for (int n = 0; n <= N; ++n) {
    const double coef =
        binomial(N + n, n) * binomial(2 * N + 1, N - n) * ((n % 2) ? -1.0 : 1.0);
    c[N + 1 + n] = coef;
  }
  return Polynomial<double>(std::move(c));
}
}  // namespace

LittlewoodPaley::LittlewoodPaley(int J) : J_(J), step_(smoothstep(J)) {
  if (J < 2) throw Error("LittlewoodPaley: smoothness order must be >= 2");
}

LittlewoodPaley make_littlewood_paley(int J) { return LittlewoodPaley(J); }

double LittlewoodPaley::psi(double t) const {
  const double a = std::abs(t);
  if (a <= 1.0) return 1.0;
  if (a >= 2.0) return 0.0;
  // S(x) = 1 - S(1-x); evaluating on the small-argument half avoids the
  // cancellation that would push psi outside [0, 1].
  const double x = a - 1.0;
  return (x <= 0.5) ? 1.0 - step_(x) : step_(1.0 - x);
}

double LittlewoodPaley::psi_derivative(double t, int r) const {
  if (r < 0 || r > J_)
    throw Error("LittlewoodPaley: derivative order exceeds smoothness");
  if (r == 0) return psi(t);
  const double a = std::abs(t);
  if (a <= 1.0 || a >= 2.0) return 0.0;
  const double x = a - 1.0;
  double sr;  // S^{(r)}(x), via the same symmetric split
  if (x <= 0.5)
    sr = step_.derivative(r)(x);
  else
    sr = ((r % 2) ? 1.0 : -1.0) * step_.derivative(r)(1.0 - x);
  const double inner = -sr;
  return (t < 0.0 && r % 2 == 1) ? -inner : inner;
}

double LittlewoodPaley::psi_j(int j, double t) const {
  if (j < 0) throw Error("LittlewoodPaley: block index must be >= 0");
  if (j == 0) return psi(t);
  return psi(std::ldexp(t, -j)) - psi(std::ldexp(t, -j + 1));
}

double LittlewoodPaley::psi_j_derivative(int j, double t, int r) const {
  if (j < 0) throw Error("LittlewoodPaley: block index must be >= 0");
  if (j == 0) return psi_derivative(t, r);
  return std::ldexp(psi_derivative(std::ldexp(t, -j), r), -j * r) -
         std::ldexp(psi_derivative(std::ldexp(t, -j + 1), r), -(j - 1) * r);
}

double LittlewoodPaley::chi_j(int j, double t) const {
  double v = psi_j(j, t) + psi_j(j + 1, t);
  if (j >= 1) v += psi_j(j - 1, t);
  return v;
}

SmoothnessSpace SmoothnessSpace::besov(double s, double q,
                                       SpaceDescriptor base, int J) {
  if (!(q >= 1.0)) throw Error("SmoothnessSpace: q must be in [1, inf]");
  SmoothnessSpace sp;
  sp.kind = Kind::Besov;
  sp.s = s;
  sp.q = q;
  sp.base = std::move(base);
  sp.lp_order = J;
  return sp;
}

SmoothnessSpace SmoothnessSpace::triebel_lizorkin(double s, double q,
                                                  SpaceDescriptor base,
                                                  int J) {
  if (!(q > 1.0) || q == kInf)
    throw Error("SmoothnessSpace: Triebel-Lizorkin requires q in (1, inf)");
  SmoothnessSpace sp;
  sp.kind = Kind::TriebelLizorkin;
  sp.s = s;
  sp.q = q;
  sp.base = std::move(base);
  sp.lp_order = J;
  return sp;
}

TrigPolynomial dyadic_block(const TrigPolynomial& f, int j,
                            const LittlewoodPaley& lp) {
  return fourier::apply_scalar_multiplier(
      [&](int k) { return cplx(lp.psi_j(j, static_cast<double>(k)), 0.0); }, f);
}

int max_block_index(int order) {
  int hi = 0;
  for (int j = 1; (1LL << (j - 1)) < order; ++j) hi = j;
  return hi;
}

double besov_norm(const TrigPolynomial& f, const SmoothnessSpace& space) {
  const LittlewoodPaley lp(space.lp_order);
  const int hi = max_block_index(f.order());
  double acc = 0.0, sup = 0.0;
  for (int j = 0; j <= hi; ++j) {
    const double nj = phi_norm(dyadic_block(f, j, lp), space.base);
    const double weighted = std::pow(2.0, space.s * j) * nj;
    if (space.q == kInf)
      sup = std::max(sup, weighted);
    else
      acc += std::pow(weighted, space.q);
  }
  return (space.q == kInf) ? sup : std::pow(acc, 1.0 / space.q);
}

double triebel_lizorkin_norm(const TrigPolynomial& f,
                             const SmoothnessSpace& space) {
  if (space.kind != SmoothnessSpace::Kind::TriebelLizorkin)
    throw Error("triebel_lizorkin_norm: descriptor is not a TL space");
  const LittlewoodPaley lp(space.lp_order);
  const int hi = max_block_index(f.order());
  const int grid = quadrature_grid(f.order(), space.base);
  std::vector<SampledFunction> blocks;
  blocks.reserve(hi + 1);
  for (int j = 0; j <= hi; ++j)
    blocks.push_back(fourier::synthesize(dyadic_block(f, j, lp), grid));
  SampledFunction pointwise(1, grid);
  for (int g = 0; g < grid; ++g) {
    double acc = 0.0;
    for (int j = 0; j <= hi; ++j) {
      const double v = std::pow(2.0, space.s * j) * blocks[j].values[g].norm();
      acc += std::pow(v, space.q);
    }
    pointwise.values[g](0) = std::pow(acc, 1.0 / space.q);
  }
  return phi_norm(pointwise, space.base);
}

double derivative_equivalence_ratio(const TrigPolynomial& f,
                                    const SmoothnessSpace& space) {
  if (space.kind != SmoothnessSpace::Kind::Besov)
    throw Error("derivative_equivalence_ratio: Besov spaces only");
  if (f.coeff(0).norm() != 0.0)
    throw Error("derivative_equivalence_ratio: input must be mean-zero");
  SmoothnessSpace lower = space;
  lower.s = space.s - 1.0;
  const double denom = besov_norm(f, space);
  if (denom == 0.0) throw Error("derivative_equivalence_ratio: zero input");
  return besov_norm(fourier::derivative(f), lower) / denom;
}

}  // namespace torus_mreg::spaces
