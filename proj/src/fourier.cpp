#include "torus_mreg/fourier.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace torus_mreg::fourier {

namespace {

// FFTW plan cache. Plan creation is not thread-safe and not free; execution
// of a cached plan on external arrays is both. Plans are created with
// FFTW_UNALIGNED so they accept any buffer.
class FftPlans {
 public:
  static FftPlans& instance() {
    static FftPlans p;
    return p;
  }

  void run(std::vector<cplx>& inout, int sign) {
    const int n = static_cast<int>(inout.size());
    fftw_plan plan = acquire(n, sign);
    std::vector<cplx> out(inout.size());
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(inout.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    inout.swap(out);
  }

 private:
  fftw_plan acquire(int n, int sign) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto key = std::make_pair(n, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    std::vector<cplx> a(n), b(n);
    fftw_plan plan = fftw_plan_dft_1d(
        n, reinterpret_cast<fftw_complex*>(a.data()),
        reinterpret_cast<fftw_complex*>(b.data()), sign,
        FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!plan) throw Error("fftw plan creation failed");
    plans_.emplace(key, plan);
    return plan;
  }

  std::mutex mutex_;
  std::map<std::pair<int, int>, fftw_plan> plans_;
};

int mod(int k, int n) {
  int r = k % n;
  return r < 0 ? r + n : r;
}

double alternating_sign(int k) { return (k % 2 == 0) ? 1.0 : -1.0; }

}  // namespace

TrigPolynomial::TrigPolynomial(int dim, int order) : dim_(dim), order_(order) {
  if (dim < 1) throw Error("TrigPolynomial: dim must be >= 1");
  if (order < 0) throw Error("TrigPolynomial: order must be >= 0");
  table_.assign(2 * order + 1, VectorXcd::Zero(dim));
}

const VectorXcd& TrigPolynomial::coeff(int k) const {
  if (k < -order_ || k > order_)
    throw Error("TrigPolynomial::coeff: |k| exceeds order");
  return table_[k + order_];
}

void TrigPolynomial::set_coeff(int k, const VectorXcd& value) {
  if (k < -order_ || k > order_)
    throw Error("TrigPolynomial::set_coeff: |k| exceeds order");
  if (value.size() != dim_)
    throw Error("TrigPolynomial::set_coeff: wrong dimension");
  table_[k + order_] = value;
}

TrigPolynomial TrigPolynomial::with_order(int new_order) const {
  if (new_order < order_)
    throw Error("TrigPolynomial::with_order: cannot shrink order");
  TrigPolynomial g(dim_, new_order);
  for (int k = -order_; k <= order_; ++k) g.set_coeff(k, coeff(k));
  return g;
}

VectorXcd TrigPolynomial::value_at(double t) const {
  VectorXcd v = VectorXcd::Zero(dim_);
  for (int k = -order_; k <= order_; ++k) {
    const VectorXcd& c = table_[k + order_];
    if (c.isZero(0.0)) continue;
    v += c * std::exp(cplx(0.0, k * t));
  }
  return v;
}

double TrigPolynomial::max_coeff_norm() const {
  double m = 0.0;
  for (const auto& c : table_) m = std::max(m, c.norm());
  return m;
}

SampledFunction::SampledFunction(int dim_, int grid_) : dim(dim_), grid(grid_) {
  if (dim < 1) throw Error("SampledFunction: dim must be >= 1");
  if (grid < 1) throw Error("SampledFunction: grid must be >= 1");
  values.assign(grid, VectorXcd::Zero(dim));
}

std::vector<double> SampledFunction::magnitudes() const {
  std::vector<double> m(values.size());
  for (std::size_t g = 0; g < values.size(); ++g) m[g] = values[g].norm();
  return m;
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

int default_grid(int order) {
  int need = std::max(2 * order + 2, 4);
  int g = 4;
  while (g < need) g *= 2;
  return g;
}

std::vector<cplx> dft(std::vector<cplx> x, int sign) {
  if (!is_power_of_two(static_cast<int>(x.size())))
    throw Error("dft: length must be a power of two");
  if (sign != 1 && sign != -1) throw Error("dft: sign must be +1 or -1");
  FftPlans::instance().run(x, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD);
  return x;
}

SampledFunction synthesize(const TrigPolynomial& f, int grid) {
  if (!is_power_of_two(grid)) throw Error("synthesize: grid not a power of two");
  if (grid < 2 * f.order() + 2) throw Error("synthesize: grid too small for order");
  const int d = f.dim();
  // With t_g = -pi + 2pi g/G, e^{ik t_g} = (-1)^k e^{2pi i k g / G}, so the
  // series is an unnormalized inverse DFT of sign-flipped coefficients.
  std::vector<std::vector<cplx>> bins(d, std::vector<cplx>(grid, cplx(0, 0)));
  for (int k = -f.order(); k <= f.order(); ++k) {
    const VectorXcd& c = f.coeff(k);
    const double s = alternating_sign(k);
    const int bin = mod(k, grid);
    for (int j = 0; j < d; ++j) bins[j][bin] += s * c(j);
  }
  SampledFunction out(d, grid);
  for (int j = 0; j < d; ++j) {
    FftPlans::instance().run(bins[j], FFTW_BACKWARD);
    for (int g = 0; g < grid; ++g) out.values[g](j) = bins[j][g];
  }
  return out;
}

TrigPolynomial analyze(const SampledFunction& samples, int order) {
  const int grid = samples.grid;
  if (!is_power_of_two(grid)) throw Error("analyze: grid not a power of two");
  if (grid < 2 * order + 2) throw Error("analyze: order too large for grid");
  const int d = samples.dim;
  TrigPolynomial f(d, order);
  std::vector<cplx> buf(grid);
  for (int j = 0; j < d; ++j) {
    for (int g = 0; g < grid; ++g) buf[g] = samples.values[g](j);
    FftPlans::instance().run(buf, FFTW_FORWARD);
    for (int k = -order; k <= order; ++k) {
      VectorXcd c = f.coeff(k);
      c(j) = alternating_sign(k) * buf[mod(k, grid)] / static_cast<double>(grid);
      f.set_coeff(k, c);
    }
  }
  return f;
}

TrigPolynomial apply_multiplier(const std::function<MatrixXcd(int)>& m,
                                const TrigPolynomial& f) {
  int out_dim = -1;
  TrigPolynomial g(1, 0);
  for (int k = -f.order(); k <= f.order(); ++k) {
    const MatrixXcd mk = m(k);
    if (mk.cols() != f.dim())
      throw Error("apply_multiplier: symbol column count != series dimension");
    if (out_dim < 0) {
      out_dim = static_cast<int>(mk.rows());
      g = TrigPolynomial(out_dim, f.order());
    } else if (mk.rows() != out_dim) {
      throw Error("apply_multiplier: symbol output dimension varies with k");
    }
    g.set_coeff(k, mk * f.coeff(k));
  }
  return g;
}

TrigPolynomial apply_scalar_multiplier(const std::function<cplx(int)>& m,
                                       const TrigPolynomial& f) {
  TrigPolynomial g(f.dim(), f.order());
  for (int k = -f.order(); k <= f.order(); ++k) g.set_coeff(k, m(k) * f.coeff(k));
  return g;
}

TrigPolynomial derivative(const TrigPolynomial& f) {
  return apply_scalar_multiplier(
      [](int k) { return cplx(0.0, static_cast<double>(k)); }, f);
}

TrigPolynomial convolve(const TrigPolynomial& f, const TrigPolynomial& g) {
  const TrigPolynomial* scalar = nullptr;
  const TrigPolynomial* vec = nullptr;
  if (f.dim() == 1) {
    scalar = &f;
    vec = &g;
  } else if (g.dim() == 1) {
    scalar = &g;
    vec = &f;
  } else if (f.dim() != g.dim()) {
    throw Error("convolve: dimensions must match or one factor be scalar");
  }
  const int order = std::min(f.order(), g.order());
  if (scalar) {
    TrigPolynomial h(vec->dim(), order);
    for (int k = -order; k <= order; ++k)
      h.set_coeff(k, scalar->coeff(k)(0) * vec->coeff(k));
    return h;
  }
  TrigPolynomial h(f.dim(), order);
  for (int k = -order; k <= order; ++k)
    h.set_coeff(k, f.coeff(k).cwiseProduct(g.coeff(k)));
  return h;
}

TrigPolynomial fejer_mean(const TrigPolynomial& f, int N) {
  if (N < 0) throw Error("fejer_mean: N must be >= 0");
  return apply_scalar_multiplier(
      [N](int k) {
        const double w = 1.0 - std::abs(k) / (N + 1.0);
        return cplx(std::max(0.0, w), 0.0);
      },
      f);
}

TrigPolynomial dirichlet_sum(const TrigPolynomial& f, int l) {
  if (l < 0) throw Error("dirichlet_sum: l must be >= 0");
  return interval_projection(f, -l, l);
}

TrigPolynomial interval_projection(const TrigPolynomial& f, int a, int b) {
  if (a > b) throw Error("interval_projection: empty frequency interval");
  return apply_scalar_multiplier(
      [a, b](int k) { return cplx((a <= k && k <= b) ? 1.0 : 0.0, 0.0); }, f);
}

TrigPolynomial hilbert_transform(const TrigPolynomial& f) {
  return apply_scalar_multiplier(
      [](int k) {
        const double s = (k > 0) ? 1.0 : (k < 0 ? -1.0 : 0.0);
        return cplx(0.0, -s);
      },
      f);
}

TrigPolynomial random_trig_polynomial(Rng& rng, int dim, int order,
                                      const std::function<double(int)>& decay) {
  TrigPolynomial f(dim, order);
  for (int k = -order; k <= order; ++k) {
    VectorXcd c(dim);
    for (int j = 0; j < dim; ++j) c(j) = rng.gaussian_cplx();
    if (decay) c *= decay(std::abs(k));
    f.set_coeff(k, c);
  }
  return f;
}

}  // namespace torus_mreg::fourier
