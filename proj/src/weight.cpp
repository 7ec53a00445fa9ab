#include "torus_mreg/weight.hpp"

#include <cmath>

#include "torus_mreg/fourier.hpp"

namespace torus_mreg {

void Weight::validate() const {
  if (samples.empty()) throw Error("Weight: empty sample grid");
  if (!fourier::is_power_of_two(grid()))
    throw Error("Weight: grid must be a power of two");
  for (double v : samples) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw Error("Weight: samples must be strictly positive and finite");
  }
}

Weight constant_weight(double value, int grid) {
  Weight w;
  w.samples.assign(grid, value);
  w.tag = Weight::Tag::constant;
  w.param = value;
  w.validate();
  return w;
}

namespace {
// Signed antiderivative of |t|^alpha, valid across the origin.
double abs_power_primitive(double t, double alpha) {
  return (t >= 0 ? 1.0 : -1.0) * std::pow(std::abs(t), alpha + 1.0) /
         (alpha + 1.0);
}
}  // namespace

Weight power_weight(double alpha, int grid) {
  if (alpha <= -1.0) throw Error("power_weight: alpha must exceed -1");
  Weight w;
  w.samples.resize(grid);
  const double h = kTwoPi / grid;
  for (int g = 0; g < grid; ++g) {
    // Sample g carries the cell [t_g, t_g + h); the exact cell average keeps
    // the sample at the origin positive.
    const double a = -kPi + h * g;
    w.samples[g] =
        (abs_power_primitive(a + h, alpha) - abs_power_primitive(a, alpha)) / h;
  }
  w.tag = Weight::Tag::power;
  w.param = alpha;
  w.validate();
  return w;
}

Weight weight_from_samples(std::vector<double> samples) {
  Weight w;
  w.samples = std::move(samples);
  w.tag = Weight::Tag::samples;
  w.validate();
  return w;
}

Weight resample_weight(const Weight& w, int grid) {
  switch (w.tag) {
    case Weight::Tag::constant:
      return constant_weight(w.param, grid);
    case Weight::Tag::power:
      return power_weight(w.param, grid);
    case Weight::Tag::samples:
      break;
  }
  throw Error("resample_weight: weight has no closed form to resample");
}

Weight weight_pow(const Weight& w, double e) {
  if (w.tag == Weight::Tag::constant)
    return constant_weight(std::pow(w.param, e), w.grid());
  Weight out;
  out.samples.resize(w.samples.size());
  for (std::size_t i = 0; i < w.samples.size(); ++i)
    out.samples[i] = std::pow(w.samples[i], e);
  out.tag = Weight::Tag::samples;
  out.validate();
  return out;
}

}  // namespace torus_mreg
