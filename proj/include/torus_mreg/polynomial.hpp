// Dense univariate polynomials with exact derivative bookkeeping.
#pragma once

#include <vector>

#include "torus_mreg/common.hpp"

namespace torus_mreg {

// Coefficients ascending: p(x) = c[0] + c[1] x + ... Scalar is double or
// long double; the kernel construction uses long double to keep junction
// residuals near machine epsilon.
template <typename Scalar>
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Scalar> coeffs) : c_(std::move(coeffs)) {
    trim();
  }

  static Polynomial zero() { return Polynomial(); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<Scalar>& coeffs() const { return c_; }

  Scalar operator()(Scalar x) const {
    Scalar acc = 0;
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
    return acc;
  }

  Polynomial derivative() const {
    if (c_.size() <= 1) return Polynomial();
    std::vector<Scalar> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i)
      d[i - 1] = c_[i] * static_cast<Scalar>(i);
    return Polynomial(std::move(d));
  }

  Polynomial derivative(int order) const {
    Polynomial p = *this;
    for (int r = 0; r < order; ++r) p = p.derivative();
    return p;
  }

  Polynomial operator*(Scalar s) const {
    std::vector<Scalar> d = c_;
    for (auto& v : d) v *= s;
    return Polynomial(std::move(d));
  }

  Polynomial operator+(const Polynomial& o) const {
    std::vector<Scalar> d(std::max(c_.size(), o.c_.size()), Scalar(0));
    for (std::size_t i = 0; i < c_.size(); ++i) d[i] += c_[i];
    for (std::size_t i = 0; i < o.c_.size(); ++i) d[i] += o.c_[i];
    return Polynomial(std::move(d));
  }

  Polynomial operator-(const Polynomial& o) const { return *this + o * Scalar(-1); }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == Scalar(0)) c_.pop_back();
  }
  std::vector<Scalar> c_;
};

}  // namespace torus_mreg
