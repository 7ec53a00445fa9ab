// Banach function space descriptors with computable norms, the dyadic
// Littlewood-Paley resolution, and Besov / Triebel-Lizorkin norms for
// band-limited functions.
#pragma once

#include <limits>
#include <optional>

#include "torus_mreg/fourier.hpp"
#include "torus_mreg/polynomial.hpp"
#include "torus_mreg/weight.hpp"

namespace torus_mreg::spaces {

using fourier::SampledFunction;
using fourier::TrigPolynomial;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// L^p or weighted L^p_w over (T, dt). Duals are computed explicitly:
// (L^p)' = L^{p'} and (L^p_w)' = L^{p'}_{w^{1-p'}} under the convention
// ||f||_{L^p_w} = (Int |f|^p w dt)^{1/p}.
struct SpaceDescriptor {
  enum class Kind { Lp, WeightedLp };
  Kind kind = Kind::Lp;
  double p = 2.0;  // [1, inf] for Lp, (1, inf) for WeightedLp
  std::optional<Weight> weight;

  static SpaceDescriptor lp(double p);
  static SpaceDescriptor weighted_lp(double p, Weight w);
  SpaceDescriptor dual() const;
  std::string label() const;
};

// ||  |f(.)|_{l^2}  ||_Phi by grid quadrature. The TrigPolynomial overload
// samples on a deterministic grid: four times the minimal band-limited grid,
// enlarged to a multiple of the weight grid when present.
double phi_norm(const SampledFunction& f, const SpaceDescriptor& phi);
double phi_norm(const TrigPolynomial& f, const SpaceDescriptor& phi);

// Dyadic resolution of identity built from an even C^J plateau function:
// psi = 1 on [-1,1], supp psi in [-2,2], polynomial smoothstep on (1,2).
// psi_0 = psi and psi_j = psi(2^{-j} .) - psi(2^{-j+1} .) for j >= 1, so
// sum_{j<=N} psi_j(t) = psi(2^{-N} t) exactly.
class LittlewoodPaley {
 public:
  explicit LittlewoodPaley(int J);

  int smoothness() const { return J_; }

  double psi(double t) const;
  // r-th derivative of psi, r <= J (psi is C^J; higher orders have jumps).
  double psi_derivative(double t, int r) const;

  double psi_j(int j, double t) const;
  double psi_j_derivative(int j, double t, int r) const;

  // chi_j = psi_{j-1} + psi_j + psi_{j+1} with psi_{-1} = 0; equals 1 on the
  // support of psi_j.
  double chi_j(int j, double t) const;

 private:
  int J_;
  Polynomial<double> step_;  // smoothstep S with S(0)=0, S(1)=1, C^J flat ends
};

LittlewoodPaley make_littlewood_paley(int J);

struct SmoothnessSpace {
  enum class Kind { Besov, TriebelLizorkin };
  Kind kind = Kind::Besov;
  double s = 0.0;
  double q = 2.0;  // [1, inf] for Besov, (1, inf) for TriebelLizorkin
  SpaceDescriptor base;
  int lp_order = 4;  // smoothness J of the generating psi

  static SmoothnessSpace besov(double s, double q, SpaceDescriptor base,
                               int J = 4);
  static SmoothnessSpace triebel_lizorkin(double s, double q,
                                          SpaceDescriptor base, int J = 4);
};

// Coefficient k scaled by psi_j(k).
TrigPolynomial dyadic_block(const TrigPolynomial& f, int j,
                            const LittlewoodPaley& lp);

// Largest block index that can meet frequencies |k| <= order; blocks beyond
// it vanish on band-limited input.
int max_block_index(int order);

// ( sum_j || 2^{sj} psi_j(D) f ||_Phi^q )^{1/q}, sup over j when q = inf.
double besov_norm(const TrigPolynomial& f, const SmoothnessSpace& space);

// || ( sum_j | 2^{sj} psi_j(D) f |_{l^2}^q )^{1/q} ||_Phi, blocks sampled on
// one common grid.
double triebel_lizorkin_norm(const TrigPolynomial& f,
                             const SmoothnessSpace& space);

// || d/dt f ||_{B^{s-1,q}_Phi} / || f ||_{B^{s,q}_Phi} for mean-zero f.
double derivative_equivalence_ratio(const TrigPolynomial& f,
                                    const SmoothnessSpace& space);

}  // namespace torus_mreg::spaces
