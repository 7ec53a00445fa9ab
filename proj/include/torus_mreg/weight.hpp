// Positive weights on the uniform circle grid. The type lives apart from the
// weight operations so space descriptors can hold weights without pulling in
// the maximal-function machinery.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "torus_mreg/common.hpp"

namespace torus_mreg {

struct Weight {
  // Strictly positive samples on t_g = -pi + 2pi g / G; G a power of two.
  std::vector<double> samples;

  // Construction tag, kept so refinement studies can resample closed forms.
  enum class Tag { samples, constant, power };
  Tag tag = Tag::samples;
  double param = 0.0;  // constant value, or power exponent alpha

  int grid() const { return static_cast<int>(samples.size()); }
  void validate() const;
};

Weight constant_weight(double value, int grid);

// |t|^alpha sampled by exact cell averages, which keeps every sample strictly
// positive (the cell straddling t = 0 averages to a positive value).
Weight power_weight(double alpha, int grid);

Weight weight_from_samples(std::vector<double> samples);

// Resamples a tagged closed-form weight on a new grid; errors for Tag::samples.
Weight resample_weight(const Weight& w, int grid);

// Pointwise power w^e, e.g. the dual exponent map w -> w^{1-p'}.
Weight weight_pow(const Weight& w, double e);

}  // namespace torus_mreg
