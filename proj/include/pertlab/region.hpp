#pragma once

#include <cstdint>

#include "pertlab/extended.hpp"
#include "pertlab/kernel.hpp"
#include "pertlab/measure.hpp"
#include "pertlab/parallel.hpp"

namespace pertlab {

struct RegionSettings {
  std::uint64_t seed = 20240607;
  long min_samples = 256;
  long max_samples = 1L << 20;
  /// Largest admissible relative standard error.
  double rel_se_cap = 0.02;
  Exec exec = Exec::parallel;
  /// Radii above this use certified upper bounds instead of sampling.
  double sampling_limit = 0x1p40;
};

struct RegionEstimate {
  double value = 0.0;
  double log_value = -kInf;
  double stderr_abs = 0.0;
  long samples = 0;
  /// Exact zero or closed form; no sampling error.
  bool exact = false;
  /// Certified upper bound rather than an estimate.
  bool bound = false;
  double rel_se() const { return value > 0.0 ? stderr_abs / value : 0.0; }
};

/// gamma_{n,k} = int int_{|x-y|>k, |y|>=n-1} q(x,y) mu(dy) mu(dx)
RegionEstimate region_gamma(const RadialModel& model, const JumpKernel& kernel, const Extent& n, const Extent& k,
                            const RegionSettings& s = {});
/// eta_{n,k} = int int_{|x|>n+k+2, |y|<=n+1} q(x,y) mu(dy) mu(dx)
RegionEstimate region_eta(const RadialModel& model, const JumpKernel& kernel, const Extent& n, const Extent& k,
                          const RegionSettings& s = {});
/// tilde gamma_k = int int_{|x-y|>k} q(x,y) mu(dy) mu(dx)
RegionEstimate region_tilde_gamma(const RadialModel& model, const JumpKernel& kernel, const Extent& k,
                                  const RegionSettings& s = {});
/// tilde eta_{n,k} = int int_{|x|>n+k+1, |y|<=n+1} q(x,y) mu(dy) mu(dx)
RegionEstimate region_tilde_eta(const RadialModel& model, const JumpKernel& kernel, const Extent& n,
                                const Extent& k, const RegionSettings& s = {});

}  // namespace pertlab
