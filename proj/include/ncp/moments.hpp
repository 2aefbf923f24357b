#pragma once

#include <string>
#include <vector>

namespace ncp {

/// The three independence flavors whose convolutions are linearized by
/// cumulants indexed by set / non-crossing / interval partitions.
enum class Flavor { Classical, Free, Boolean };

std::string flavor_name(Flavor f);
Flavor parse_flavor(const std::string& name);

/// Highest moment/cumulant order supported per flavor, bounded by the
/// corresponding partition-family cap.
int flavor_order_cap(Flavor f);

/// A law given by its raw moments m_1..m_N; m_0 = 1 is implicit.
struct MomentSequence {
  std::vector<double> values;

  MomentSequence() = default;
  explicit MomentSequence(std::vector<double> v) : values(std::move(v)) {}

  int order() const { return static_cast<int>(values.size()); }

  /// m_k for 0 <= k <= order, with m_0 = 1.
  double moment(int k) const;
};

/// Cumulants kappa_1..kappa_N tagged with their independence flavor.
struct CumulantSequence {
  Flavor flavor = Flavor::Classical;
  std::vector<double> values;

  CumulantSequence() = default;
  CumulantSequence(Flavor f, std::vector<double> v) : flavor(f), values(std::move(v)) {}

  int order() const { return static_cast<int>(values.size()); }
};

/// Solves m_n = sum over partitions pi of {1..n} of prod_{B in pi}
/// kappa_{|B|} for kappa, where pi ranges over all set partitions
/// (classical), non-crossing partitions (free), or interval partitions
/// (boolean). Triangular: kappa_n appears with coefficient 1.
CumulantSequence moments_to_cumulants(const MomentSequence& m, Flavor flavor);

/// Forward partition sum; exact inverse of moments_to_cumulants.
MomentSequence cumulants_to_moments(const CumulantSequence& k);

/// Additive convolution in the given flavor: cumulants add.
MomentSequence convolve(const MomentSequence& m1, const MomentSequence& m2, Flavor flavor);

/// Classical cumulants of m reinterpreted verbatim as free cumulants, then
/// mapped back to moments.
MomentSequence bercovici_pata(const MomentSequence& m);

/// Diagnostic: bercovici_pata intertwines classical and free convolution
/// (entrywise to 1e-9).
bool is_homomorphism_check(const MomentSequence& m1, const MomentSequence& m2);

/// True iff every leading Hankel matrix [m_{i+j}]_{0<=i,j<=k}, 2k <= N, has
/// smallest eigenvalue >= -1e-9 * (1 + trace).
bool hankel_psd(const MomentSequence& m);

}  // namespace ncp
