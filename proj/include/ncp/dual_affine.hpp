#pragma once

#include <map>
#include <vector>

#include "ncp/fock.hpp"
#include "ncp/interval.hpp"
#include "ncp/mixed_moments.hpp"

namespace ncp {

/// One increment of the free affine flow over [s, t): a multiplicative part
/// a and an additive part b acting on the same Fock space.
struct AffineIncrementFree {
  FockOperator a;
  FockOperator b;
  Interval interval;
};

/// The neutral increment at time s: a = identity, b = 0 on [s, s).
AffineIncrementFree identity_increment_free(const FockSpace& space, double s);

/// Composes abutting increments (st over [s, t), tu over [t, u)) by the
/// flow rule
///   a_su = a_tu a_st,   b_su = a_tu b_st a_tu^* + b_tu.
/// Throws PreconditionError when the intervals do not abut and
/// MixedSpaceError when the operators live on different spaces.  When both
/// additive parts are exactly Hermitian the result's additive part is
/// re-symmetrized so it is exactly Hermitian as well.
AffineIncrementFree compose_free(const AffineIncrementFree& st, const AffineIncrementFree& tu);

/// One increment of the commuting (tensor) affine flow, described by the
/// joint moments of the pair (A, B) as words over generators 1 = A, 2 = B.
struct AffineIncrementTensor {
  MarginalLaw law;
  Interval interval;
};

/// Joint moment of the composed pair
///   A_su = A_tu A_st,   B_su = A_tu B_st + B_tu
/// for tensor-independent increments: each requested letter is expanded
/// multilinearly and the resulting mixed words are evaluated against the
/// product of the two laws.  The laws must carry distinct family ids.
Complex compose_tensor_moment(const MarginalLaw& st, const MarginalLaw& tu,
                              const std::vector<int>& word);

/// Tabulates the composed law on every word up to max_order, so the result
/// can enter further compositions under the given family id.
MarginalLaw compose_tensor_law(const MarginalLaw& st, const MarginalLaw& tu, int out_family,
                               int max_order);

/// The neutral tensor increment law (A = 1, B = 0) up to max_order.
MarginalLaw identity_tensor_law(int family, int max_order);

/// Composition of tensor increments with interval bookkeeping; the result
/// keeps st's family id.
AffineIncrementTensor compose_tensor(const AffineIncrementTensor& st,
                                     const AffineIncrementTensor& tu, int max_order);

/// Vacuum moments <vacuum, b^k vacuum>, k = 1..max_order, of the additive
/// part of the N-step discretized flow over [0, t) with conservation
/// parameter gamma.  Step i contributes the atom pair
///   a_i = identity + conservation_i(gamma - 1),
///   b_i = creation_i(sqrt(t/N)) + annihilation_i(sqrt(t/N))
/// on the free product of N one-dimensional factors, composed left to
/// right with compose_free.  The evaluation never forms the composite
/// matrix: the additive part has no conservation component, so k
/// applications from the vacuum reach only words of length <= k, and the
/// state ladder tracks exactly that sparse support.  Memory is bounded by
/// default_basis_cap (SizeLimitError beyond it); max_order must not exceed
/// depth (DepthError), matching the truncation contract of the dense path.
std::map<int, double> azema_free_moments(Complex gamma, double t, int steps, int depth,
                                         int max_order);

/// Moments of the discretized flow on the doubling schedule steps = 4, 8,
/// 16, 32, with successive-difference ratios per order: ratio[k] is the
/// smallest |m_{2N} - m_N| shrink factor along the schedule (infinity when
/// the differences are already at rounding level).  converged reports
/// whether every order's ratio meets the threshold.
struct AzemaConvergenceReport {
  std::vector<int> step_counts;
  std::map<int, std::vector<double>> moments;
  std::map<int, double> min_ratio;
  bool converged = false;
};

AzemaConvergenceReport azema_convergence(Complex gamma, double t, int depth, int max_order,
                                         double threshold = 1.5);

/// A stationary one-step increment family used by the property checks: the
/// increment over [s, t) has a = identity + conservation(gamma - 1) and
/// b = creation(sqrt(t - s)) + annihilation(sqrt(t - s)) on one factor.
/// A nonzero distortion injects an s-dependent scalar into both parts,
/// breaking the flow axioms on purpose (negative-path probe).
struct AffineFamilySpec {
  Complex gamma{1.0, 0.0};
  int depth = 4;
  double distortion = 0.0;
};

struct IncrementPropertyReport {
  bool stationary = false;
  bool continuous_at_zero = false;
  bool unital = false;
  bool ok() const { return stationary && continuous_at_zero && unital; }
};

/// Probes the flow axioms on the family: moments of b over [s, s + h)
/// must not depend on s, must vanish as h drops to 0, and pure powers of a
/// must have vacuum expectation 1.
IncrementPropertyReport increment_properties_check(const AffineFamilySpec& spec);

}  // namespace ncp
