#pragma once

#include <string>
#include <vector>

#include "ncp/fock.hpp"
#include "ncp/interval.hpp"
#include "ncp/moments.hpp"

namespace ncp {

/// Generator data (d, T, u, v, lambda) of a stationary additive process:
/// a d-dimensional coefficient Hilbert space, an operator T on it, two
/// vectors u, v, and a scalar drift lambda.  The time-t marginal has
/// cumulants kappa_1 = t*lambda and kappa_n = t*<v, T^{n-2} u> for n >= 2.
struct GeneratorTuple {
  int d = 0;
  CMatrix T;
  CVector u;
  CVector v;
  Complex lambda{0.0, 0.0};

  /// Throws ShapeError unless T is d x d and u, v have length d.
  void validate() const;

  /// True when T is Hermitian, u == v and lambda is real, all up to tol.
  /// Symmetric tuples generate self-adjoint increments.
  bool is_symmetric(double tol = 1e-12) const;
};

/// A family of increments of one process: the same generator tuple attached
/// to finitely many pairwise disjoint time intervals.
struct IncrementSpec {
  GeneratorTuple tuple;
  std::vector<Interval> intervals;

  /// Throws ShapeError on bad tuple data and PreconditionError when an
  /// interval is degenerate, starts before 0, or overlaps another one.
  void validate() const;
};

/// Realizes each increment as an operator on the free Fock space over
/// (C^d)^r, r = number of intervals: increment i acts on tensor slot i as
///   conservation(T) + creation(sqrt(h) u) + annihilation(sqrt(h) v) + h lambda,
/// h = interval length.  Vacuum moments of these operators reproduce the
/// process distribution, and distinct slots are freely independent.
std::vector<FockOperator> realize_process(const IncrementSpec& spec, int depth);

/// Vacuum moments <vacuum, X^n vacuum> for n = 1..order.  Requires
/// order <= depth of X's space (DepthError otherwise) so truncation is exact.
/// Throws PreconditionError when a moment fails to be real.
MomentSequence process_moments(const FockOperator& x, int order);

/// Closed-form cumulants of the time-t marginal, tagged with the given
/// flavor.  Throws PreconditionError when a value fails to be real.
CumulantSequence tuple_cumulants(const GeneratorTuple& tuple, double t,
                                 Flavor flavor, int order);

/// Compresses the tuple onto the smallest T-invariant subspace containing
/// u and v (orthonormal basis of the joint Krylov span, singular values
/// below 1e-10 of the largest discarded).  The result has the same
/// cumulants at every order.
GeneratorTuple minimal_tuple(const GeneratorTuple& tuple);

enum class ProcessClass {
  Gaussian,
  CompoundPoisson,
  General,
};

std::string process_class_name(ProcessClass c);

/// Decides the distributional type of a symmetric tuple: Gaussian when the
/// minimal compression of T vanishes, compound Poisson when u lies in the
/// range of T and lambda matches the induced drift <w, T w> for T w = u,
/// and General otherwise.  Throws PreconditionError on asymmetric input.
ProcessClass classify(const GeneratorTuple& tuple);

/// Additive splitting of a symmetric tuple into a Gaussian part (kernel
/// component of u plus the residual drift) and a jump part (T with the
/// range component of u).  Cumulants of the parts sum to the original's.
struct ItoLevySplit {
  GeneratorTuple gaussian;
  GeneratorTuple jump;
  bool exact = false;
};

ItoLevySplit ito_levy_split(const GeneratorTuple& tuple);

/// Tuple of a compound Poisson process with finite jump measure
/// sum_i weights[i] * delta_{atoms[i]}: T = diag(atoms),
/// u = v = (sqrt(w_i) x_i), lambda = sum w_i x_i, so that
/// kappa_n = t * sum_i w_i x_i^n for every n >= 1.
GeneratorTuple compound_poisson_tuple(const std::vector<double>& atoms,
                                      const std::vector<double>& weights);

}  // namespace ncp
