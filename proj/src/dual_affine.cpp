#include "ncp/dual_affine.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ncp/errors.hpp"

namespace ncp {

namespace {

constexpr double kRealTolerance = 1e-12;
constexpr double kAbutTolerance = 1e-12;

double real_part_checked(Complex z, const char* what) {
  if (std::abs(z.imag()) > kRealTolerance * (1.0 + std::abs(z.real()))) {
    throw PreconditionError(std::string(what) + " has imaginary part " +
                            std::to_string(z.imag()) + ", expected a real value");
  }
  return z.real();
}

void check_abutting(const Interval& left, const Interval& right) {
  if (std::abs(left.t - right.s) > kAbutTolerance * (1.0 + std::abs(left.t))) {
    throw PreconditionError("intervals [" + std::to_string(left.s) + ", " +
                            std::to_string(left.t) + ") and [" + std::to_string(right.s) +
                            ", " + std::to_string(right.t) + ") do not abut");
  }
}

}  // namespace

AffineIncrementFree identity_increment_free(const FockSpace& space, double s) {
  return {identity_operator(space), zero_operator(space), {s, s}};
}

AffineIncrementFree compose_free(const AffineIncrementFree& st, const AffineIncrementFree& tu) {
  check_abutting(st.interval, tu.interval);
  FockOperator a = tu.a * st.a;
  FockOperator b = tu.a * st.b * tu.a.adjoint() + tu.b;
  if (st.b.hermiticity_defect() == 0.0 && tu.b.hermiticity_defect() == 0.0) {
    // (M + M^*) / 2 is Hermitian entry for entry in floating point, which
    // keeps the defect at exactly zero along arbitrarily long flows.
    b = (b + b.adjoint()) * Complex{0.5, 0.0};
  }
  return {std::move(a), std::move(b), {st.interval.s, tu.interval.t}};
}

namespace {

void check_tensor_word(const std::vector<int>& word) {
  if (word.size() > static_cast<std::size_t>(kDefaultWordCap)) {
    throw SizeLimitError("word length " + std::to_string(word.size()) +
                         " exceeds the cap of " + std::to_string(kDefaultWordCap));
  }
  for (int letter : word) {
    if (letter != 1 && letter != 2) {
      throw ShapeError("tensor increment words use generators 1 (A) and 2 (B), got " +
                       std::to_string(letter));
    }
  }
}

}  // namespace

Complex compose_tensor_moment(const MarginalLaw& st, const MarginalLaw& tu,
                              const std::vector<int>& word) {
  check_tensor_word(word);
  if (st.family() == tu.family()) {
    throw PreconditionError("the two increment laws must carry distinct family ids, both are " +
                            std::to_string(st.family()));
  }
  std::vector<std::size_t> b_positions;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (word[i] == 2) b_positions.push_back(i);
  }
  const int cap = static_cast<int>(2 * word.size()) + 1;
  const std::vector<MarginalLaw> laws{st, tu};
  Complex total{};
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << b_positions.size()); ++mask) {
    // Bit set: that B letter takes the fresh branch B_tu; bit clear: the
    // propagated branch A_tu B_st.  A letters always expand to A_tu A_st.
    Word mixed;
    mixed.reserve(2 * word.size());
    std::size_t b_seen = 0;
    for (std::size_t i = 0; i < word.size(); ++i) {
      if (word[i] == 1) {
        mixed.push_back({tu.family(), 1});
        mixed.push_back({st.family(), 1});
      } else if ((mask >> b_seen++) & 1U) {
        mixed.push_back({tu.family(), 2});
      } else {
        mixed.push_back({tu.family(), 1});
        mixed.push_back({st.family(), 2});
      }
    }
    total += tensor_mixed_moment(mixed, laws, cap);
  }
  return total;
}

MarginalLaw compose_tensor_law(const MarginalLaw& st, const MarginalLaw& tu, int out_family,
                               int max_order) {
  if (max_order < 1 || max_order > kDefaultWordCap) {
    throw ShapeError("max_order must lie in [1, " + std::to_string(kDefaultWordCap) +
                     "], got " + std::to_string(max_order));
  }
  std::map<std::vector<int>, Complex> moments;
  std::vector<std::vector<int>> frontier{{}};
  for (int length = 1; length <= max_order; ++length) {
    std::vector<std::vector<int>> next;
    next.reserve(frontier.size() * 2);
    for (const auto& stem : frontier) {
      for (int letter : {1, 2}) {
        std::vector<int> word = stem;
        word.push_back(letter);
        moments[word] = compose_tensor_moment(st, tu, word);
        next.push_back(std::move(word));
      }
    }
    frontier = std::move(next);
  }
  return MarginalLaw(out_family, std::move(moments));
}

MarginalLaw identity_tensor_law(int family, int max_order) {
  if (max_order < 1 || max_order > kDefaultWordCap) {
    throw ShapeError("max_order must lie in [1, " + std::to_string(kDefaultWordCap) +
                     "], got " + std::to_string(max_order));
  }
  std::map<std::vector<int>, Complex> moments;
  std::vector<std::vector<int>> frontier{{}};
  for (int length = 1; length <= max_order; ++length) {
    std::vector<std::vector<int>> next;
    next.reserve(frontier.size() * 2);
    for (const auto& stem : frontier) {
      for (int letter : {1, 2}) {
        std::vector<int> word = stem;
        word.push_back(letter);
        const bool pure_a = std::all_of(word.begin(), word.end(),
                                        [](int g) { return g == 1; });
        moments[word] = pure_a ? Complex{1.0, 0.0} : Complex{};
        next.push_back(std::move(word));
      }
    }
    frontier = std::move(next);
  }
  return MarginalLaw(family, std::move(moments));
}

AffineIncrementTensor compose_tensor(const AffineIncrementTensor& st,
                                     const AffineIncrementTensor& tu, int max_order) {
  check_abutting(st.interval, tu.interval);
  return {compose_tensor_law(st.law, tu.law, st.law.family(), max_order),
          {st.interval.s, tu.interval.t}};
}

namespace {

// Sparse vacuum-cyclic state of the discretized flow: words over the step
// slots 1..N, encoded in base N + 1 with the first letter in the lowest
// digit; key 0 is the vacuum.
using SparseState = std::unordered_map<std::uint64_t, Complex>;

// One application of the composite additive part
//   b = sum_i c_i (creation_i + annihilation_i) sqrt(delta) c_i^*,
// where c_i multiplies a word by gamma exactly when its first letter lies
// in a slot later than i.  Unwinding the conjugations gives, on a word w
// with first letter f (0 for the vacuum):
//   prepend slot i:  amplitude sqrt(delta) * (f > i ? conj(gamma) : 1)
//   strip f:         amplitude sqrt(delta) * (first(tail) > f ? gamma : 1)
// The two amplitude families are conjugate, so b is Hermitian entry for
// entry and vacuum moments are real.
SparseState apply_azema_step(const SparseState& state, int steps, std::uint64_t base,
                             Complex gamma, double root, long cap) {
  SparseState next;
  next.reserve(state.size() * static_cast<std::size_t>(steps) / 2 + 16);
  const Complex conj_gamma = std::conj(gamma);
  for (const auto& [key, amp] : state) {
    const int first = static_cast<int>(key % base);
    for (int i = 1; i <= steps; ++i) {
      const Complex factor = first > i ? conj_gamma : Complex{1.0, 0.0};
      next[key * base + static_cast<std::uint64_t>(i)] += amp * root * factor;
    }
    if (first > 0) {
      const std::uint64_t tail = key / base;
      const int tail_first = static_cast<int>(tail % base);
      const Complex factor = tail_first > first ? gamma : Complex{1.0, 0.0};
      next[tail] += amp * root * factor;
    }
  }
  if (static_cast<long>(next.size()) > cap) {
    throw SizeLimitError("flow state support " + std::to_string(next.size()) +
                         " exceeds the basis cap of " + std::to_string(cap) +
                         " (set NCP_MAX_BASIS to raise it)");
  }
  return next;
}

Complex sparse_pairing(const SparseState& left, const SparseState& right) {
  const SparseState& outer = left.size() <= right.size() ? left : right;
  const SparseState& inner = left.size() <= right.size() ? right : left;
  const bool swapped = &outer != &left;
  Complex total{};
  for (const auto& [key, amp] : outer) {
    const auto it = inner.find(key);
    if (it == inner.end()) continue;
    total += swapped ? std::conj(it->second) * amp : std::conj(amp) * it->second;
  }
  return total;
}

}  // namespace

std::map<int, double> azema_free_moments(Complex gamma, double t, int steps, int depth,
                                         int max_order) {
  if (steps < 1) {
    throw ShapeError("the discretization needs at least one step, got " + std::to_string(steps));
  }
  if (!(t > 0.0)) {
    throw PreconditionError("the time horizon must be positive, got " + std::to_string(t));
  }
  if (max_order < 1) {
    throw ShapeError("max_order must be at least 1, got " + std::to_string(max_order));
  }
  if (max_order > depth) {
    throw DepthError("max_order " + std::to_string(max_order) + " exceeds depth " +
                     std::to_string(depth) + "; truncation would not be exact");
  }
  const std::uint64_t base = static_cast<std::uint64_t>(steps) + 1;
  const int half_up = (max_order + 1) / 2;
  long double capacity = 1.0L;
  for (int i = 0; i < half_up; ++i) capacity *= static_cast<long double>(base);
  if (capacity > 9.0e18L) {
    throw SizeLimitError("words of length " + std::to_string(half_up) + " over " +
                         std::to_string(steps) + " slots overflow the 64-bit key space");
  }
  const double root = std::sqrt(t / static_cast<double>(steps));
  const long cap = default_basis_cap();
  // Words reachable after j applications have length <= j with the parity
  // of j, so the deepest level's support is known in advance; refuse the
  // request before materializing anything oversized.
  long double support = 0.0L;
  for (int l = half_up; l >= 0; l -= 2) {
    support += std::pow(static_cast<long double>(steps), static_cast<long double>(l));
  }
  if (support > static_cast<long double>(cap)) {
    throw SizeLimitError("flow state support would reach about " +
                         std::to_string(static_cast<double>(support)) +
                         " words, beyond the basis cap of " + std::to_string(cap) +
                         " (set NCP_MAX_BASIS to raise it)");
  }

  std::vector<SparseState> ladder;
  ladder.reserve(static_cast<std::size_t>(half_up) + 1);
  ladder.push_back({{0, Complex{1.0, 0.0}}});
  for (int level = 1; level <= half_up; ++level) {
    ladder.push_back(apply_azema_step(ladder.back(), steps, base, gamma, root, cap));
  }

  std::map<int, double> out;
  for (int k = 1; k <= max_order; ++k) {
    const int lo = k / 2;
    const int hi = k - lo;
    const Complex val = sparse_pairing(ladder[static_cast<std::size_t>(hi)],
                                       ladder[static_cast<std::size_t>(lo)]);
    out[k] = real_part_checked(val, "flow moment");
  }
  return out;
}

AzemaConvergenceReport azema_convergence(Complex gamma, double t, int depth, int max_order,
                                         double threshold) {
  AzemaConvergenceReport report;
  report.step_counts = {4, 8, 16, 32};
  for (int n : report.step_counts) {
    const auto moments = azema_free_moments(gamma, t, n, depth, max_order);
    for (const auto& [order, value] : moments) {
      report.moments[order].push_back(value);
    }
  }
  report.converged = true;
  for (const auto& [order, values] : report.moments) {
    double min_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 2 < values.size(); ++i) {
      const double coarse = std::abs(values[i + 1] - values[i]);
      const double fine = std::abs(values[i + 2] - values[i + 1]);
      const double floor = 1e-11 * (1.0 + std::abs(values.back()));
      if (coarse <= floor && fine <= floor) continue;
      min_ratio = std::min(min_ratio, coarse / std::max(fine, floor));
    }
    report.min_ratio[order] = min_ratio;
    if (min_ratio < threshold) report.converged = false;
  }
  return report;
}

namespace {

AffineIncrementFree family_increment(const AffineFamilySpec& spec, const FockSpace& space,
                                     double s, double t) {
  const double root = std::sqrt(t - s);
  const CVector unit = CVector::Constant(1, Complex{1.0, 0.0});
  const CMatrix shift = CMatrix::Constant(1, 1, spec.gamma - Complex{1.0, 0.0});
  FockOperator a = identity_operator(space) + conservation(space, shift);
  FockOperator b = creation(space, (root * unit).eval()) + annihilation(space, (root * unit).eval());
  if (spec.distortion != 0.0) {
    const Complex bias{spec.distortion * (0.5 + s), 0.0};
    a = a + scalar_operator(space, bias);
    b = b + scalar_operator(space, bias);
  }
  return {std::move(a), std::move(b), {s, t}};
}

std::vector<Complex> vacuum_powers(const FockOperator& x, int order) {
  CVector state = CVector::Zero(x.space().total_dim());
  state(0) = Complex{1.0, 0.0};
  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(order));
  for (int k = 1; k <= order; ++k) {
    state = x.apply(state);
    out.push_back(state(0));
  }
  return out;
}

}  // namespace

IncrementPropertyReport increment_properties_check(const AffineFamilySpec& spec) {
  if (spec.depth < 1) {
    throw ShapeError("the property check needs depth at least 1, got " +
                     std::to_string(spec.depth));
  }
  const FockSpace space(1, spec.depth);
  const int order = std::min(4, spec.depth);

  IncrementPropertyReport report;

  report.stationary = true;
  for (double h : {0.5, 1.0}) {
    const auto base = vacuum_powers(family_increment(spec, space, 0.0, h).b, order);
    for (double s : {1.0, 2.5}) {
      const auto shifted = vacuum_powers(family_increment(spec, space, s, s + h).b, order);
      for (int k = 0; k < order; ++k) {
        if (std::abs(shifted[static_cast<std::size_t>(k)] - base[static_cast<std::size_t>(k)]) >
            1e-10) {
          report.stationary = false;
        }
      }
    }
  }

  report.continuous_at_zero = true;
  const auto small = vacuum_powers(family_increment(spec, space, 0.0, 1e-3).b, order);
  for (int k = 0; k < order; ++k) {
    if (std::abs(small[static_cast<std::size_t>(k)]) > 1e-2) {
      report.continuous_at_zero = false;
    }
  }

  report.unital = true;
  const auto powers = vacuum_powers(family_increment(spec, space, 1.0, 2.0).a, order);
  for (int k = 0; k < order; ++k) {
    if (std::abs(powers[static_cast<std::size_t>(k)] - Complex{1.0, 0.0}) > 1e-12) {
      report.unital = false;
    }
  }

  return report;
}

}  // namespace ncp
