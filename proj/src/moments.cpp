#include "ncp/moments.hpp"

#include <cmath>
#include <cstdint>

#include <Eigen/Dense>

#include "ncp/errors.hpp"
#include "ncp/partition.hpp"

namespace ncp {

namespace {

constexpr double kHomomorphismTolerance = 1e-9;
constexpr double kHankelTolerance = 1e-9;

// The recursions below run in extended precision: intermediate cumulants can
// reach 1e4-1e5 for moments of size 2 at order 8, and plain double
// accumulation leaves round-trip residuals right at the 1e-10 contract.

long double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0L;
  long double b = 1.0L;
  for (int i = 1; i <= k; ++i) {
    b = b * static_cast<long double>(n - k + i) / static_cast<long double>(i);
  }
  return b;
}

// Sum over compositions s = i_1+...+i_k with i_j >= 0 of m_{i_1}...m_{i_k},
// where m holds m_0..m_{>=s}.
long double composition_sum(const std::vector<long double>& m, int k, int s) {
  std::vector<long double> cur(static_cast<std::size_t>(s) + 1, 0.0L);
  cur[0] = 1.0L;
  for (int j = 0; j < k; ++j) {
    std::vector<long double> next(static_cast<std::size_t>(s) + 1, 0.0L);
    for (int a = 0; a <= s; ++a) {
      if (cur[static_cast<std::size_t>(a)] == 0.0L) continue;
      for (int b = 0; a + b <= s; ++b) {
        next[static_cast<std::size_t>(a + b)] +=
            cur[static_cast<std::size_t>(a)] * m[static_cast<std::size_t>(b)];
      }
    }
    cur = std::move(next);
  }
  return cur[static_cast<std::size_t>(s)];
}

// Coefficient of kappa_k in the partition sum for m_n, given m_0..m_{n-1}.
// Conditioning on the block containing element 1 (size k):
//   classical: choose its other members, partition the rest freely;
//   boolean:   the block is the initial interval {1..k};
//   free:      the block splits the rest into k non-crossing gaps.
// In every flavor the k = n coefficient is 1, so the system is triangular.
long double block_weight(Flavor f, const std::vector<long double>& m, int n, int k) {
  switch (f) {
    case Flavor::Classical:
      return binomial(n - 1, k - 1) * m[static_cast<std::size_t>(n - k)];
    case Flavor::Boolean:
      return m[static_cast<std::size_t>(n - k)];
    case Flavor::Free:
      return composition_sum(m, k, n - k);
  }
  throw Error("block_weight: unknown flavor");
}

void check_order(int order, Flavor f, const char* what) {
  if (order < 1) throw ShapeError(std::string(what) + ": order must be at least 1");
  if (order > flavor_order_cap(f)) {
    throw SizeLimitError(std::string(what) + ": order " + std::to_string(order) + " exceeds the " +
                         flavor_name(f) + " cap " + std::to_string(flavor_order_cap(f)));
  }
}

}  // namespace

std::string flavor_name(Flavor f) {
  switch (f) {
    case Flavor::Classical:
      return "classical";
    case Flavor::Free:
      return "free";
    case Flavor::Boolean:
      return "boolean";
  }
  throw Error("flavor_name: unknown flavor");
}

Flavor parse_flavor(const std::string& name) {
  if (name == "classical") return Flavor::Classical;
  if (name == "free") return Flavor::Free;
  if (name == "boolean") return Flavor::Boolean;
  throw ShapeError("parse_flavor: unknown flavor '" + name + "'");
}

int flavor_order_cap(Flavor f) {
  switch (f) {
    case Flavor::Classical:
      return kSetPartitionCap;
    case Flavor::Free:
      return kNoncrossingPartitionCap;
    case Flavor::Boolean:
      return kIntervalPartitionCap;
  }
  throw Error("flavor_order_cap: unknown flavor");
}

double MomentSequence::moment(int k) const {
  if (k == 0) return 1.0;
  if (k < 1 || k > order()) throw ShapeError("MomentSequence::moment: index out of range");
  return values[static_cast<std::size_t>(k - 1)];
}

CumulantSequence moments_to_cumulants(const MomentSequence& m, Flavor flavor) {
  const int N = m.order();
  check_order(N, flavor, "moments_to_cumulants");
  std::vector<long double> mm(static_cast<std::size_t>(N) + 1);
  mm[0] = 1.0L;
  for (int n = 1; n <= N; ++n) mm[static_cast<std::size_t>(n)] = m.values[static_cast<std::size_t>(n - 1)];
  std::vector<long double> kappa;
  kappa.reserve(static_cast<std::size_t>(N));
  for (int n = 1; n <= N; ++n) {
    long double s = mm[static_cast<std::size_t>(n)];
    for (int k = 1; k < n; ++k) {
      s -= kappa[static_cast<std::size_t>(k - 1)] * block_weight(flavor, mm, n, k);
    }
    kappa.push_back(s);
  }
  return CumulantSequence(flavor, std::vector<double>(kappa.begin(), kappa.end()));
}

MomentSequence cumulants_to_moments(const CumulantSequence& k) {
  const int N = k.order();
  check_order(N, k.flavor, "cumulants_to_moments");
  std::vector<long double> mm{1.0L};
  mm.reserve(static_cast<std::size_t>(N) + 1);
  for (int n = 1; n <= N; ++n) {
    long double s = 0.0L;
    for (int j = 1; j <= n; ++j) {
      s += static_cast<long double>(k.values[static_cast<std::size_t>(j - 1)]) *
           block_weight(k.flavor, mm, n, j);
    }
    mm.push_back(s);
  }
  return MomentSequence(std::vector<double>(mm.begin() + 1, mm.end()));
}

MomentSequence convolve(const MomentSequence& m1, const MomentSequence& m2, Flavor flavor) {
  if (m1.order() != m2.order()) {
    throw ShapeError("convolve: mismatched orders " + std::to_string(m1.order()) + " and " +
                     std::to_string(m2.order()));
  }
  const CumulantSequence k1 = moments_to_cumulants(m1, flavor);
  const CumulantSequence k2 = moments_to_cumulants(m2, flavor);
  std::vector<double> sum(k1.values);
  for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += k2.values[i];
  return cumulants_to_moments(CumulantSequence(flavor, std::move(sum)));
}

MomentSequence bercovici_pata(const MomentSequence& m) {
  CumulantSequence k = moments_to_cumulants(m, Flavor::Classical);
  return cumulants_to_moments(CumulantSequence(Flavor::Free, std::move(k.values)));
}

bool is_homomorphism_check(const MomentSequence& m1, const MomentSequence& m2) {
  if (m1.order() != m2.order()) {
    throw ShapeError("is_homomorphism_check: mismatched orders");
  }
  const MomentSequence lhs = bercovici_pata(convolve(m1, m2, Flavor::Classical));
  const MomentSequence rhs = convolve(bercovici_pata(m1), bercovici_pata(m2), Flavor::Free);
  for (int i = 0; i < lhs.order(); ++i) {
    if (std::abs(lhs.values[static_cast<std::size_t>(i)] - rhs.values[static_cast<std::size_t>(i)]) >
        kHomomorphismTolerance) {
      return false;
    }
  }
  return true;
}

bool hankel_psd(const MomentSequence& m) {
  const int N = m.order();
  for (int k = 0; 2 * k <= N; ++k) {
    Eigen::MatrixXd H(k + 1, k + 1);
    for (int i = 0; i <= k; ++i) {
      for (int j = 0; j <= k; ++j) H(i, j) = m.moment(i + j);
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(H, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -kHankelTolerance * (1.0 + H.trace())) return false;
  }
  return true;
}

}  // namespace ncp
