#pragma once

#include <compare>
#include <map>
#include <vector>

#include "ncp/scalar.hpp"

namespace ncp {

/// One letter of a noncommutative monomial: a variable family and a
/// generator within that family, both 1-based.
struct Letter {
  int family = 0;
  int generator = 0;
  auto operator<=>(const Letter&) const = default;
};

/// A monomial in the generators of several families; may be empty.
using Word = std::vector<Letter>;

inline constexpr int kDefaultWordCap = 10;

/// The moments of one family: a map from words in the family's own
/// generators (as sequences of generator indices) to scalar values. The
/// empty word is pinned to 1.
class MarginalLaw {
 public:
  MarginalLaw(int family, std::map<std::vector<int>, Complex> moments);

  int family() const { return family_; }

  /// Marginal moment of a word of generator indices; empty gives 1.
  Complex moment(const std::vector<int>& generators) const;

 private:
  int family_;
  std::map<std::vector<int>, Complex> moments_;
};

/// Joint moment under tensor independence: families commute, so letters are
/// stably reordered family by family and the marginal moments multiply.
Complex tensor_mixed_moment(const Word& w, const std::vector<MarginalLaw>& laws,
                            int cap = kDefaultWordCap);

/// Joint moment under freeness, via the centering recursion: an alternating
/// product of centered variables has expectation zero, which expresses the
/// top moment through strictly shorter words.
Complex free_mixed_moment(const Word& w, const std::vector<MarginalLaw>& laws,
                          int cap = kDefaultWordCap);

/// Product of the two laws' variances (of generator 1). Commuting free
/// variables must make this zero, so a nonzero value certifies that the two
/// laws cannot be realized by commuting free variables.
Complex freeness_degeneracy_check(const MarginalLaw& law1, const MarginalLaw& law2);

}  // namespace ncp
