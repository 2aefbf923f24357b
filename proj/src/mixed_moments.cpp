#include "ncp/mixed_moments.hpp"

#include <algorithm>
#include <string>

#include "ncp/errors.hpp"

namespace ncp {

namespace {

struct Segment {
  int family;
  std::vector<int> generators;
};

void check_word(const Word& w, int cap, const char* what) {
  if (static_cast<int>(w.size()) > cap) {
    throw SizeLimitError(std::string(what) + ": word of length " + std::to_string(w.size()) +
                         " exceeds the cap " + std::to_string(cap));
  }
  for (const Letter& l : w) {
    if (l.family < 1 || l.generator < 1) {
      throw ShapeError(std::string(what) + ": family and generator indices are 1-based");
    }
  }
}

const MarginalLaw& law_for(int family, const std::vector<MarginalLaw>& laws, const char* what) {
  for (const MarginalLaw& law : laws) {
    if (law.family() == family) return law;
  }
  throw MissingLawError(std::string(what) + ": no marginal law for family " +
                        std::to_string(family));
}

std::vector<Segment> collapse(const Word& w) {
  std::vector<Segment> segments;
  for (const Letter& l : w) {
    if (segments.empty() || segments.back().family != l.family) {
      segments.push_back({l.family, {}});
    }
    segments.back().generators.push_back(l.generator);
  }
  return segments;
}

class FreeEvaluator {
 public:
  FreeEvaluator(const std::vector<MarginalLaw>& laws, int depth_cap)
      : laws_(laws), depth_cap_(depth_cap) {}

  Complex evaluate(const Word& w, int depth) {
    if (depth > depth_cap_) {
      throw RecursionLimitError("free_mixed_moment: recursion depth " + std::to_string(depth) +
                                " exceeds the cap " + std::to_string(depth_cap_));
    }
    const auto segments = collapse(w);
    const int r = static_cast<int>(segments.size());
    if (r == 0) return Complex(1.0, 0.0);
    if (r == 1) {
      return law_for(segments[0].family, laws_, "free_mixed_moment")
          .moment(segments[0].generators);
    }
    const auto memo = cache_.find(w);
    if (memo != cache_.end()) return memo->second;

    // Expand 0 = phi((Y_1 - phi(Y_1)) ... (Y_r - phi(Y_r))) over the
    // alternating segments Y_i and solve for the full product phi(Y_1...Y_r)
    // (the empty subset's term).
    std::vector<Complex> segment_mean(static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i) {
      segment_mean[static_cast<std::size_t>(i)] =
          law_for(segments[static_cast<std::size_t>(i)].family, laws_, "free_mixed_moment")
              .moment(segments[static_cast<std::size_t>(i)].generators);
    }
    Complex value(0.0, 0.0);
    for (unsigned mask = 1; mask < (1u << r); ++mask) {
      Complex coeff(1.0, 0.0);
      Word rest;
      for (int i = 0; i < r; ++i) {
        const auto& seg = segments[static_cast<std::size_t>(i)];
        if (mask & (1u << i)) {
          coeff *= -segment_mean[static_cast<std::size_t>(i)];
        } else {
          for (int g : seg.generators) rest.push_back({seg.family, g});
        }
      }
      value -= coeff * evaluate(rest, depth + 1);
    }
    cache_.emplace(w, value);
    return value;
  }

 private:
  const std::vector<MarginalLaw>& laws_;
  int depth_cap_;
  std::map<Word, Complex> cache_;
};

}  // namespace

MarginalLaw::MarginalLaw(int family, std::map<std::vector<int>, Complex> moments)
    : family_(family), moments_(std::move(moments)) {
  if (family < 1) throw ShapeError("MarginalLaw: family index is 1-based");
  for (const auto& [word, value] : moments_) {
    for (int g : word) {
      if (g < 1) throw ShapeError("MarginalLaw: generator indices are 1-based");
    }
    (void)value;
  }
  const auto empty = moments_.find({});
  if (empty == moments_.end()) {
    moments_.emplace(std::vector<int>{}, Complex(1.0, 0.0));
  } else if (empty->second != Complex(1.0, 0.0)) {
    throw ShapeError("MarginalLaw: the empty word must have moment 1");
  }
}

Complex MarginalLaw::moment(const std::vector<int>& generators) const {
  const auto it = moments_.find(generators);
  if (it == moments_.end()) {
    std::string key;
    for (int g : generators) {
      if (!key.empty()) key += ',';
      key += std::to_string(g);
    }
    throw MissingLawError("MarginalLaw: family " + std::to_string(family_) +
                          " has no moment for word (" + key + ")");
  }
  return it->second;
}

Complex tensor_mixed_moment(const Word& w, const std::vector<MarginalLaw>& laws, int cap) {
  check_word(w, cap, "tensor_mixed_moment");
  Word sorted = w;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const Letter& a, const Letter& b) { return a.family < b.family; });
  Complex product(1.0, 0.0);
  std::size_t i = 0;
  while (i < sorted.size()) {
    const int family = sorted[i].family;
    std::vector<int> generators;
    while (i < sorted.size() && sorted[i].family == family) {
      generators.push_back(sorted[i].generator);
      ++i;
    }
    product *= law_for(family, laws, "tensor_mixed_moment").moment(generators);
  }
  return product;
}

Complex free_mixed_moment(const Word& w, const std::vector<MarginalLaw>& laws, int cap) {
  check_word(w, cap, "free_mixed_moment");
  FreeEvaluator evaluator(laws, static_cast<int>(w.size()) + 2);
  return evaluator.evaluate(w, 0);
}

Complex freeness_degeneracy_check(const MarginalLaw& law1, const MarginalLaw& law2) {
  const Complex var1 = law1.moment({1, 1}) - law1.moment({1}) * law1.moment({1});
  const Complex var2 = law2.moment({1, 1}) - law2.moment({1}) * law2.moment({1});
  return var1 * var2;
}

}  // namespace ncp
