#include "ncp/check.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "ncp/dual_affine.hpp"
#include "ncp/fock.hpp"
#include "ncp/levy.hpp"
#include "ncp/mixed_moments.hpp"
#include "ncp/moments.hpp"
#include "ncp/partition.hpp"

namespace ncp {

namespace {

// Closed-form reference counts, independent of the enumeration code.
std::uint64_t bell_reference(int n) {
  std::vector<std::uint64_t> row{1};
  for (int r = 2; r <= n; ++r) {
    std::vector<std::uint64_t> next{row.back()};
    for (std::uint64_t x : row) next.push_back(next.back() + x);
    row = std::move(next);
  }
  return row.back();
}

std::uint64_t catalan_reference(int n) {
  std::uint64_t binom = 1;
  for (int k = 1; k <= n; ++k) {
    binom = binom * static_cast<std::uint64_t>(n + k) / static_cast<std::uint64_t>(k);
  }
  return binom / static_cast<std::uint64_t>(n + 1);
}

struct SuiteContext {
  std::string filter;
  double perturbation = 0.0;
  CheckReport report;

  bool wants(const std::string& name) const {
    return filter.empty() || name.find(filter) != std::string::npos;
  }

  void record(const std::string& name, double deviation, double tolerance,
              const std::string& detail) {
    deviation += std::abs(perturbation);
    report.results.push_back({name, deviation, tolerance, deviation <= tolerance, detail});
  }
};

GeneratorTuple random_symmetric_tuple(std::mt19937& rng, int d) {
  std::uniform_real_distribution<double> ent(-1.0, 1.0);
  GeneratorTuple g;
  g.d = d;
  g.T = CMatrix::Zero(d, d);
  g.u = CVector::Zero(d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) g.T(i, j) = Complex{ent(rng), 0.0};
    g.u(i) = Complex{ent(rng), 0.0};
  }
  const CMatrix adj = g.T.adjoint();
  g.T = 0.5 * (g.T + adj);
  g.v = g.u;
  g.lambda = Complex{ent(rng), 0.0};
  return g;
}

void check_partition_counts(SuiteContext& ctx) {
  const std::string name = "partitions.counts";
  if (!ctx.wants(name)) return;
  double deviation = 0.0;
  for (int n = 1; n <= 10; ++n) {
    const auto sets = enumerate_set_partitions(n);
    deviation = std::max(deviation,
                         std::abs(static_cast<double>(sets.size()) -
                                  static_cast<double>(bell_reference(n))));
  }
  for (int n = 1; n <= 12; ++n) {
    const auto nc = enumerate_noncrossing_partitions(n);
    deviation = std::max(deviation,
                         std::abs(static_cast<double>(nc.size()) -
                                  static_cast<double>(catalan_reference(n))));
  }
  for (int n = 1; n <= 16; ++n) {
    const auto iv = enumerate_interval_partitions(n);
    deviation = std::max(deviation, std::abs(static_cast<double>(iv.size()) -
                                             std::pow(2.0, n - 1)));
  }
  ctx.record(name, deviation, 0.0, "Bell n<=10, Catalan n<=12, 2^(n-1) n<=16");
}

void check_moment_round_trip(SuiteContext& ctx) {
  const std::string name = "moments.roundtrip";
  if (!ctx.wants(name)) return;
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> pos(0.05, 1.0);
  std::uniform_real_distribution<double> loc(-2.0, 2.0);
  double deviation = 0.0;
  for (Flavor flavor : {Flavor::Classical, Flavor::Free, Flavor::Boolean}) {
    for (int trial = 0; trial < 20; ++trial) {
      double w[3], x[3], total = 0.0;
      for (int i = 0; i < 3; ++i) {
        w[i] = pos(rng);
        x[i] = loc(rng);
        total += w[i];
      }
      std::vector<double> values;
      for (int n = 1; n <= 8; ++n) {
        double s = 0.0;
        for (int i = 0; i < 3; ++i) s += w[i] / total * std::pow(x[i], n);
        values.push_back(s);
      }
      const MomentSequence m(values);
      const MomentSequence back = cumulants_to_moments(moments_to_cumulants(m, flavor));
      for (int n = 1; n <= 8; ++n) {
        deviation = std::max(deviation, std::abs(back.moment(n) - m.moment(n)));
      }
    }
  }
  ctx.record(name, deviation, 1e-10, "20 random atomic measures per flavor, orders <= 8");
}

void check_levy_fock_oracle(SuiteContext& ctx) {
  const std::string name = "levy.fock-oracle";
  if (!ctx.wants(name)) return;
  std::mt19937 rng(2025);
  double deviation = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const int d = 1 + static_cast<int>(rng() % 3);
    const auto tuple = random_symmetric_tuple(rng, d);
    for (double t : {0.5, 1.0, 2.0}) {
      const IncrementSpec spec{tuple, {{0.0, t}}};
      const auto ops = realize_process(spec, 8);
      const auto realized = process_moments(ops.at(0), 8);
      const auto closed = cumulants_to_moments(tuple_cumulants(tuple, t, Flavor::Free, 8));
      for (int n = 1; n <= 8; ++n) {
        deviation = std::max(deviation, std::abs(realized.moment(n) - closed.moment(n)));
      }
    }
  }
  ctx.record(name, deviation, 1e-9,
             "10 random symmetric tuples, t in {0.5, 1, 2}, orders <= 8");
}

void check_mixed_fock_oracle(SuiteContext& ctx) {
  const std::string name = "mixedmoments.fock-oracle";
  if (!ctx.wants(name)) return;
  const int depth = 6;
  const FreeEmbedding emb({2, 2}, depth);
  std::mt19937 rng(2026);
  std::uniform_real_distribution<double> ent(-1.0, 1.0);

  // Two generators per family: a self-adjoint creation + annihilation +
  // conservation + scalar combination with random coefficients.
  std::vector<std::vector<FockOperator>> generators(2);
  for (int f = 0; f < 2; ++f) {
    for (int g = 0; g < 2; ++g) {
      CVector u(2);
      u << Complex{ent(rng), ent(rng)}, Complex{ent(rng), ent(rng)};
      CMatrix h(2, 2);
      const Complex diag0{ent(rng), 0.0};
      const Complex diag1{ent(rng), 0.0};
      const Complex off{ent(rng), ent(rng)};
      h << diag0, off, std::conj(off), diag1;
      const Complex shift{ent(rng), 0.0};
      generators[static_cast<std::size_t>(f)].push_back(
          emb.creation(f, u) + emb.annihilation(f, u) + emb.conservation(f, h) +
          scalar_operator(emb.space(), shift));
    }
  }

  const auto law_for_family = [&](int f) {
    std::map<std::vector<int>, Complex> moments;
    std::vector<std::vector<int>> frontier{{}};
    for (int length = 1; length <= depth; ++length) {
      std::vector<std::vector<int>> next;
      for (const auto& stem : frontier) {
        for (int g = 1; g <= 2; ++g) {
          std::vector<int> word = stem;
          word.push_back(g);
          std::vector<FockOperator> ops;
          for (int letter : word) {
            ops.push_back(generators[static_cast<std::size_t>(f)]
                                    [static_cast<std::size_t>(letter - 1)]);
          }
          moments[word] = vacuum_expectation(ops);
          next.push_back(std::move(word));
        }
      }
      frontier = std::move(next);
    }
    return MarginalLaw(f + 1, std::move(moments));
  };
  const std::vector<MarginalLaw> laws{law_for_family(0), law_for_family(1)};

  double deviation = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int length = 1 + static_cast<int>(rng() % depth);
    Word word;
    std::vector<FockOperator> ops;
    for (int k = 0; k < length; ++k) {
      const int f = static_cast<int>(rng() % 2);
      const int g = static_cast<int>(rng() % 2);
      word.push_back({f + 1, g + 1});
      ops.push_back(generators[static_cast<std::size_t>(f)][static_cast<std::size_t>(g)]);
    }
    const Complex direct = vacuum_expectation(ops);
    const Complex recursed = free_mixed_moment(word, laws);
    deviation = std::max(deviation, std::abs(direct - recursed));
  }
  ctx.record(name, deviation, 1e-9, "50 random words of length <= 6 on two free families");
}

void check_azema_semicircle(SuiteContext& ctx) {
  const std::string name = "dualaffine.semicircle";
  if (!ctx.wants(name)) return;
  const double t = 1.3;
  double deviation = 0.0;
  for (int steps : {1, 4, 7}) {
    const auto m = azema_free_moments(Complex{1.0, 0.0}, t, steps, 8, 8);
    for (int k = 1; k <= 4; ++k) {
      const double expected = static_cast<double>(catalan_reference(k)) * std::pow(t, k);
      deviation = std::max(deviation, std::abs(m.at(2 * k) - expected));
      deviation = std::max(deviation, std::abs(m.at(2 * k - 1)));
    }
  }
  const auto wide = azema_free_moments(Complex{1.0, 0.0}, t, 32, 6, 6);
  for (int k = 1; k <= 3; ++k) {
    const double expected = static_cast<double>(catalan_reference(k)) * std::pow(t, k);
    deviation = std::max(deviation, std::abs(wide.at(2 * k) - expected));
  }
  ctx.record(name, deviation, 1e-10,
             "conservation parameter 1 against Catalan moments, steps up to 32");
}

void check_azema_fold(SuiteContext& ctx) {
  const std::string name = "dualaffine.ladder-vs-fold";
  if (!ctx.wants(name)) return;
  const Complex gamma{0.4, -0.3};
  const double t = 1.1;
  double deviation = 0.0;
  for (int steps : {1, 2, 4}) {
    const FreeEmbedding emb(std::vector<int>(static_cast<std::size_t>(steps), 1), 4);
    auto composite = identity_increment_free(emb.space(), 0.0);
    const double delta = t / steps;
    const double root = std::sqrt(delta);
    for (int i = 0; i < steps; ++i) {
      const CMatrix shift = CMatrix::Constant(1, 1, gamma - Complex{1.0, 0.0});
      const CVector amp = CVector::Constant(1, Complex{root, 0.0});
      const AffineIncrementFree step{
          identity_operator(emb.space()) + emb.conservation(i, shift),
          emb.creation(i, amp) + emb.annihilation(i, amp),
          {i * delta, (i + 1) * delta}};
      composite = compose_free(composite, step);
    }
    const auto dense = process_moments(composite.b, 4);
    const auto ladder = azema_free_moments(gamma, t, steps, 4, 4);
    for (int k = 1; k <= 4; ++k) {
      deviation = std::max(deviation, std::abs(dense.moment(k) - ladder.at(k)));
    }
  }
  ctx.record(name, deviation, 1e-12, "sparse ladder against the folded matrix composite");
}

}  // namespace

CheckReport check_suite(const std::string& filter, double perturbation) {
  SuiteContext ctx;
  ctx.filter = filter;
  ctx.perturbation = perturbation;
  check_partition_counts(ctx);
  check_moment_round_trip(ctx);
  check_levy_fock_oracle(ctx);
  check_mixed_fock_oracle(ctx);
  check_azema_semicircle(ctx);
  check_azema_fold(ctx);
  return ctx.report;
}

}  // namespace ncp
