#include "ncp/fock.hpp"

#include <cmath>
#include <complex>
#include <cstdlib>
#include <random>

#include <doctest.h>

#include "ncp/errors.hpp"
#include "oracles.hpp"

using ncp::Complex;
using ncp::CMatrix;
using ncp::CSparse;
using ncp::CVector;
using ncp::FockOperator;
using ncp::FockSpace;

namespace {

double max_abs(const CSparse& m) {
  double worst = 0.0;
  for (int k = 0; k < m.outerSize(); ++k) {
    for (CSparse::InnerIterator it(m, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
  }
  return worst;
}

CVector basis_vector(const FockSpace& space, const std::vector<int>& word) {
  CVector e = CVector::Zero(space.total_dim());
  e(space.index_of(word)) = Complex(1.0, 0.0);
  return e;
}

CVector random_cvector(std::mt19937& rng, int n) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  CVector v(n);
  for (int i = 0; i < n; ++i) v(i) = Complex(dist(rng), dist(rng));
  return v;
}

CMatrix random_cmatrix(std::mt19937& rng, int n) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  CMatrix m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = Complex(dist(rng), dist(rng));
  }
  return m;
}

}  // namespace

TEST_CASE("basis indexing is length-then-lex with the vacuum at 0") {
  const FockSpace space(2, 3);
  CHECK(space.total_dim() == 1 + 2 + 4 + 8);
  CHECK(space.index_of({}) == 0);
  CHECK(space.index_of({1}) == 1);
  CHECK(space.index_of({2}) == 2);
  CHECK(space.index_of({1, 1}) == 3);
  CHECK(space.index_of({1, 2}) == 4);
  CHECK(space.index_of({2, 1}) == 5);
  CHECK(space.index_of({2, 2}) == 6);
  CHECK(space.index_of({1, 1, 1}) == 7);
  for (long i = 0; i < space.total_dim(); ++i) {
    CHECK(space.index_of(space.word_at(i)) == i);
    CHECK(space.word_length(i) == static_cast<int>(space.word_at(i).size()));
  }
  CHECK_THROWS_AS(space.index_of({1, 2, 1, 2}), ncp::DepthError);
  CHECK_THROWS_AS(space.index_of({3}), ncp::ShapeError);
  CHECK_THROWS_AS(space.index_of({0}), ncp::ShapeError);
}

TEST_CASE("creation prepends and truncates at full depth") {
  const FockSpace space(1, 2);
  CVector u(1);
  u(0) = Complex(1.0, 0.0);
  const FockOperator cr = ncp::creation(space, u);
  CHECK((cr.apply(basis_vector(space, {})) - basis_vector(space, {1})).norm() == 0.0);
  CHECK((cr.apply(basis_vector(space, {1})) - basis_vector(space, {1, 1})).norm() == 0.0);
  CHECK(cr.apply(basis_vector(space, {1, 1})).norm() == 0.0);

  const FockOperator zero = ncp::creation(space, CVector::Zero(1));
  CHECK(zero.matrix().nonZeros() == 0);

  const FockSpace pair(2, 2);
  CVector e1 = CVector::Zero(2);
  e1(0) = 1.0;
  const FockOperator cr1 = ncp::creation(pair, e1);
  const CVector image = cr1.apply(basis_vector(pair, {2}));
  CHECK(std::abs(image(pair.index_of({1, 2})) - Complex(1.0, 0.0)) == 0.0);
  CHECK(std::abs(image.norm() - 1.0) <= 1e-15);

  CHECK_THROWS_AS(ncp::creation(space, CVector::Zero(2)), ncp::ShapeError);
}

TEST_CASE("annihilation strips the first letter and kills the vacuum") {
  const FockSpace space(1, 2);
  CVector v(1);
  v(0) = Complex(1.0, 0.0);
  const FockOperator an = ncp::annihilation(space, v);
  CHECK(an.apply(basis_vector(space, {})).norm() == 0.0);
  CHECK((an.apply(basis_vector(space, {1, 1})) - basis_vector(space, {1})).norm() == 0.0);
}

TEST_CASE("annihilation is exactly the adjoint of creation") {
  std::mt19937 rng(101);
  const FockSpace space(3, 4);
  for (int trial = 0; trial < 10; ++trial) {
    const CVector u = random_cvector(rng, 3);
    const CSparse diff =
        ncp::annihilation(space, u).matrix() - CSparse(ncp::creation(space, u).matrix().adjoint());
    CHECK(max_abs(diff) == 0.0);
  }
}

TEST_CASE("conservation acts on the first letter only") {
  const FockSpace space(2, 3);
  const FockOperator proj = ncp::conservation(space, CMatrix::Identity(2, 2));
  CHECK(proj.apply(basis_vector(space, {})).norm() == 0.0);
  for (const auto& word : {std::vector<int>{1}, {2, 1}, {1, 2, 2}}) {
    CHECK((proj.apply(basis_vector(space, word)) - basis_vector(space, word)).norm() == 0.0);
  }
  CHECK(ncp::conservation(space, CMatrix::Zero(2, 2)).matrix().nonZeros() == 0);

  std::mt19937 rng(202);
  const CMatrix X = random_cmatrix(rng, 2);
  const CSparse diff = CSparse(ncp::conservation(space, X).matrix().adjoint()) -
                       ncp::conservation(space, CMatrix(X.adjoint())).matrix();
  CHECK(max_abs(diff) == 0.0);

  // A first-letter map with off-diagonal entries relabels the leading letter
  // and leaves the tail alone.
  CMatrix swap = CMatrix::Zero(2, 2);
  swap(0, 1) = 1.0;
  swap(1, 0) = 1.0;
  const FockOperator relabel = ncp::conservation(space, swap);
  CHECK((relabel.apply(basis_vector(space, {1, 2})) - basis_vector(space, {2, 2})).norm() == 0.0);
}

TEST_CASE("vacuum expectations of short operator words") {
  const FockSpace space(2, 2);
  std::mt19937 rng(303);
  const CVector u = random_cvector(rng, 2);
  const CVector v = random_cvector(rng, 2);
  CHECK(ncp::vacuum_expectation({}) == Complex(1.0, 0.0));
  const Complex pairing =
      ncp::vacuum_expectation({ncp::annihilation(space, v), ncp::creation(space, u)});
  CHECK(std::abs(pairing - v.dot(u)) <= 1e-15);
  CHECK(std::abs(ncp::vacuum_expectation(
            {ncp::creation(space, u), ncp::annihilation(space, v)})) == 0.0);
}

TEST_CASE("vacuum expectation rejects words beyond the depth or mixed spaces") {
  const FockSpace space(1, 2);
  CVector u(1);
  u(0) = 1.0;
  const FockOperator s = ncp::creation(space, u) + ncp::annihilation(space, u);
  CHECK_THROWS_AS(ncp::vacuum_expectation({s, s, s}), ncp::DepthError);
  const FockSpace other(1, 3);
  const FockOperator t = ncp::creation(other, u) + ncp::annihilation(other, u);
  CHECK_THROWS_AS(ncp::vacuum_expectation({s, t}), ncp::MixedSpaceError);
  CHECK_THROWS_AS(s + t, ncp::MixedSpaceError);
}

TEST_CASE("truncation exactness: depth r and depth r+2 agree on words of length r") {
  std::mt19937 rng(404);
  const int d = 2;
  for (int trial = 0; trial < 50; ++trial) {
    const int r = 1 + static_cast<int>(rng() % 5);
    const FockSpace tight(d, r);
    const FockSpace roomy(d, r + 2);
    std::vector<FockOperator> word_tight, word_roomy;
    for (int pos = 0; pos < r; ++pos) {
      switch (rng() % 3) {
        case 0: {
          const CVector u = random_cvector(rng, d);
          word_tight.push_back(ncp::creation(tight, u));
          word_roomy.push_back(ncp::creation(roomy, u));
          break;
        }
        case 1: {
          const CVector v = random_cvector(rng, d);
          word_tight.push_back(ncp::annihilation(tight, v));
          word_roomy.push_back(ncp::annihilation(roomy, v));
          break;
        }
        default: {
          const CMatrix X = random_cmatrix(rng, d);
          word_tight.push_back(ncp::conservation(tight, X));
          word_roomy.push_back(ncp::conservation(roomy, X));
          break;
        }
      }
    }
    CHECK(std::abs(ncp::vacuum_expectation(word_tight) - ncp::vacuum_expectation(word_roomy)) <=
          1e-12);
  }
}

TEST_CASE("even moments of creation plus annihilation are Catalan numbers") {
  const FockSpace space(1, 10);
  CVector u(1);
  u(0) = 1.0;
  const FockOperator s = ncp::creation(space, u) + ncp::annihilation(space, u);
  for (int n = 1; n <= 5; ++n) {
    const std::vector<FockOperator> word(static_cast<std::size_t>(2 * n), s);
    const Complex value = ncp::vacuum_expectation(word);
    CHECK(std::abs(value.real() - static_cast<double>(oracle::catalan_number(n))) <= 1e-10);
    CHECK(std::abs(value.imag()) < 1e-12);
    const std::vector<FockOperator> odd(static_cast<std::size_t>(2 * n - 1), s);
    CHECK(std::abs(ncp::vacuum_expectation(odd)) <= 1e-12);
  }
}

TEST_CASE("free embedding: orthogonal blocks give free families") {
  const ncp::FreeEmbedding emb = ncp::free_embedding({1, 1}, 6);
  CHECK(emb.space().dim() == 2);
  CVector one(1);
  one(0) = 1.0;
  const FockOperator s1 = emb.creation(0, one) + emb.annihilation(0, one);
  const FockOperator s2 = emb.creation(1, one) + emb.annihilation(1, one);
  CHECK(std::abs(ncp::vacuum_expectation({s1, s2, s1, s2})) <= 1e-12);
  CHECK(std::abs(ncp::vacuum_expectation({s1, s1, s2, s2}) - Complex(1.0, 0.0)) <= 1e-12);
}

TEST_CASE("free embedding: alternating centered words vanish") {
  std::mt19937 rng(505);
  const ncp::FreeEmbedding emb = ncp::free_embedding({2, 2}, 6);
  const FockOperator id = ncp::identity_operator(emb.space());
  std::vector<FockOperator> family;
  for (int f = 0; f < 2; ++f) {
    FockOperator x = emb.creation(f, random_cvector(rng, 2)) +
                     emb.annihilation(f, random_cvector(rng, 2)) +
                     emb.conservation(f, random_cmatrix(rng, 2));
    family.push_back(std::move(x));
  }
  std::vector<FockOperator> centered;
  for (const auto& x : family) {
    const Complex mean = ncp::vacuum_expectation({x});
    centered.push_back(x - id * mean);
  }
  for (int trial = 0; trial < 20; ++trial) {
    const int len = 2 + static_cast<int>(rng() % 5);
    std::vector<FockOperator> word;
    int prev = -1;
    for (int pos = 0; pos < len; ++pos) {
      int f = static_cast<int>(rng() % 2);
      if (f == prev) f = 1 - f;
      word.push_back(centered[static_cast<std::size_t>(f)]);
      prev = f;
    }
    CHECK(std::abs(ncp::vacuum_expectation(word)) <= 1e-12);
  }
}

TEST_CASE("single-factor embedding is the identity embedding") {
  const ncp::FreeEmbedding emb = ncp::free_embedding({3}, 2);
  std::mt19937 rng(606);
  const CVector u = random_cvector(rng, 3);
  CHECK((emb.embed_vector(0, u) - u).norm() == 0.0);
  const CMatrix X = random_cmatrix(rng, 3);
  CHECK((emb.embed_matrix(0, X) - X).norm() == 0.0);
}

TEST_CASE("real inputs give real expectations") {
  std::mt19937 rng(707);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const FockSpace space(2, 6);
  CVector u(2), v(2);
  for (int i = 0; i < 2; ++i) {
    u(i) = Complex(dist(rng), 0.0);
    v(i) = Complex(dist(rng), 0.0);
  }
  const FockOperator x = ncp::creation(space, u) + ncp::annihilation(space, v) +
                         ncp::scalar_operator(space, Complex(0.3, 0.0));
  for (int n = 1; n <= 6; ++n) {
    const std::vector<FockOperator> word(static_cast<std::size_t>(n), x);
    CHECK(std::abs(ncp::vacuum_expectation(word).imag()) < 1e-12);
  }
}

TEST_CASE("basis cap: defaults and NCP_MAX_BASIS override") {
  CHECK(ncp::default_basis_cap() == 200000);
  CHECK_THROWS_AS(FockSpace(6, 7), ncp::SizeLimitError);

  REQUIRE(setenv("NCP_MAX_BASIS", "50", 1) == 0);
  CHECK(ncp::default_basis_cap() == 50);
  CHECK_THROWS_AS(FockSpace(2, 5), ncp::SizeLimitError);
  REQUIRE(setenv("NCP_MAX_BASIS", "nonsense", 1) == 0);
  CHECK_THROWS_AS(ncp::default_basis_cap(), ncp::Error);
  REQUIRE(unsetenv("NCP_MAX_BASIS") == 0);
  CHECK(ncp::default_basis_cap() == 200000);
}

TEST_CASE("zero-dimensional one-particle space holds only the vacuum") {
  const FockSpace space(0, 4);
  CHECK(space.total_dim() == 1);
  const FockOperator lam = ncp::scalar_operator(space, Complex(2.5, 0.0));
  CHECK(std::abs(ncp::vacuum_expectation({lam, lam}) - Complex(6.25, 0.0)) <= 1e-15);
}
