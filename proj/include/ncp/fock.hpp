#pragma once

#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "ncp/scalar.hpp"

namespace ncp {

using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using CSparse = Eigen::SparseMatrix<Complex>;

/// Basis-size cap for truncated Fock spaces; the environment variable
/// NCP_MAX_BASIS overrides the default of 200000.
long default_basis_cap();

/// Truncated free Fock space over a dim-dimensional one-particle space.
/// The basis is all words of length 0..depth over the alphabet {1..dim} in
/// length-then-lexicographic order; index 0 is the empty word (the vacuum).
class FockSpace {
 public:
  FockSpace(int dim, int depth);

  int dim() const { return dim_; }
  int depth() const { return depth_; }
  long total_dim() const { return offsets_[static_cast<std::size_t>(depth_) + 1]; }

  /// Index of the first basis word of the given length.
  long length_offset(int length) const;

  long index_of(const std::vector<int>& word) const;
  std::vector<int> word_at(long index) const;
  int word_length(long index) const;

  bool operator==(const FockSpace& other) const {
    return dim_ == other.dim_ && depth_ == other.depth_;
  }
  bool operator!=(const FockSpace& other) const { return !(*this == other); }

 private:
  int dim_ = 0;
  int depth_ = 0;
  std::vector<long> offsets_;
};

/// A linear operator on a truncated Fock space, stored as a sparse matrix in
/// the word basis. Immutable value; all arithmetic verifies that operands
/// share one space.
class FockOperator {
 public:
  FockOperator(FockSpace space, CSparse matrix);

  const FockSpace& space() const { return space_; }
  const CSparse& matrix() const { return matrix_; }

  FockOperator adjoint() const;
  FockOperator operator+(const FockOperator& other) const;
  FockOperator operator-(const FockOperator& other) const;
  FockOperator operator*(const FockOperator& other) const;
  FockOperator operator*(Complex scalar) const;

  CVector apply(const CVector& state) const;

  /// Max absolute entry of (this - adjoint); 0.0 means exactly Hermitian.
  double hermiticity_defect() const;

 private:
  FockSpace space_;
  CSparse matrix_;
};

/// Prepends u: maps a word w of length < depth to sum_i u_i (i.w); words of
/// full length map to 0.
FockOperator creation(const FockSpace& space, const CVector& u);

/// Strips the first letter with amplitude <v, letter> (conjugate-linear in
/// v); kills the vacuum. Equals creation(v)* entry for entry.
FockOperator annihilation(const FockSpace& space, const CVector& v);

/// Applies X to the first letter, identity elsewhere; kills the vacuum.
FockOperator conservation(const FockSpace& space, const CMatrix& X);

FockOperator identity_operator(const FockSpace& space);
FockOperator zero_operator(const FockSpace& space);
FockOperator scalar_operator(const FockSpace& space, Complex c);

/// <Omega, O_1 O_2 ... O_r Omega>, applying operators right to left. The
/// word length r may not exceed the space depth (beyond that, truncation
/// would silently bias the value).
Complex vacuum_expectation(const std::vector<FockOperator>& ops);

/// One truncated Fock space whose one-particle space is the orthogonal sum
/// of r factor spaces. Operator families supported on distinct factors are
/// free with respect to the vacuum state.
class FreeEmbedding {
 public:
  FreeEmbedding(std::vector<int> dims, int depth);

  const FockSpace& space() const { return space_; }
  int factor_count() const { return static_cast<int>(dims_.size()); }
  int factor_dim(int factor) const;
  int factor_offset(int factor) const;

  /// Pads a factor-local vector into the full one-particle space.
  CVector embed_vector(int factor, const CVector& u) const;
  /// Places a factor-local matrix into its diagonal block.
  CMatrix embed_matrix(int factor, const CMatrix& X) const;

  FockOperator creation(int factor, const CVector& u) const;
  FockOperator annihilation(int factor, const CVector& v) const;
  FockOperator conservation(int factor, const CMatrix& X) const;

 private:
  std::vector<int> dims_;
  std::vector<int> offsets_;
  FockSpace space_;
};

FreeEmbedding free_embedding(const std::vector<int>& dims, int depth);

}  // namespace ncp
