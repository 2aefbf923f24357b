#include "ncp/fock.hpp"

#include <cstdlib>
#include <numeric>
#include <string>

#include "ncp/errors.hpp"

namespace ncp {

namespace {

constexpr long kDefaultBasisCap = 200000;

void check_space_match(const FockSpace& a, const FockSpace& b, const char* what) {
  if (a != b) {
    throw MixedSpaceError(std::string(what) + ": operands live on different Fock spaces (dim " +
                          std::to_string(a.dim()) + "/depth " + std::to_string(a.depth()) +
                          " vs dim " + std::to_string(b.dim()) + "/depth " +
                          std::to_string(b.depth()) + ")");
  }
}

}  // namespace

long default_basis_cap() {
  const char* env = std::getenv("NCP_MAX_BASIS");
  if (env == nullptr || *env == '\0') return kDefaultBasisCap;
  char* end = nullptr;
  const long cap = std::strtol(env, &end, 10);
  if (end == nullptr || *end != '\0' || cap <= 0) {
    throw Error("NCP_MAX_BASIS must be a positive integer, got '" + std::string(env) + "'");
  }
  return cap;
}

FockSpace::FockSpace(int dim, int depth) : dim_(dim), depth_(depth) {
  if (dim < 0) throw ShapeError("FockSpace: one-particle dimension must be nonnegative");
  if (depth < 0) throw ShapeError("FockSpace: depth must be nonnegative");
  const long cap = default_basis_cap();
  offsets_.resize(static_cast<std::size_t>(depth) + 2);
  offsets_[0] = 0;
  long count = 1;
  for (int n = 0; n <= depth; ++n) {
    offsets_[static_cast<std::size_t>(n) + 1] = offsets_[static_cast<std::size_t>(n)] + count;
    if (offsets_[static_cast<std::size_t>(n) + 1] > cap) {
      throw SizeLimitError("FockSpace: basis of dim " + std::to_string(dim) + " depth " +
                           std::to_string(depth) + " exceeds the cap of " + std::to_string(cap) +
                           " words (set NCP_MAX_BASIS to raise it)");
    }
    if (n < depth) {
      if (dim != 0 && count > cap / dim + 1) {
        throw SizeLimitError("FockSpace: basis of dim " + std::to_string(dim) + " depth " +
                             std::to_string(depth) + " exceeds the cap of " + std::to_string(cap) +
                             " words (set NCP_MAX_BASIS to raise it)");
      }
      count *= dim;
    }
  }
}

long FockSpace::length_offset(int length) const {
  if (length < 0 || length > depth_ + 1) {
    throw ShapeError("FockSpace::length_offset: length out of range");
  }
  return offsets_[static_cast<std::size_t>(length)];
}

long FockSpace::index_of(const std::vector<int>& word) const {
  const int len = static_cast<int>(word.size());
  if (len > depth_) {
    throw DepthError("FockSpace::index_of: word of length " + std::to_string(len) +
                     " exceeds depth " + std::to_string(depth_));
  }
  long digits = 0;
  for (int letter : word) {
    if (letter < 1 || letter > dim_) {
      throw ShapeError("FockSpace::index_of: letter " + std::to_string(letter) +
                       " outside {1.." + std::to_string(dim_) + "}");
    }
    digits = digits * dim_ + (letter - 1);
  }
  return offsets_[static_cast<std::size_t>(len)] + digits;
}

int FockSpace::word_length(long index) const {
  if (index < 0 || index >= total_dim()) {
    throw ShapeError("FockSpace::word_length: index out of range");
  }
  int len = 0;
  while (offsets_[static_cast<std::size_t>(len) + 1] <= index) ++len;
  return len;
}

std::vector<int> FockSpace::word_at(long index) const {
  const int len = word_length(index);
  long digits = index - offsets_[static_cast<std::size_t>(len)];
  std::vector<int> word(static_cast<std::size_t>(len));
  for (int pos = len - 1; pos >= 0; --pos) {
    word[static_cast<std::size_t>(pos)] = static_cast<int>(digits % dim_) + 1;
    digits /= dim_;
  }
  return word;
}

FockOperator::FockOperator(FockSpace space, CSparse matrix) : space_(std::move(space)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != space_.total_dim() || matrix_.cols() != space_.total_dim()) {
    throw ShapeError("FockOperator: matrix is " + std::to_string(matrix_.rows()) + "x" +
                     std::to_string(matrix_.cols()) + " but the space has " +
                     std::to_string(space_.total_dim()) + " basis words");
  }
}

FockOperator FockOperator::adjoint() const {
  return FockOperator(space_, CSparse(matrix_.adjoint()));
}

FockOperator FockOperator::operator+(const FockOperator& other) const {
  check_space_match(space_, other.space_, "FockOperator::operator+");
  return FockOperator(space_, CSparse(matrix_ + other.matrix_));
}

FockOperator FockOperator::operator-(const FockOperator& other) const {
  check_space_match(space_, other.space_, "FockOperator::operator-");
  return FockOperator(space_, CSparse(matrix_ - other.matrix_));
}

FockOperator FockOperator::operator*(const FockOperator& other) const {
  check_space_match(space_, other.space_, "FockOperator::operator*");
  return FockOperator(space_, CSparse(matrix_ * other.matrix_));
}

FockOperator FockOperator::operator*(Complex scalar) const {
  return FockOperator(space_, CSparse(matrix_ * scalar));
}

CVector FockOperator::apply(const CVector& state) const {
  if (state.size() != space_.total_dim()) {
    throw ShapeError("FockOperator::apply: state has wrong dimension");
  }
  return matrix_ * state;
}

double FockOperator::hermiticity_defect() const {
  const CSparse diff = matrix_ - CSparse(matrix_.adjoint());
  double worst = 0.0;
  for (int k = 0; k < diff.outerSize(); ++k) {
    for (CSparse::InnerIterator it(diff, k); it; ++it) {
      worst = std::max(worst, std::abs(it.value()));
    }
  }
  return worst;
}

FockOperator creation(const FockSpace& space, const CVector& u) {
  if (u.size() != space.dim()) {
    throw ShapeError("creation: vector of length " + std::to_string(u.size()) +
                     " on a space of one-particle dimension " + std::to_string(space.dim()));
  }
  std::vector<Eigen::Triplet<Complex>> entries;
  const int d = space.dim();
  for (int n = 0; n < space.depth(); ++n) {
    const long lo = space.length_offset(n);
    const long hi = space.length_offset(n + 1);
    const long block = hi - lo;  // dim^n
    for (long col = lo; col < hi; ++col) {
      const long digits = col - lo;
      for (int letter = 1; letter <= d; ++letter) {
        const Complex amp = u(letter - 1);
        if (amp == Complex(0.0, 0.0)) continue;
        const long row = hi + (letter - 1) * block + digits;
        entries.emplace_back(static_cast<int>(row), static_cast<int>(col), amp);
      }
    }
  }
  CSparse m(space.total_dim(), space.total_dim());
  m.setFromTriplets(entries.begin(), entries.end());
  return FockOperator(space, std::move(m));
}

FockOperator annihilation(const FockSpace& space, const CVector& v) {
  if (v.size() != space.dim()) {
    throw ShapeError("annihilation: vector of length " + std::to_string(v.size()) +
                     " on a space of one-particle dimension " + std::to_string(space.dim()));
  }
  std::vector<Eigen::Triplet<Complex>> entries;
  const int d = space.dim();
  for (int n = 1; n <= space.depth(); ++n) {
    const long lo = space.length_offset(n);
    const long hi = space.length_offset(n + 1);
    const long tail_block = (hi - lo) / (d == 0 ? 1 : d);  // dim^(n-1)
    const long tail_lo = space.length_offset(n - 1);
    for (long col = lo; col < hi; ++col) {
      const long digits = col - lo;
      const int first = static_cast<int>(digits / tail_block) + 1;
      const Complex amp = std::conj(v(first - 1));
      if (amp == Complex(0.0, 0.0)) continue;
      const long row = tail_lo + digits % tail_block;
      entries.emplace_back(static_cast<int>(row), static_cast<int>(col), amp);
    }
  }
  CSparse m(space.total_dim(), space.total_dim());
  m.setFromTriplets(entries.begin(), entries.end());
  return FockOperator(space, std::move(m));
}

FockOperator conservation(const FockSpace& space, const CMatrix& X) {
  if (X.rows() != space.dim() || X.cols() != space.dim()) {
    throw ShapeError("conservation: matrix is " + std::to_string(X.rows()) + "x" +
                     std::to_string(X.cols()) + " on a space of one-particle dimension " +
                     std::to_string(space.dim()));
  }
  std::vector<Eigen::Triplet<Complex>> entries;
  const int d = space.dim();
  for (int n = 1; n <= space.depth(); ++n) {
    const long lo = space.length_offset(n);
    const long hi = space.length_offset(n + 1);
    const long tail_block = (hi - lo) / (d == 0 ? 1 : d);
    for (long col = lo; col < hi; ++col) {
      const long digits = col - lo;
      const int first = static_cast<int>(digits / tail_block) + 1;
      const long tail_digits = digits % tail_block;
      for (int target = 1; target <= d; ++target) {
        const Complex amp = X(target - 1, first - 1);
        if (amp == Complex(0.0, 0.0)) continue;
        const long row = lo + (target - 1) * tail_block + tail_digits;
        entries.emplace_back(static_cast<int>(row), static_cast<int>(col), amp);
      }
    }
  }
  CSparse m(space.total_dim(), space.total_dim());
  m.setFromTriplets(entries.begin(), entries.end());
  return FockOperator(space, std::move(m));
}

FockOperator identity_operator(const FockSpace& space) {
  CSparse m(space.total_dim(), space.total_dim());
  m.setIdentity();
  return FockOperator(space, std::move(m));
}

FockOperator zero_operator(const FockSpace& space) {
  return FockOperator(space, CSparse(space.total_dim(), space.total_dim()));
}

FockOperator scalar_operator(const FockSpace& space, Complex c) {
  CSparse m(space.total_dim(), space.total_dim());
  m.setIdentity();
  return FockOperator(space, CSparse(m * c));
}

Complex vacuum_expectation(const std::vector<FockOperator>& ops) {
  if (ops.empty()) return Complex(1.0, 0.0);
  const FockSpace& space = ops.front().space();
  for (const auto& op : ops) check_space_match(space, op.space(), "vacuum_expectation");
  if (static_cast<int>(ops.size()) > space.depth()) {
    throw DepthError("vacuum_expectation: word of length " + std::to_string(ops.size()) +
                     " on a space of depth " + std::to_string(space.depth()) +
                     "; increase the depth to keep truncation exact");
  }
  CVector state = CVector::Zero(space.total_dim());
  state(0) = Complex(1.0, 0.0);
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) state = it->apply(state);
  return state(0);
}

FreeEmbedding::FreeEmbedding(std::vector<int> dims, int depth)
    : dims_(std::move(dims)),
      offsets_(),
      space_(std::accumulate(dims_.begin(), dims_.end(), 0), depth) {
  if (dims_.empty()) throw ShapeError("FreeEmbedding: need at least one factor");
  int offset = 0;
  for (int d : dims_) {
    if (d < 0) throw ShapeError("FreeEmbedding: factor dimensions must be nonnegative");
    offsets_.push_back(offset);
    offset += d;
  }
}

int FreeEmbedding::factor_dim(int factor) const {
  if (factor < 0 || factor >= factor_count()) {
    throw ShapeError("FreeEmbedding: factor index out of range");
  }
  return dims_[static_cast<std::size_t>(factor)];
}

int FreeEmbedding::factor_offset(int factor) const {
  if (factor < 0 || factor >= factor_count()) {
    throw ShapeError("FreeEmbedding: factor index out of range");
  }
  return offsets_[static_cast<std::size_t>(factor)];
}

CVector FreeEmbedding::embed_vector(int factor, const CVector& u) const {
  const int d = factor_dim(factor);
  if (u.size() != d) {
    throw ShapeError("FreeEmbedding::embed_vector: vector of length " + std::to_string(u.size()) +
                     " for a factor of dimension " + std::to_string(d));
  }
  CVector out = CVector::Zero(space_.dim());
  out.segment(factor_offset(factor), d) = u;
  return out;
}

CMatrix FreeEmbedding::embed_matrix(int factor, const CMatrix& X) const {
  const int d = factor_dim(factor);
  if (X.rows() != d || X.cols() != d) {
    throw ShapeError("FreeEmbedding::embed_matrix: matrix is " + std::to_string(X.rows()) + "x" +
                     std::to_string(X.cols()) + " for a factor of dimension " + std::to_string(d));
  }
  CMatrix out = CMatrix::Zero(space_.dim(), space_.dim());
  out.block(factor_offset(factor), factor_offset(factor), d, d) = X;
  return out;
}

FockOperator FreeEmbedding::creation(int factor, const CVector& u) const {
  return ncp::creation(space_, embed_vector(factor, u));
}

FockOperator FreeEmbedding::annihilation(int factor, const CVector& v) const {
  return ncp::annihilation(space_, embed_vector(factor, v));
}

FockOperator FreeEmbedding::conservation(int factor, const CMatrix& X) const {
  return ncp::conservation(space_, embed_matrix(factor, X));
}

FreeEmbedding free_embedding(const std::vector<int>& dims, int depth) {
  return FreeEmbedding(dims, depth);
}

}  // namespace ncp
