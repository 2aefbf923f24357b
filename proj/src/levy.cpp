#include "ncp/levy.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "ncp/errors.hpp"

namespace ncp {

namespace {

// Relative cutoff for numerical rank decisions (Krylov compression, kernel
// and range splits, pseudoinverse solves).
constexpr double kRankTolerance = 1e-10;

// Values produced by the closed-form cumulant formulas and by vacuum
// expectations of self-adjoint operators must be real up to rounding.
constexpr double kRealTolerance = 1e-12;

// Residual tolerance for the compound Poisson membership tests.
constexpr double kMatchTolerance = 1e-9;

double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double real_part_checked(Complex z, const char* what) {
  if (std::abs(z.imag()) > kRealTolerance * (1.0 + std::abs(z.real()))) {
    throw PreconditionError(std::string(what) + " has imaginary part " +
                            std::to_string(z.imag()) + ", expected a real value");
  }
  return z.real();
}

void check_order(int order, Flavor flavor) {
  if (order < 1) {
    throw ShapeError("cumulant order must be at least 1, got " + std::to_string(order));
  }
  if (order > flavor_order_cap(flavor)) {
    throw SizeLimitError("order " + std::to_string(order) + " exceeds the " +
                         flavor_name(flavor) + " cap of " +
                         std::to_string(flavor_order_cap(flavor)));
  }
}

}  // namespace

void GeneratorTuple::validate() const {
  if (d < 0) {
    throw ShapeError("tuple dimension must be nonnegative, got " + std::to_string(d));
  }
  if (T.rows() != d || T.cols() != d) {
    throw ShapeError("T must be " + std::to_string(d) + " x " + std::to_string(d) +
                     ", got " + std::to_string(T.rows()) + " x " + std::to_string(T.cols()));
  }
  if (u.size() != d) {
    throw ShapeError("u must have length " + std::to_string(d) + ", got " +
                     std::to_string(u.size()));
  }
  if (v.size() != d) {
    throw ShapeError("v must have length " + std::to_string(d) + ", got " +
                     std::to_string(v.size()));
  }
}

bool GeneratorTuple::is_symmetric(double tol) const {
  validate();
  if (std::abs(lambda.imag()) > tol) return false;
  if (d == 0) return true;
  if ((T - T.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
  return (u - v).cwiseAbs().maxCoeff() <= tol;
}

void IncrementSpec::validate() const {
  tuple.validate();
  if (intervals.empty()) {
    throw PreconditionError("an increment spec needs at least one interval");
  }
  std::vector<Interval> sorted = intervals;
  std::sort(sorted.begin(), sorted.end(),
            [](const Interval& a, const Interval& b) { return a.s < b.s; });
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const Interval& iv = sorted[i];
    if (!(iv.s >= 0.0)) {
      throw PreconditionError("interval start " + std::to_string(iv.s) +
                              " must be nonnegative");
    }
    if (!(iv.t > iv.s)) {
      throw PreconditionError("interval [" + std::to_string(iv.s) + ", " +
                              std::to_string(iv.t) + ") is empty or reversed");
    }
    if (i > 0 && sorted[i].s < sorted[i - 1].t) {
      throw PreconditionError("intervals [" + std::to_string(sorted[i - 1].s) + ", " +
                              std::to_string(sorted[i - 1].t) + ") and [" +
                              std::to_string(sorted[i].s) + ", " +
                              std::to_string(sorted[i].t) + ") overlap");
    }
  }
}

std::vector<FockOperator> realize_process(const IncrementSpec& spec, int depth) {
  spec.validate();
  const int r = static_cast<int>(spec.intervals.size());
  FreeEmbedding emb(std::vector<int>(static_cast<std::size_t>(r), spec.tuple.d), depth);
  std::vector<FockOperator> ops;
  ops.reserve(static_cast<std::size_t>(r));
  for (int i = 0; i < r; ++i) {
    const double h = spec.intervals[static_cast<std::size_t>(i)].length();
    const double root = std::sqrt(h);
    FockOperator op = emb.conservation(i, spec.tuple.T) +
                      emb.creation(i, (root * spec.tuple.u).eval()) +
                      emb.annihilation(i, (root * spec.tuple.v).eval()) +
                      scalar_operator(emb.space(), h * spec.tuple.lambda);
    ops.push_back(std::move(op));
  }
  return ops;
}

MomentSequence process_moments(const FockOperator& x, int order) {
  if (order < 1) {
    throw ShapeError("moment order must be at least 1, got " + std::to_string(order));
  }
  if (order > x.space().depth()) {
    throw DepthError("order " + std::to_string(order) + " exceeds the space depth " +
                     std::to_string(x.space().depth()) +
                     "; truncation would not be exact");
  }
  CVector state = CVector::Zero(x.space().total_dim());
  state(0) = Complex{1.0, 0.0};
  MomentSequence out;
  out.values.reserve(static_cast<std::size_t>(order));
  for (int n = 1; n <= order; ++n) {
    state = x.apply(state);
    out.values.push_back(real_part_checked(state(0), "vacuum moment"));
  }
  return out;
}

CumulantSequence tuple_cumulants(const GeneratorTuple& tuple, double t, Flavor flavor,
                                 int order) {
  tuple.validate();
  check_order(order, flavor);
  CumulantSequence out(flavor, {});
  out.values.reserve(static_cast<std::size_t>(order));
  out.values.push_back(t * real_part_checked(tuple.lambda, "drift"));
  CVector w = tuple.u;
  for (int n = 2; n <= order; ++n) {
    if (n > 2) w = tuple.T * w;
    const Complex val = tuple.d == 0 ? Complex{} : tuple.v.dot(w);
    out.values.push_back(t * real_part_checked(val, "cumulant"));
  }
  return out;
}

GeneratorTuple minimal_tuple(const GeneratorTuple& tuple) {
  tuple.validate();
  if (tuple.d == 0) return tuple;
  // Columns span the joint Krylov space of u and v; powers beyond d - 1 add
  // nothing by Cayley-Hamilton, so this space is T-invariant and carries
  // every cumulant <v, T^k u>.
  CMatrix krylov(tuple.d, 2 * tuple.d);
  CVector wu = tuple.u;
  CVector wv = tuple.v;
  for (int k = 0; k < tuple.d; ++k) {
    if (k > 0) {
      wu = tuple.T * wu;
      wv = tuple.T * wv;
    }
    krylov.col(2 * k) = wu;
    krylov.col(2 * k + 1) = wv;
  }
  Eigen::JacobiSVD<CMatrix> svd(krylov, Eigen::ComputeThinU);
  const Eigen::VectorXd& sigma = svd.singularValues();
  int rank = 0;
  if (sigma.size() > 0 && sigma(0) > 0.0) {
    for (Eigen::Index i = 0; i < sigma.size(); ++i) {
      if (sigma(i) > kRankTolerance * sigma(0)) ++rank;
    }
  }
  const CMatrix q = svd.matrixU().leftCols(rank);
  GeneratorTuple out;
  out.d = rank;
  out.T = q.adjoint() * tuple.T * q;
  out.u = q.adjoint() * tuple.u;
  out.v = q.adjoint() * tuple.v;
  out.lambda = tuple.lambda;
  return out;
}

std::string process_class_name(ProcessClass c) {
  switch (c) {
    case ProcessClass::Gaussian:
      return "gaussian";
    case ProcessClass::CompoundPoisson:
      return "compound-poisson";
    case ProcessClass::General:
      return "general";
  }
  throw Error("unknown process class");
}

ProcessClass classify(const GeneratorTuple& tuple) {
  tuple.validate();
  if (!tuple.is_symmetric()) {
    throw PreconditionError("classification requires a symmetric tuple");
  }
  const GeneratorTuple min = minimal_tuple(tuple);
  if (min.d == 0 || max_abs(min.T) <= kRankTolerance * (1.0 + max_abs(tuple.T))) {
    return ProcessClass::Gaussian;
  }
  // Compound Poisson means u = T w for some w and lambda = <w, T w>: solve
  // in the least-squares sense and test the residuals.
  Eigen::JacobiSVD<CMatrix> svd(min.T, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const double smax = sigma.size() > 0 ? sigma(0) : 0.0;
  CVector coeff = svd.matrixU().adjoint() * min.u;
  for (Eigen::Index i = 0; i < coeff.size(); ++i) {
    coeff(i) = sigma(i) > kRankTolerance * smax ? coeff(i) / sigma(i) : Complex{};
  }
  const CVector omega = svd.matrixV() * coeff;
  const double residual = (min.T * omega - min.u).norm();
  if (residual > kMatchTolerance * (1.0 + min.u.norm())) {
    return ProcessClass::General;
  }
  const double drift = omega.dot(min.T * omega).real();
  const double lam = min.lambda.real();
  if (std::abs(lam - drift) > kMatchTolerance * (1.0 + std::abs(lam))) {
    return ProcessClass::General;
  }
  return ProcessClass::CompoundPoisson;
}

ItoLevySplit ito_levy_split(const GeneratorTuple& tuple) {
  tuple.validate();
  if (!tuple.is_symmetric()) {
    throw PreconditionError("the Gaussian/jump splitting requires a symmetric tuple");
  }
  const double lam = tuple.lambda.real();
  double gaussian_amplitude = 0.0;
  double jump_drift = 0.0;
  CVector u_range = CVector::Zero(tuple.d);
  if (tuple.d > 0) {
    const CMatrix herm = 0.5 * (tuple.T + tuple.T.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(herm);
    if (es.info() != Eigen::Success) {
      throw Error("eigendecomposition of T failed");
    }
    const Eigen::VectorXd& eig = es.eigenvalues();
    const double threshold = kRankTolerance * eig.cwiseAbs().maxCoeff();
    const CVector coeff = es.eigenvectors().adjoint() * tuple.u;
    CVector coeff_range = coeff;
    double kernel_norm_sq = 0.0;
    for (Eigen::Index i = 0; i < eig.size(); ++i) {
      if (std::abs(eig(i)) <= threshold) {
        kernel_norm_sq += std::norm(coeff(i));
        coeff_range(i) = Complex{};
      } else {
        jump_drift += std::norm(coeff(i)) / eig(i);
      }
    }
    gaussian_amplitude = std::sqrt(kernel_norm_sq);
    u_range = es.eigenvectors() * coeff_range;
  }
  ItoLevySplit out;
  out.gaussian.d = 1;
  out.gaussian.T = CMatrix::Zero(1, 1);
  out.gaussian.u = CVector::Constant(1, Complex{gaussian_amplitude, 0.0});
  out.gaussian.v = out.gaussian.u;
  out.gaussian.lambda = lam - jump_drift;
  out.jump.d = tuple.d;
  out.jump.T = tuple.T;
  out.jump.u = u_range;
  out.jump.v = u_range;
  out.jump.lambda = jump_drift;
  out.exact = true;
  return out;
}

GeneratorTuple compound_poisson_tuple(const std::vector<double>& atoms,
                                      const std::vector<double>& weights) {
  if (atoms.size() != weights.size()) {
    throw ShapeError("atoms and weights must have equal length, got " +
                     std::to_string(atoms.size()) + " and " +
                     std::to_string(weights.size()));
  }
  const int d = static_cast<int>(atoms.size());
  GeneratorTuple out;
  out.d = d;
  out.T = CMatrix::Zero(d, d);
  out.u = CVector::Zero(d);
  double lam = 0.0;
  for (int i = 0; i < d; ++i) {
    const double w = weights[static_cast<std::size_t>(i)];
    if (!(w >= 0.0)) {
      throw PreconditionError("jump measure weights must be nonnegative, got " +
                              std::to_string(w));
    }
    const double x = atoms[static_cast<std::size_t>(i)];
    out.T(i, i) = x;
    out.u(i) = std::sqrt(w) * x;
    lam += w * x;
  }
  out.v = out.u;
  out.lambda = lam;
  return out;
}

}  // namespace ncp
