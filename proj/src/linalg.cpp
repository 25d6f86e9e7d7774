#include "xorq/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "xorq/kernels.hpp"

namespace xorq {

const char *error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotSquare: return "NotSquare";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::BadPermutation: return "BadPermutation";
    case ErrorKind::NotAPermutation: return "NotAPermutation";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::TraceNormExceeded: return "TraceNormExceeded";
    case ErrorKind::ZeroGame: return "ZeroGame";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::BadArgs: return "BadArgs";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::Unbounded: return "Unbounded";
    case ErrorKind::MaxIterations: return "MaxIterations";
    case ErrorKind::NumericalFailure: return "NumericalFailure";
  }
  return "Unknown";
}

double hermiticity_defect(const CMat &H) {
  return (H - H.adjoint()).norm() / std::max(1.0, H.norm());
}

void require_square(const CMat &A, const char *what) {
  if (A.rows() != A.cols())
    throw Error(ErrorKind::NotSquare, std::string(what) + " is " + std::to_string(A.rows()) +
                                          "x" + std::to_string(A.cols()));
}

void require_hermitian(const CMat &H, const char *what) {
  require_square(H, what);
  double defect = hermiticity_defect(H);
  if (defect > kHermTol)
    throw Error(ErrorKind::NotHermitian,
                std::string(what) + " has Hermiticity defect " + std::to_string(defect));
}

CMat hermitian_part(const CMat &H) { return (H + H.adjoint()) / 2.0; }

HermEig herm_eig(const CMat &H) {
  require_hermitian(H, "herm_eig input");
  HermEig out;
  const Eigen::Index n = H.rows();
  if (n == 0) return out;
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(H));
  if (es.info() != Eigen::Success)
    throw Error(ErrorKind::NumericalFailure, "Hermitian eigensolver did not converge");
  out.values = es.eigenvalues().reverse();
  out.vectors = es.eigenvectors().rowwise().reverse();
  return out;
}

Svd svd(const CMat &A) {
  Svd out;
  if (A.size() == 0) {
    out.U = CMat(A.rows(), 0);
    out.V = CMat(A.cols(), 0);
    out.S = RVec(0);
    return out;
  }
  Eigen::BDCSVD<CMat> s(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  out.U = s.matrixU();
  out.S = s.singularValues();
  out.V = s.matrixV();
  return out;
}

double trace_norm(const CMat &A) {
  if (A.size() == 0) return 0.0;
  return Eigen::BDCSVD<CMat>(A).singularValues().sum();
}

double op_norm(const CMat &A) {
  if (A.size() == 0) return 0.0;
  return Eigen::BDCSVD<CMat>(A).singularValues()(0);
}

int numerical_rank(const RVec &s) {
  if (s.size() == 0 || s(0) <= 0.0) return 0;
  const double cut = kRankTol * s(0);
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) ++r;
  return r;
}

CMat tensor(const CMat &A, const CMat &B) {
  CMat out(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return out;
}

CVec tensor(const CVec &a, const CVec &b) {
  CVec out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

CMat partial_trace(const CMat &P, int d1, int d2, Side which) {
  require_square(P, "partial_trace input");
  if (d1 <= 0 || d2 <= 0 || P.rows() != static_cast<Eigen::Index>(d1) * d2)
    throw Error(ErrorKind::DimensionMismatch, "partial_trace: dims do not match operator size");
  if (which == Side::Second) {
    CMat out = CMat::Zero(d1, d1);
    for (int i = 0; i < d1; ++i)
      for (int k = 0; k < d1; ++k)
        for (int j = 0; j < d2; ++j) out(i, k) += P(i * d2 + j, k * d2 + j);
    return out;
  }
  CMat out = CMat::Zero(d2, d2);
  for (int i = 0; i < d1; ++i) out += P.block(i * d2, i * d2, d2, d2);
  return out;
}

std::vector<std::int64_t> permutation_index_map(const std::vector<int> &dims,
                                                const std::vector<int> &perm) {
  const std::size_t K = dims.size();
  if (perm.size() != K) throw Error(ErrorKind::BadPermutation, "permutation length mismatch");
  std::vector<int> inv(K, -1);
  for (std::size_t k = 0; k < K; ++k) {
    if (perm[k] < 0 || static_cast<std::size_t>(perm[k]) >= K || inv[perm[k]] != -1)
      throw Error(ErrorKind::BadPermutation, "not a bijection on factor positions");
    inv[perm[k]] = static_cast<int>(k);
  }
  std::int64_t total = 1;
  for (int d : dims) {
    if (d <= 0) throw Error(ErrorKind::DimensionMismatch, "factor dimension must be positive");
    total *= d;
  }
  // Strides of the input and of the output layouts (row-major, first factor slowest).
  std::vector<std::int64_t> in_stride(K), out_stride(K);
  std::int64_t s = 1;
  for (std::size_t k = K; k-- > 0;) {
    in_stride[k] = s;
    s *= dims[k];
  }
  s = 1;
  for (std::size_t j = K; j-- > 0;) {
    out_stride[inv[j]] = s;
    s *= dims[inv[j]];
  }
  std::vector<std::int64_t> map(static_cast<std::size_t>(total));
  std::vector<int> digit(K, 0);
  std::int64_t out_idx = 0;
  for (std::int64_t in_idx = 0; in_idx < total; ++in_idx) {
    map[static_cast<std::size_t>(out_idx)] = in_idx;
    for (std::size_t k = K; k-- > 0;) {
      if (++digit[k] < dims[k]) {
        out_idx += out_stride[k];
        break;
      }
      out_idx -= out_stride[k] * (dims[k] - 1);
      digit[k] = 0;
    }
  }
  return map;
}

static std::int64_t dims_product(const std::vector<int> &dims) {
  std::int64_t t = 1;
  for (int d : dims) t *= d;
  return t;
}

CVec permute_systems(const CVec &v, const std::vector<int> &dims, const std::vector<int> &perm) {
  if (v.size() != dims_product(dims))
    throw Error(ErrorKind::DimensionMismatch, "permute_systems: vector size != product of dims");
  auto map = permutation_index_map(dims, perm);
  CVec out(v.size());
  for (std::size_t i = 0; i < map.size(); ++i) out(static_cast<Eigen::Index>(i)) = v(map[i]);
  return out;
}

CMat permute_systems(const CMat &P, const std::vector<int> &dims, const std::vector<int> &perm) {
  require_square(P, "permute_systems input");
  if (P.rows() != dims_product(dims))
    throw Error(ErrorKind::DimensionMismatch, "permute_systems: operator size != product of dims");
  auto map = permutation_index_map(dims, perm);
  const Eigen::Index n = P.rows();
  CMat out(n, n);
  for (Eigen::Index c = 0; c < n; ++c)
    for (Eigen::Index r = 0; r < n; ++r) out(r, c) = P(map[r], map[c]);
  return out;
}

CMat sign_of_hermitian(const CMat &K) {
  HermEig e = herm_eig(K);
  RVec s(e.values.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) s(i) = e.values(i) < -1e-12 ? -1.0 : 1.0;
  return e.vectors * s.asDiagonal() * e.vectors.adjoint();
}

CMat polar_unitary(const CMat &K) {
  require_square(K, "polar_unitary input");
  Svd s = svd(K);
  return s.V * s.U.adjoint();
}

CMat unitary_factor(const CMat &A) {
  require_square(A, "unitary_factor input");
  Svd s = svd(A);
  return s.U * s.V.adjoint();
}

cplx frob_inner(const CMat &A, const CMat &B) {
  if (A.rows() != B.rows() || A.cols() != B.cols())
    throw Error(ErrorKind::DimensionMismatch, "frob_inner: shape mismatch");
  return kernels::dot_conj(A.data(), B.data(), static_cast<std::size_t>(A.size()));
}

cplx trace_product(const CMat &A, const CMat &B) {
  if (A.cols() != B.rows() || A.rows() != B.cols())
    throw Error(ErrorKind::DimensionMismatch, "trace_product: shape mismatch");
  CMat Ad = A.adjoint();
  return kernels::dot_conj(Ad.data(), B.data(), static_cast<std::size_t>(B.size()));
}

CMat complete_unitary(const CMat &Q) {
  const Eigen::Index d = Q.rows(), r = Q.cols();
  CMat out(d, d);
  if (r == 0) return CMat::Identity(d, d);
  Eigen::HouseholderQR<CMat> qr(Q);
  CMat full = qr.householderQ() * CMat::Identity(d, d);
  out.leftCols(r) = Q;
  out.rightCols(d - r) = full.rightCols(d - r);
  return out;
}

// Fills the columns of W flagged unset so that W becomes unitary.
static CMat fill_unitary(const CMat &W, const std::vector<bool> &set) {
  const Eigen::Index d = W.rows();
  std::vector<Eigen::Index> known, missing;
  for (Eigen::Index i = 0; i < W.cols(); ++i) (set[i] ? known : missing).push_back(i);
  CMat K(d, static_cast<Eigen::Index>(known.size()));
  for (std::size_t j = 0; j < known.size(); ++j) K.col(j) = W.col(known[j]);
  CMat comp = complete_unitary(K);
  CMat out(d, d);
  Eigen::Index next = static_cast<Eigen::Index>(known.size());
  for (std::size_t j = 0; j < known.size(); ++j) out.col(known[j]) = K.col(j);
  for (Eigen::Index i : missing) out.col(i) = comp.col(next++);
  for (Eigen::Index i = W.cols(); i < d; ++i) out.col(i) = comp.col(next++);
  return out;
}

// Unitary whose first columns are the normalized nonzero columns of G (d x k); near-zero
// columns get completion vectors. The closest orthonormal set is taken by polar factor.
static CMat orthonormal_columns(const CMat &G, const RVec &norms) {
  const Eigen::Index d = G.rows(), k = G.cols();
  std::vector<Eigen::Index> known;
  for (Eigen::Index i = 0; i < k; ++i)
    if (norms(i) > 1e-12) known.push_back(i);
  CMat K(d, static_cast<Eigen::Index>(known.size()));
  for (std::size_t j = 0; j < known.size(); ++j) K.col(j) = G.col(known[j]) / G.col(known[j]).norm();
  if (K.cols() > 0) {
    Eigen::JacobiSVD<CMat> s(K, Eigen::ComputeThinU | Eigen::ComputeThinV);
    K = s.matrixU() * s.matrixV().adjoint();
  }
  std::vector<bool> set(static_cast<std::size_t>(k), false);
  CMat W = CMat::Zero(d, k);
  for (std::size_t j = 0; j < known.size(); ++j) {
    W.col(known[j]) = K.col(j);
    set[known[j]] = true;
  }
  return fill_unitary(W, set);
}

Gsvd gsvd(const CMat &A1, const CMat &A2) {
  if (A1.rows() != A2.rows() || A1.cols() != A2.cols())
    throw Error(ErrorKind::DimensionMismatch, "gsvd: A1 and A2 must have the same shape");
  const Eigen::Index n = A1.rows(), d = A1.cols();
  if (n > d) throw Error(ErrorKind::PreconditionViolated, "gsvd requires n <= d; pad columns");

  CMat A(n, 2 * d);
  A << A1, A2;
  Eigen::BDCSVD<CMat> sa(A, Eigen::ComputeFullU | Eigen::ComputeThinV);
  RVec sig = sa.singularValues();
  const int k = numerical_rank(sig);

  Gsvd out;
  out.k = k;
  if (k == 0) {
    out.U1 = CMat::Identity(d, d);
    out.U2 = CMat::Identity(d, d);
    out.R = CMat(n, 0);
    out.D1 = RVec(0);
    out.D2 = RVec(0);
    return out;
  }
  CMat R0 = sa.matrixU().leftCols(k) * sig.head(k).asDiagonal();
  CMat F = sa.matrixV().leftCols(k).adjoint();  // k x 2d, orthonormal rows
  CMat F1 = F.leftCols(d), F2 = F.rightCols(d);

  // F1 F1^dagger + F2 F2^dagger = I, so both blocks share left singular vectors Z. Each SVD
  // resolves Z accurately only where its own singular values are the small ones, so cosines
  // up to 1/sqrt(2) take Z from F1 and the rest take Z from F2.
  Eigen::JacobiSVD<CMat> s1(F1, Eigen::ComputeFullU), s2(F2, Eigen::ComputeFullU);
  const double split = std::sqrt(0.5);
  Eigen::Index c1 = 0;
  while (c1 < k && s1.singularValues()(k - 1 - c1) <= split) ++c1;
  CMat Z(k, k);
  Z.leftCols(c1) = s1.matrixU().rightCols(c1);
  Z.rightCols(k - c1) = s2.matrixU().rightCols(k - c1);
  // The two halves span complementary invariant subspaces; polish them to an exact unitary.
  Z = unitary_factor(Z);

  // Column norms give cosines and sines directly, avoiding sqrt(1 - C^2).
  const CMat G1 = F1.adjoint() * Z, G2 = F2.adjoint() * Z;  // d x k
  out.R = R0 * Z;
  out.D1 = G1.colwise().norm().transpose();
  out.D2 = G2.colwise().norm().transpose();
  for (int i = 0; i < k; ++i) {
    const double h = std::hypot(out.D1(i), out.D2(i));
    out.D1(i) /= h;
    out.D2(i) /= h;
  }
  out.U1 = orthonormal_columns(G1, out.D1);
  out.U2 = orthonormal_columns(G2, out.D2);
  return out;
}

Isometries proportionality_isometries(const CMat &A1, const CMat &A2, const CMat &B1,
                                      const CMat &B2) {
  const Eigen::Index n = A1.rows(), d = A1.cols();
  for (const CMat *M : {&A2, &B1, &B2})
    if (M->rows() != n || M->cols() != d)
      throw Error(ErrorKind::DimensionMismatch, "proportionality_isometries: shape mismatch");
  const double scale = std::max(1.0, A1.norm() * B1.norm() + A2.norm() * B2.norm());
  if ((A1 * B1.adjoint() - A2 * B2.adjoint()).norm() > 1e-8 * scale)
    throw Error(ErrorKind::PreconditionViolated, "A1 B1^dagger != A2 B2^dagger");

  const Eigen::Index dp = std::max(n, d);
  CMat P1 = CMat::Zero(n, dp), P2 = CMat::Zero(n, dp);
  P1.leftCols(d) = A1;
  P2.leftCols(d) = A2;
  Gsvd g = gsvd(P1, P2);
  const Eigen::Index k = g.k, rest = dp - k, dprime = k + 2 * rest;

  CMat S1 = CMat::Zero(dp, dprime), S2 = CMat::Zero(dp, dprime);
  for (Eigen::Index i = 0; i < k; ++i) S1(i, i) = S2(i, i) = 1.0;
  for (Eigen::Index i = 0; i < rest; ++i) {
    S1(k + i, k + i) = 1.0;
    S2(k + i, k + rest + i) = 1.0;
  }
  Isometries iso;
  iso.V1 = (g.U1 * S1).topRows(d);
  iso.V2 = (g.U2 * S2).topRows(d);
  iso.d_prime = static_cast<int>(dprime);
  return iso;
}

bool check_column_proportionality(const CMat &A1, const CMat &A2, const CMat &B1,
                                  const CMat &B2, const Isometries &iso, double tol) {
  const Eigen::Index n = A1.rows();
  CMat X(2 * n, iso.d_prime), Y(2 * n, iso.d_prime);
  X << A1 * iso.V1, B2 * iso.V2;
  Y << A2 * iso.V2, B1 * iso.V1;
  const double scale = std::max({1.0, A1.norm(), A2.norm(), B1.norm(), B2.norm()});
  for (Eigen::Index i = 0; i < X.cols(); ++i) {
    CVec x = X.col(i), y = Y.col(i);
    if (x.norm() < y.norm()) std::swap(x, y);
    double xx = x.squaredNorm();
    if (xx == 0.0) continue;
    double t = std::max(0.0, x.dot(y).real() / xx);
    if ((y - t * x).norm() > tol * scale) return false;
  }
  return true;
}

int permutation_sign(const std::vector<int> &perm) {
  const std::size_t m = perm.size();
  if (m == 0) return 1;
  int lo = *std::min_element(perm.begin(), perm.end());
  if (lo != 0 && lo != 1) throw Error(ErrorKind::NotAPermutation, "values must start at 0 or 1");
  std::vector<char> seen(m, 0);
  for (int p : perm) {
    int v = p - lo;
    if (v < 0 || static_cast<std::size_t>(v) >= m || seen[v])
      throw Error(ErrorKind::NotAPermutation, "input is not a bijection");
    seen[v] = 1;
  }
  std::fill(seen.begin(), seen.end(), 0);
  std::size_t cycles = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (seen[i]) continue;
    ++cycles;
    for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(perm[j] - lo)) seen[j] = 1;
  }
  return ((m - cycles) % 2 == 0) ? 1 : -1;
}

CVec max_entangled(int d) {
  CVec v = CVec::Zero(static_cast<Eigen::Index>(d) * d);
  for (int i = 0; i < d; ++i) v(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
  return v;
}

CMat identity(int d) { return CMat::Identity(d, d); }

Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

CMat random_gaussian(int rows, int cols, Rng &rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  CMat G(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) {
      double re = nd(rng), im = nd(rng);
      G(r, c) = cplx(re, im) / std::sqrt(2.0);
    }
  return G;
}

CMat random_hermitian(int d, Rng &rng) {
  CMat G = random_gaussian(d, d, rng);
  return hermitian_part(G);
}

CMat random_unitary(int d, Rng &rng) {
  CMat G = random_gaussian(d, d, rng);
  Eigen::HouseholderQR<CMat> qr(G);
  CMat Q = qr.householderQ() * CMat::Identity(d, d);
  CMat R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < d; ++i) {
    cplx r = R(i, i);
    double a = std::abs(r);
    if (a > 0) Q.col(i) *= r / a;
  }
  return Q;
}

CVec random_unit_vector(int d, Rng &rng) {
  CVec v = random_gaussian(d, 1, rng).col(0);
  return v / v.norm();
}

CMat random_observable(int d, Rng &rng) { return sign_of_hermitian(random_hermitian(d, rng)); }

}  // namespace xorq
