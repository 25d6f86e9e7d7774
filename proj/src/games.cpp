#include "xorq/games.hpp"

#include <cmath>

namespace xorq {

GameMatrix validate(int n, const CMat &M) {
  if (n < 1) throw Error(ErrorKind::BadArgs, "game local dimension must be positive");
  if (M.rows() != static_cast<Eigen::Index>(n) * n || M.cols() != M.rows())
    throw Error(ErrorKind::DimensionMismatch, "game matrix must be n^2 x n^2");
  require_hermitian(M, "game matrix");
  GameMatrix G{n, hermitian_part(M)};
  double tn = trace_norm(G.M);
  if (tn > 1.0 + 1e-8)
    throw Error(ErrorKind::TraceNormExceeded, "trace norm " + std::to_string(tn) + " > 1");
  return G;
}

ClassicalGame classical(const RMat &R) {
  if (R.rows() != R.cols() || R.rows() < 1)
    throw Error(ErrorKind::DimensionMismatch, "classical game matrix must be square");
  if (R.cwiseAbs().sum() > 1.0 + 1e-8)
    throw Error(ErrorKind::TraceNormExceeded, "sum of |R| exceeds 1");
  return ClassicalGame{static_cast<int>(R.rows()), R};
}

GameMatrix from_classical(const ClassicalGame &g) {
  const int n = g.n;
  CMat M = CMat::Zero(n * n, n * n);
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t) M(s * n + t, s * n + t) = g.R(s, t);
  return validate(n, M);
}

ClassicalGame chsh_classical() {
  RMat R(2, 2);
  R << 0.25, 0.25, 0.25, -0.25;
  return classical(R);
}

GameMatrix chsh() { return from_classical(chsh_classical()); }

GameMatrix t_game(int n) {
  if (n < 1) throw Error(ErrorKind::BadArgs, "t_game requires n >= 1");
  const int d = n + 1;
  CMat M = CMat::Zero(d * d, d * d);
  const double c = 1.0 / (2.0 * std::sqrt(static_cast<double>(n)));
  for (int i = 1; i <= n; ++i) {
    M(0, i * d + i) += c;
    M(i * d + i, 0) += c;
  }
  return validate(d, M);
}

unsigned long long binomial(int a, int b) {
  if (b < 0 || b > a) return 0;
  b = std::min(b, a - b);
  unsigned long long r = 1;
  for (int i = 1; i <= b; ++i) r = r * static_cast<unsigned long long>(a - b + i) / i;
  return r;
}

std::vector<std::vector<int>> lex_subsets(int m, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > m) return out;
  std::vector<int> s(k);
  for (int i = 0; i < k; ++i) s[i] = i;
  while (true) {
    out.push_back(s);
    int i = k - 1;
    while (i >= 0 && s[i] == m - k + i) --i;
    if (i < 0) break;
    ++s[i];
    for (int j = i + 1; j < k; ++j) s[j] = s[j - 1] + 1;
  }
  return out;
}

std::vector<CMat> h_basis(int n) {
  if (n < 1) throw Error(ErrorKind::BadArgs, "h_game requires n >= 1");
  if (n > 3) throw Error(ErrorKind::TooLarge, "h_game is built densely only for n <= 3");
  const int m = 2 * n + 1;
  auto subsets = lex_subsets(m, n);
  const int N = static_cast<int>(subsets.size());
  std::vector<unsigned> mask(N);
  for (int s = 0; s < N; ++s)
    for (int e : subsets[s]) mask[s] |= 1u << e;
  std::vector<CMat> C(m, CMat::Zero(N, N));
  const unsigned full = (1u << m) - 1;
  for (int s = 0; s < N; ++s)
    for (int t = 0; t < N; ++t) {
      if (mask[s] & mask[t]) continue;
      unsigned rest = full & ~(mask[s] | mask[t]);
      int e = __builtin_ctz(rest);
      std::vector<int> word(subsets[s]);
      word.push_back(e);
      word.insert(word.end(), subsets[t].begin(), subsets[t].end());
      C[e](s, t) = permutation_sign(word);
    }
  return C;
}

GameMatrix h_game(int n) {
  auto C = h_basis(n);
  const Eigen::Index N = C[0].rows();
  CMat M = CMat::Zero(N * N, N * N);
  for (const CMat &Ci : C) M += tensor(Ci, Ci);
  M /= static_cast<double>(binomial(4 * n + 1, 2 * n));
  return validate(static_cast<int>(N), M);
}

GameMatrix c_game(int n) {
  if (n < 1) throw Error(ErrorKind::BadArgs, "c_game requires n >= 1");
  const int d = n + 1;
  CMat M = CMat::Zero(d * d, d * d);
  const double c = 1.0 / (2.0 * n);
  for (int k = 1; k <= n; ++k) {
    M(0 * d + k, k * d + 0) += c;
    M(k * d + 0, 0 * d + k) += c;
  }
  return validate(d, M);
}

GameMatrix tensor_games(const GameMatrix &G1, const GameMatrix &G2) {
  CMat big = tensor(G1.M, G2.M);  // registers (A1 B1 A2 B2)
  CMat M = permute_systems(big, {G1.n, G1.n, G2.n, G2.n}, {0, 2, 1, 3});
  return validate(G1.n * G2.n, M);
}

bool is_classical(const GameMatrix &G, double tol) {
  for (Eigen::Index c = 0; c < G.M.cols(); ++c)
    for (Eigen::Index r = 0; r < G.M.rows(); ++r) {
      if (r == c) {
        if (std::abs(G.M(r, c).imag()) > tol) return false;
      } else if (std::abs(G.M(r, c)) > tol) {
        return false;
      }
    }
  return true;
}

ClassicalGame to_classical(const GameMatrix &G) {
  if (!is_classical(G)) throw Error(ErrorKind::PreconditionViolated, "game is not classical");
  RMat R(G.n, G.n);
  for (int s = 0; s < G.n; ++s)
    for (int t = 0; t < G.n; ++t) R(s, t) = G.M(s * G.n + t, s * G.n + t).real();
  return classical(R);
}

RefereeProtocol to_referee_protocol(const GameMatrix &G) {
  HermEig e = herm_eig(G.M);
  RefereeProtocol p;
  double total = 0.0;
  for (Eigen::Index i = 0; i < e.values.size(); ++i) {
    double l = e.values(i);
    if (std::abs(l) <= 1e-12) continue;
    p.p.push_back(std::abs(l));
    p.c.push_back(l < 0 ? 1 : 0);
    p.states.push_back(e.vectors.col(i));
    total += std::abs(l);
  }
  p.reject = std::max(0.0, 1.0 - total);
  return p;
}

std::vector<CMat> hermitian_basis(int n) {
  std::vector<CMat> B;
  B.push_back(CMat::Identity(n, n));
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) {
      CMat S = CMat::Zero(n, n);
      S(j, k) = S(k, j) = 1.0;
      B.push_back(S);
      CMat A = CMat::Zero(n, n);
      A(j, k) = cplx(0, -1);
      A(k, j) = cplx(0, 1);
      B.push_back(A);
    }
  for (int l = 1; l < n; ++l) {
    CMat D = CMat::Zero(n, n);
    for (int j = 0; j < l; ++j) D(j, j) = 1.0;
    D(l, l) = -static_cast<double>(l);
    B.push_back(D);
  }
  for (CMat &H : B) H /= trace_norm(H);
  return B;
}

ProductStateProtocol to_product_state_protocol(const GameMatrix &G) {
  const int n = G.n;
  auto basis = hermitian_basis(n);
  const int K = static_cast<int>(basis.size());
  std::vector<double> hs(K);
  for (int i = 0; i < K; ++i) hs[i] = frob_inner(basis[i], basis[i]).real();

  // T_i[b, d] = sum_{a, c} H_i[a, c] M[(c, d), (a, b)], so that
  // Tr((H_i (x) H_j) M) = sum_{b, d} H_j[b, d] T_i[b, d].
  ProductStateProtocol out;
  out.basis = "identity+generalized-gell-mann";
  for (int i = 0; i < K; ++i) {
    CMat T = CMat::Zero(n, n);
    for (int a = 0; a < n; ++a)
      for (int c = 0; c < n; ++c) {
        cplx h = basis[i](a, c);
        if (h == cplx(0)) continue;
        T += h * G.M.block(c * n, a * n, n, n).transpose();
      }
    for (int j = 0; j < K; ++j) {
      double coeff = trace_product(basis[j], T.transpose()).real() / (hs[i] * hs[j]);
      if (std::abs(coeff) <= 1e-14) continue;
      ProductTerm t;
      t.weight = std::abs(coeff);
      t.sign = coeff < 0 ? -1 : 1;
      t.left = i;
      t.right = j;
      t.H_left = basis[i];
      t.H_right = basis[j];
      out.total_weight += t.weight;
      out.terms.push_back(std::move(t));
    }
  }
  return out;
}

CMat reconstruct(const ProductStateProtocol &p, int n) {
  CMat M = CMat::Zero(n * n, n * n);
  for (const auto &t : p.terms) M += (t.sign * t.weight) * tensor(t.H_left, t.H_right);
  return M;
}

static void require_rank_one_shape(const RankOneGame &g) {
  const Eigen::Index len = static_cast<Eigen::Index>(g.n) * g.n * g.v_dim;
  if (g.n < 1 || g.v_dim < 1 || g.eta.size() != len || g.gamma.size() != len)
    throw Error(ErrorKind::DimensionMismatch, "rank-one game vectors have the wrong length");
}

CMat rank_one_matrix(const RankOneGame &g) {
  require_rank_one_shape(g);
  const Eigen::Index nn = static_cast<Eigen::Index>(g.n) * g.n;
  // Row (a, b), column v.
  Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> E(
      g.eta.data(), nn, g.v_dim);
  Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> Gm(
      g.gamma.data(), nn, g.v_dim);
  return E * Gm.adjoint();
}

RankOneGame xor_to_rank_one(const GameMatrix &G) {
  Svd s = svd(G.M);
  const int r = numerical_rank(s.S);
  if (r == 0 || s.S(0) < 1e-14) throw Error(ErrorKind::ZeroGame, "game matrix is zero");
  const double total = s.S.head(r).sum();
  const Eigen::Index nn = G.M.rows();
  RankOneGame g;
  g.n = G.n;
  g.v_dim = r;
  g.eta = CVec(nn * r);
  g.gamma = CVec(nn * r);
  const double norm = std::abs(total - 1.0) <= 1e-8 ? 1.0 : 1.0 / std::sqrt(total);
  g.weight = std::abs(total - 1.0) <= 1e-8 ? 1.0 : total;
  for (Eigen::Index ab = 0; ab < nn; ++ab)
    for (int i = 0; i < r; ++i) {
      const double w = std::sqrt(s.S(i)) * norm;
      g.eta(ab * r + i) = w * s.U(ab, i);
      g.gamma(ab * r + i) = w * s.V(ab, i);
    }
  return g;
}

GameMatrix rank_one_to_xor(const RankOneGame &g) {
  CMat Mh = rank_one_matrix(g);
  const int n = g.n, d = 2 * n;
  CMat M = CMat::Zero(d * d, d * d);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int e = 0; e < n; ++e) {
          const int row = (0 * n + a) * d + (0 * n + b);
          const int col = (1 * n + c) * d + (1 * n + e);
          const cplx v = 0.5 * Mh(a * n + b, c * n + e);
          M(row, col) += v;
          M(col, row) += std::conj(v);
        }
  return validate(d, M);
}

RankOneGame t_rank_one(int n) {
  if (n < 1) throw Error(ErrorKind::BadArgs, "t_rank_one requires n >= 1");
  const int d = n + 1;
  RankOneGame g;
  g.n = d;
  g.v_dim = 1;
  g.eta = CVec::Zero(d * d);
  g.gamma = CVec::Zero(d * d);
  g.eta(0) = 1.0;
  for (int i = 1; i <= n; ++i) g.gamma(i * d + i) = 1.0 / std::sqrt(static_cast<double>(n));
  return g;
}

}  // namespace xorq
