#include "xorq/strategies.hpp"

#include <cmath>
#include <numbers>

namespace xorq {

StrategyKind kind_of(const Strategy &s) { return static_cast<StrategyKind>(s.index()); }

const char *kind_name(StrategyKind k) {
  switch (k) {
    case StrategyKind::Unentangled: return "unentangled";
    case StrategyKind::Complex: return "complex";
    case StrategyKind::MaxEntangled: return "maxent";
    case StrategyKind::Entangled: return "entangled";
  }
  return "unknown";
}

namespace {

void require_shape(const CMat &X, Eigen::Index dim, const char *what) {
  if (X.rows() != dim || X.cols() != dim)
    throw Error(ErrorKind::DimensionMismatch, std::string(what) + " has the wrong shape");
}

void require_contraction(const CMat &X, const char *what) {
  if (op_norm(X) > 1.0 + 1e-9)
    throw Error(ErrorKind::PreconditionViolated, std::string(what) + " is not a contraction");
}

void require_hermitian_contraction(const CMat &X, Eigen::Index dim, const char *what) {
  require_shape(X, dim, what);
  require_hermitian(X, what);
  require_contraction(X, what);
}

CMat psi_scalar() { return CMat::Ones(1, 1); }

CMat psi_me(int d) { return CMat::Identity(d, d) / std::sqrt(static_cast<double>(d)); }

}  // namespace

void validate_strategy(const GameMatrix &G, const Strategy &s) {
  const Eigen::Index n = G.n;
  std::visit(
      [&](const auto &st) {
        using T = std::decay_t<decltype(st)>;
        if constexpr (std::is_same_v<T, Unentangled>) {
          require_hermitian_contraction(st.A, n, "A");
          require_hermitian_contraction(st.B, n, "B");
        } else if constexpr (std::is_same_v<T, Complex>) {
          require_shape(st.A, n, "A");
          require_shape(st.B, n, "B");
          require_contraction(st.A, "A");
          require_contraction(st.B, "B");
        } else if constexpr (std::is_same_v<T, MaxEntangled>) {
          if (st.d < 1) throw Error(ErrorKind::BadArgs, "entanglement dimension must be positive");
          require_hermitian_contraction(st.A, n * st.d, "A");
          require_hermitian_contraction(st.B, n * st.d, "B");
        } else {
          if (st.dA < 1 || st.dB < 1)
            throw Error(ErrorKind::BadArgs, "private dimensions must be positive");
          require_hermitian_contraction(st.A, n * st.dA, "A");
          require_hermitian_contraction(st.B, n * st.dB, "B");
          if (st.psi.size() != static_cast<Eigen::Index>(st.dA) * st.dB)
            throw Error(ErrorKind::DimensionMismatch, "psi has the wrong length");
          if (std::abs(st.psi.norm() - 1.0) > 1e-9)
            throw Error(ErrorKind::PreconditionViolated, "psi is not a unit vector");
        }
      },
      s);
}

SpectralGame spectral_form(const GameMatrix &G) {
  HermEig e = herm_eig(G.M);
  SpectralGame S;
  S.n = G.n;
  const double top = e.values.size() ? e.values.cwiseAbs().maxCoeff() : 0.0;
  for (Eigen::Index k = 0; k < e.values.size(); ++k) {
    if (std::abs(e.values(k)) <= 1e-14 * std::max(top, 1e-300)) continue;
    S.lambda.push_back(e.values(k));
    CVec v = e.vectors.col(k);
    CMat Mk(G.n, G.n);
    for (int a = 0; a < G.n; ++a)
      for (int b = 0; b < G.n; ++b) Mk(a, b) = v(a * G.n + b);
    S.modes.push_back(std::move(Mk));
  }
  return S;
}

CMat psi_matrix(const CVec &psi, int dA, int dB) {
  if (psi.size() != static_cast<Eigen::Index>(dA) * dB)
    throw Error(ErrorKind::DimensionMismatch, "psi has the wrong length");
  CMat P(dA, dB);
  for (int p = 0; p < dA; ++p)
    for (int q = 0; q < dB; ++q) P(p, q) = psi(p * dB + q);
  return P;
}

CVec psi_vector(const CMat &Psi) {
  CVec v(Psi.size());
  for (Eigen::Index p = 0; p < Psi.rows(); ++p)
    for (Eigen::Index q = 0; q < Psi.cols(); ++q) v(p * Psi.cols() + q) = Psi(p, q);
  return v;
}

cplx entangled_value(const SpectralGame &S, const CMat &A, const CMat &B, const CMat &Psi) {
  cplx total = 0.0;
  for (std::size_t k = 0; k < S.lambda.size(); ++k) {
    CMat X = tensor(S.modes[k], Psi);
    CMat Y = A * X * B.transpose();
    total += S.lambda[k] * frob_inner(X, Y);
  }
  return total;
}

CMat effective_a(const SpectralGame &S, const CMat &B, const CMat &Psi) {
  const Eigen::Index dim = S.n * Psi.rows();
  CMat K = CMat::Zero(dim, dim);
  for (std::size_t k = 0; k < S.lambda.size(); ++k) {
    CMat X = tensor(S.modes[k], Psi);
    K.noalias() += S.lambda[k] * (X * B.transpose()) * X.adjoint();
  }
  return K;
}

CMat effective_b(const SpectralGame &S, const CMat &A, const CMat &Psi) {
  const Eigen::Index dim = S.n * Psi.cols();
  CMat K = CMat::Zero(dim, dim);
  for (std::size_t k = 0; k < S.lambda.size(); ++k) {
    CMat X = tensor(S.modes[k], Psi);
    K.noalias() += S.lambda[k] * (X.transpose() * A.transpose()) * X.conjugate();
  }
  return K;
}

CMat state_operator(const GameMatrix &G, const CMat &A, const CMat &B, int dA, int dB) {
  const int n = G.n;
  CMat T = CMat::Zero(static_cast<Eigen::Index>(dA) * dB, static_cast<Eigen::Index>(dA) * dB);
  for (int row = 0; row < n * n; ++row)
    for (int col = 0; col < n * n; ++col) {
      const cplx m = G.M(row, col);
      if (m == cplx(0)) continue;
      const int k = row / n, l = row % n, i = col / n, j = col % n;
      T += m * tensor(CMat(A.block(i * dA, k * dA, dA, dA)), CMat(B.block(j * dB, l * dB, dB, dB)));
    }
  return T;
}

Entangled as_entangled(const MaxEntangled &s) {
  return Entangled{s.d, s.d, s.A, s.B, max_entangled(s.d)};
}

double bias(const GameMatrix &G, const Strategy &s) {
  validate_strategy(G, s);
  SpectralGame S = spectral_form(G);
  return std::visit(
      [&](const auto &st) -> double {
        using T = std::decay_t<decltype(st)>;
        if constexpr (std::is_same_v<T, Unentangled>) {
          return entangled_value(S, st.A, st.B, psi_scalar()).real();
        } else if constexpr (std::is_same_v<T, Complex>) {
          return std::abs(entangled_value(S, st.A, st.B, psi_scalar()));
        } else if constexpr (std::is_same_v<T, MaxEntangled>) {
          return entangled_value(S, st.A, st.B, psi_me(st.d)).real();
        } else {
          return entangled_value(S, st.A, st.B, psi_matrix(st.psi, st.dA, st.dB)).real();
        }
      },
      s);
}

cplx dense_value(const CMat &M, int n, const CMat &A, const CMat &B, const CVec &psi,
                 const CVec &phi, int dA, int dB) {
  CMat rho = psi * phi.adjoint();
  CMat P = permute_systems(tensor(M, rho), {n, n, dA, dB}, {0, 2, 1, 3});
  return trace_product(tensor(A, B), P);
}

Unentangled t_unentangled_strategy(int n) {
  if (n < 1) throw Error(ErrorKind::BadArgs, "t_unentangled_strategy requires n >= 1");
  const int d = n + 1;
  CVec u = CVec::Zero(d);
  for (int i = 1; i <= n; ++i) u(i) = 1.0 / std::sqrt(static_cast<double>(n));
  CVec e0 = CVec::Zero(d);
  e0(0) = 1.0;
  CVec p0 = (e0 + u) / std::sqrt(2.0), p1 = (e0 - u) / std::sqrt(2.0);
  CMat Q = p0 * p0.adjoint() - p1 * p1.adjoint();
  return Unentangled{Q, Q};
}

Complex h1_unentangled_strategy() {
  CMat C1 = h_basis(1)[0];
  const cplx i(0, 1);
  return Complex{i * C1, -i * C1};
}

MaxEntangled h1_me_strategy() {
  auto ket = [](int a, int b) {
    CVec v = CVec::Zero(9);
    v(a * 3 + b) = 1.0;
    return v;
  };
  std::vector<CVec> span = {(ket(0, 1) - ket(1, 0)) / std::sqrt(2.0),
                            (ket(0, 2) - ket(2, 0)) / std::sqrt(2.0),
                            (ket(1, 2) - ket(2, 1)) / std::sqrt(2.0), max_entangled(3)};
  CMat P0 = CMat::Zero(9, 9);
  for (const CVec &v : span) P0 += v * v.adjoint();
  CMat A = 2.0 * P0 - CMat::Identity(9, 9);
  return MaxEntangled{3, A, A};
}

namespace {

// Unnormalized sum over j in [j_lo, j_hi] of psi^{(x) j} (x) phi^{(x)(d-j)}, A copies first.
CVec embezzlement_sum(int m, int d, const CVec &psi, const CVec &phi, int j_lo, int j_hi) {
  const Eigen::Index pair = static_cast<Eigen::Index>(m) * m;
  if (psi.size() != pair || phi.size() != pair)
    throw Error(ErrorKind::DimensionMismatch, "embezzlement components must live on C^m (x) C^m");
  double amps = std::pow(static_cast<double>(m), 2.0 * d);
  if (amps > static_cast<double>(1 << 24))
    throw Error(ErrorKind::TooLarge, "embezzlement state exceeds 2^24 amplitudes");
  std::vector<int> dims(2 * d, m), perm(2 * d);
  for (int c = 0; c < d; ++c) {
    perm[2 * c] = c;
    perm[2 * c + 1] = d + c;
  }
  CVec total = CVec::Zero(static_cast<Eigen::Index>(amps));
  for (int j = j_lo; j <= j_hi; ++j) {
    CVec term = CVec::Ones(1);
    for (int c = 0; c < d; ++c) term = tensor(term, c < j ? psi : phi);
    total += term;
  }
  return permute_systems(total, dims, perm);
}

}  // namespace

CVec embezzlement_state(int m, int d, const CVec &psi, const CVec &phi) {
  if (d < 1) throw Error(ErrorKind::BadArgs, "embezzlement requires d >= 1");
  CVec g = embezzlement_sum(m, d, psi, phi, 1, d);
  const double D = g.squaredNorm();
  if (D <= 0.0) throw Error(ErrorKind::PreconditionViolated, "embezzlement state vanishes");
  return g / std::sqrt(D);
}

Entangled t_entangled_strategy(int n, int d) {
  if (n < 1 || d < 1) throw Error(ErrorKind::BadArgs, "t_entangled_strategy requires n, d >= 1");
  const int m = n + 1;
  double copies_d = std::pow(static_cast<double>(m), d);
  if (2.0 * m * copies_d > 4096.0)
    throw Error(ErrorKind::TooLarge, "t_entangled_strategy operator dimension exceeds 4096");
  const int copies = static_cast<int>(copies_d);
  const int priv = 2 * copies;
  const int dim = m * priv;

  // Basis index ((L * 2 + a) * copies + c) with c = sum_k c_k m^{d-k}, c_1 most significant.
  // Controlled cyclic shift: when (L, a) is a nonzero level (L >= 1, a = 0) or the
  // extra level (0, 1), rotate (level, c_1, ..., c_d) one step towards the message.
  std::vector<int> pi(dim);
  const int top = copies / m;  // m^{d-1}
  for (int idx = 0; idx < dim; ++idx) {
    const int E = idx / copies, c = idx % copies;
    const int L = E / 2, a = E % 2;
    const bool active = (a == 0 && L >= 1) || (a == 1 && L == 0);
    if (!active) {
      pi[idx] = idx;
      continue;
    }
    const int level = (a == 0) ? L : 0;
    const int c1 = c / top;
    const int newE = (c1 == 0) ? 1 : c1 * 2;
    const int newc = (c % top) * m + level;
    pi[idx] = newE * copies + newc;
  }
  std::vector<int> pinv(dim);
  for (int i = 0; i < dim; ++i) pinv[pi[i]] = i;
  // A = W^dagger (Q (x) I) W with Q exchanging the levels (0, 0) and (0, 1).
  CMat A = CMat::Zero(dim, dim);
  for (int u = 0; u < dim; ++u) {
    const int E = u / copies;
    int v;
    if (E == 0)
      v = u + copies;
    else if (E == 1)
      v = u - copies;
    else
      continue;
    A(pinv[u], pinv[v]) = 1.0;
  }

  CVec x = CVec::Zero(m * m);
  x(0) = 1.0;
  CVec me = CVec::Zero(m * m);
  for (int i = 1; i <= n; ++i) me(i * m + i) = 1.0 / std::sqrt(static_cast<double>(n));
  CVec gamma = embezzlement_state(m, d, x, me);
  CVec anc = CVec::Zero(4);
  anc(0) = 1.0;
  CVec psi = permute_systems(tensor(anc, gamma), {2, 2, copies, copies}, {0, 2, 1, 3});
  return Entangled{priv, priv, A, A, psi};
}

cplx rank_one_amplitude(const RankOneGame &g, const CMat &U, const CMat &V, const CVec &psi,
                        const CVec &phi, int h) {
  const int n = g.n;
  const Eigen::Index dim = static_cast<Eigen::Index>(n) * h;
  if (U.rows() != dim || U.cols() != dim || V.rows() != dim || V.cols() != dim)
    throw Error(ErrorKind::DimensionMismatch, "rank-one strategy operators have the wrong shape");
  CMat Psi = psi_matrix(psi, h, h), Phi = psi_matrix(phi, h, h);
  cplx total = 0.0;
  for (int v = 0; v < g.v_dim; ++v) {
    CMat E(n, n), Gm(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        E(a, b) = g.eta((a * n + b) * g.v_dim + v);
        Gm(a, b) = g.gamma((a * n + b) * g.v_dim + v);
      }
    CMat X = tensor(E, Psi), Y = tensor(Gm, Phi);
    total += frob_inner(Y, U * X * V.transpose());
  }
  return total;
}

Entangled lemma_rank_one_strategy(const RankOneGame &g, const CMat &U, const CMat &V,
                                  const CVec &psi, const CVec &phi, int h, int d) {
  if (d < 1 || h < 1) throw Error(ErrorKind::BadArgs, "lemma_rank_one_strategy needs d, h >= 1");
  const int n = g.n;
  const double copies_d = std::pow(static_cast<double>(h), d);
  if (2.0 * n * h * copies_d > 4096.0)
    throw Error(ErrorKind::TooLarge, "lemma_rank_one_strategy operator dimension exceeds 4096");
  const int copies = static_cast<int>(copies_d);  // copies 1..d
  const int priv = h * copies;                     // copies 0..d

  // Gamma = sum_{j=1..d} phi^j psi^{d-j}; its shifted partner runs over j = 0..d-1.
  CVec raw = embezzlement_sum(h, d, phi, psi, 1, d);
  CVec raw_shift = embezzlement_sum(h, d, phi, psi, 0, d - 1);
  const double D = raw.squaredNorm();
  CVec Gam = raw / std::sqrt(D), Gam_shift = raw_shift / std::sqrt(D);
  const cplx overlap = Gam_shift.dot(Gam);
  const cplx amp = rank_one_amplitude(g, U, V, psi, phi, h);
  const cplx z = amp * overlap;
  const cplx phase = std::abs(z) > 0 ? std::conj(z) / std::abs(z) : cplx(1.0);

  // W = R (U (x) I) on (msg, copy0, copy1..d), R the right cyclic shift of the copies.
  auto build = [&](const CMat &X, cplx ph) {
    const int dim = n * priv;
    CMat UI = tensor(CMat(ph * X), identity(copies));
    std::vector<int> sigma(priv);
    for (int e = 0; e < priv; ++e) {
      // e = (e0, e1..ed) maps to (ed, e0..e_{d-1})
      const int last = e % h;
      sigma[e] = last * copies + e / h;
    }
    CMat W(dim, dim);
    for (int a = 0; a < n; ++a)
      for (int e = 0; e < priv; ++e) W.row(a * priv + sigma[e]) = UI.row(a * priv + e);
    CMat A = CMat::Zero(2 * dim, 2 * dim);
    A.block(dim, 0, dim, dim) = W;
    A.block(0, dim, dim, dim) = W.adjoint();
    return A;
  };
  CMat A = build(U, phase), B = build(V, cplx(1.0));
  CVec state = permute_systems(tensor(psi, Gam), {h, h, copies, copies}, {0, 2, 1, 3});
  return Entangled{priv, priv, A, B, state};
}

bool is_swap_invariant(const GameMatrix &G, double tol) {
  const int n = G.n;
  CMat S = permute_systems(G.M, {n, n}, {1, 0});
  return (S - G.M).norm() <= tol * std::max(1.0, G.M.norm());
}

Entangled symmetrize(const GameMatrix &G, const Entangled &s) {
  validate_strategy(G, s);
  if (!is_swap_invariant(G))
    throw Error(ErrorKind::PreconditionViolated, "symmetrize needs a swap-invariant game");
  const int n = G.n;
  CMat Psi = psi_matrix(s.psi, s.dA, s.dB);
  Svd sv = svd(Psi);
  int r = 0;
  for (Eigen::Index i = 0; i < sv.S.size(); ++i)
    if (sv.S(i) > 1e-10 * sv.S(0)) ++r;
  CMat Pa = sv.U.leftCols(r), Pb = sv.V.leftCols(r).conjugate();
  CMat IA = tensor(CMat::Identity(n, n), Pa), IB = tensor(CMat::Identity(n, n), Pb);
  CMat A = hermitian_part(IA.adjoint() * s.A * IA);
  CMat B = hermitian_part(IB.adjoint() * s.B * IB);
  CMat Psi2 = CMat::Zero(r, r);
  for (int i = 0; i < r; ++i) Psi2(i, i) = sv.S(i);
  Psi2 /= Psi2.norm();

  SpectralGame S = spectral_form(G);
  const CMat I = CMat::Identity(n * r, n * r);
  if ((A * A - I).norm() > 1e-9) A = sign_of_hermitian(effective_a(S, B, Psi2));
  if ((B * B - I).norm() > 1e-9) B = sign_of_hermitian(effective_b(S, A, Psi2));

  // Flag-controlled operator on (flag, msg, h), reordered to (msg, flag, h).
  CMat F = CMat::Zero(2 * n * r, 2 * n * r);
  F.topLeftCorner(n * r, n * r) = A;
  F.bottomRightCorner(n * r, n * r) = B;
  CMat X = permute_systems(F, {2, n, r}, {1, 0, 2});

  CVec e01 = CVec::Zero(4), e10 = CVec::Zero(4);
  e01(1) = 1.0;
  e10(2) = 1.0;
  CVec sym = (tensor(e01, psi_vector(Psi2)) + tensor(e10, psi_vector(Psi2.transpose()))) /
             std::sqrt(2.0);
  CVec psi = permute_systems(sym, {2, 2, r, r}, {0, 2, 1, 3});
  return Entangled{2 * r, 2 * r, X, X, psi};
}

double max_bias_upper_bound_tn(int n, int d) {
  if (n < 2) throw Error(ErrorKind::BadArgs, "upper bound needs n >= 2");
  if (d < 1) throw Error(ErrorKind::BadArgs, "upper bound needs d >= 1");
  const double e = std::numbers::e;
  const double ln = std::log2(static_cast<double>(n));
  const double ld = std::log2(3.0 * d);
  const double gap = std::min(1.0 / (4.0 * e * e), ln * ln / (16.0 * ld * ld));
  return std::sqrt(1.0 - gap);
}

Strategy random_strategy(StrategyKind kind, const GameMatrix &G, const std::vector<int> &dims,
                         std::uint64_t seed) {
  Rng rng = make_rng(seed);
  const int n = G.n;
  switch (kind) {
    case StrategyKind::Unentangled: {
      CMat A = random_observable(n, rng);
      CMat B = random_observable(n, rng);
      return Unentangled{A, B};
    }
    case StrategyKind::Complex: {
      CMat A = random_unitary(n, rng);
      CMat B = random_unitary(n, rng);
      return Complex{A, B};
    }
    case StrategyKind::MaxEntangled: {
      if (dims.size() != 1 || dims[0] < 1)
        throw Error(ErrorKind::BadArgs, "maxent strategy needs one positive dimension");
      CMat A = random_observable(n * dims[0], rng);
      CMat B = random_observable(n * dims[0], rng);
      return MaxEntangled{dims[0], A, B};
    }
    case StrategyKind::Entangled: {
      if (dims.size() != 2 || dims[0] < 1 || dims[1] < 1)
        throw Error(ErrorKind::BadArgs, "entangled strategy needs two positive dimensions");
      CMat A = random_observable(n * dims[0], rng);
      CMat B = random_observable(n * dims[1], rng);
      CVec psi = random_unit_vector(dims[0] * dims[1], rng);
      return Entangled{dims[0], dims[1], A, B, psi};
    }
  }
  throw Error(ErrorKind::BadArgs, "unknown strategy kind");
}

Entangled embed_entangled(const Entangled &s, int n, int dA, int dB) {
  if (dA < s.dA || dB < s.dB)
    throw Error(ErrorKind::BadArgs, "embedding must not shrink private spaces");
  auto pad = [n](const CMat &X, int d0, int d) {
    CMat Y = CMat::Zero(n * d, n * d);
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < n; ++k) Y.block(i * d, k * d, d0, d0) = X.block(i * d0, k * d0, d0, d0);
      for (int p = d0; p < d; ++p) Y(i * d + p, i * d + p) = 1.0;
    }
    return Y;
  };
  CVec psi = CVec::Zero(static_cast<Eigen::Index>(dA) * dB);
  for (int p = 0; p < s.dA; ++p)
    for (int q = 0; q < s.dB; ++q) psi(p * dB + q) = s.psi(p * s.dB + q);
  return Entangled{dA, dB, pad(s.A, s.dA, dA), pad(s.B, s.dB, dB), psi};
}

}  // namespace xorq
