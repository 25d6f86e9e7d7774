#include <gtest/gtest.h>

#include <algorithm>

#include "xorq/games.hpp"

using namespace xorq;

namespace {

GameMatrix random_game(int n, Rng &rng) {
  CMat H = random_hermitian(n * n, rng);
  return validate(n, H / trace_norm(H));
}

std::vector<double> sorted_nonzero_eigs(const CMat &M, double tol = 1e-9) {
  std::vector<double> out;
  HermEig e = herm_eig(M);
  for (Eigen::Index i = 0; i < e.values.size(); ++i)
    if (std::abs(e.values(i)) > tol) out.push_back(e.values(i));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(Validate, ZeroValidAndNormBound) {
  GameMatrix z = validate(2, CMat::Zero(4, 4));
  EXPECT_EQ(z.n, 2);
  try {
    validate(2, identity(4) / 2.0);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::TraceNormExceeded);
    EXPECT_NE(std::string(e.what()).find("2"), std::string::npos);
  }
  CMat A = CMat::Zero(4, 4);
  A(0, 1) = 0.1;
  EXPECT_THROW(validate(2, A), Error);
  EXPECT_THROW(validate(3, CMat::Zero(4, 4)), Error);
}

TEST(Validate, SymmetrizesWithinTolerance) {
  CMat A = t_game(1).M;
  A(0, 3) += cplx(0, 1e-13);
  GameMatrix g = validate(2, A);
  EXPECT_LE((g.M - g.M.adjoint()).norm(), 1e-16);
}

TEST(Classical, ChshEmbedding) {
  ClassicalGame c = chsh_classical();
  EXPECT_NEAR(c.R.cwiseAbs().sum(), 1.0, 1e-15);
  GameMatrix g = from_classical(c);
  EXPECT_EQ(g.n, 2);
  const double want[4] = {0.25, 0.25, 0.25, -0.25};
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(g.M(i, i).real(), want[i], 1e-15);
  EXPECT_NEAR((g.M - CMat(g.M.diagonal().asDiagonal())).norm(), 0.0, 1e-15);
  EXPECT_TRUE(is_classical(g));
  EXPECT_FALSE(is_classical(t_game(1)));
  EXPECT_LE((to_classical(g).R - c.R).norm(), 1e-15);
  EXPECT_NEAR(from_classical(classical(RMat::Zero(3, 3))).M.norm(), 0.0, 0.0);
}

TEST(Classical, RandomTraceNorm) {
  Rng rng = make_rng(31);
  for (int t = 0; t < 20; ++t) {
    RMat R = random_gaussian(3, 3, rng).real();
    R /= R.cwiseAbs().sum() * 1.1;
    EXPECT_NEAR(trace_norm(from_classical(classical(R)).M), R.cwiseAbs().sum(), 1e-12);
  }
  RMat big = RMat::Constant(2, 2, 0.5);
  EXPECT_THROW(classical(big), Error);
}

TEST(TGame, EntriesSpectrumAndNorm) {
  GameMatrix t1 = t_game(1);
  ASSERT_EQ(t1.M.rows(), 4);
  EXPECT_NEAR(t1.M(0, 3).real(), 0.5, 1e-15);
  EXPECT_NEAR(t1.M(3, 0).real(), 0.5, 1e-15);
  EXPECT_NEAR(t1.M.cwiseAbs().sum(), 1.0, 1e-15);
  for (int n = 1; n <= 5; ++n) {
    GameMatrix g = t_game(n);
    EXPECT_EQ(g.n, n + 1);
    EXPECT_NEAR(trace_norm(g.M), 1.0, 1e-8);
    auto e = sorted_nonzero_eigs(g.M);
    ASSERT_EQ(e.size(), 2u);
    EXPECT_NEAR(e[0], -0.5, 1e-12);
    EXPECT_NEAR(e[1], 0.5, 1e-12);
    // |00><ii| coefficient 1 / (2 sqrt n).
    const int N = n + 1;
    EXPECT_NEAR(g.M(0, n * N + n).real(), 0.5 / std::sqrt(double(n)), 1e-15);
  }
}

TEST(HGame, ExplicitN1Matrix) {
  GameMatrix h = h_game(1);
  ASSERT_EQ(h.n, 3);
  auto C = h_basis(1);
  ASSERT_EQ(C.size(), 3u);
  // Entry (s, t) of C_e is the sign of the word (s, e, t): (1, 3, 2) is odd.
  EXPECT_EQ(C[2](0, 1), cplx(-1));
  EXPECT_EQ(C[2](1, 0), cplx(1));
  CMat expect = (tensor(C[0], C[0]) + tensor(C[1], C[1]) + tensor(C[2], C[2])) / 10.0;
  EXPECT_LE((h.M - expect).norm(), 1e-15);
  // Composite row (0,1) = 1, column (1,0) = 3.
  EXPECT_NEAR(h.M(1, 3).real(), -0.1, 1e-15);
  EXPECT_NEAR(trace_norm(h.M), 1.0, 1e-8);
  // Every C_i is real antisymmetric with C_i^T C_i a projector of rank 2.
  for (const CMat &c : C) {
    EXPECT_LE((c + c.transpose()).norm(), 1e-15);
    CMat P = c.adjoint() * c;
    EXPECT_LE((P * P - P).norm(), 1e-14);
    EXPECT_NEAR(P.trace().real(), 2.0, 1e-14);
  }
}

TEST(HGame, N2NormAndSize) {
  GameMatrix h = h_game(2);
  EXPECT_EQ(h.n, 10);
  EXPECT_NEAR(trace_norm(h.M), 1.0, 1e-8);
  EXPECT_EQ(binomial(5, 2), 10u);
  EXPECT_EQ(binomial(9, 4), 126u);
  EXPECT_THROW(h_game(4), Error);
}

TEST(HGame, SubsetOrderAndSigns) {
  auto s = lex_subsets(3, 1);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[0], std::vector<int>{0});
  auto s2 = lex_subsets(5, 2);
  ASSERT_EQ(s2.size(), 10u);
  EXPECT_EQ(s2[1], (std::vector<int>{0, 2}));
  EXPECT_EQ(permutation_sign({1, 2, 3}), 1);
}

TEST(CGame, EntriesAndNorm) {
  GameMatrix c1 = c_game(1);
  ASSERT_EQ(c1.n, 2);
  EXPECT_NEAR(c1.M(1, 2).real(), 0.5, 1e-15);
  EXPECT_NEAR(c1.M(2, 1).real(), 0.5, 1e-15);
  for (int n = 1; n <= 4; ++n) EXPECT_NEAR(trace_norm(c_game(n).M), 1.0, 1e-8);
}

TEST(TensorGames, TrivialFactorAndNorm) {
  GameMatrix one = validate(1, CMat::Ones(1, 1));
  GameMatrix g = t_game(2);
  EXPECT_LE((tensor_games(g, one).M - g.M).norm(), 1e-15);
  Rng rng = make_rng(32);
  GameMatrix a = random_game(2, rng), b = random_game(2, rng);
  GameMatrix ab = tensor_games(a, b);
  EXPECT_EQ(ab.n, 4);
  EXPECT_NEAR(trace_norm(ab.M), trace_norm(a.M) * trace_norm(b.M), 1e-10);
  // (A1 A2)(B1 B2): entry <a1 a2 b1 b2| M |..> = M1[a1 b1] M2[a2 b2].
  const int r1 = 1 * 2 + 0, c1 = 0 * 2 + 1, r2 = 1 * 2 + 1, c2 = 0 * 2 + 0;
  const int a1 = 1, b1 = 0, a2 = 1, b2 = 1;  // rows of factors 1 and 2
  const int ca1 = 0, cb1 = 1, ca2 = 0, cb2 = 0;
  const int row = (a1 * 2 + a2) * 4 + (b1 * 2 + b2), col = (ca1 * 2 + ca2) * 4 + (cb1 * 2 + cb2);
  EXPECT_NEAR(std::abs(ab.M(row, col) - a.M(r1, c1) * b.M(r2, c2)), 0.0, 1e-15);
}

TEST(RefereeProtocol, T1AndZeroAndRandom) {
  RefereeProtocol p = to_referee_protocol(t_game(1));
  ASSERT_EQ(p.p.size(), 2u);
  EXPECT_NEAR(p.p[0] + p.p[1], 1.0, 1e-12);
  EXPECT_NEAR(p.reject, 0.0, 1e-12);
  EXPECT_NE(p.c[0], p.c[1]);
  RefereeProtocol z = to_referee_protocol(validate(2, CMat::Zero(4, 4)));
  EXPECT_TRUE(z.p.empty());
  EXPECT_NEAR(z.reject, 1.0, 0.0);
  Rng rng = make_rng(33);
  for (int t = 0; t < 50; ++t) {
    GameMatrix g = random_game(2 + t % 2, rng);
    RefereeProtocol r = to_referee_protocol(g);
    CMat rec = CMat::Zero(g.M.rows(), g.M.cols());
    for (std::size_t i = 0; i < r.p.size(); ++i) {
      EXPECT_GE(r.p[i], 0.0);
      rec += (r.c[i] ? -1.0 : 1.0) * r.p[i] * r.states[i] * r.states[i].adjoint();
      for (std::size_t j = 0; j < r.p.size(); ++j)
        EXPECT_NEAR(std::abs(r.states[i].dot(r.states[j])), i == j ? 1.0 : 0.0, 1e-9);
    }
    EXPECT_LE((rec - g.M).norm(), 1e-9);
    double total = r.reject;
    for (double x : r.p) total += x;
    EXPECT_NEAR(total, 1.0, 1e-9);
  }
}

TEST(RefereeProtocol, ClassicalGivesProductBasis) {
  GameMatrix g = from_classical(chsh_classical());
  RefereeProtocol r = to_referee_protocol(g);
  ASSERT_EQ(r.p.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    Eigen::Index k;
    r.states[i].cwiseAbs().maxCoeff(&k);
    EXPECT_NEAR(std::abs(r.states[i](k)), 1.0, 1e-12);
    EXPECT_EQ(r.c[i], g.M(k, k).real() < 0 ? 1 : 0);
  }
}

TEST(ProductStateProtocol, Reconstruction) {
  Rng rng = make_rng(34);
  for (int t = 0; t < 10; ++t) {
    GameMatrix g = random_game(2 + t % 2, rng);
    ProductStateProtocol p = to_product_state_protocol(g);
    EXPECT_LE((reconstruct(p, g.n) - g.M).norm(), 1e-9);
    for (const ProductTerm &term : p.terms) {
      EXPECT_GE(term.weight, 0.0);
      EXPECT_NEAR(trace_norm(term.H_left), 1.0, 1e-9);
      EXPECT_NEAR(trace_norm(term.H_right), 1.0, 1e-9);
    }
  }
  EXPECT_TRUE(to_product_state_protocol(validate(2, CMat::Zero(4, 4))).terms.empty());
  // H (x) H with trace-norm-1 H needs a single term.
  auto basis = hermitian_basis(2);
  GameMatrix hh = validate(2, tensor(basis[1], basis[1]));
  ProductStateProtocol one = to_product_state_protocol(hh);
  ASSERT_EQ(one.terms.size(), 1u);
  EXPECT_LE((reconstruct(one, 2) - hh.M).norm(), 1e-12);
  // Classical games only touch diagonal basis elements.
  ProductStateProtocol cl = to_product_state_protocol(from_classical(chsh_classical()));
  for (const ProductTerm &term : cl.terms) {
    EXPECT_LE((term.H_left - CMat(term.H_left.diagonal().asDiagonal())).norm(), 1e-12);
    EXPECT_LE((term.H_right - CMat(term.H_right.diagonal().asDiagonal())).norm(), 1e-12);
  }
}

TEST(RankOne, TRankOneAndMatrix) {
  RankOneGame g = t_rank_one(2);
  EXPECT_NEAR(g.eta.norm(), 1.0, 1e-15);
  EXPECT_NEAR(g.gamma.norm(), 1.0, 1e-15);
  EXPECT_EQ(g.v_dim, 1);
  EXPECT_NEAR(g.gamma(1 * 3 + 1).real(), std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(g.gamma(2 * 3 + 2).real(), std::sqrt(0.5), 1e-15);
  CMat Mh = rank_one_matrix(g);
  CVec e00 = CVec::Zero(9);
  e00(0) = 1.0;
  EXPECT_LE((Mh - e00 * g.gamma.adjoint()).norm(), 1e-15);
}

TEST(RankOne, XorRoundTrip) {
  Rng rng = make_rng(35);
  for (int t = 0; t < 20; ++t) {
    GameMatrix g = random_game(2 + t % 2, rng);
    RankOneGame r = xor_to_rank_one(g);
    EXPECT_NEAR(r.eta.norm(), 1.0, 1e-10);
    EXPECT_NEAR(r.gamma.norm(), 1.0, 1e-10);
    EXPECT_LE((r.weight * rank_one_matrix(r) - g.M).norm(), 1e-8);
    // Nonzero spectrum of the size-2n game is {+-s_i / 2}.
    GameMatrix back = rank_one_to_xor(r);
    EXPECT_EQ(back.n, 2 * g.n);
    auto e = sorted_nonzero_eigs(back.M);
    Svd s = svd(rank_one_matrix(r));
    std::vector<double> want;
    for (Eigen::Index i = 0; i < s.S.size(); ++i)
      if (s.S(i) > 1e-9) {
        want.push_back(s.S(i) / 2);
        want.push_back(-s.S(i) / 2);
      }
    std::sort(want.begin(), want.end());
    ASSERT_EQ(e.size(), want.size());
    for (std::size_t i = 0; i < e.size(); ++i) EXPECT_NEAR(e[i], want[i], 1e-8);
  }
  EXPECT_THROW(xor_to_rank_one(validate(2, CMat::Zero(4, 4))), Error);
}

TEST(RankOne, TRankOneGivesTSpectrum) {
  for (int n = 1; n <= 4; ++n) {
    GameMatrix g = rank_one_to_xor(t_rank_one(n));
    auto e = sorted_nonzero_eigs(g.M);
    ASSERT_EQ(e.size(), 2u);
    EXPECT_NEAR(e[0], -0.5, 1e-12);
    EXPECT_NEAR(e[1], 0.5, 1e-12);
  }
}

TEST(RankOne, TnWorkedExample) {
  // The rank-one form of T_n has v_dim 2 and the two states |00> and Psi_me on levels 1..n.
  RankOneGame r = xor_to_rank_one(t_game(2));
  EXPECT_EQ(r.v_dim, 2);
  CMat rho = partial_trace(r.eta * r.eta.adjoint(), 9, 2, Side::Second);
  HermEig e = herm_eig(rho);
  EXPECT_NEAR(e.values(0), 0.5, 1e-12);
  EXPECT_NEAR(e.values(1), 0.5, 1e-12);
}
