#include <gtest/gtest.h>

#include <cmath>

#include "xorq/sdp.hpp"

using namespace xorq;

namespace {

std::vector<SdpEntry> hermitian_entries(int block, const CMat &C) {
  std::vector<SdpEntry> out;
  for (int r = 0; r < C.rows(); ++r)
    for (int c = r; c < C.cols(); ++c)
      if (std::abs(C(r, c)) > 0) out.push_back({block, r, c, C(r, c)});
  return out;
}

SdpConstraint trace_one(int block, int d) {
  SdpConstraint k;
  for (int i = 0; i < d; ++i) k.entries.push_back({block, i, i, 1.0});
  k.rhs = 1.0;
  return k;
}

// max <C, Z> subject to Tr Z = 1 has value lambda_max(C).
SdpInstance top_eigenvalue(const CMat &C) {
  SdpInstance inst;
  const int d = static_cast<int>(C.rows());
  inst.blocks = {{"Z", d}};
  inst.objective = hermitian_entries(0, C);
  inst.constraints = {trace_one(0, d)};
  return inst;
}

}  // namespace

TEST(Sdp, FunctionalMatchesTraceForm) {
  Rng rng = make_rng(5);
  const CMat C = random_hermitian(4, rng), Z = random_hermitian(4, rng);
  EXPECT_NEAR(functional_value(hermitian_entries(0, C), {Z}), trace_product(C, Z).real(), 1e-12);
}

TEST(Sdp, FunctionalBuilderSemantics) {
  Rng rng = make_rng(6);
  const CMat Z = random_hermitian(3, rng);
  FunctionalBuilder fb;
  fb.add_re(0, 2, 0, 1.5);
  fb.add_im(0, 0, 1, -2.0);
  fb.add_im(0, 2, 1, 0.5);
  fb.add_re(0, 1, 1, 3.0);
  fb.add_complex(0, 1, 2, cplx(0.3, -0.7));
  const double expect = 1.5 * Z(2, 0).real() - 2.0 * Z(0, 1).imag() + 0.5 * Z(2, 1).imag() + 3.0 * Z(1, 1).real() +
                        (cplx(0.3, -0.7) * Z(1, 2)).real();
  EXPECT_NEAR(functional_value(fb.entries(), {Z}), expect, 1e-12);
}

TEST(Sdp, RealEmbeddingRoundTrip) {
  Rng rng = make_rng(7);
  const CMat Z = random_hermitian(3, rng);
  RMat R(6, 6);
  R << Z.real(), -Z.imag(), Z.imag(), Z.real();
  EXPECT_LT((complex_from_real_block(R) - Z).norm(), 1e-15);

  const CMat C = random_hermitian(3, rng);
  const RealSdp real = real_embedding(top_eigenvalue(C));
  double v = 0.0;
  for (const RealEntry &e : real.C) v += (e.r == e.c ? 1.0 : 2.0) * e.v * R(e.r, e.c);
  EXPECT_NEAR(v, trace_product(C, Z).real(), 1e-12);
}

TEST(Sdp, TopEigenvalue) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    Rng rng = make_rng(seed, 1);
    const int d = 2 + static_cast<int>(seed % 4);
    const CMat C = random_hermitian(d, rng);
    const SdpInstance inst = top_eigenvalue(C);
    const SdpSolution sol = solve(inst, 1e-8);
    const double lmax = herm_eig(C).values(0);
    EXPECT_NEAR(sol.primal_value, lmax, 1e-6) << seed;
    EXPECT_NEAR(sol.dual_value, lmax, 1e-6);
    EXPECT_LE(std::abs(sol.gap), 1e-6);
    const CertifyReport rep = certify(inst, sol, 1e-6);
    EXPECT_TRUE(rep.ok) << (rep.violations.empty() ? "" : rep.violations[0]);
  }
}

// Lovasz theta of the 5-cycle is sqrt(5).
TEST(Sdp, LovaszThetaOfPentagon) {
  SdpInstance inst;
  inst.blocks = {{"X", 5}};
  inst.objective = hermitian_entries(0, CMat::Ones(5, 5));
  inst.constraints.push_back(trace_one(0, 5));
  for (int i = 0; i < 5; ++i) {
    const int j = (i + 1) % 5;
    SdpConstraint k;
    k.entries.push_back({0, std::min(i, j), std::max(i, j), 1.0});
    inst.constraints.push_back(k);
  }
  const SdpSolution sol = solve(inst, 1e-8);
  EXPECT_NEAR(sol.primal_value, std::sqrt(5.0), 1e-6);
  EXPECT_TRUE(certify(inst, sol, 1e-6).ok);
}

TEST(Sdp, ComplexConstraintsAndBlocks) {
  // Two blocks, tied by Re Z1[0,1] + Im Z2[0,1] = 0.3 and unit traces.
  Rng rng = make_rng(12);
  SdpInstance inst;
  inst.blocks = {{"Z1", 2}, {"Z2", 3}};
  const CMat C1 = random_hermitian(2, rng), C2 = random_hermitian(3, rng);
  inst.objective = hermitian_entries(0, C1);
  for (const SdpEntry &e : hermitian_entries(1, C2)) inst.objective.push_back(e);
  inst.constraints = {trace_one(0, 2), trace_one(1, 3)};
  FunctionalBuilder fb;
  fb.add_re(0, 0, 1, 1.0);
  fb.add_im(1, 0, 1, 1.0);
  inst.constraints.push_back({fb.entries(), 0.3});
  const SdpSolution sol = solve(inst, 1e-8);
  EXPECT_NEAR(sol.Z[0](0, 1).real() + sol.Z[1](0, 1).imag(), 0.3, 1e-7);
  EXPECT_NEAR(sol.Z[0].trace().real(), 1.0, 1e-7);
  EXPECT_LE(sol.primal_value, herm_eig(C1).values(0) + herm_eig(C2).values(0) + 1e-7);
  EXPECT_TRUE(certify(inst, sol, 1e-6).ok);
}

TEST(Sdp, RedundantConstraintsAreTolerated) {
  Rng rng = make_rng(2);
  const CMat C = random_hermitian(3, rng);
  SdpInstance inst = top_eigenvalue(C);
  SdpConstraint twice = trace_one(0, 3);
  for (SdpEntry &e : twice.entries) e.v *= 2.0;
  twice.rhs = 2.0;
  inst.constraints.push_back(twice);
  const SdpSolution sol = solve(inst, 1e-8);
  EXPECT_NEAR(sol.primal_value, herm_eig(C).values(0), 1e-6);
  EXPECT_EQ(sol.y.size(), 2);
}

TEST(Sdp, InconsistentEqualitiesAreInfeasible) {
  SdpInstance inst = top_eigenvalue(identity(2));
  SdpConstraint k = trace_one(0, 2);
  k.rhs = 2.0;
  inst.constraints.push_back(k);
  try {
    solve(inst);
    FAIL() << "expected infeasible";
  } catch (const SdpError &e) {
    EXPECT_EQ(e.kind(), ErrorKind::Infeasible);
    EXPECT_GT(e.certificate().size(), 0);
  }
}

TEST(Sdp, NegativeDiagonalIsInfeasible) {
  SdpInstance inst;
  inst.blocks = {{"Z", 2}};
  inst.objective = {{0, 0, 0, 1.0}};
  inst.constraints = {{{{0, 0, 0, 1.0}}, -1.0}};
  try {
    solve(inst);
    FAIL() << "expected infeasible";
  } catch (const SdpError &e) {
    EXPECT_EQ(e.kind(), ErrorKind::Infeasible);
  }
}

TEST(Sdp, FreeDirectionIsUnbounded) {
  SdpInstance inst;
  inst.blocks = {{"Z", 2}};
  inst.objective = {{0, 0, 0, 1.0}};
  inst.constraints = {{{{0, 1, 1, 1.0}}, 1.0}};
  try {
    solve(inst);
    FAIL() << "expected unbounded";
  } catch (const SdpError &e) {
    EXPECT_EQ(e.kind(), ErrorKind::Unbounded);
  }
}

TEST(Sdp, CertifyFlagsBrokenSolutions) {
  Rng rng = make_rng(3);
  const SdpInstance inst = top_eigenvalue(random_hermitian(3, rng));
  SdpSolution sol = solve(inst, 1e-8);
  SdpSolution bad = sol;
  bad.Z[0] *= 1.5;
  EXPECT_FALSE(certify(inst, bad, 1e-6).ok);
  bad = sol;
  bad.Z[0] = -bad.Z[0] + 2.0 * identity(3) / 3.0;
  EXPECT_FALSE(certify(inst, bad, 1e-6).ok);
}

TEST(Sdp, ValidateRejectsMalformedInstances) {
  SdpInstance inst = top_eigenvalue(identity(2));
  inst.objective.push_back({0, 1, 0, 1.0});
  EXPECT_THROW(validate_instance(inst), Error);
  inst = top_eigenvalue(identity(2));
  inst.objective.push_back({3, 0, 0, 1.0});
  EXPECT_THROW(validate_instance(inst), Error);
  inst = top_eigenvalue(identity(2));
  inst.objective.push_back({0, 0, 0, cplx(1.0, 1.0)});
  EXPECT_THROW(validate_instance(inst), Error);
}
