#include "xorq/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "xorq/kernels.hpp"

namespace xorq {

// ---------------------------------------------------------------------------
// Functional helpers

void FunctionalBuilder::add(int block, int r, int c, cplx v) {
  acc_.push_back({Key{block, r, c}, v});
}

void FunctionalBuilder::add_re(int block, int p, int q, double coeff) {
  if (p == q)
    add(block, p, p, coeff);
  else
    add(block, std::min(p, q), std::max(p, q), coeff / 2.0);
}

void FunctionalBuilder::add_im(int block, int p, int q, double coeff) {
  if (p == q) return;
  // Im Z[p, q] = 2 Re(conj(f) Z[p, q]) with f = i / 2; the lower entry flips sign.
  if (p < q)
    add(block, p, q, cplx(0, coeff / 2.0));
  else
    add(block, q, p, cplx(0, -coeff / 2.0));
}

void FunctionalBuilder::add_complex(int block, int p, int q, cplx m) {
  if (m.real() != 0.0) add_re(block, p, q, m.real());
  if (m.imag() != 0.0) add_im(block, p, q, -m.imag());
}

std::vector<SdpEntry> FunctionalBuilder::entries() const {
  std::map<Key, cplx> merged;
  for (const auto &[k, v] : acc_) merged[k] += v;
  std::vector<SdpEntry> out;
  for (const auto &[k, v] : merged)
    if (v != cplx(0)) out.push_back(SdpEntry{k.block, k.r, k.c, v});
  return out;
}

double functional_value(const std::vector<SdpEntry> &entries, const std::vector<CMat> &Z) {
  double s = 0.0;
  for (const SdpEntry &e : entries) {
    const cplx z = Z[e.block](e.r, e.c);
    s += (e.r == e.c) ? e.v.real() * z.real() : 2.0 * (std::conj(e.v) * z).real();
  }
  return s;
}

void validate_instance(const SdpInstance &inst) {
  auto check = [&](const std::vector<SdpEntry> &es) {
    for (const SdpEntry &e : es) {
      if (e.block < 0 || e.block >= static_cast<int>(inst.blocks.size()))
        throw Error(ErrorKind::BadArgs, "entry refers to an unknown block");
      const int d = inst.blocks[e.block].dim;
      if (e.r < 0 || e.c < 0 || e.r >= d || e.c >= d)
        throw Error(ErrorKind::BadArgs, "entry index outside its block");
      if (e.r > e.c) throw Error(ErrorKind::BadArgs, "entries must satisfy r <= c");
      if (e.r == e.c && e.v.imag() != 0.0)
        throw Error(ErrorKind::BadArgs, "diagonal coefficients must be real");
      if (!std::isfinite(e.v.real()) || !std::isfinite(e.v.imag()))
        throw Error(ErrorKind::BadArgs, "non-finite coefficient");
    }
  };
  for (const SdpBlock &b : inst.blocks)
    if (b.dim < 1) throw Error(ErrorKind::BadArgs, "block dimension must be positive");
  check(inst.objective);
  for (const SdpConstraint &c : inst.constraints) {
    check(c.entries);
    if (!std::isfinite(c.rhs)) throw Error(ErrorKind::BadArgs, "non-finite right-hand side");
  }
}

// ---------------------------------------------------------------------------
// Real embedding

namespace {

void embed_entries(const std::vector<SdpEntry> &in, const std::vector<int> &cdims,
                   std::vector<RealEntry> &out) {
  for (const SdpEntry &e : in) {
    const int m = cdims[e.block];
    const double re = e.v.real() / 2.0, im = e.v.imag() / 2.0;
    if (e.r == e.c) {
      out.push_back({e.block, e.r, e.r, re});
      out.push_back({e.block, m + e.r, m + e.r, re});
      continue;
    }
    if (re != 0.0) {
      out.push_back({e.block, e.r, e.c, re});
      out.push_back({e.block, m + e.r, m + e.c, re});
    }
    if (im != 0.0) {
      out.push_back({e.block, e.r, m + e.c, -im});
      out.push_back({e.block, e.c, m + e.r, im});
    }
  }
}

}  // namespace

RealSdp real_embedding(const SdpInstance &inst) {
  validate_instance(inst);
  RealSdp out;
  std::vector<int> cdims;
  for (const SdpBlock &b : inst.blocks) {
    cdims.push_back(b.dim);
    out.dims.push_back(2 * b.dim);
  }
  embed_entries(inst.objective, cdims, out.C);
  out.b = RVec(static_cast<Eigen::Index>(inst.constraints.size()));
  for (std::size_t i = 0; i < inst.constraints.size(); ++i) {
    out.A.emplace_back();
    embed_entries(inst.constraints[i].entries, cdims, out.A.back());
    out.b(static_cast<Eigen::Index>(i)) = inst.constraints[i].rhs;
  }
  return out;
}

CMat complex_from_real_block(const RMat &R) {
  const Eigen::Index m = R.rows() / 2;
  RMat X = (R.topLeftCorner(m, m) + R.bottomRightCorner(m, m)) / 2.0;
  RMat Q = R.topRightCorner(m, m);
  RMat Y = (R.bottomLeftCorner(m, m) - Q) / 2.0;
  CMat Z(m, m);
  Z.real() = X;
  Z.imag() = Y;
  return hermitian_part(Z);
}

// ---------------------------------------------------------------------------
// Interior-point solver

namespace {

struct Directed {
  int p, q;
  double v;
};

struct ConBlock {
  int con;
  std::vector<Directed> d;
  std::vector<int> rows;  // distinct p
};

double inner(const RMat &A, const RMat &B) {
  return kernels::dot(A.data(), B.data(), static_cast<std::size_t>(A.size()));
}

class Ipm {
 public:
  Ipm(const RealSdp &sdp, const SolverOptions &opt) : sdp_(sdp), opt_(opt) {}

  RealSdpSolution run();

 private:
  const RealSdp &sdp_;
  SolverOptions opt_;
  int nb_ = 0, m_ = 0, N_ = 0;
  std::vector<int> dims_;
  std::vector<RMat> C_;
  std::vector<std::vector<ConBlock>> by_block_;
  std::vector<int> kept_;  // original indices of the constraints kept
  RVec b_;

  void setup();
  void remove_dependent();
  RVec apply_a(const std::vector<RMat> &X) const;
  std::vector<RMat> apply_at(const RVec &y) const;
  RMat schur(const std::vector<RMat> &X, const std::vector<RMat> &W) const;
};

void Ipm::setup() {
  dims_ = sdp_.dims;
  nb_ = static_cast<int>(dims_.size());
  N_ = 0;
  for (int d : dims_) N_ += d;
  C_.assign(nb_, RMat());
  for (int b = 0; b < nb_; ++b) C_[b] = RMat::Zero(dims_[b], dims_[b]);
  for (const RealEntry &e : sdp_.C) {
    C_[e.block](e.r, e.c) += e.v;
    if (e.r != e.c) C_[e.block](e.c, e.r) += e.v;
  }
  remove_dependent();
}

// Detects linearly dependent constraints through a pivoted LDL^T of the
// constraint Gram matrix; inconsistent ones give a Farkas certificate.
void Ipm::remove_dependent() {
  const int m = static_cast<int>(sdp_.A.size());
  std::map<std::tuple<int, int, int>, std::vector<std::pair<int, double>>> touch;
  for (int i = 0; i < m; ++i)
    for (const RealEntry &e : sdp_.A[i]) touch[{e.block, e.r, e.c}].push_back({i, e.v});
  RMat K = RMat::Zero(m, m);
  for (const auto &[key, list] : touch) {
    const double w = std::get<1>(key) == std::get<2>(key) ? 1.0 : 2.0;
    for (const auto &[i, vi] : list)
      for (const auto &[j, vj] : list) K(i, j) += w * vi * vj;
  }
  std::vector<int> keep, drop;
  if (m > 0) {
    Eigen::LDLT<RMat> ldlt(K);
    RVec D = ldlt.vectorD();
    Eigen::PermutationMatrix<Eigen::Dynamic> P(ldlt.transpositionsP());
    Eigen::VectorXi idx = P * Eigen::VectorXi::LinSpaced(m, 0, m - 1);
    const double top = std::max(D.cwiseAbs().maxCoeff(), 1e-300);
    for (int k = 0; k < m; ++k) (D(k) > 1e-11 * top ? keep : drop).push_back(idx(k));
    std::sort(keep.begin(), keep.end());
  }
  if (!drop.empty()) {
    const int nk = static_cast<int>(keep.size());
    RMat Kkk(nk, nk);
    RVec bk(nk);
    for (int a = 0; a < nk; ++a) {
      bk(a) = sdp_.b(keep[a]);
      for (int c = 0; c < nk; ++c) Kkk(a, c) = K(keep[a], keep[c]);
    }
    Eigen::LLT<RMat> llt(Kkk);
    const double scale = 1.0 + sdp_.b.norm();
    for (int j : drop) {
      RVec kj(nk);
      for (int a = 0; a < nk; ++a) kj(a) = K(keep[a], j);
      RVec c = nk ? RVec(llt.solve(kj)) : RVec(0);
      const double resid = sdp_.b(j) - (nk ? c.dot(bk) : 0.0);
      if (std::abs(resid) > 1e-8 * scale) {
        RVec y = RVec::Zero(m);
        y(j) = 1.0;
        for (int a = 0; a < nk; ++a) y(keep[a]) = -c(a);
        if (y.dot(sdp_.b) > 0) y = -y;
        throw SdpError(ErrorKind::Infeasible,
                       "equality constraints are inconsistent (constraint " + std::to_string(j) +
                           ")",
                       y);
      }
    }
  }
  kept_ = keep;
  m_ = static_cast<int>(kept_.size());
  b_ = RVec(m_);
  by_block_.assign(nb_, {});
  for (int i = 0; i < m_; ++i) {
    b_(i) = sdp_.b(kept_[i]);
    std::map<int, std::vector<Directed>> per;
    for (const RealEntry &e : sdp_.A[kept_[i]]) {
      per[e.block].push_back({e.r, e.c, e.v});
      if (e.r != e.c) per[e.block].push_back({e.c, e.r, e.v});
    }
    for (auto &[blk, d] : per) {
      ConBlock cb{i, std::move(d), {}};
      for (const Directed &x : cb.d) cb.rows.push_back(x.p);
      std::sort(cb.rows.begin(), cb.rows.end());
      cb.rows.erase(std::unique(cb.rows.begin(), cb.rows.end()), cb.rows.end());
      by_block_[blk].push_back(std::move(cb));
    }
  }
}

RVec Ipm::apply_a(const std::vector<RMat> &X) const {
  RVec out = RVec::Zero(m_);
  for (int b = 0; b < nb_; ++b)
    for (const ConBlock &cb : by_block_[b]) {
      double s = 0.0;
      for (const Directed &x : cb.d) s += x.v * X[b](x.p, x.q);
      out(cb.con) += s;
    }
  return out;
}

std::vector<RMat> Ipm::apply_at(const RVec &y) const {
  std::vector<RMat> out(nb_);
  for (int b = 0; b < nb_; ++b) {
    out[b] = RMat::Zero(dims_[b], dims_[b]);
    for (const ConBlock &cb : by_block_[b])
      for (const Directed &x : cb.d) out[b](x.p, x.q) += y(cb.con) * x.v;
  }
  return out;
}

// M_ij = Tr(A_i X A_j W) with W = Z^{-1}.
RMat Ipm::schur(const std::vector<RMat> &X, const std::vector<RMat> &W) const {
  RMat M = RMat::Zero(m_, m_);
  for (int b = 0; b < nb_; ++b) {
    const auto &list = by_block_[b];
    const int L = static_cast<int>(list.size());
    const double n = dims_[b];
    std::vector<double> tail(L + 1, 0.0);
    for (int k = L - 1; k >= 0; --k) tail[k] = tail[k + 1] + static_cast<double>(list[k].d.size());
    const RMat &Xb = X[b], &Wb = W[b];
    for (int ii = 0; ii < L; ++ii) {
      const ConBlock &ci = list[ii];
      const double elem_cost = static_cast<double>(ci.d.size()) * tail[ii];
      const double dense_cost = n * n * static_cast<double>(ci.rows.size()) + tail[ii];
      if (dense_cost < elem_cost) {
        // G = X A_i W, then M_ij = sum_{(r, s, a) in A_j} a G[s, r].
        RMat T = RMat::Zero(static_cast<Eigen::Index>(ci.rows.size()), dims_[b]);
        for (const Directed &x : ci.d) {
          const auto pos = std::lower_bound(ci.rows.begin(), ci.rows.end(), x.p) - ci.rows.begin();
          T.row(pos) += x.v * Wb.row(x.q);
        }
        RMat Xs(dims_[b], static_cast<Eigen::Index>(ci.rows.size()));
        for (std::size_t k = 0; k < ci.rows.size(); ++k) Xs.col(k) = Xb.col(ci.rows[k]);
        RMat G = Xs * T;
        for (int jj = ii; jj < L; ++jj) {
          const ConBlock &cj = list[jj];
          double s = 0.0;
          for (const Directed &x : cj.d) s += x.v * G(x.q, x.p);
          M(ci.con, cj.con) += s;
        }
      } else {
        for (int jj = ii; jj < L; ++jj) {
          const ConBlock &cj = list[jj];
          double s = 0.0;
          for (const Directed &x : ci.d)
            for (const Directed &z : cj.d) s += x.v * z.v * Xb(x.q, z.p) * Wb(z.q, x.p);
          M(ci.con, cj.con) += s;
        }
      }
    }
  }
  // Only pairs (i, j) with i listed before j in some block were filled; mirror.
  for (int i = 0; i < m_; ++i)
    for (int j = i + 1; j < m_; ++j) {
      const double s = M(i, j) + M(j, i);
      M(i, j) = M(j, i) = s;
    }
  return M;
}

// Largest step alpha with P + alpha D >= 0 given P = L L^T.
double max_step(const Eigen::LLT<RMat> &chol, const RMat &D) {
  RMat T = chol.matrixL().solve(D);
  T = chol.matrixL().solve(T.transpose()).transpose();
  T = (T + T.transpose()) / 2.0;
  Eigen::SelfAdjointEigenSolver<RMat> es(T, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues()(0);
  return lmin >= 0 ? std::numeric_limits<double>::infinity() : -1.0 / lmin;
}

RealSdpSolution Ipm::run() {
  setup();
  const double bnorm = b_.norm();
  double cnorm = 0.0;
  for (const RMat &C : C_) cnorm += C.squaredNorm();
  cnorm = std::sqrt(cnorm);

  std::vector<RMat> X(nb_), Z(nb_);
  for (int b = 0; b < nb_; ++b) {
    const double n = dims_[b];
    double amax = 0.0, ratio = 0.0;
    for (const ConBlock &cb : by_block_[b]) {
      double fro = 0.0;
      for (const Directed &x : cb.d) fro += x.v * x.v;
      fro = std::sqrt(fro);
      amax = std::max(amax, fro);
      ratio = std::max(ratio, (1.0 + std::abs(b_(cb.con))) / (1.0 + fro));
    }
    const double xi = std::max({10.0, std::sqrt(n), std::sqrt(n) * ratio});
    const double eta = std::max({10.0, std::sqrt(n), amax, C_[b].norm()});
    X[b] = xi * RMat::Identity(dims_[b], dims_[b]);
    Z[b] = eta * RMat::Identity(dims_[b], dims_[b]);
  }
  RVec y = RVec::Zero(m_);

  const double feas_tol = std::max(1e-10, 1e-2 * opt_.tol);
  const double gap_tol = 0.5 * opt_.tol;
  RealSdpSolution out;

  auto residuals = [&](RVec &rp, std::vector<RMat> &Rd, double &pinf, double &dinf) {
    rp = b_ - apply_a(X);
    Rd = apply_at(y);
    double dn = 0.0;
    for (int b = 0; b < nb_; ++b) {
      Rd[b] -= C_[b] + Z[b];
      dn += Rd[b].squaredNorm();
    }
    pinf = rp.norm() / (1.0 + bnorm);
    dinf = std::sqrt(dn) / (1.0 + cnorm);
  };

  int stall = 0;
  double prev_mu = std::numeric_limits<double>::infinity();
  for (int it = 0; it <= opt_.max_iterations; ++it) {
    RVec rp;
    std::vector<RMat> Rd;
    double pinf, dinf;
    residuals(rp, Rd, pinf, dinf);
    double pobj = 0.0, xz = 0.0;
    for (int b = 0; b < nb_; ++b) {
      pobj += inner(C_[b], X[b]);
      xz += inner(X[b], Z[b]);
    }
    const double dobj = b_.dot(y);
    const double mu = xz / N_;
    const double relgap = std::abs(dobj - pobj) / std::max(1.0, std::abs(pobj));

    out.iterations = it;
    if (pinf <= feas_tol && dinf <= feas_tol && relgap <= gap_tol) break;
    if (it == opt_.max_iterations || stall >= 8) {
      if (pinf <= 10 * feas_tol && dinf <= 10 * feas_tol && relgap <= 2 * gap_tol) break;
      throw Error(ErrorKind::MaxIterations,
                  "interior point did not converge (pinf " + std::to_string(pinf) + ", dinf " +
                      std::to_string(dinf) + ", gap " + std::to_string(relgap) + ")");
    }

    // Infeasibility and unboundedness indicators.
    if (it > 5) {
      const double ynorm = y.norm();
      if (dobj < 0 && ynorm > 1e8 * (1.0 + cnorm)) {
        RVec cert = y / (-dobj);
        auto S = apply_at(cert);
        double lmin = std::numeric_limits<double>::infinity(), snorm = 0.0;
        for (int b = 0; b < nb_; ++b) {
          Eigen::SelfAdjointEigenSolver<RMat> es(S[b], Eigen::EigenvaluesOnly);
          lmin = std::min(lmin, es.eigenvalues()(0));
          snorm += S[b].squaredNorm();
        }
        if (lmin >= -1e-6 * std::max(1.0, std::sqrt(snorm))) {
          RVec full = RVec::Zero(static_cast<Eigen::Index>(sdp_.A.size()));
          for (int i = 0; i < m_; ++i) full(kept_[i]) = cert(i);
          throw SdpError(ErrorKind::Infeasible, "primal infeasible (dual ray found)", full);
        }
      }
      double xtr = 0.0;
      for (int b = 0; b < nb_; ++b) xtr += X[b].trace();
      if (pobj > 0 && xtr > 1e8 * (1.0 + bnorm)) {
        std::vector<RMat> D(nb_);
        for (int b = 0; b < nb_; ++b) D[b] = X[b] / pobj;
        if (apply_a(D).norm() <= 1e-6 * (1.0 + bnorm)) {
          RVec flat(0);
          for (const RMat &Db : D) {
            RVec v = Eigen::Map<const RVec>(Db.data(), Db.size());
            RVec grown(flat.size() + v.size());
            grown << flat, v;
            flat = grown;
          }
          throw SdpError(ErrorKind::Unbounded, "primal unbounded (improving ray found)", flat);
        }
      }
    }

    std::vector<Eigen::LLT<RMat>> cx(nb_), cz(nb_);
    std::vector<RMat> W(nb_);
    for (int b = 0; b < nb_; ++b) {
      cx[b].compute(X[b]);
      cz[b].compute(Z[b]);
      if (cx[b].info() != Eigen::Success || cz[b].info() != Eigen::Success)
        throw Error(ErrorKind::NumericalFailure, "iterate lost positive definiteness");
      W[b] = cz[b].solve(RMat::Identity(dims_[b], dims_[b]));
      W[b] = (W[b] + W[b].transpose()) / 2.0;
    }
    RMat M = schur(X, W);
    Eigen::LLT<RMat> cm(M);
    if (cm.info() != Eigen::Success) {
      const double reg = 1e-13 * std::max(1.0, M.diagonal().cwiseAbs().maxCoeff());
      M.diagonal().array() += reg;
      cm.compute(M);
      if (cm.info() != Eigen::Success)
        throw Error(ErrorKind::NumericalFailure, "Schur complement is not positive definite");
    }

    // Direction for target sigma * mu with optional second-order term.
    auto direction = [&](double target, const std::vector<RMat> *dXa, const std::vector<RMat> *dZa,
                         std::vector<RMat> &dX, RVec &dy, std::vector<RMat> &dZ) {
      std::vector<RMat> Gm(nb_);
      for (int b = 0; b < nb_; ++b) {
        Gm[b] = target * W[b] - X[b] * Rd[b] * W[b];
        if (dXa) Gm[b] -= (*dXa)[b] * (*dZa)[b] * W[b];
      }
      RVec rhs = -b_ + apply_a(Gm);
      dy = cm.solve(rhs);
      dZ = apply_at(dy);
      dX.assign(nb_, RMat());
      for (int b = 0; b < nb_; ++b) {
        dZ[b] += Rd[b];
        RMat T = target * W[b] - X[b] - X[b] * dZ[b] * W[b];
        if (dXa) T -= (*dXa)[b] * (*dZa)[b] * W[b];
        dX[b] = (T + T.transpose()) / 2.0;
      }
    };
    auto steps = [&](const std::vector<RMat> &dX, const std::vector<RMat> &dZ, double &ap,
                     double &ad) {
      ap = ad = std::numeric_limits<double>::infinity();
      for (int b = 0; b < nb_; ++b) {
        ap = std::min(ap, max_step(cx[b], dX[b]));
        ad = std::min(ad, max_step(cz[b], dZ[b]));
      }
    };

    std::vector<RMat> dXa, dZa, dX, dZ;
    RVec dya, dy;
    direction(0.0, nullptr, nullptr, dXa, dya, dZa);
    double apa, ada;
    steps(dXa, dZa, apa, ada);
    apa = std::min(1.0, apa);
    ada = std::min(1.0, ada);
    double mua = 0.0;
    for (int b = 0; b < nb_; ++b) mua += inner(X[b] + apa * dXa[b], Z[b] + ada * dZa[b]);
    mua /= N_;
    const double expon = std::max(1.0, 3.0 * std::min(apa, ada) * std::min(apa, ada));
    const double sigma = std::min(1.0, std::pow(std::max(mua, 0.0) / mu, expon));

    direction(sigma * mu, &dXa, &dZa, dX, dy, dZ);
    double ap, ad;
    steps(dX, dZ, ap, ad);
    const double gamma = 0.9 + 0.09 * std::min(apa, ada);
    ap = std::min(1.0, gamma * ap);
    ad = std::min(1.0, gamma * ad);

    for (int b = 0; b < nb_; ++b) {
      X[b] += ap * dX[b];
      Z[b] += ad * dZ[b];
      X[b] = (X[b] + X[b].transpose()) / 2.0;
      Z[b] = (Z[b] + Z[b].transpose()) / 2.0;
    }
    y += ad * dy;

    if (std::max(ap, ad) < 1e-8 || mu > 0.999 * prev_mu)
      ++stall;
    else
      stall = 0;
    prev_mu = mu;
  }

  RVec rp;
  std::vector<RMat> Rd;
  double pinf, dinf;
  residuals(rp, Rd, pinf, dinf);
  out.X = X;
  out.Z = Z;
  out.y = RVec::Zero(static_cast<Eigen::Index>(sdp_.A.size()));
  for (int i = 0; i < m_; ++i) out.y(kept_[i]) = y(i);
  out.primal_value = 0.0;
  for (int b = 0; b < nb_; ++b) out.primal_value += inner(C_[b], X[b]);
  out.dual_value = sdp_.b.dot(out.y);
  out.primal_residual = rp.cwiseAbs().maxCoeff();
  double dn = 0.0;
  for (const RMat &R : Rd) dn += R.squaredNorm();
  out.dual_residual = std::sqrt(dn);
  return out;
}

}  // namespace

RealSdpSolution solve_real(const RealSdp &sdp, const SolverOptions &opt) {
  if (sdp.A.size() != static_cast<std::size_t>(sdp.b.size()))
    throw Error(ErrorKind::DimensionMismatch, "constraint count does not match rhs length");
  if (!(opt.tol > 0)) throw Error(ErrorKind::BadArgs, "tolerance must be positive");
  Ipm ipm(sdp, opt);
  return ipm.run();
}

namespace {

CMat hermitian_from_entries(const std::vector<SdpEntry> &es, int block, int dim) {
  CMat F = CMat::Zero(dim, dim);
  for (const SdpEntry &e : es) {
    if (e.block != block) continue;
    F(e.r, e.c) += e.v;
    if (e.r != e.c) F(e.c, e.r) += std::conj(e.v);
  }
  return F;
}

}  // namespace

SdpSolution solve(const SdpInstance &inst, double tol) {
  RealSdp r = real_embedding(inst);
  SolverOptions opt;
  opt.tol = tol;
  RealSdpSolution rs = solve_real(r, opt);
  SdpSolution sol;
  for (const RMat &Xb : rs.X) sol.Z.push_back(complex_from_real_block(Xb));
  sol.y = rs.y;
  sol.primal_value = functional_value(inst.objective, sol.Z);
  sol.dual_value = rs.dual_value;
  sol.gap = sol.dual_value - sol.primal_value;
  sol.iterations = rs.iterations;
  double res = 0.0;
  for (const SdpConstraint &c : inst.constraints)
    res = std::max(res, std::abs(functional_value(c.entries, sol.Z) - c.rhs));
  sol.primal_residual = res;
  sol.dual_residual = rs.dual_residual;
  return sol;
}

CertifyReport certify(const SdpInstance &inst, const SdpSolution &sol, double tol) {
  validate_instance(inst);
  CertifyReport rep;
  if (sol.Z.size() != inst.blocks.size() ||
      sol.y.size() != static_cast<Eigen::Index>(inst.constraints.size()))
    throw Error(ErrorKind::DimensionMismatch, "solution does not match the instance");
  double rhs_scale = 1.0;
  for (const SdpConstraint &c : inst.constraints) rhs_scale = std::max(rhs_scale, std::abs(c.rhs));
  for (const SdpConstraint &c : inst.constraints)
    rep.max_constraint_residual = std::max(
        rep.max_constraint_residual, std::abs(functional_value(c.entries, sol.Z) - c.rhs));
  rep.min_primal_eigenvalue = std::numeric_limits<double>::infinity();
  rep.min_dual_slack_eigenvalue = std::numeric_limits<double>::infinity();
  double cscale = 1.0;
  for (std::size_t b = 0; b < inst.blocks.size(); ++b) {
    const int dim = inst.blocks[b].dim;
    rep.min_primal_eigenvalue =
        std::min(rep.min_primal_eigenvalue, herm_eig(sol.Z[b]).values.minCoeff());
    CMat S = -hermitian_from_entries(inst.objective, static_cast<int>(b), dim);
    cscale = std::max(cscale, S.norm());
    for (std::size_t i = 0; i < inst.constraints.size(); ++i)
      S += sol.y(static_cast<Eigen::Index>(i)) *
           hermitian_from_entries(inst.constraints[i].entries, static_cast<int>(b), dim);
    rep.min_dual_slack_eigenvalue = std::min(rep.min_dual_slack_eigenvalue, herm_eig(S).values.minCoeff());
  }
  const double primal = functional_value(inst.objective, sol.Z);
  double dual = 0.0;
  for (std::size_t i = 0; i < inst.constraints.size(); ++i)
    dual += sol.y(static_cast<Eigen::Index>(i)) * inst.constraints[i].rhs;
  rep.gap = dual - primal;
  if (rep.max_constraint_residual > 1e-7 * rhs_scale)
    rep.violations.push_back("constraint residual " + std::to_string(rep.max_constraint_residual));
  if (rep.min_primal_eigenvalue < -1e-8)
    rep.violations.push_back("primal block not PSD: " + std::to_string(rep.min_primal_eigenvalue));
  if (rep.min_dual_slack_eigenvalue < -1e-7 * cscale)
    rep.violations.push_back("dual slack not PSD: " + std::to_string(rep.min_dual_slack_eigenvalue));
  if (rep.gap < -1e-7)
    rep.violations.push_back("negative duality gap " + std::to_string(rep.gap));
  if (rep.gap > tol * std::max(1.0, std::abs(primal)))
    rep.violations.push_back("duality gap " + std::to_string(rep.gap) + " above tolerance");
  rep.ok = rep.violations.empty();
  return rep;
}

}  // namespace xorq
