#include "xorq/heuristics.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <thread>

#include <Eigen/Eigenvalues>

namespace xorq {

int configured_threads() {
  const char *env = std::getenv("XORQ_THREADS");
  if (!env) return 1;
  int t = std::atoi(env);
  return t < 1 ? 1 : t;
}

namespace {

void parallel_for(int count, const std::function<void(int)> &fn) {
  const int workers = std::min(configured_threads(), count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
      }
    });
  for (auto &t : pool) t.join();
  for (auto &e : errors)
    if (e) std::rethrow_exception(e);
}

void check_monotone(double before, double after) {
  if (after < before - 1e-9 * std::max(1.0, std::abs(before)))
    throw Error(ErrorKind::NumericalFailure, "see-saw step decreased the bias");
}

struct Outcome {
  double value = -1.0;
  Strategy strategy;
  int iters = 0;
};

HeuristicResult collect(std::vector<Outcome> &outs) {
  HeuristicResult res;
  std::size_t best = 0;
  for (std::size_t i = 0; i < outs.size(); ++i) {
    res.restart_values.push_back(outs[i].value);
    if (outs[i].value > outs[best].value) best = i;
  }
  res.value = outs[best].value;
  res.strategy = outs[best].strategy;
  res.iterations_used = outs[best].iters;
  return res;
}

void require_config(const OptimizerConfig &cfg) {
  if (cfg.restarts < 0 || cfg.max_iters < 1 || !(cfg.improvement_tol > 0))
    throw Error(ErrorKind::BadArgs, "invalid optimizer configuration");
}

// Alternating best responses with a fixed shared state Psi (dA x dB).
// `respond` maps an effective operator to the maximizing operator.
Outcome seesaw_fixed_state(const SpectralGame &S, CMat A, CMat B, const CMat &Psi,
                           const OptimizerConfig &cfg, bool complex_class) {
  auto respond = [&](const CMat &K) {
    return complex_class ? polar_unitary(K) : sign_of_hermitian(hermitian_part(K));
  };
  auto value = [&](const CMat &X, const CMat &Y) {
    cplx v = entangled_value(S, X, Y, Psi);
    return complex_class ? std::abs(v) : v.real();
  };
  double val = value(A, B);
  Outcome out;
  int it = 0;
  for (; it < cfg.max_iters; ++it) {
    A = respond(effective_a(S, B, Psi));
    double v1 = value(A, B);
    check_monotone(val, v1);
    B = respond(effective_b(S, A, Psi));
    double v2 = value(A, B);
    check_monotone(v1, v2);
    double gain = v2 - val;
    val = v2;
    if (gain < cfg.improvement_tol) {
      ++it;
      break;
    }
  }
  out.value = val;
  out.iters = it;
  if (complex_class) {
    // Rotate A so that the value itself is real and non-negative.
    cplx z = entangled_value(S, A, B, Psi);
    if (std::abs(z) > 0) A *= std::conj(z) / std::abs(z);
    out.strategy = Complex{A, B};
  } else {
    out.strategy = Unentangled{A, B};
  }
  return out;
}

CMat psi_one() { return CMat::Ones(1, 1); }

}  // namespace

CMat effective_operator_for_a(const GameMatrix &G, const CMat &B) {
  return effective_a(spectral_form(G), B, psi_one());
}

CMat effective_operator_for_b(const GameMatrix &G, const CMat &A) {
  return effective_b(spectral_form(G), A, psi_one());
}

HeuristicResult omega_lower(const GameMatrix &G, const OptimizerConfig &cfg,
                            const std::optional<Unentangled> &warm) {
  require_config(cfg);
  const SpectralGame S = spectral_form(G);
  const int total = cfg.restarts + 1;
  std::vector<Outcome> outs(static_cast<std::size_t>(total));
  parallel_for(total, [&](int r) {
    CMat A, B;
    if (r == 0 && warm) {
      validate_strategy(G, *warm);
      A = warm->A;
      B = warm->B;
    } else {
      Rng rng = make_rng(cfg.seed, static_cast<std::uint64_t>(r));
      A = random_observable(G.n, rng);
      B = random_observable(G.n, rng);
    }
    outs[static_cast<std::size_t>(r)] = seesaw_fixed_state(S, A, B, psi_one(), cfg, false);
  });
  return collect(outs);
}

HeuristicResult omega_c_lower(const GameMatrix &G, const OptimizerConfig &cfg,
                              const std::optional<Strategy> &warm) {
  require_config(cfg);
  const SpectralGame S = spectral_form(G);
  const int total = cfg.restarts + 1;
  std::vector<Outcome> outs(static_cast<std::size_t>(total));
  parallel_for(total, [&](int r) {
    CMat A, B;
    if (r == 0 && warm) {
      validate_strategy(G, *warm);
      if (auto *u = std::get_if<Unentangled>(&*warm)) {
        A = u->A;
        B = u->B;
      } else if (auto *c = std::get_if<Complex>(&*warm)) {
        A = c->A;
        B = c->B;
      } else {
        throw Error(ErrorKind::BadArgs, "omega_c_lower warm start must be unentangled or complex");
      }
    } else {
      Rng rng = make_rng(cfg.seed, static_cast<std::uint64_t>(r));
      A = random_unitary(G.n, rng);
      B = random_unitary(G.n, rng);
    }
    outs[static_cast<std::size_t>(r)] = seesaw_fixed_state(S, A, B, psi_one(), cfg, true);
  });
  return collect(outs);
}

MaxEntangled lift_to_me(const GameMatrix &G, const Strategy &s, int d) {
  if (d < 1) throw Error(ErrorKind::BadArgs, "entanglement dimension must be positive");
  validate_strategy(G, s);
  const int n = G.n;
  if (auto *u = std::get_if<Unentangled>(&s))
    return MaxEntangled{d, tensor(u->A, identity(d)), tensor(u->B, identity(d))};
  if (auto *c = std::get_if<Complex>(&s)) {
    if (d % 2 != 0) return lift_to_me(G, round_complex_to_real(G, *c), d);
    // One EPR pair: A~ = A (x) |0><1| + A^dagger (x) |1><0| realizes Re Tr((A (x) B) M).
    SpectralGame S = spectral_form(G);
    cplx z = entangled_value(S, c->A, c->B, psi_one());
    CMat A = c->A;
    if (std::abs(z) > 0) A *= std::conj(z) / std::abs(z);
    CMat e01 = CMat::Zero(2, 2), e10 = CMat::Zero(2, 2);
    e01(0, 1) = 1.0;
    e10(1, 0) = 1.0;
    CMat At = tensor(A, e01) + tensor(A.adjoint(), e10);
    CMat Bt = tensor(c->B, e01) + tensor(c->B.adjoint(), e10);
    return MaxEntangled{d, tensor(At, identity(d / 2)), tensor(Bt, identity(d / 2))};
  }
  if (auto *m = std::get_if<MaxEntangled>(&s)) {
    if (d % m->d != 0)
      throw Error(ErrorKind::BadArgs, "maxent warm start dimension must divide d");
    const int k = d / m->d;
    return MaxEntangled{d, tensor(m->A, identity(k)), tensor(m->B, identity(k))};
  }
  (void)n;
  throw Error(ErrorKind::BadArgs, "cannot lift an entangled strategy to a maxent one");
}

Entangled lift_to_entangled(const GameMatrix &G, const Strategy &s, int dA, int dB) {
  validate_strategy(G, s);
  Entangled base;
  if (auto *u = std::get_if<Unentangled>(&s)) {
    base = Entangled{1, 1, u->A, u->B, CVec::Ones(1)};
  } else if (std::holds_alternative<Complex>(s)) {
    if (dA >= 2 && dB >= 2)
      base = as_entangled(lift_to_me(G, s, 2));
    else
      base = lift_to_entangled(G, round_complex_to_real(G, std::get<Complex>(s)), dA, dB);
  } else if (auto *m = std::get_if<MaxEntangled>(&s)) {
    base = as_entangled(*m);
  } else {
    base = std::get<Entangled>(s);
  }
  return embed_entangled(base, G.n, dA, dB);
}

HeuristicResult me_lower(const GameMatrix &G, int d, const OptimizerConfig &cfg,
                         const std::optional<Strategy> &warm) {
  require_config(cfg);
  if (d < 1) throw Error(ErrorKind::BadArgs, "entanglement dimension must be positive");
  const SpectralGame S = spectral_form(G);
  const CMat Psi = CMat::Identity(d, d) / std::sqrt(static_cast<double>(d));
  const int total = cfg.restarts + 1;
  std::vector<Outcome> outs(static_cast<std::size_t>(total));
  parallel_for(total, [&](int r) {
    CMat A, B;
    if (r == 0 && warm) {
      MaxEntangled w = lift_to_me(G, *warm, d);
      A = w.A;
      B = w.B;
    } else {
      Rng rng = make_rng(cfg.seed, static_cast<std::uint64_t>(r));
      A = random_observable(G.n * d, rng);
      B = random_observable(G.n * d, rng);
    }
    Outcome o = seesaw_fixed_state(S, A, B, Psi, cfg, false);
    auto &u = std::get<Unentangled>(o.strategy);
    o.strategy = MaxEntangled{d, u.A, u.B};
    outs[static_cast<std::size_t>(r)] = std::move(o);
  });
  return collect(outs);
}

HeuristicResult entangled_lower(const GameMatrix &G, int dA, int dB, const OptimizerConfig &cfg,
                                const std::optional<Strategy> &warm) {
  require_config(cfg);
  if (dA < 1 || dB < 1) throw Error(ErrorKind::BadArgs, "private dimensions must be positive");
  const SpectralGame S = spectral_form(G);
  const int total = cfg.restarts + 1;
  std::vector<Outcome> outs(static_cast<std::size_t>(total));
  parallel_for(total, [&](int r) {
    CMat A, B;
    CVec psi;
    if (r == 0 && warm) {
      Entangled w = lift_to_entangled(G, *warm, dA, dB);
      A = w.A;
      B = w.B;
      psi = w.psi;
    } else {
      Rng rng = make_rng(cfg.seed, static_cast<std::uint64_t>(r));
      A = random_observable(G.n * dA, rng);
      B = random_observable(G.n * dB, rng);
      psi = random_unit_vector(dA * dB, rng);
    }
    CMat Psi = psi_matrix(psi, dA, dB);
    double val = entangled_value(S, A, B, Psi).real();
    int it = 0;
    for (; it < cfg.max_iters; ++it) {
      A = sign_of_hermitian(hermitian_part(effective_a(S, B, Psi)));
      double v1 = entangled_value(S, A, B, Psi).real();
      check_monotone(val, v1);
      B = sign_of_hermitian(hermitian_part(effective_b(S, A, Psi)));
      double v2 = entangled_value(S, A, B, Psi).real();
      check_monotone(v1, v2);
      HermEig e = herm_eig(hermitian_part(state_operator(G, A, B, dA, dB)));
      Eigen::Index top = 0;
      e.values.cwiseAbs().maxCoeff(&top);
      if (e.values(top) < 0) A = -A;
      Psi = psi_matrix(e.vectors.col(top), dA, dB);
      double v3 = entangled_value(S, A, B, Psi).real();
      check_monotone(v2, v3);
      double gain = v3 - val;
      val = v3;
      if (gain < cfg.improvement_tol) {
        ++it;
        break;
      }
    }
    Outcome o;
    o.value = val;
    o.iters = it;
    o.strategy = Entangled{dA, dB, A, B, psi_vector(Psi)};
    outs[static_cast<std::size_t>(r)] = std::move(o);
  });
  return collect(outs);
}

Unentangled round_complex_to_real(const GameMatrix &G, const Complex &s) {
  validate_strategy(G, s);
  const int n = G.n;
  const CMat I = CMat::Identity(n, n);
  CMat A = s.A, B = s.B;
  if ((A.adjoint() * A - I).norm() > 1e-9) A = unitary_factor(A);
  if ((B.adjoint() * B - I).norm() > 1e-9) B = unitary_factor(B);
  // Unitaries are normal, so the complex Schur form is diagonal.
  Eigen::ComplexSchur<CMat> sa(A), sb(B);
  CMat U = sa.matrixU(), V = sb.matrixU();
  CVec lam = sa.matrixT().diagonal(), mu = sb.matrixT().diagonal();
  for (Eigen::Index i = 0; i < n; ++i) {
    lam(i) /= std::abs(lam(i));
    mu(i) /= std::abs(mu(i));
  }
  RMat C(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      CVec w = tensor(CVec(U.col(i)), CVec(V.col(j)));
      C(i, j) = w.dot(G.M * w).real();
    }
  cplx z = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) z += C(i, j) * lam(i) * mu(j);
  if (std::abs(z) > 0) lam *= std::conj(z) / std::abs(z);

  auto sgn = [](double v) { return v < 0 ? -1.0 : 1.0; };
  RVec bx(n), by(n);
  double best = -1.0;
  for (int t = 0; t < 720; ++t) {
    const double th = 2.0 * std::numbers::pi * t / 720.0;
    const cplx rot = std::polar(1.0, th);
    RVec x(n), y(n);
    for (int i = 0; i < n; ++i) {
      x(i) = sgn((std::conj(rot) * lam(i)).real());
      y(i) = sgn((rot * mu(i)).real());
    }
    double v = x.dot(C * y);
    if (v < 0) {
      x = -x;
      v = -v;
    }
    if (v > best + 1e-15) {
      best = v;
      bx = x;
      by = y;
    }
  }
  bool improved = true;
  while (improved) {
    improved = false;
    RVec Cy = C * by;
    for (int i = 0; i < n; ++i)
      if (-2.0 * bx(i) * Cy(i) > 1e-15) {
        bx(i) = -bx(i);
        improved = true;
      }
    RVec Ctx = C.transpose() * bx;
    for (int j = 0; j < n; ++j)
      if (-2.0 * by(j) * Ctx(j) > 1e-15) {
        by(j) = -by(j);
        improved = true;
      }
  }
  CMat Ar = U * bx.cast<cplx>().asDiagonal() * U.adjoint();
  CMat Br = V * by.cast<cplx>().asDiagonal() * V.adjoint();
  return Unentangled{hermitian_part(Ar), hermitian_part(Br)};
}

}  // namespace xorq
