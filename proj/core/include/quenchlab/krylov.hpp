// Copyright 2026 the quenchlab developers.
// SPDX-License-Identifier: Apache-2.0

#ifndef QUENCHLAB_KRYLOV_HPP
#define QUENCHLAB_KRYLOV_HPP

#include <complex>
#include <functional>
#include <vector>

#include "quenchlab/hamiltonian.hpp"

namespace quenchlab {

struct KrylovOptions {
  /// Local error budget per unit time; the accumulated phase error over a
  /// span T is then roughly tol * T.
  double tol = 1e-10;
  /// Krylov subspace size per substep. Larger bases amortize better but cost
  /// more memory; the matvec total is dominated by the spectral spread.
  int max_basis = 48;
  double breakdown_eps = 1e-13;
};

struct KrylovStats {
  long matvecs = 0;
  long substeps = 0;
  long rejections = 0;
};

/// Propagates k states under exp(-i H t) simultaneously with short-iterate
/// Lanczos restarts. The states share every sparse pass (the matrix is
/// streamed once per block iteration), which is where the sweep spends its
/// time; the Lanczos recurrences stay independent per state.
///
/// The state block is interleaved: component i of state s lives at
/// psi[i * k + s].
class BlockLanczosPropagator {
 public:
  BlockLanczosPropagator(const SparseHermitian& h, int n_states,
                         KrylovOptions options = {});

  /// Advances the block in place by dt (dt >= 0).
  void advance(std::complex<double>* psi, double dt);

  const KrylovStats& stats() const { return stats_; }

 private:
  const SparseHermitian& h_;
  int k_;
  KrylovOptions opt_;
  KrylovStats stats_;
  double spread_;      // half-width of the Gershgorin interval
  double last_step_;   // accepted substep size, reused as the next guess
  std::vector<std::complex<double>> panels_;  // (max_basis+1) Lanczos blocks
  std::vector<double> alpha_, beta_, beta0_;
  std::vector<int> breakdown_;

  std::complex<double>* panel(int j) {
    return panels_.data() + static_cast<std::size_t>(j) * h_.dim() * k_;
  }
};

/// Single-vector Krylov propagator for a general (possibly non-Hermitian)
/// operator, used for the no-jump segments of quantum trajectories where the
/// effective Hamiltonian carries an anti-Hermitian damping part. Arnoldi with
/// modified Gram-Schmidt; the small exponential goes through a dense Pade
/// evaluation.
class ArnoldiPropagator {
 public:
  using Complex = std::complex<double>;
  using ApplyFn = std::function<void(const Complex*, Complex*)>;

  ArnoldiPropagator(ApplyFn apply, std::size_t dim, double spread_hint,
                    KrylovOptions options = {});

  /// Advances psi by dt. The norm is free to decay (no renormalization).
  /// `norm_floor` aborts a substep early: when ||psi(t')||^2 drops below it,
  /// integration stops at the first crossing, located by bisection in the
  /// current Krylov subspace to absolute time resolution `t_resolution`.
  /// Returns the time actually advanced (== dt when no crossing occurred).
  double advance(Complex* psi, double dt, double norm_floor = -1.0,
                 double t_resolution = 1e-9);

  const KrylovStats& stats() const { return stats_; }

 private:
  ApplyFn apply_;
  std::size_t dim_;
  KrylovOptions opt_;
  KrylovStats stats_;
  double spread_;
  double last_step_;
  std::vector<Complex> basis_;  // (max_basis+1) x dim
  Complex* vec(int j) { return basis_.data() + static_cast<std::size_t>(j) * dim_; }
};

}  // namespace quenchlab

#endif
