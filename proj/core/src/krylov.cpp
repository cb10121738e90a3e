// Copyright 2026 the quenchlab developers.
// SPDX-License-Identifier: Apache-2.0

#include "quenchlab/krylov.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <unsupported/Eigen/MatrixFunctions>

#include "quenchlab/errors.hpp"

namespace quenchlab {

namespace {

using Complex = std::complex<double>;

// Per-state complex dots over an interleaved block: acc[s] = a_s^dag b_s.
void block_dots(const Complex* a, const Complex* b, std::size_t dim, int k,
                Complex* acc) {
  std::fill(acc, acc + k, Complex(0.0, 0.0));
  for (std::size_t i = 0; i < dim; ++i) {
    const Complex* ai = a + i * static_cast<std::size_t>(k);
    const Complex* bi = b + i * static_cast<std::size_t>(k);
    for (int s = 0; s < k; ++s) acc[s] += std::conj(ai[s]) * bi[s];
  }
}

void block_norms(const Complex* a, std::size_t dim, int k, double* out) {
  std::fill(out, out + k, 0.0);
  for (std::size_t i = 0; i < dim; ++i) {
    const Complex* ai = a + i * static_cast<std::size_t>(k);
    for (int s = 0; s < k; ++s) out[s] += std::norm(ai[s]);
  }
  for (int s = 0; s < k; ++s) out[s] = std::sqrt(out[s]);
}

}  // namespace

BlockLanczosPropagator::BlockLanczosPropagator(const SparseHermitian& h,
                                               int n_states, KrylovOptions options)
    : h_(h), k_(n_states), opt_(options) {
  if (k_ < 1) throw ParameterError("BlockLanczosPropagator: need >= 1 state");
  if (opt_.max_basis < 2) throw ParameterError("BlockLanczosPropagator: basis too small");
  // A Krylov basis can never exceed the space dimension; running past it
  // turns rounding noise into spurious directions and garbage Ritz values.
  opt_.max_basis = static_cast<int>(
      std::min<std::size_t>(static_cast<std::size_t>(opt_.max_basis), h.dim()));
  const auto [lo, hi] = h_.gershgorin_interval();
  spread_ = 0.5 * (hi - lo);
  if (!(spread_ > 0.0)) spread_ = 1.0;
  last_step_ = static_cast<double>(opt_.max_basis) / spread_;
  panels_.resize(static_cast<std::size_t>(opt_.max_basis + 1) * h_.dim() * k_);
  alpha_.resize(static_cast<std::size_t>(opt_.max_basis) * k_);
  beta_.resize(static_cast<std::size_t>(opt_.max_basis) * k_);
  beta0_.resize(static_cast<std::size_t>(k_));
  breakdown_.resize(static_cast<std::size_t>(k_));
}

void BlockLanczosPropagator::advance(Complex* psi, double dt) {
  if (dt < 0.0) throw ParameterError("BlockLanczosPropagator: dt must be >= 0");
  if (dt == 0.0) return;

  const std::size_t dim = h_.dim();
  const int m = opt_.max_basis;
  std::vector<Complex> dots(static_cast<std::size_t>(k_));
  std::vector<Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>> eig(
      static_cast<std::size_t>(k_));
  std::vector<Eigen::VectorXcd> u(static_cast<std::size_t>(k_));

  double t = 0.0;
  while (t < dt) {
    const double remaining = dt - t;

    // --- Lanczos basis shared across the block ---------------------------
    block_norms(psi, dim, k_, beta0_.data());
    for (int s = 0; s < k_; ++s)
      if (!(beta0_[s] > 0.0))
        throw ParameterError("BlockLanczosPropagator: zero-norm input state");
    {
      Complex* v0 = panel(0);
      for (std::size_t i = 0; i < dim; ++i)
        for (int s = 0; s < k_; ++s)
          v0[i * k_ + s] = psi[i * k_ + s] / beta0_[static_cast<std::size_t>(s)];
    }
    std::fill(breakdown_.begin(), breakdown_.end(), 0);

    int built = 0;
    for (int j = 0; j < m; ++j) {
      Complex* vj = panel(j);
      Complex* w = panel(j + 1);
      h_.apply_block(vj, w, k_);
      stats_.matvecs += k_;

      block_dots(vj, w, dim, k_, dots.data());
      for (int s = 0; s < k_; ++s)
        alpha_[static_cast<std::size_t>(j) * k_ + s] = dots[static_cast<std::size_t>(s)].real();

      const Complex* vprev = (j > 0) ? panel(j - 1) : nullptr;
      const double* beta_prev =
          (j > 0) ? &beta_[static_cast<std::size_t>(j - 1) * k_] : nullptr;
      for (std::size_t i = 0; i < dim; ++i) {
        Complex* wi = w + i * static_cast<std::size_t>(k_);
        const Complex* vji = vj + i * static_cast<std::size_t>(k_);
        for (int s = 0; s < k_; ++s) {
          Complex acc = wi[s] - alpha_[static_cast<std::size_t>(j) * k_ + s] * vji[s];
          if (j > 0) acc -= beta_prev[s] * vprev[i * static_cast<std::size_t>(k_) + s];
          wi[s] = acc;
        }
      }

      double* beta_j = &beta_[static_cast<std::size_t>(j) * k_];
      block_norms(w, dim, k_, beta_j);
      bool all_broken = true;
      for (int s = 0; s < k_; ++s) {
        if (breakdown_[static_cast<std::size_t>(s)] > 0) continue;
        if (beta_j[s] < opt_.breakdown_eps * spread_) {
          breakdown_[static_cast<std::size_t>(s)] = j + 1;
          beta_j[s] = 0.0;
        } else {
          all_broken = false;
        }
      }
      // Normalize (frozen states keep zero columns so later passes are inert).
      for (std::size_t i = 0; i < dim; ++i) {
        Complex* wi = w + i * static_cast<std::size_t>(k_);
        for (int s = 0; s < k_; ++s) wi[s] = beta_j[s] > 0.0 ? wi[s] / beta_j[s] : Complex(0.0);
      }
      built = j + 1;
      if (all_broken) break;
    }

    // --- per-state tridiagonal eigendecompositions ------------------------
    for (int s = 0; s < k_; ++s) {
      const int ms = breakdown_[static_cast<std::size_t>(s)] > 0
                         ? breakdown_[static_cast<std::size_t>(s)]
                         : built;
      Eigen::VectorXd d(ms), e(std::max(0, ms - 1));
      for (int j = 0; j < ms; ++j) d(j) = alpha_[static_cast<std::size_t>(j) * k_ + s];
      for (int j = 0; j + 1 < ms; ++j) e(j) = beta_[static_cast<std::size_t>(j) * k_ + s];
      eig[static_cast<std::size_t>(s)].computeFromTridiagonal(d, e);
      if (eig[static_cast<std::size_t>(s)].info() != Eigen::Success) {
        std::string dump = "d:";
        for (int j = 0; j < ms; ++j) dump += " " + std::to_string(d(j));
        dump += " e:";
        for (int j = 0; j + 1 < ms; ++j) dump += " " + std::to_string(e(j));
        throw SolverError("BlockLanczosPropagator: tridiagonal eigensolve failed " + dump);
      }
    }

    auto exp_coeffs = [&](int s, double tau) {
      const auto& es = eig[static_cast<std::size_t>(s)];
      const auto& q = es.eigenvectors();
      const auto& lam = es.eigenvalues();
      const int ms = static_cast<int>(lam.size());
      Eigen::VectorXcd out = Eigen::VectorXcd::Zero(ms);
      for (int j = 0; j < ms; ++j) {
        const Complex phase = std::polar(1.0, -tau * lam(j)) * q(0, j);
        for (int i = 0; i < ms; ++i) out(i) += q(i, j) * phase;
      }
      return out;
    };

    // --- choose the substep ------------------------------------------------
    double tau = std::min(remaining, last_step_);
    bool accepted = false;
    for (int tries = 0; tries < 80 && !accepted; ++tries) {
      double err = 0.0;
      for (int s = 0; s < k_; ++s) {
        u[static_cast<std::size_t>(s)] = exp_coeffs(s, tau);
        if (breakdown_[static_cast<std::size_t>(s)] > 0) continue;  // exact subspace
        const int ms = static_cast<int>(u[static_cast<std::size_t>(s)].size());
        const double resid = beta_[static_cast<std::size_t>(ms - 1) * k_ + s];
        err = std::max(err, resid * std::abs(u[static_cast<std::size_t>(s)](ms - 1)));
      }
      if (err <= opt_.tol * tau) {
        accepted = true;
        // Grow cautiously when the estimate has slack to spare.
        last_step_ = (err < 0.1 * opt_.tol * tau) ? tau * 1.4 : tau;
      } else {
        tau *= 0.6;
        stats_.rejections += 1;
        if (tau < 1e-13 * dt)
          throw SolverError("BlockLanczosPropagator: step collapsed; basis too small "
                            "for the spectral spread");
      }
    }
    if (!accepted) throw SolverError("BlockLanczosPropagator: no acceptable substep");

    // --- recombine psi = V u ------------------------------------------------
    std::fill(psi, psi + dim * static_cast<std::size_t>(k_), Complex(0.0));
    for (int j = 0; j < built; ++j) {
      const Complex* vj = panel(j);
      bool any = false;
      std::vector<Complex> coeff(static_cast<std::size_t>(k_), Complex(0.0));
      for (int s = 0; s < k_; ++s) {
        if (j < static_cast<int>(u[static_cast<std::size_t>(s)].size())) {
          coeff[static_cast<std::size_t>(s)] =
              beta0_[static_cast<std::size_t>(s)] * u[static_cast<std::size_t>(s)](j);
          any = true;
        }
      }
      if (!any) continue;
      for (std::size_t i = 0; i < dim; ++i) {
        Complex* pi = psi + i * static_cast<std::size_t>(k_);
        const Complex* vji = vj + i * static_cast<std::size_t>(k_);
        for (int s = 0; s < k_; ++s) pi[s] += coeff[static_cast<std::size_t>(s)] * vji[s];
      }
    }

    t += tau;
    stats_.substeps += 1;
  }
}

ArnoldiPropagator::ArnoldiPropagator(ApplyFn apply, std::size_t dim,
                                     double spread_hint, KrylovOptions options)
    : apply_(std::move(apply)), dim_(dim), opt_(options) {
  spread_ = spread_hint > 0.0 ? spread_hint : 1.0;
  if (opt_.max_basis < 2) throw ParameterError("ArnoldiPropagator: basis too small");
  opt_.max_basis = static_cast<int>(
      std::min<std::size_t>(static_cast<std::size_t>(opt_.max_basis), dim_));
  last_step_ = static_cast<double>(opt_.max_basis) / spread_;
  basis_.resize(static_cast<std::size_t>(opt_.max_basis + 1) * dim_);
}

double ArnoldiPropagator::advance(Complex* psi, double dt, double norm_floor,
                                  double t_resolution) {
  if (dt < 0.0) throw ParameterError("ArnoldiPropagator: dt must be >= 0");
  if (dt == 0.0) return 0.0;

  const int m = opt_.max_basis;
  double t = 0.0;
  while (t < dt) {
    const double remaining = dt - t;

    double beta0 = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) beta0 += std::norm(psi[i]);
    beta0 = std::sqrt(beta0);
    if (!(beta0 > 0.0)) throw SolverError("ArnoldiPropagator: state fully decayed");
    for (std::size_t i = 0; i < dim_; ++i) vec(0)[i] = psi[i] / beta0;

    Eigen::MatrixXcd hess = Eigen::MatrixXcd::Zero(m + 1, m);
    int built = 0;
    bool invariant = false;
    for (int j = 0; j < m; ++j) {
      apply_(vec(j), vec(j + 1));
      stats_.matvecs += 1;
      Complex* w = vec(j + 1);
      for (int i = 0; i <= j; ++i) {
        Complex hij(0.0);
        const Complex* vi = vec(i);
        for (std::size_t x = 0; x < dim_; ++x) hij += std::conj(vi[x]) * w[x];
        hess(i, j) = hij;
        for (std::size_t x = 0; x < dim_; ++x) w[x] -= hij * vi[x];
      }
      double nw = 0.0;
      for (std::size_t x = 0; x < dim_; ++x) nw += std::norm(w[x]);
      nw = std::sqrt(nw);
      hess(j + 1, j) = nw;
      built = j + 1;
      if (nw < opt_.breakdown_eps * spread_) {
        invariant = true;
        break;
      }
      for (std::size_t x = 0; x < dim_; ++x) w[x] /= nw;
    }

    const Eigen::MatrixXcd hm = hess.topLeftCorner(built, built);
    const double resid = std::abs(hess(built, built - 1));
    auto coeffs = [&](double tau) -> Eigen::VectorXcd {
      const Eigen::MatrixXcd e = (Complex(0.0, -tau) * hm).exp();
      return beta0 * e.col(0);
    };

    double tau = std::min(remaining, last_step_);
    Eigen::VectorXcd u;
    bool accepted = false;
    for (int tries = 0; tries < 80 && !accepted; ++tries) {
      u = coeffs(tau);
      const double err = invariant ? 0.0 : resid * std::abs(u(built - 1));
      if (err <= opt_.tol * tau) {
        accepted = true;
        last_step_ = (err < 0.1 * opt_.tol * tau) ? tau * 1.4 : tau;
      } else {
        tau *= 0.6;
        stats_.rejections += 1;
        if (tau < 1e-13 * dt)
          throw SolverError("ArnoldiPropagator: step collapsed");
      }
    }
    if (!accepted) throw SolverError("ArnoldiPropagator: no acceptable substep");

    // Norm-floor crossing? The damping part is positive semi-definite, so the
    // norm is non-increasing in time and bisection brackets the first hit.
    if (norm_floor > 0.0 && u.squaredNorm() < norm_floor) {
      double lo = 0.0, hi = tau;
      while (hi - lo > t_resolution) {
        const double mid = 0.5 * (lo + hi);
        if (coeffs(mid).squaredNorm() < norm_floor)
          hi = mid;
        else
          lo = mid;
      }
      tau = hi;
      u = coeffs(tau);
      for (std::size_t i = 0; i < dim_; ++i) psi[i] = Complex(0.0);
      for (int j = 0; j < built; ++j) {
        const Complex* vj = vec(j);
        for (std::size_t i = 0; i < dim_; ++i) psi[i] += u(j) * vj[i];
      }
      stats_.substeps += 1;
      return t + tau;
    }

    for (std::size_t i = 0; i < dim_; ++i) psi[i] = Complex(0.0);
    for (int j = 0; j < built; ++j) {
      const Complex* vj = vec(j);
      for (std::size_t i = 0; i < dim_; ++i) psi[i] += u(j) * vj[i];
    }
    t += tau;
    stats_.substeps += 1;
  }
  return dt;
}

}  // namespace quenchlab
