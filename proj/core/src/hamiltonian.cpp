// Copyright 2026 the quenchlab developers.
// SPDX-License-Identifier: Apache-2.0

#include "quenchlab/hamiltonian.hpp"

#include <algorithm>
#include <cmath>

#include "quenchlab/errors.hpp"
#include "quenchlab/rng.hpp"

namespace quenchlab {

ModelSpec ModelSpec::uniform(int sites, int cap, double j1, double j2, double u,
                             double omega) {
  ModelSpec spec;
  spec.sites = sites;
  spec.cap = cap;
  spec.j1.assign(static_cast<std::size_t>(std::max(0, sites - 1)), j1);
  spec.j2.assign(static_cast<std::size_t>(std::max(0, sites - 2)), j2);
  spec.u = u;
  spec.omega = omega;
  spec.validate();
  return spec;
}

void ModelSpec::validate() const {
  if (sites < 1) throw ParameterError("ModelSpec: sites must be >= 1");
  if (cap < 1) throw ParameterError("ModelSpec: cap must be >= 1");
  if (static_cast<int>(j1.size()) != std::max(0, sites - 1))
    throw ParameterError("ModelSpec: j1 must have sites-1 entries");
  if (static_cast<int>(j2.size()) != std::max(0, sites - 2))
    throw ParameterError("ModelSpec: j2 must have sites-2 entries");
  if (!std::isfinite(u) || !std::isfinite(omega))
    throw ParameterError("ModelSpec: u and omega must be finite");
  for (double v : j1)
    if (!std::isfinite(v)) throw ParameterError("ModelSpec: non-finite j1 entry");
  for (double v : j2)
    if (!std::isfinite(v)) throw ParameterError("ModelSpec: non-finite j2 entry");
}

DisorderRealization sample_disorder(double strength, int sites, std::uint64_t seed) {
  if (strength < 0.0) throw ParameterError("sample_disorder: strength must be >= 0");
  if (sites < 1) throw ParameterError("sample_disorder: sites must be >= 1");
  DisorderRealization d;
  d.strength = strength;
  d.seed = seed;
  d.offsets.resize(static_cast<std::size_t>(sites));
  RngStream rng(seed);
  for (auto& h : d.offsets) h = rng.uniform(-strength, strength);
  return d;
}

void SparseHermitian::apply(const Complex* x, Complex* y) const {
  apply_block(x, y, 1);
}

void SparseHermitian::apply_block(const Complex* x, Complex* y, int k) const {
  const std::size_t n = dim();
  for (std::size_t r = 0; r < n; ++r) {
    Complex* yr = y + r * static_cast<std::size_t>(k);
    const double d = diag_[r];
    const Complex* xr = x + r * static_cast<std::size_t>(k);
    for (int s = 0; s < k; ++s) yr[s] = d * xr[s];
    for (std::int32_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) {
      const double a = val_[static_cast<std::size_t>(p)];
      const Complex* xc =
          x + static_cast<std::size_t>(col_[static_cast<std::size_t>(p)]) * k;
      for (int s = 0; s < k; ++s) yr[s] += a * xc[s];
    }
  }
}

std::vector<std::tuple<std::size_t, std::size_t, double>> SparseHermitian::triplets()
    const {
  std::vector<std::tuple<std::size_t, std::size_t, double>> out;
  for (std::size_t r = 0; r < dim(); ++r) {
    if (diag_[r] != 0.0) out.emplace_back(r, r, diag_[r]);
    for (std::int32_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p)
      out.emplace_back(r, static_cast<std::size_t>(col_[static_cast<std::size_t>(p)]),
                       val_[static_cast<std::size_t>(p)]);
  }
  return out;
}

Eigen::MatrixXd SparseHermitian::to_dense() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim()),
                                            static_cast<Eigen::Index>(dim()));
  for (auto [r, c, v] : triplets()) {
    if (r == c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
    else
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) += v;
  }
  return m;
}

std::pair<double, double> SparseHermitian::gershgorin_interval() const {
  double lo = 0.0, hi = 0.0;
  bool first = true;
  for (std::size_t r = 0; r < dim(); ++r) {
    double radius = 0.0;
    for (std::int32_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p)
      radius += std::abs(val_[static_cast<std::size_t>(p)]);
    const double a = diag_[r] - radius, b = diag_[r] + radius;
    if (first) {
      lo = a;
      hi = b;
      first = false;
    } else {
      lo = std::min(lo, a);
      hi = std::max(hi, b);
    }
  }
  return {lo, hi};
}

std::size_t SparseHermitian::max_row_nnz() const {
  std::size_t m = 0;
  for (std::size_t r = 0; r < dim(); ++r)
    m = std::max(m, static_cast<std::size_t>(row_ptr_[r + 1] - row_ptr_[r]) + 1);
  return m;
}

SparseHermitian SparseHermitian::from_parts(
    std::vector<std::tuple<std::size_t, std::size_t, double>> offdiag,
    std::vector<double> diag) {
  SparseHermitian h;
  h.diag_ = std::move(diag);
  const std::size_t n = h.diag_.size();
  std::sort(offdiag.begin(), offdiag.end());
  h.row_ptr_.assign(n + 1, 0);
  for (auto& [r, c, v] : offdiag) {
    if (r >= n || c >= n) throw ParameterError("SparseHermitian: triplet out of range");
    h.row_ptr_[r + 1] += 1;
  }
  for (std::size_t r = 0; r < n; ++r) h.row_ptr_[r + 1] += h.row_ptr_[r];
  h.col_.resize(offdiag.size());
  h.val_.resize(offdiag.size());
  for (std::size_t i = 0; i < offdiag.size(); ++i) {
    h.col_[i] = static_cast<std::int32_t>(std::get<1>(offdiag[i]));
    h.val_[i] = std::get<2>(offdiag[i]);
  }
  return h;
}

SparseHermitian build_hamiltonian(const ModelSpec& spec,
                                  const DisorderRealization& disorder,
                                  const SectorBasis& basis) {
  spec.validate();
  if (basis.sites() != spec.sites)
    throw ParameterError("build_hamiltonian: basis/spec site mismatch");
  if (basis.cap() != spec.cap)
    throw ParameterError("build_hamiltonian: basis/spec cap mismatch");
  if (static_cast<int>(disorder.offsets.size()) != spec.sites)
    throw ParameterError("build_hamiltonian: disorder length mismatch");

  const int n_sites = spec.sites;
  const std::size_t n = basis.size();
  std::vector<double> diag(n, 0.0);
  std::vector<std::tuple<std::size_t, std::size_t, double>> offdiag;
  offdiag.reserve(n * static_cast<std::size_t>(4 * n_sites - 6 > 0 ? 4 * n_sites - 6 : 1));

  Configuration target(static_cast<std::size_t>(n_sites));
  for (std::size_t col = 0; col < n; ++col) {
    auto c = basis.state(col);
    double d = 0.0;
    for (int l = 0; l < n_sites; ++l) {
      const double nl = c[static_cast<std::size_t>(l)];
      d += (spec.omega + disorder.offsets[static_cast<std::size_t>(l)]) * nl +
           0.5 * spec.u * nl * (nl - 1.0);
    }
    diag[col] = d;

    // Hopping a+_from a_to, generated in both directions per bond so the
    // matrix comes out symmetric without explicit mirroring.
    auto emit = [&](int from, int to, double coupling) {
      if (c[static_cast<std::size_t>(to)] == 0) return;
      if (c[static_cast<std::size_t>(from)] >= basis.cap()) return;
      std::copy(c.begin(), c.end(), target.begin());
      target[static_cast<std::size_t>(from)] += 1;
      target[static_cast<std::size_t>(to)] -= 1;
      const auto row = basis.state_index(target);
      if (!row)  // cannot happen: hopping conserves the total
        throw SolverError("build_hamiltonian: hop left the sector");
      const double amp =
          coupling * std::sqrt((c[static_cast<std::size_t>(from)] + 1.0) *
                               c[static_cast<std::size_t>(to)]);
      offdiag.emplace_back(*row, col, amp);
    };
    for (int l = 0; l + 1 < n_sites; ++l) {
      emit(l, l + 1, spec.j1[static_cast<std::size_t>(l)]);
      emit(l + 1, l, spec.j1[static_cast<std::size_t>(l)]);
    }
    for (int l = 0; l + 2 < n_sites; ++l) {
      emit(l, l + 2, spec.j2[static_cast<std::size_t>(l)]);
      emit(l + 2, l, spec.j2[static_cast<std::size_t>(l)]);
    }
  }
  return SparseHermitian::from_parts(std::move(offdiag), std::move(diag));
}

}  // namespace quenchlab
