// Copyright 2026 the quenchlab developers.
// SPDX-License-Identifier: Apache-2.0

#ifndef QUENCHLAB_HAMILTONIAN_HPP
#define QUENCHLAB_HAMILTONIAN_HPP

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "quenchlab/fock_basis.hpp"

namespace quenchlab {

/// Couplings and on-site terms of the chain, all in units of the mean
/// nearest-neighbor hopping J1. Per-bond values default to uniform averages
/// since only averages are published for the device; configs may override.
struct ModelSpec {
  int sites = 12;
  int cap = 3;                  // per-site occupation truncation
  std::vector<double> j1;       // sites-1 nearest-neighbor hoppings
  std::vector<double> j2;       // sites-2 next-nearest hoppings
  double u = -22.0;             // on-site interaction
  double omega = 0.0;           // uniform frequency offset (pure diagonal shift)

  static ModelSpec uniform(int sites, int cap, double j1 = 1.0,
                           double j2 = 1.2 / 11.5, double u = -22.0,
                           double omega = 0.0);
  void validate() const;
};

/// One sampled on-site offset vector h_l, uniform in [-h, h], with the seed
/// that reproduces it.
struct DisorderRealization {
  double strength = 0.0;
  std::vector<double> offsets;
  std::uint64_t seed = 0;
};

/// Draws `sites` independent offsets uniformly from [-h, h]; identical
/// (h, sites, seed) triples give bit-identical vectors.
DisorderRealization sample_disorder(double strength, int sites, std::uint64_t seed);

/// Sector-restricted Hermitian matrix with real entries, stored as CSR
/// off-diagonal plus a dense diagonal. All Bose-Hubbard terms are real in the
/// Fock basis, and the apply kernels mix the real matrix with complex state
/// blocks (the hot loop of the whole code base).
class SparseHermitian {
 public:
  using Complex = std::complex<double>;

  std::size_t dim() const { return diag_.size(); }
  const std::vector<double>& diagonal() const { return diag_; }

  /// y = H x for a single complex vector.
  void apply(const Complex* x, Complex* y) const;

  /// Y = H X for `k` interleaved vectors: X[i*k + s] is component i of state
  /// s. Reads the matrix once per block, which is what makes multi-state
  /// sweeps memory-efficient.
  void apply_block(const Complex* x, Complex* y, int k) const;

  /// (row, col, value) of every stored entry including the diagonal.
  std::vector<std::tuple<std::size_t, std::size_t, double>> triplets() const;

  Eigen::MatrixXd to_dense() const;

  /// Gershgorin bounds [lo, hi] containing the spectrum.
  std::pair<double, double> gershgorin_interval() const;

  std::size_t max_row_nnz() const;

  /// Assembles from off-diagonal triplets (upper or both halves as given; no
  /// symmetrization is performed) and a diagonal.
  static SparseHermitian from_parts(
      std::vector<std::tuple<std::size_t, std::size_t, double>> offdiag,
      std::vector<double> diag);

 private:
  std::vector<std::int32_t> row_ptr_;
  std::vector<std::int32_t> col_;
  std::vector<double> val_;
  std::vector<double> diag_;
};

/// Assembles the sector-restricted chain Hamiltonian: hopping
/// <c'|a+_l a_{l+d}|c> = sqrt((c_l+1) c_{l+d}) for d in {1,2} plus Hermitian
/// conjugates, and diagonal sum_l (omega+h_l) c_l + (u/2) c_l (c_l - 1).
SparseHermitian build_hamiltonian(const ModelSpec& spec,
                                  const DisorderRealization& disorder,
                                  const SectorBasis& basis);

}  // namespace quenchlab

#endif
