// Copyright 2026 the quenchlab developers.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <Eigen/Dense>
#include <map>
#include <unsupported/Eigen/KroneckerProduct>

#include "quenchlab/errors.hpp"
#include "quenchlab/hamiltonian.hpp"
#include "quenchlab/rng.hpp"

using namespace quenchlab;

namespace {

// Dense tensor-product oracle: explicit ladder operators on the truncated
// product space, summed per bond, then projected onto the sector.
Eigen::MatrixXd dense_oracle(const ModelSpec& spec, const DisorderRealization& dis,
                             const SectorBasis& basis) {
  const int d1 = spec.cap + 1;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(d1, d1);
  for (int n = 1; n <= spec.cap; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  const Eigen::MatrixXd num = a.transpose() * a;
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(d1, d1);

  auto site_op = [&](const Eigen::MatrixXd& op, int site) {
    Eigen::MatrixXd full = Eigen::MatrixXd::Identity(1, 1);
    for (int l = 0; l < spec.sites; ++l) {
      const Eigen::MatrixXd& factor = (l == site) ? op : id;
      full = Eigen::kroneckerProduct(full, factor).eval();
    }
    return full;
  };

  const int full_dim = static_cast<int>(std::pow(d1, spec.sites));
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(full_dim, full_dim);
  auto hop = [&](int l, int m, double coupling) {
    const Eigen::MatrixXd adag_l = site_op(a.transpose(), l);
    const Eigen::MatrixXd a_m = site_op(a, m);
    h += coupling * (adag_l * a_m + (adag_l * a_m).transpose());
  };
  for (int l = 0; l + 1 < spec.sites; ++l) hop(l, l + 1, spec.j1[l]);
  for (int l = 0; l + 2 < spec.sites; ++l) hop(l, l + 2, spec.j2[l]);
  for (int l = 0; l < spec.sites; ++l) {
    const Eigen::MatrixXd n_l = site_op(num, l);
    h += (spec.omega + dis.offsets[l]) * n_l + 0.5 * spec.u * n_l * (n_l - site_op(id, l));
  }

  // Project to the sector: product-space index of a configuration.
  auto product_index = [&](std::span<const Occupation> c) {
    long idx = 0;
    for (int l = 0; l < spec.sites; ++l) idx = idx * d1 + c[l];
    return idx;
  };
  const auto n = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd sector(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      sector(i, j) = h(product_index(basis.state(i)), product_index(basis.state(j)));
  return sector;
}

}  // namespace

TEST_CASE("two-level hopping block") {
  auto spec = ModelSpec::uniform(2, 1, 0.7, 0.0, 0.0, 0.0);
  spec.j2.clear();
  spec.j2.resize(0);
  SectorBasis basis(2, 1, 1);
  DisorderRealization dis{0.0, {0.0, 0.0}, 0};
  auto h = build_hamiltonian(spec, dis, basis);
  auto m = h.to_dense();
  CHECK(m(0, 0) == doctest::Approx(0.0));
  CHECK(m(0, 1) == doctest::Approx(0.7));
  CHECK(m(1, 0) == doctest::Approx(0.7));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  CHECK(es.eigenvalues()(0) == doctest::Approx(-0.7));
  CHECK(es.eigenvalues()(1) == doctest::Approx(0.7));
}

TEST_CASE("single site with two bosons reads off the diagonal") {
  auto spec = ModelSpec::uniform(1, 2, 0.0, 0.0, -22.0, 0.0);
  SectorBasis basis(1, 2, 2);
  DisorderRealization dis{1.0, {0.35}, 0};
  auto h = build_hamiltonian(spec, dis, basis);
  REQUIRE(h.dim() == 1);
  CHECK(h.diagonal()[0] == doctest::Approx(2 * 0.35 - 22.0));
}

TEST_CASE("matches the dense tensor-product oracle") {
  RngStream rng(20260810);
  for (int rep = 0; rep < 3; ++rep) {
    ModelSpec spec = ModelSpec::uniform(4, 2);
    for (auto& j : spec.j1) j = rng.uniform(0.5, 1.5);
    for (auto& j : spec.j2) j = rng.uniform(0.0, 0.3);
    spec.u = rng.uniform(-25.0, -5.0);
    spec.omega = rng.uniform(-1.0, 1.0);
    SectorBasis basis(4, 2, 2);
    auto dis = sample_disorder(3.0, 4, rng.next_u64());
    auto h = build_hamiltonian(spec, dis, basis);
    auto dense = h.to_dense();
    auto oracle = dense_oracle(spec, dis, basis);
    CHECK((dense - oracle).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("hermiticity holds entry by entry for random realizations") {
  RngStream rng(4711);
  for (int rep = 0; rep < 4; ++rep) {
    ModelSpec spec = ModelSpec::uniform(6, 3);
    for (auto& j : spec.j1) j = rng.uniform(0.2, 2.0);
    for (auto& j : spec.j2) j = rng.uniform(-0.5, 0.5);
    spec.u = rng.uniform(-30.0, 30.0);
    SectorBasis basis(6, 3, 3);
    auto dis = sample_disorder(rng.uniform(0.0, 7.0), 6, rng.next_u64());
    auto h = build_hamiltonian(spec, dis, basis);
    std::map<std::pair<std::size_t, std::size_t>, double> entries;
    for (auto [r, c, v] : h.triplets()) entries[{r, c}] += v;
    for (auto& [rc, v] : entries) {
      auto it = entries.find({rc.second, rc.first});
      REQUIRE(it != entries.end());
      CHECK(v == doctest::Approx(it->second).epsilon(1e-14));
    }
  }
}

TEST_CASE("omega adds a pure diagonal shift of omega * n_total") {
  SectorBasis basis(5, 3, 2);
  auto dis = sample_disorder(2.0, 5, 99);
  auto spec0 = ModelSpec::uniform(5, 2);
  auto spec1 = spec0;
  spec1.omega = 1.7;
  auto m0 = build_hamiltonian(spec0, dis, basis).to_dense();
  auto m1 = build_hamiltonian(spec1, dis, basis).to_dense();
  Eigen::MatrixXd expected =
      m0 + 1.7 * 3.0 * Eigen::MatrixXd::Identity(m0.rows(), m0.cols());
  CHECK((m1 - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("row sparsity stays within the hopping budget") {
  const int sites = 6;
  SectorBasis basis(sites, 3, 3);
  auto spec = ModelSpec::uniform(sites, 3);
  auto dis = sample_disorder(1.0, sites, 7);
  auto h = build_hamiltonian(spec, dis, basis);
  CHECK(h.max_row_nnz() <= static_cast<std::size_t>(2 * (sites - 1) + 2 * (sites - 2) + 1));
}

TEST_CASE("basis/spec mismatch is rejected") {
  auto spec = ModelSpec::uniform(4, 3);
  SectorBasis basis(5, 2, 3);
  auto dis = sample_disorder(1.0, 4, 1);
  CHECK_THROWS_AS(build_hamiltonian(spec, dis, basis), ParameterError);
}
