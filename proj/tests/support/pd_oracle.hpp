// Copyright 2026 The fpif Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Random fully linear primal-dual instances and the block linear system
// they reduce to.

#pragma once

#include <random>
#include <vector>

#include "fpif/primal_dual.hpp"
#include "fpif/random.hpp"
#include "support/oracles.hpp"

namespace fpif::testing {

struct LinearBlock {
  Matrix b;  // B_i
  Matrix d;  // D_i (strongly monotone)
  Matrix l;
  Matrix pv;
  Vector rhs;
};

struct LinearInstance {
  Matrix a;
  Matrix c;
  Matrix pu;
  Vector z;
  std::vector<LinearBlock> blocks;
};

inline LinearInstance random_instance(Rng& rng, bool full_subspaces) {
  std::uniform_int_distribution<int> dim(2, 6);
  std::uniform_int_distribution<int> count(1, 2);
  LinearInstance out;
  const Index n = dim(rng);
  out.a = random_spd(rng, n, 0.2, 1.0) + random_skew(rng, n);
  out.c = random_spd(rng, n, 0.2, 1.0);
  out.pu = full_subspaces ? Matrix::Identity(n, n)
                          : random_subspace(rng, Space(n), 1 + dim(rng) % n).matrix();
  out.z = random_gaussian(rng, n);
  const int m = count(rng);
  for (int i = 0; i < m; ++i) {
    const Index g = dim(rng);
    LinearBlock blk;
    blk.b = random_spd(rng, g, 0.2, 1.0);
    blk.d = random_spd(rng, g, 0.5, 1.0);
    blk.l = random_matrix(rng, g, n);
    blk.pv = full_subspaces ? Matrix::Identity(g, g)
                            : random_subspace(rng, Space(g), 1 + dim(rng) % g).matrix();
    blk.rhs = random_gaussian(rng, g);
    out.blocks.push_back(blk);
  }
  return out;
}

inline PDProblem build(const LinearInstance& inst) {
  const Index n = inst.a.rows();
  const Space h(n);
  PDProblem prob{catalog::linear(h, inst.a), Projector(h, inst.pu),
                 lipschitz::linear(h, inst.c), inst.z, {}};
  for (const auto& blk : inst.blocks) {
    const Index g = blk.b.rows();
    const Space gs(g);
    const Projector v(gs, blk.pv);
    const auto cert = certify_coercive_linear(gs, blk.d);
    const auto dp = partial_inverse_map(lipschitz::linear(gs, blk.d), cert, v.complement());
    prob.blocks.push_back(pd_block(catalog::linear(gs, blk.b), dp,
                                   LinearMap(Space(n), gs, blk.l), v, blk.rhs));
  }
  return prob;
}

// Solution of the linear product system: w in W with P_W (K w + c) = 0,
// K = [[A + C, L^* P_V], [-P_V L, B_{V^perp} + D_{V^perp}]], c = (-z, P_V b).
struct OracleSolution {
  Vector x;
  std::vector<Vector> u;
};

inline OracleSolution oracle(const LinearInstance& inst) {
  const Index n = inst.a.rows();
  Index total = n;
  for (const auto& blk : inst.blocks) total += blk.b.rows();
  Matrix k = Matrix::Zero(total, total);
  Matrix pw = Matrix::Zero(total, total);
  Vector c = Vector::Zero(total);
  k.topLeftCorner(n, n) = inst.a + inst.c;
  pw.topLeftCorner(n, n) = inst.pu;
  c.head(n) = -inst.z;
  Index off = n;
  for (const auto& blk : inst.blocks) {
    const Index g = blk.b.rows();
    const Matrix q = Matrix::Identity(g, g) - blk.pv;
    k.block(off, off, g, g) = testing::partial_inverse_matrix(blk.b, q) + testing::partial_inverse_matrix(blk.d, q);
    k.block(0, off, n, g) = blk.l.transpose() * blk.pv;
    k.block(off, 0, g, n) = -blk.pv * blk.l;
    pw.block(off, off, g, g) = blk.pv;
    c.segment(off, g) = blk.pv * blk.rhs;
    off += g;
  }
  const Matrix basis = testing::range_basis(pw);
  const Vector xi = testing::qr_solve(basis.transpose() * k * basis, -basis.transpose() * c);
  const Vector w = basis * xi;
  OracleSolution out{w.head(n), {}};
  off = n;
  for (const auto& blk : inst.blocks) {
    out.u.push_back(w.segment(off, blk.b.rows()));
    off += blk.b.rows();
  }
  return out;
}

}  // namespace fpif::testing
