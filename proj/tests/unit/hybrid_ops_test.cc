//
// chemgym - Copyright 2026 The chemgym Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "chemgym/error.h"
#include "chemgym/hybrid_ops/ops.h"
#include "chemgym/random.h"
#include "support/op_oracles.h"

namespace chemgym {
namespace {

using namespace chemgym::test_support;

TEST(ShortConv, Identity) {
  Rng rng(1);
  Matrix h = random_matrix(12, 5, 1.0, rng).cwiseAbs();
  for (int t = 0; t < h.rows(); ++t)
    h.row(t) /= h.row(t).sum();
  Matrix o = shortconv_forward(h, identity_shortconv(5, 3));
  EXPECT_LE((o - h).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ShortConv, ZeroInput) {
  Rng rng(2);
  ShortConvParams p = random_shortconv(4, 3, rng);
  EXPECT_EQ(shortconv_forward(Matrix::Zero(6, 4), p).cwiseAbs().maxCoeff(),
            0.0);
}

TEST(ShortConv, MatchesScalarOracle) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    int L = 1 + static_cast<int>(rng.uniform_index(9));
    int d = 1 + static_cast<int>(rng.uniform_index(5));
    int k = 1 + static_cast<int>(rng.uniform_index(4));
    if (trial == 0) {
      L = 7;
      d = 4;
      k = 3;
    }
    ShortConvParams p = random_shortconv(d, k, rng);
    Matrix h = random_matrix(L, d, 1.0, rng);
    EXPECT_LE(rel_error(shortconv_forward(h, p),
                        shortconv_oracle(to_grid(h), p)),
              1e-12);
  }
}

TEST(ShortConv, Shapes) {
  Rng rng(4);
  ShortConvParams p = random_shortconv(4, 3, rng);
  EXPECT_THROW(shortconv_forward(Matrix::Zero(3, 5), p), ShapeMismatch);
  p.kernel = Matrix::Zero(3, 3);
  EXPECT_THROW(shortconv_forward(Matrix::Zero(3, 4), p), ShapeMismatch);
}

TEST(Attention, SingleToken) {
  Rng rng(5);
  GQAParams p = random_gqa(6, 4, 2, 3, rng);
  Matrix h = random_matrix(1, 6, 1.0, rng);
  Matrix v = h * p.w_v;
  Matrix concat(1, 12);
  for (int i = 0; i < 4; ++i)
    concat.middleCols(i * 3, 3) = v.middleCols((i / 2) * 3, 3);
  EXPECT_LE((gqa_forward(h, p) - concat * p.w_o).cwiseAbs().maxCoeff(),
            1e-14);
}

TEST(Attention, MatchesScalarOracle) {
  Rng rng(6);
  const int configs[][2] = { { 1, 1 }, { 2, 2 }, { 4, 2 }, { 4, 1 },
                             { 3, 3 }, { 6, 2 } };
  for (int trial = 0; trial < 50; ++trial) {
    auto [nq, nkv] = configs[trial % 6];
    int L = 1 + static_cast<int>(rng.uniform_index(8));
    int d = 2 + static_cast<int>(rng.uniform_index(5));
    int hd = 1 + static_cast<int>(rng.uniform_index(4));
    GQAParams p = random_gqa(d, nq, nkv, hd, rng);
    Matrix h = random_matrix(L, d, 1.5, rng);
    EXPECT_LE(rel_error(gqa_forward(h, p), attention_oracle(to_grid(h), p)),
              1e-12)
        << "trial " << trial;
  }
}

TEST(Attention, Shapes) {
  Rng rng(7);
  GQAParams p = random_gqa(4, 3, 2, 2, rng);
  EXPECT_THROW(gqa_forward(Matrix::Zero(2, 4), p), ShapeMismatch);
  p = random_gqa(4, 2, 2, 2, rng);
  EXPECT_THROW(gqa_forward(Matrix::Zero(2, 5), p), ShapeMismatch);
}

TEST(GradCheck, Linear) {
  Rng rng(8);
  Matrix w = random_matrix(4, 3, 1.0, rng);
  EXPECT_LE(grad_check(differentiable_linear(w),
                       random_matrix(5, 4, 1.0, rng), 1e-5),
            1e-8);
}

TEST(GradCheck, ShortConv) {
  Rng rng(9);
  for (int trial = 0; trial < 5; ++trial) {
    ShortConvParams p = random_shortconv(4, 3, rng);
    Matrix h = random_matrix(7, 4, 1.0, rng);
    EXPECT_LE(grad_check(differentiable(p), h, 1e-5, trial), 1e-4);
  }
}

TEST(GradCheck, Attention) {
  Rng rng(10);
  for (int trial = 0; trial < 5; ++trial) {
    GQAParams p = random_gqa(6, 4, 2, 3, rng);
    Matrix h = random_matrix(6, 6, 1.0, rng);
    EXPECT_LE(grad_check(differentiable(p), h, 1e-5, trial), 1e-4);
  }
}

TEST(GradCheck, SwiGLUAndNorm) {
  Rng rng(11);
  SwiGLUParams p = random_swiglu(4, 6, rng);
  Matrix h = random_matrix(5, 4, 1.0, rng);
  EXPECT_LE(grad_check(differentiable(p), h, 1e-5), 1e-4);

  Matrix gain = random_matrix(4, 1, 1.0, rng);
  Differentiable norm;
  norm.forward = [&](const Matrix &x) {
    return rmsnorm_forward(x, gain.col(0));
  };
  norm.backward = [&](const Matrix &x, const Matrix &g) {
    RMSNormGrads r = rmsnorm_backward(x, gain.col(0), g);
    return std::vector<Matrix> { r.d_input, Matrix(r.d_gain) };
  };
  norm.params = { &gain };
  EXPECT_LE(grad_check(norm, h, 1e-5), 1e-4);
}

TEST(Causality, BothOperators) {
  Rng rng(12);
  const int L = 64, d = 8;
  ShortConvParams sc = random_shortconv(d, 3, rng);
  GQAParams ga = random_gqa(d, 4, 2, 4, rng);
  Matrix h = random_matrix(L, d, 1.0, rng);
  Matrix base_sc = shortconv_forward(h, sc), base_ga = gqa_forward(h, ga);
  for (int t : { 0, 1, 17, 40, 63 }) {
    Matrix g = h;
    g.row(t) += random_matrix(1, d, 3.0, rng);
    Matrix o_sc = shortconv_forward(g, sc), o_ga = gqa_forward(g, ga);
    for (int u = 0; u < t; ++u) {
      EXPECT_EQ(o_sc.row(u), base_sc.row(u)) << t << " " << u;
      EXPECT_EQ(o_ga.row(u), base_ga.row(u)) << t << " " << u;
    }
    EXPECT_NE(o_sc.row(t), base_sc.row(t));
    EXPECT_NE(o_ga.row(t), base_ga.row(t));
  }
}

TEST(Block, ComposesAndStaysCausal) {
  Rng rng(13);
  const int d = 6;
  ShortConvParams sc = random_shortconv(d, 3, rng);
  SwiGLUParams ffn = random_swiglu(d, 12, rng);
  Eigen::VectorXd g1 = Eigen::VectorXd::Ones(d), g2 = Eigen::VectorXd::Ones(d);
  auto op = [&](const Matrix &x) { return shortconv_forward(x, sc); };
  Matrix h = random_matrix(10, d, 1.0, rng);
  Matrix o = block_forward(h, op, g1, g2, ffn);
  ASSERT_EQ(o.rows(), 10);
  Matrix g = h;
  g.row(9).setConstant(5.0);
  EXPECT_EQ(block_forward(g, op, g1, g2, ffn).topRows(9), o.topRows(9));
}

TEST(Timing, ShortConvLinearAttentionNot) {
  Rng rng(14);
  const int d = 16;
  ShortConvParams sc = random_shortconv(d, 3, rng);
  GQAParams ga = random_gqa(d, 2, 1, 8, rng);
  const std::vector<int> lengths { 256, 1024, 4096 };
  Matrix big = random_matrix(4096, d, 1.0, rng);
  auto conv = time_lengths([&](int L) {
    volatile double s = shortconv_forward(big.topRows(L), sc).sum();
    (void)s;
  }, lengths, 9);
  auto attn = time_lengths([&](int L) {
    volatile double s = gqa_forward(big.topRows(L), ga).sum();
    (void)s;
  }, lengths, 2);
  double conv_slope = loglog_slope(conv), attn_slope = loglog_slope(attn);
  RecordProperty("shortconv_slope", std::to_string(conv_slope));
  RecordProperty("attention_slope", std::to_string(attn_slope));
  EXPECT_LT(conv_slope, 1.5);
  EXPECT_GT(attn_slope, 1.5);
}

}  // namespace
}  // namespace chemgym
