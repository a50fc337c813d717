//
// chemgym - Copyright 2026 The chemgym Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <chrono>
#include <cmath>

#include "chemgym/error.h"
#include "chemgym/hybrid_ops/ops.h"

namespace chemgym {

Matrix rmsnorm_forward(const Matrix &x, const Eigen::VectorXd &gain,
                       double eps) {
  if (gain.size() != x.cols())
    throw ShapeMismatch("gain length differs from the hidden size");
  Eigen::VectorXd inv =
      ((x.array().square().rowwise().mean()) + eps).rsqrt().matrix();
  return inv.asDiagonal() * x * gain.asDiagonal();
}

RMSNormGrads rmsnorm_backward(const Matrix &x, const Eigen::VectorXd &gain,
                              const Matrix &d_out, double eps) {
  if (gain.size() != x.cols() || d_out.rows() != x.rows() ||
      d_out.cols() != x.cols())
    throw ShapeMismatch("RMSNorm shapes are inconsistent");
  const double d = static_cast<double>(x.cols());
  Eigen::VectorXd inv =
      ((x.array().square().rowwise().mean()) + eps).rsqrt().matrix();
  Matrix normed = inv.asDiagonal() * x;
  RMSNormGrads g;
  g.d_gain = d_out.cwiseProduct(normed).colwise().sum().transpose();
  Matrix d_normed = d_out * gain.asDiagonal();
  Eigen::VectorXd dot = d_normed.cwiseProduct(x).rowwise().sum();
  g.d_input = inv.asDiagonal() * d_normed;
  Eigen::VectorXd coef = inv.array().cube().matrix().cwiseProduct(dot) / d;
  g.d_input -= coef.asDiagonal() * x;
  return g;
}

SwiGLUParams random_swiglu(int d, int f, Rng &rng) {
  SwiGLUParams p;
  double s = 1.0 / std::sqrt(static_cast<double>(d));
  p.w1 = random_matrix(d, f, s, rng);
  p.w3 = random_matrix(d, f, s, rng);
  p.w2 = random_matrix(f, d, 1.0 / std::sqrt(static_cast<double>(f)), rng);
  return p;
}

namespace {

Matrix sigmoid(const Matrix &a) {
  return (1.0 + (-a.array()).exp()).inverse().matrix();
}

void check_swiglu(const Matrix &x, const SwiGLUParams &p) {
  if (p.w1.rows() != x.cols() || p.w3.rows() != x.cols() ||
      p.w1.cols() != p.w3.cols() || p.w2.rows() != p.w1.cols() ||
      p.w2.cols() != x.cols())
    throw ShapeMismatch("SwiGLU shapes are inconsistent");
}

}  // namespace

Matrix swiglu_forward(const Matrix &x, const SwiGLUParams &p) {
  check_swiglu(x, p);
  Matrix a = x * p.w1, b = x * p.w3;
  return a.cwiseProduct(sigmoid(a)).cwiseProduct(b) * p.w2;
}

SwiGLUGrads swiglu_backward(const Matrix &x, const SwiGLUParams &p,
                            const Matrix &d_out) {
  check_swiglu(x, p);
  Matrix a = x * p.w1, b = x * p.w3;
  Matrix s = sigmoid(a);
  Matrix silu = a.cwiseProduct(s);
  Matrix gated = silu.cwiseProduct(b);
  SwiGLUGrads g;
  g.d_w2 = gated.transpose() * d_out;
  Matrix d_gated = d_out * p.w2.transpose();
  Matrix d_b = d_gated.cwiseProduct(silu);
  Matrix d_silu = d_gated.cwiseProduct(b);
  Matrix d_a = d_silu.cwiseProduct(
      (s.array() * (1.0 + a.array() * (1.0 - s.array()))).matrix());
  g.d_w1 = x.transpose() * d_a;
  g.d_w3 = x.transpose() * d_b;
  g.d_input = d_a * p.w1.transpose() + d_b * p.w3.transpose();
  return g;
}

Matrix block_forward(const Matrix &h, const SequenceOp &op,
                     const Eigen::VectorXd &gain1,
                     const Eigen::VectorXd &gain2, const SwiGLUParams &ffn) {
  Matrix u = h + op(rmsnorm_forward(h, gain1));
  return u + swiglu_forward(rmsnorm_forward(u, gain2), ffn);
}

double loglog_slope(std::span<const TimingPoint> points) {
  if (points.size() < 2)
    throw DegenerateInput("slope needs at least two points");
  double n = static_cast<double>(points.size()), sx = 0, sy = 0, sxx = 0,
         sxy = 0;
  for (const auto &pt : points) {
    double x = std::log(static_cast<double>(pt.length));
    double y = std::log(pt.seconds);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double den = n * sxx - sx * sx;
  if (den == 0)
    throw DegenerateInput("all lengths are equal");
  return (n * sxy - sx * sy) / den;
}

std::vector<TimingPoint> time_lengths(const std::function<void(int)> &fn,
                                      std::span<const int> lengths,
                                      int repeats) {
  using clock = std::chrono::steady_clock;
  std::vector<TimingPoint> out;
  for (int L : lengths) {
    double best = 0;
    for (int r = 0; r < std::max(1, repeats); ++r) {
      auto t0 = clock::now();
      fn(L);
      double s = std::chrono::duration<double>(clock::now() - t0).count();
      if (r == 0 || s < best)
        best = s;
    }
    out.push_back({ L, std::max(best, 1e-9) });
  }
  return out;
}

}  // namespace chemgym
