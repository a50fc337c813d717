//
// chemgym - Copyright 2026 The chemgym Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMGYM_HYBRID_OPS_OPS_H_
#define CHEMGYM_HYBRID_OPS_OPS_H_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "chemgym/random.h"

namespace chemgym {

// Sequences are L x d row-major by position: row t is the hidden state at t.
using Matrix = Eigen::MatrixXd;

// Entries uniform in [-scale, scale).
Matrix random_matrix(int rows, int cols, double scale, Rng &rng);

/// Gated short convolution.
///
///   [B | C | h~] = h W_in          (three d-wide column blocks, in this order)
///   x = B .* h~
///   y[t, c] = sum_j kernel(c, j) x[t - j, c]   (causal, zero before t = 0)
///   o = (C .* y) W_out
struct ShortConvParams {
  Matrix w_in;    // d x 3d
  Matrix w_out;   // d x d
  Matrix kernel;  // d x k; column j weighs lag j

  int dim() const { return static_cast<int>(w_out.rows()); }
  int width() const { return static_cast<int>(kernel.cols()); }
  // Throws ShapeMismatch.
  void validate() const;
};

struct ShortConvGrads {
  Matrix d_input;
  Matrix d_w_in, d_w_out, d_kernel;
};

ShortConvParams random_shortconv(int d, int k, Rng &rng);
// W_in = [1 | 1 | I], unit impulse at lag 0, W_out = I. On inputs whose
// rows sum to one this gives B = C = 1 and h~ = h, so o = h.
ShortConvParams identity_shortconv(int d, int k = 3);

Matrix shortconv_forward(const Matrix &h, const ShortConvParams &p);
ShortConvGrads shortconv_backward(const Matrix &h, const ShortConvParams &p,
                                  const Matrix &d_out);

/// Causal grouped-query attention. Query head i reads key/value head
/// i / (n_q / n_kv). Scores are scaled by 1/sqrt(head_dim).
struct GQAParams {
  int n_q_heads = 1;
  int n_kv_heads = 1;
  int head_dim = 1;
  Matrix w_q;  // d x (n_q * head_dim)
  Matrix w_k;  // d x (n_kv * head_dim)
  Matrix w_v;  // d x (n_kv * head_dim)
  Matrix w_o;  // (n_q * head_dim) x d

  int dim() const { return static_cast<int>(w_q.rows()); }
  // Throws ShapeMismatch.
  void validate() const;
};

struct GQAGrads {
  Matrix d_input;
  Matrix d_w_q, d_w_k, d_w_v, d_w_o;
};

GQAParams random_gqa(int d, int n_q, int n_kv, int head_dim, Rng &rng);

Matrix gqa_forward(const Matrix &h, const GQAParams &p);
GQAGrads gqa_backward(const Matrix &h, const GQAParams &p,
                      const Matrix &d_out);

// Per-row x / sqrt(mean(x^2) + eps) .* gain, without centering.
Matrix rmsnorm_forward(const Matrix &x, const Eigen::VectorXd &gain,
                       double eps = 1e-6);
struct RMSNormGrads {
  Matrix d_input;
  Eigen::VectorXd d_gain;
};
RMSNormGrads rmsnorm_backward(const Matrix &x, const Eigen::VectorXd &gain,
                              const Matrix &d_out, double eps = 1e-6);

// (silu(x W1) .* (x W3)) W2.
struct SwiGLUParams {
  Matrix w1, w3;  // d x f
  Matrix w2;      // f x d
};
struct SwiGLUGrads {
  Matrix d_input;
  Matrix d_w1, d_w3, d_w2;
};
SwiGLUParams random_swiglu(int d, int f, Rng &rng);
Matrix swiglu_forward(const Matrix &x, const SwiGLUParams &p);
SwiGLUGrads swiglu_backward(const Matrix &x, const SwiGLUParams &p,
                            const Matrix &d_out);

// Pre-norm block: u = h + op(norm(h)); out = u + swiglu(norm(u)).
using SequenceOp = std::function<Matrix(const Matrix &)>;
Matrix block_forward(const Matrix &h, const SequenceOp &op,
                     const Eigen::VectorXd &gain1,
                     const Eigen::VectorXd &gain2, const SwiGLUParams &ffn);

/// A differentiable map for gradient checking. `backward` returns the
/// gradient of the input followed by one gradient per entry of `params`, in
/// order, for the loss sum(d_out .* forward(h)).
struct Differentiable {
  std::function<Matrix(const Matrix &)> forward;
  std::function<std::vector<Matrix>(const Matrix &, const Matrix &)> backward;
  std::vector<Matrix *> params;
};

Differentiable differentiable(ShortConvParams &p);
Differentiable differentiable(GQAParams &p);
Differentiable differentiable(SwiGLUParams &p);
// h W; exact linear gradients.
Differentiable differentiable_linear(Matrix &w);

/// Compares the analytic gradients of sum(R .* op(h)), R drawn from `seed`,
/// with central differences over every parameter and input entry. Returns
/// the largest |a - n| / max(|a|, |n|, 1e-6).
double grad_check(const Differentiable &op, const Matrix &input,
                  double epsilon, std::uint64_t seed = 0);

struct TimingPoint {
  int length;
  double seconds;
};

// Least-squares slope of log(seconds) against log(length).
double loglog_slope(std::span<const TimingPoint> points);

// Best-of-`repeats` wall time of fn(L) for each length.
std::vector<TimingPoint> time_lengths(const std::function<void(int)> &fn,
                                      std::span<const int> lengths,
                                      int repeats = 3);

}  // namespace chemgym

#endif  // CHEMGYM_HYBRID_OPS_OPS_H_
