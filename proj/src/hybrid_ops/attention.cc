//
// chemgym - Copyright 2026 The chemgym Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <cmath>
#include <string>

#include "chemgym/error.h"
#include "chemgym/hybrid_ops/ops.h"

namespace chemgym {

void GQAParams::validate() const {
  if (n_q_heads < 1 || n_kv_heads < 1 || head_dim < 1)
    throw ShapeMismatch("head counts and head_dim must be positive");
  if (n_q_heads % n_kv_heads != 0)
    throw ShapeMismatch("n_q_heads must be divisible by n_kv_heads");
  const auto d = w_q.rows();
  if (w_q.cols() != n_q_heads * head_dim ||
      w_k.rows() != d || w_k.cols() != n_kv_heads * head_dim ||
      w_v.rows() != d || w_v.cols() != n_kv_heads * head_dim ||
      w_o.rows() != n_q_heads * head_dim || w_o.cols() != d)
    throw ShapeMismatch("attention projections are inconsistent");
}

GQAParams random_gqa(int d, int n_q, int n_kv, int head_dim, Rng &rng) {
  GQAParams p;
  p.n_q_heads = n_q;
  p.n_kv_heads = n_kv;
  p.head_dim = head_dim;
  double s = 1.0 / std::sqrt(static_cast<double>(d));
  p.w_q = random_matrix(d, n_q * head_dim, s, rng);
  p.w_k = random_matrix(d, n_kv * head_dim, s, rng);
  p.w_v = random_matrix(d, n_kv * head_dim, s, rng);
  p.w_o = random_matrix(n_q * head_dim, d, 1.0 / std::sqrt(n_q * head_dim),
                        rng);
  return p;
}

namespace {

// Row-wise causal softmax of q k^T * scale.
Matrix causal_probs(const Matrix &q, const Matrix &k, double scale) {
  const auto L = q.rows();
  Matrix s = (q * k.transpose()) * scale;
  for (Eigen::Index t = 0; t < L; ++t) {
    double m = s.row(t).head(t + 1).maxCoeff();
    double z = 0;
    for (Eigen::Index u = 0; u <= t; ++u) {
      s(t, u) = std::exp(s(t, u) - m);
      z += s(t, u);
    }
    s.row(t).head(t + 1) /= z;
    s.row(t).tail(L - t - 1).setZero();
  }
  return s;
}

void check(const Matrix &h, const GQAParams &p) {
  p.validate();
  if (h.cols() != p.dim())
    throw ShapeMismatch("input has " + std::to_string(h.cols()) +
                        " columns, expected " + std::to_string(p.dim()));
}

}  // namespace

Matrix gqa_forward(const Matrix &h, const GQAParams &p) {
  check(h, p);
  const int hd = p.head_dim;
  const int group = p.n_q_heads / p.n_kv_heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(hd));
  Matrix q = h * p.w_q, k = h * p.w_k, v = h * p.w_v;
  Matrix o(h.rows(), p.n_q_heads * hd);
  for (int i = 0; i < p.n_q_heads; ++i) {
    int g = i / group;
    Matrix probs = causal_probs(q.middleCols(i * hd, hd),
                                k.middleCols(g * hd, hd), scale);
    o.middleCols(i * hd, hd) = probs * v.middleCols(g * hd, hd);
  }
  return o * p.w_o;
}

GQAGrads gqa_backward(const Matrix &h, const GQAParams &p,
                      const Matrix &d_out) {
  check(h, p);
  if (d_out.rows() != h.rows() || d_out.cols() != p.dim())
    throw ShapeMismatch("output gradient has the wrong shape");
  const int hd = p.head_dim;
  const int group = p.n_q_heads / p.n_kv_heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(hd));
  Matrix q = h * p.w_q, k = h * p.w_k, v = h * p.w_v;
  Matrix o(h.rows(), p.n_q_heads * hd);
  Matrix d_o = d_out * p.w_o.transpose();
  Matrix d_q = Matrix::Zero(q.rows(), q.cols());
  Matrix d_k = Matrix::Zero(k.rows(), k.cols());
  Matrix d_v = Matrix::Zero(v.rows(), v.cols());
  for (int i = 0; i < p.n_q_heads; ++i) {
    int g = i / group;
    auto qi = q.middleCols(i * hd, hd);
    auto kg = k.middleCols(g * hd, hd);
    auto vg = v.middleCols(g * hd, hd);
    Matrix probs = causal_probs(qi, kg, scale);
    o.middleCols(i * hd, hd) = probs * vg;
    auto d_oi = d_o.middleCols(i * hd, hd);
    Matrix d_p = d_oi * vg.transpose();
    d_v.middleCols(g * hd, hd) += probs.transpose() * d_oi;
    Eigen::VectorXd row = d_p.cwiseProduct(probs).rowwise().sum();
    Matrix d_s = probs.cwiseProduct(d_p.colwise() - row) * scale;
    d_q.middleCols(i * hd, hd) += d_s * kg;
    d_k.middleCols(g * hd, hd) += d_s.transpose() * qi;
  }
  GQAGrads out;
  out.d_w_o = o.transpose() * d_out;
  out.d_w_q = h.transpose() * d_q;
  out.d_w_k = h.transpose() * d_k;
  out.d_w_v = h.transpose() * d_v;
  out.d_input = d_q * p.w_q.transpose() + d_k * p.w_k.transpose() +
                d_v * p.w_v.transpose();
  return out;
}

}  // namespace chemgym
