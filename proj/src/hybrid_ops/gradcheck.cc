//
// chemgym - Copyright 2026 The chemgym Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cmath>

#include "chemgym/error.h"
#include "chemgym/hybrid_ops/ops.h"

namespace chemgym {

Differentiable differentiable(ShortConvParams &p) {
  Differentiable d;
  d.forward = [&p](const Matrix &h) { return shortconv_forward(h, p); };
  d.backward = [&p](const Matrix &h, const Matrix &g) {
    ShortConvGrads r = shortconv_backward(h, p, g);
    return std::vector<Matrix> { r.d_input, r.d_w_in, r.d_w_out, r.d_kernel };
  };
  d.params = { &p.w_in, &p.w_out, &p.kernel };
  return d;
}

Differentiable differentiable(GQAParams &p) {
  Differentiable d;
  d.forward = [&p](const Matrix &h) { return gqa_forward(h, p); };
  d.backward = [&p](const Matrix &h, const Matrix &g) {
    GQAGrads r = gqa_backward(h, p, g);
    return std::vector<Matrix> { r.d_input, r.d_w_q, r.d_w_k, r.d_w_v,
                                 r.d_w_o };
  };
  d.params = { &p.w_q, &p.w_k, &p.w_v, &p.w_o };
  return d;
}

Differentiable differentiable(SwiGLUParams &p) {
  Differentiable d;
  d.forward = [&p](const Matrix &h) { return swiglu_forward(h, p); };
  d.backward = [&p](const Matrix &h, const Matrix &g) {
    SwiGLUGrads r = swiglu_backward(h, p, g);
    return std::vector<Matrix> { r.d_input, r.d_w1, r.d_w3, r.d_w2 };
  };
  d.params = { &p.w1, &p.w3, &p.w2 };
  return d;
}

Differentiable differentiable_linear(Matrix &w) {
  Differentiable d;
  d.forward = [&w](const Matrix &h) -> Matrix { return h * w; };
  d.backward = [&w](const Matrix &h, const Matrix &g) {
    return std::vector<Matrix> { g * w.transpose(), h.transpose() * g };
  };
  d.params = { &w };
  return d;
}

double grad_check(const Differentiable &op, const Matrix &input,
                  double epsilon, std::uint64_t seed) {
  if (!(epsilon > 0))
    throw ConfigError("epsilon must be positive");
  Matrix out = op.forward(input);
  Rng rng(seed);
  Matrix r = random_matrix(static_cast<int>(out.rows()),
                           static_cast<int>(out.cols()), 1.0, rng);
  auto loss = [&](const Matrix &h) {
    return op.forward(h).cwiseProduct(r).sum();
  };
  std::vector<Matrix> analytic = op.backward(input, r);
  if (analytic.size() != op.params.size() + 1)
    throw ShapeMismatch("backward returned the wrong number of gradients");

  double worst = 0;
  auto compare = [&](double a, double n) {
    double den = std::max({ std::abs(a), std::abs(n), 1e-6 });
    worst = std::max(worst, std::abs(a - n) / den);
  };
  Matrix h = input;
  for (Eigen::Index i = 0; i < h.size(); ++i) {
    double keep = h.data()[i];
    h.data()[i] = keep + epsilon;
    double up = loss(h);
    h.data()[i] = keep - epsilon;
    double down = loss(h);
    h.data()[i] = keep;
    compare(analytic[0].data()[i], (up - down) / (2 * epsilon));
  }
  for (std::size_t k = 0; k < op.params.size(); ++k) {
    Matrix &w = *op.params[k];
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      double keep = w.data()[i];
      w.data()[i] = keep + epsilon;
      double up = loss(input);
      w.data()[i] = keep - epsilon;
      double down = loss(input);
      w.data()[i] = keep;
      compare(analytic[k + 1].data()[i], (up - down) / (2 * epsilon));
    }
  }
  return worst;
}

}  // namespace chemgym
