//
// chemgym - Copyright 2026 The chemgym Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemgym/hybrid_ops/ops.h"

#include <string>

#include "chemgym/error.h"

namespace chemgym {

namespace {

void check_input(const Matrix &h, int d) {
  if (h.cols() != d)
    throw ShapeMismatch("input has " + std::to_string(h.cols()) +
                        " columns, expected " + std::to_string(d));
}

}  // namespace

Matrix random_matrix(int rows, int cols, double scale, Rng &rng) {
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      m(i, j) = (2 * rng.uniform01() - 1) * scale;
  return m;
}

void ShortConvParams::validate() const {
  const auto d = w_out.rows();
  if (w_out.cols() != d || w_in.rows() != d || w_in.cols() != 3 * d ||
      kernel.rows() != d)
    throw ShapeMismatch("short convolution parameters are inconsistent");
  if (kernel.cols() < 1)
    throw ShapeMismatch("convolution width must be at least 1");
}

ShortConvParams random_shortconv(int d, int k, Rng &rng) {
  ShortConvParams p;
  double s = 1.0 / std::sqrt(static_cast<double>(d));
  p.w_in = random_matrix(d, 3 * d, s, rng);
  p.w_out = random_matrix(d, d, s, rng);
  p.kernel = random_matrix(d, k, 1.0, rng);
  return p;
}

ShortConvParams identity_shortconv(int d, int k) {
  ShortConvParams p;
  p.w_in = Matrix::Zero(d, 3 * d);
  p.w_in.leftCols(2 * d).setOnes();
  p.w_in.rightCols(d).setIdentity();
  p.w_out = Matrix::Identity(d, d);
  p.kernel = Matrix::Zero(d, k);
  p.kernel.col(0).setOnes();
  return p;
}

namespace {

struct Forward {
  Matrix b, c, ht, x, y;
};

Forward run(const Matrix &h, const ShortConvParams &p) {
  p.validate();
  const int d = p.dim();
  check_input(h, d);
  Matrix z = h * p.w_in;
  Forward f;
  f.b = z.leftCols(d);
  f.c = z.middleCols(d, d);
  f.ht = z.rightCols(d);
  f.x = f.b.cwiseProduct(f.ht);
  const auto L = h.rows();
  f.y = Matrix::Zero(L, d);
  for (int j = 0; j < p.width(); ++j) {
    if (j >= L)
      break;
    f.y.bottomRows(L - j) +=
        f.x.topRows(L - j) * p.kernel.col(j).asDiagonal();
  }
  return f;
}

}  // namespace

Matrix shortconv_forward(const Matrix &h, const ShortConvParams &p) {
  Forward f = run(h, p);
  return f.c.cwiseProduct(f.y) * p.w_out;
}

ShortConvGrads shortconv_backward(const Matrix &h, const ShortConvParams &p,
                                  const Matrix &d_out) {
  Forward f = run(h, p);
  const int d = p.dim();
  const auto L = h.rows();
  if (d_out.rows() != L || d_out.cols() != d)
    throw ShapeMismatch("output gradient has the wrong shape");
  ShortConvGrads g;
  Matrix gated = f.c.cwiseProduct(f.y);
  g.d_w_out = gated.transpose() * d_out;
  Matrix d_gated = d_out * p.w_out.transpose();
  Matrix d_c = d_gated.cwiseProduct(f.y);
  Matrix d_y = d_gated.cwiseProduct(f.c);
  Matrix d_x = Matrix::Zero(L, d);
  g.d_kernel = Matrix::Zero(d, p.width());
  for (int j = 0; j < p.width(); ++j) {
    if (j >= L)
      break;
    d_x.topRows(L - j) += d_y.bottomRows(L - j) * p.kernel.col(j).asDiagonal();
    g.d_kernel.col(j) = d_y.bottomRows(L - j)
                            .cwiseProduct(f.x.topRows(L - j))
                            .colwise()
                            .sum()
                            .transpose();
  }
  Matrix d_z(L, 3 * d);
  d_z.leftCols(d) = d_x.cwiseProduct(f.ht);
  d_z.middleCols(d, d) = d_c;
  d_z.rightCols(d) = d_x.cwiseProduct(f.b);
  g.d_w_in = h.transpose() * d_z;
  g.d_input = d_z * p.w_in.transpose();
  return g;
}

}  // namespace chemgym
