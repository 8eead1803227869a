#include <cmath>

#include <Eigen/Core>

#include "nightforge/core/errors.hpp"
#include "nightforge/nn/autograd.hpp"

namespace nightforge::nn {

using detail::Node;

namespace {

using EigenRowMat =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapMat = Eigen::Map<EigenRowMat>;
using ConstMapMat = Eigen::Map<const EigenRowMat>;

struct ConvGeom {
  int batch, channels, in_h, in_w;
  int kernel, stride, pad;
  int out_h, out_w;
};

ConvGeom conv_geometry(const Tensor& x, int kernel, int stride, int pad) {
  if (x.ndim() != 4) throw ShapeError("conv: expected [B,C,H,W] input");
  if (stride < 1 || pad < 0 || kernel < 1) {
    throw ShapeError("conv: bad kernel/stride/pad");
  }
  ConvGeom g{x.dim(0), x.dim(1), x.dim(2), x.dim(3), kernel, stride, pad, 0, 0};
  const int eff_h = g.in_h + 2 * pad - kernel;
  const int eff_w = g.in_w + 2 * pad - kernel;
  if (eff_h < 0 || eff_w < 0) throw ShapeError("conv: kernel larger than input");
  g.out_h = eff_h / stride + 1;
  g.out_w = eff_w / stride + 1;
  return g;
}

// Unfolds one [C,H,W] sample into a [C*k*k, out_h*out_w] patch matrix.
void im2col(const double* x, const ConvGeom& g, double* cols) {
  const int k = g.kernel;
  const int patches = g.out_h * g.out_w;
  for (int c = 0; c < g.channels; ++c) {
    for (int ky = 0; ky < k; ++ky) {
      for (int kx = 0; kx < k; ++kx) {
        double* row = cols + (static_cast<std::int64_t>(c) * k * k + ky * k + kx) * patches;
        for (int oy = 0; oy < g.out_h; ++oy) {
          const int iy = oy * g.stride - g.pad + ky;
          for (int ox = 0; ox < g.out_w; ++ox) {
            const int ix = ox * g.stride - g.pad + kx;
            const bool inside =
                iy >= 0 && iy < g.in_h && ix >= 0 && ix < g.in_w;
            row[oy * g.out_w + ox] =
                inside ? x[(static_cast<std::int64_t>(c) * g.in_h + iy) * g.in_w + ix]
                       : 0.0;
          }
        }
      }
    }
  }
}

// Adjoint of im2col: scatters a patch matrix back into a [C,H,W] sample.
void col2im(const double* cols, const ConvGeom& g, double* x) {
  const int k = g.kernel;
  const int patches = g.out_h * g.out_w;
  for (int c = 0; c < g.channels; ++c) {
    for (int ky = 0; ky < k; ++ky) {
      for (int kx = 0; kx < k; ++kx) {
        const double* row =
            cols + (static_cast<std::int64_t>(c) * k * k + ky * k + kx) * patches;
        for (int oy = 0; oy < g.out_h; ++oy) {
          const int iy = oy * g.stride - g.pad + ky;
          if (iy < 0 || iy >= g.in_h) continue;
          for (int ox = 0; ox < g.out_w; ++ox) {
            const int ix = ox * g.stride - g.pad + kx;
            if (ix < 0 || ix >= g.in_w) continue;
            x[(static_cast<std::int64_t>(c) * g.in_h + iy) * g.in_w + ix] +=
                row[oy * g.out_w + ox];
          }
        }
      }
    }
  }
}

}  // namespace

Var conv2d(const Var& x, const Var& weight, const Var& bias, int stride,
           int padding) {
  const Tensor xv = x.value();
  const Tensor wv = weight.value();
  if (wv.ndim() != 4) throw ShapeError("conv2d: weight must be [OC,C,k,k]");
  if (wv.dim(2) != wv.dim(3)) throw ShapeError("conv2d: square kernels only");
  const int out_ch = wv.dim(0);
  const int kernel = wv.dim(2);
  const ConvGeom g = conv_geometry(xv, kernel, stride, padding);
  if (wv.dim(1) != g.channels) throw ShapeError("conv2d: channel mismatch");
  const bool has_bias = bias.defined();
  if (has_bias && bias.value().numel() != out_ch) {
    throw ShapeError("conv2d: bias size mismatch");
  }

  const int patch_rows = g.channels * kernel * kernel;
  const int patches = g.out_h * g.out_w;
  Tensor cols({g.batch, patch_rows, patches});
  Tensor out({g.batch, out_ch, g.out_h, g.out_w});
  const std::int64_t in_stride = static_cast<std::int64_t>(g.channels) * g.in_h * g.in_w;
  const std::int64_t col_stride = static_cast<std::int64_t>(patch_rows) * patches;
  const std::int64_t out_stride = static_cast<std::int64_t>(out_ch) * patches;
  for (int b = 0; b < g.batch; ++b) {
    im2col(xv.data() + b * in_stride, g, cols.data() + b * col_stride);
    ConstMapMat W(wv.data(), out_ch, patch_rows);
    ConstMapMat C(cols.data() + b * col_stride, patch_rows, patches);
    MapMat O(out.data() + b * out_stride, out_ch, patches);
    O.noalias() = W * C;
    if (has_bias) {
      const double* bv = bias.value().data();
      for (int oc = 0; oc < out_ch; ++oc) O.row(oc).array() += bv[oc];
    }
  }

  std::vector<detail::NodePtr> parents{x.node(), weight.node()};
  if (has_bias) parents.push_back(bias.node());
  const Tensor saved_cols = cols;
  return Var::from_node(detail::make_op_node(
      std::move(out), std::move(parents),
      [g, out_ch, patch_rows, patches, saved_cols, wv, has_bias, in_stride,
       col_stride, out_stride](Node& n) {
        const bool need_dx = n.parents[0]->requires_grad;
        const bool need_dw = n.parents[1]->requires_grad;
        Tensor dx, dw;
        if (need_dx) dx = Tensor::zeros({g.batch, g.channels, g.in_h, g.in_w});
        if (need_dw) dw = Tensor::zeros(wv.shape());
        Tensor dcols({patch_rows, patches});
        for (int b = 0; b < g.batch; ++b) {
          ConstMapMat G(n.grad.data() + b * out_stride, out_ch, patches);
          if (need_dw) {
            ConstMapMat C(saved_cols.data() + b * col_stride, patch_rows, patches);
            MapMat DW(dw.data(), out_ch, patch_rows);
            DW.noalias() += G * C.transpose();
          }
          if (need_dx) {
            ConstMapMat W(wv.data(), out_ch, patch_rows);
            MapMat DC(dcols.data(), patch_rows, patches);
            DC.noalias() = W.transpose() * G;
            col2im(dcols.data(), g, dx.data() + b * in_stride);
          }
        }
        if (need_dx) n.parents[0]->accumulate(dx);
        if (need_dw) n.parents[1]->accumulate(dw);
        if (has_bias && n.parents[2]->requires_grad) {
          Tensor db({out_ch});
          for (int b = 0; b < g.batch; ++b) {
            const double* gp = n.grad.data() + b * out_stride;
            for (int oc = 0; oc < out_ch; ++oc) {
              double s = 0.0;
              for (int p = 0; p < patches; ++p) s += gp[oc * patches + p];
              db[oc] += s;
            }
          }
          n.parents[2]->accumulate(db);
        }
      }));
}

Var conv_transpose2d(const Var& x, const Var& weight, const Var& bias,
                     int stride, int padding, int output_padding) {
  const Tensor xv = x.value();
  const Tensor wv = weight.value();
  if (xv.ndim() != 4) throw ShapeError("conv_transpose2d: expected [B,C,H,W]");
  if (wv.ndim() != 4) throw ShapeError("conv_transpose2d: weight must be [C,OC,k,k]");
  if (wv.dim(2) != wv.dim(3)) throw ShapeError("conv_transpose2d: square kernels only");
  if (output_padding < 0 || output_padding >= stride) {
    throw ShapeError("conv_transpose2d: output_padding must be in [0, stride)");
  }
  const int batch = xv.dim(0), in_ch = xv.dim(1), in_h = xv.dim(2), in_w = xv.dim(3);
  if (wv.dim(0) != in_ch) throw ShapeError("conv_transpose2d: channel mismatch");
  const int out_ch = wv.dim(1);
  const int kernel = wv.dim(2);
  const int out_h = (in_h - 1) * stride - 2 * padding + kernel + output_padding;
  const int out_w = (in_w - 1) * stride - 2 * padding + kernel + output_padding;
  if (out_h <= 0 || out_w <= 0) throw ShapeError("conv_transpose2d: empty output");

  // The forward pass is the adjoint of a conv2d whose input is our output.
  ConvGeom g{batch, out_ch, out_h, out_w, kernel, stride, padding, in_h, in_w};
  const bool has_bias = bias.defined();
  if (has_bias && bias.value().numel() != out_ch) {
    throw ShapeError("conv_transpose2d: bias size mismatch");
  }

  const int patch_rows = out_ch * kernel * kernel;
  const int patches = in_h * in_w;
  const std::int64_t x_stride = static_cast<std::int64_t>(in_ch) * patches;
  const std::int64_t out_stride = static_cast<std::int64_t>(out_ch) * out_h * out_w;
  Tensor out({batch, out_ch, out_h, out_w});
  Tensor cols({patch_rows, patches});
  for (int b = 0; b < batch; ++b) {
    ConstMapMat W(wv.data(), in_ch, patch_rows);
    ConstMapMat X(xv.data() + b * x_stride, in_ch, patches);
    MapMat C(cols.data(), patch_rows, patches);
    C.noalias() = W.transpose() * X;
    col2im(cols.data(), g, out.data() + b * out_stride);
    if (has_bias) {
      double* op = out.data() + b * out_stride;
      const double* bv = bias.value().data();
      for (int oc = 0; oc < out_ch; ++oc) {
        for (int p = 0; p < out_h * out_w; ++p) op[oc * out_h * out_w + p] += bv[oc];
      }
    }
  }

  std::vector<detail::NodePtr> parents{x.node(), weight.node()};
  if (has_bias) parents.push_back(bias.node());
  return Var::from_node(detail::make_op_node(
      std::move(out), std::move(parents),
      [g, batch, in_ch, out_ch, patch_rows, patches, xv, wv, has_bias,
       x_stride, out_stride](Node& n) {
        const bool need_dx = n.parents[0]->requires_grad;
        const bool need_dw = n.parents[1]->requires_grad;
        Tensor dx, dw;
        if (need_dx) dx = Tensor::zeros(xv.shape());
        if (need_dw) dw = Tensor::zeros(wv.shape());
        Tensor dcols({patch_rows, patches});
        for (int b = 0; b < batch; ++b) {
          im2col(n.grad.data() + b * out_stride, g, dcols.data());
          if (need_dx) {
            ConstMapMat W(wv.data(), in_ch, patch_rows);
            ConstMapMat DC(dcols.data(), patch_rows, patches);
            MapMat DX(dx.data() + b * x_stride, in_ch, patches);
            DX.noalias() += W * DC;
          }
          if (need_dw) {
            ConstMapMat X(xv.data() + b * x_stride, in_ch, patches);
            ConstMapMat DC(dcols.data(), patch_rows, patches);
            MapMat DW(dw.data(), in_ch, patch_rows);
            DW.noalias() += X * DC.transpose();
          }
        }
        if (need_dx) n.parents[0]->accumulate(dx);
        if (need_dw) n.parents[1]->accumulate(dw);
        if (has_bias && n.parents[2]->requires_grad) {
          Tensor db({out_ch});
          const int area = g.in_h * g.in_w;
          for (int b = 0; b < batch; ++b) {
            const double* gp = n.grad.data() + b * out_stride;
            for (int oc = 0; oc < out_ch; ++oc) {
              double s = 0.0;
              for (int p = 0; p < area; ++p) s += gp[oc * area + p];
              db[oc] += s;
            }
          }
          n.parents[2]->accumulate(db);
        }
      }));
}

Var instance_norm2d(const Var& x, double eps) {
  const Tensor xv = x.value();
  if (xv.ndim() != 4) throw ShapeError("instance_norm2d: expected [B,C,H,W]");
  const int batch = xv.dim(0), channels = xv.dim(1);
  const int area = xv.dim(2) * xv.dim(3);
  Tensor out(xv.shape());
  Tensor inv_std({batch, channels});
  for (int b = 0; b < batch; ++b) {
    for (int c = 0; c < channels; ++c) {
      const double* in = xv.data() + (static_cast<std::int64_t>(b) * channels + c) * area;
      double* o = out.data() + (static_cast<std::int64_t>(b) * channels + c) * area;
      double mean = 0.0;
      for (int i = 0; i < area; ++i) mean += in[i];
      mean /= area;
      double var = 0.0;
      for (int i = 0; i < area; ++i) {
        const double d = in[i] - mean;
        var += d * d;
      }
      var /= area;
      const double istd = 1.0 / std::sqrt(var + eps);
      inv_std[static_cast<std::int64_t>(b) * channels + c] = istd;
      for (int i = 0; i < area; ++i) o[i] = (in[i] - mean) * istd;
    }
  }
  const Tensor xhat = out;
  return Var::from_node(detail::make_op_node(
      std::move(out), {x.node()},
      [xhat, inv_std, batch, channels, area](Node& n) {
        Tensor dx(xhat.shape());
        for (int b = 0; b < batch; ++b) {
          for (int c = 0; c < channels; ++c) {
            const std::int64_t base = (static_cast<std::int64_t>(b) * channels + c) * area;
            const double* h = xhat.data() + base;
            const double* g = n.grad.data() + base;
            double g_mean = 0.0, gh_mean = 0.0;
            for (int i = 0; i < area; ++i) {
              g_mean += g[i];
              gh_mean += g[i] * h[i];
            }
            g_mean /= area;
            gh_mean /= area;
            const double istd = inv_std[static_cast<std::int64_t>(b) * channels + c];
            double* d = dx.data() + base;
            for (int i = 0; i < area; ++i) {
              d[i] = istd * (g[i] - g_mean - h[i] * gh_mean);
            }
          }
        }
        n.parents[0]->accumulate(dx);
      }));
}

Var reflection_pad2d(const Var& x, int pad) {
  const Tensor xv = x.value();
  if (xv.ndim() != 4) throw ShapeError("reflection_pad2d: expected [B,C,H,W]");
  const int batch = xv.dim(0), channels = xv.dim(1);
  const int h = xv.dim(2), w = xv.dim(3);
  if (pad < 0 || pad > h - 1 || pad > w - 1) {
    throw ShapeError("reflection_pad2d: pad must be < spatial extent");
  }
  const int oh = h + 2 * pad, ow = w + 2 * pad;
  auto reflect = [](int t, int n) {
    if (t < 0) t = -t;
    if (t >= n) t = 2 * n - 2 - t;
    return t;
  };
  Tensor out({batch, channels, oh, ow});
  for (int b = 0; b < batch; ++b) {
    for (int c = 0; c < channels; ++c) {
      const double* in = xv.data() + (static_cast<std::int64_t>(b) * channels + c) * h * w;
      double* o = out.data() + (static_cast<std::int64_t>(b) * channels + c) * oh * ow;
      for (int oy = 0; oy < oh; ++oy) {
        const int iy = reflect(oy - pad, h);
        for (int ox = 0; ox < ow; ++ox) {
          o[oy * ow + ox] = in[iy * w + reflect(ox - pad, w)];
        }
      }
    }
  }
  return Var::from_node(detail::make_op_node(
      std::move(out), {x.node()},
      [batch, channels, h, w, pad, oh, ow, reflect](Node& n) {
        Tensor dx = Tensor::zeros({batch, channels, h, w});
        for (int b = 0; b < batch; ++b) {
          for (int c = 0; c < channels; ++c) {
            const double* g = n.grad.data() + (static_cast<std::int64_t>(b) * channels + c) * oh * ow;
            double* d = dx.data() + (static_cast<std::int64_t>(b) * channels + c) * h * w;
            for (int oy = 0; oy < oh; ++oy) {
              const int iy = reflect(oy - pad, h);
              for (int ox = 0; ox < ow; ++ox) {
                d[iy * w + reflect(ox - pad, w)] += g[oy * ow + ox];
              }
            }
          }
        }
        n.parents[0]->accumulate(dx);
      }));
}

}  // namespace nightforge::nn
