#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "symlab/errors.hpp"
#include "symlab/rng.hpp"

// Minimal dense/conv layer kit, templated on the scalar so the same code
// runs in float for training and in double for finite-difference checks.
//
// Activations flow through the conv stack as "channel-row" matrices: row c,
// column b*H*W + y*W + x. One GEMM then covers the whole batch and the GEMM
// output feeds the next layer without rearrangement.

namespace symlab::nn {

template <typename S>
using MatR = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename S>
using MapM = Eigen::Map<MatR<S>>;
template <typename S>
using CMapM = Eigen::Map<const MatR<S>>;

template <typename S>
struct Param {
    std::string name;
    std::vector<int> shape;
    std::vector<S> value;
    std::vector<S> grad;

    Param() = default;
    Param(std::string n, std::vector<int> sh) : name(std::move(n)), shape(std::move(sh)) {
        size_t total = 1;
        for (const int d : shape) total *= static_cast<size_t>(d);
        value.assign(total, S(0));
        grad.assign(total, S(0));
    }
    size_t size() const { return value.size(); }
    void zero_grad() { std::fill(grad.begin(), grad.end(), S(0)); }
};

template <typename S>
inline void init_uniform(Param<S>& p, int fan_in, Rng& rng) {
    const double bound = std::sqrt(6.0 / fan_in);
    for (auto& v : p.value) v = static_cast<S>(rng.uniform(-bound, bound));
}

namespace nndetail {

// Shared 3x3 stride-2 pad-1 geometry. "big" is the 2x-resolution side,
// "grid" the strided side; big_h = 2*grid_h exactly.
struct ConvGeom {
    int channels = 0;  // channels of the big-side image
    int big_h = 0, big_w = 0;
    int grid_h = 0, grid_w = 0;
    static constexpr int k = 3, stride = 2, pad = 1;
    int cols_rows() const { return channels * k * k; }
    int cols_cols(int batch) const { return batch * grid_h * grid_w; }
};

// cols[(c*9 + ky*3 + kx), (b,gy,gx)] = big[c, (b, 2gy+ky-1, 2gx+kx-1)] or 0.
template <typename S>
void im2col(const ConvGeom& g, const std::vector<S>& big, int batch, std::vector<S>& cols) {
    const int ghw = g.grid_h * g.grid_w;
    const int bhw = g.big_h * g.big_w;
    const size_t ncols = static_cast<size_t>(g.cols_cols(batch));
    cols.assign(static_cast<size_t>(g.cols_rows()) * ncols, S(0));
    for (int c = 0; c < g.channels; ++c) {
        const S* src = big.data() + static_cast<size_t>(c) * batch * bhw;
        for (int ky = 0; ky < 3; ++ky)
            for (int kx = 0; kx < 3; ++kx) {
                S* dst = cols.data() + (static_cast<size_t>(c) * 9 + ky * 3 + kx) * ncols;
                for (int b = 0; b < batch; ++b)
                    for (int gy = 0; gy < g.grid_h; ++gy) {
                        const int y = 2 * gy + ky - 1;
                        if (y < 0 || y >= g.big_h) continue;
                        for (int gx = 0; gx < g.grid_w; ++gx) {
                            const int x = 2 * gx + kx - 1;
                            if (x < 0 || x >= g.big_w) continue;
                            dst[(static_cast<size_t>(b) * g.grid_h + gy) * g.grid_w + gx] =
                                src[(static_cast<size_t>(b) * g.big_h + y) * g.big_w + x];
                        }
                    }
            }
    }
}

// Transpose of im2col: scatter-add columns back into the big image.
template <typename S>
void col2im(const ConvGeom& g, const std::vector<S>& cols, int batch, std::vector<S>& big) {
    const int bhw = g.big_h * g.big_w;
    const size_t ncols = static_cast<size_t>(g.cols_cols(batch));
    big.assign(static_cast<size_t>(g.channels) * batch * bhw, S(0));
    for (int c = 0; c < g.channels; ++c) {
        S* dst = big.data() + static_cast<size_t>(c) * batch * bhw;
        for (int ky = 0; ky < 3; ++ky)
            for (int kx = 0; kx < 3; ++kx) {
                const S* src = cols.data() + (static_cast<size_t>(c) * 9 + ky * 3 + kx) * ncols;
                for (int b = 0; b < batch; ++b)
                    for (int gy = 0; gy < g.grid_h; ++gy) {
                        const int y = 2 * gy + ky - 1;
                        if (y < 0 || y >= g.big_h) continue;
                        for (int gx = 0; gx < g.grid_w; ++gx) {
                            const int x = 2 * gx + kx - 1;
                            if (x < 0 || x >= g.big_w) continue;
                            dst[(static_cast<size_t>(b) * g.big_h + y) * g.big_w + x] +=
                                src[(static_cast<size_t>(b) * g.grid_h + gy) * g.grid_w + gx];
                        }
                    }
            }
    }
}

}  // namespace nndetail

// 3x3 stride-2 pad-1 convolution, halving the spatial size.
template <typename S>
struct Conv2d {
    int ic = 0, oc = 0, ih = 0, iw = 0, oh = 0, ow = 0;
    Param<S> w, b;

    Conv2d() = default;
    Conv2d(const std::string& name, int in_ch, int out_ch, int in_h, int in_w)
        : ic(in_ch), oc(out_ch), ih(in_h), iw(in_w), oh(in_h / 2), ow(in_w / 2),
          w(name + ".w", {out_ch, in_ch, 3, 3}), b(name + ".b", {out_ch}) {
        if (in_h % 2 != 0 || in_w % 2 != 0) throw Error("Conv2d: input size must be even");
    }

    struct Ctx {
        std::vector<S> cols;
        int batch = 0;
    };

    nndetail::ConvGeom geom() const { return {ic, ih, iw, oh, ow}; }

    std::vector<S> forward(const std::vector<S>& x, int batch, Ctx& ctx) const {
        const auto g = geom();
        ctx.batch = batch;
        nndetail::im2col(g, x, batch, ctx.cols);
        const int ncols = g.cols_cols(batch);
        std::vector<S> y(static_cast<size_t>(oc) * ncols);
        MapM<S> Y(y.data(), oc, ncols);
        CMapM<S> W(w.value.data(), oc, g.cols_rows());
        CMapM<S> C(ctx.cols.data(), g.cols_rows(), ncols);
        Y.noalias() = W * C;
        Y.colwise() += Eigen::Map<const Eigen::Vector<S, Eigen::Dynamic>>(b.value.data(), oc);
        return y;
    }

    std::vector<S> backward(const std::vector<S>& dy, const Ctx& ctx) {
        const auto g = geom();
        const int ncols = g.cols_cols(ctx.batch);
        CMapM<S> dY(dy.data(), oc, ncols);
        CMapM<S> C(ctx.cols.data(), g.cols_rows(), ncols);
        MapM<S> dW(w.grad.data(), oc, g.cols_rows());
        dW.noalias() += dY * C.transpose();
        // Fixed-order reduction keeps results independent of buffer alignment.
        for (int c = 0; c < oc; ++c) {
            const S* row = dy.data() + static_cast<size_t>(c) * ncols;
            S s = 0;
            for (int i = 0; i < ncols; ++i) s += row[i];
            b.grad[static_cast<size_t>(c)] += s;
        }
        std::vector<S> dcols(static_cast<size_t>(g.cols_rows()) * ncols);
        MapM<S> dC(dcols.data(), g.cols_rows(), ncols);
        CMapM<S> W(w.value.data(), oc, g.cols_rows());
        dC.noalias() = W.transpose() * dY;
        std::vector<S> dx;
        nndetail::col2im(g, dcols, ctx.batch, dx);
        return dx;
    }
};

// 3x3 stride-2 transposed convolution, doubling the spatial size
// (exact mirror of Conv2d on the same geometry).
template <typename S>
struct ConvT2d {
    int ic = 0, oc = 0, ih = 0, iw = 0, oh = 0, ow = 0;
    Param<S> w, b;

    ConvT2d() = default;
    ConvT2d(const std::string& name, int in_ch, int out_ch, int in_h, int in_w)
        : ic(in_ch), oc(out_ch), ih(in_h), iw(in_w), oh(in_h * 2), ow(in_w * 2),
          w(name + ".w", {in_ch, out_ch, 3, 3}), b(name + ".b", {out_ch}) {}

    struct Ctx {
        std::vector<S> input;
        int batch = 0;
    };

    nndetail::ConvGeom geom() const { return {oc, oh, ow, ih, iw}; }

    std::vector<S> forward(const std::vector<S>& x, int batch, Ctx& ctx) const {
        const auto g = geom();
        ctx.input = x;
        ctx.batch = batch;
        const int ncols = g.cols_cols(batch);
        std::vector<S> cols(static_cast<size_t>(g.cols_rows()) * ncols);
        MapM<S> C(cols.data(), g.cols_rows(), ncols);
        CMapM<S> W(w.value.data(), ic, g.cols_rows());
        CMapM<S> X(x.data(), ic, ncols);
        C.noalias() = W.transpose() * X;
        std::vector<S> y;
        nndetail::col2im(g, cols, batch, y);
        const int bhw = batch * oh * ow;
        for (int c = 0; c < oc; ++c) {
            S* row = y.data() + static_cast<size_t>(c) * bhw;
            for (int i = 0; i < bhw; ++i) row[i] += b.value[static_cast<size_t>(c)];
        }
        return y;
    }

    std::vector<S> backward(const std::vector<S>& dy, const Ctx& ctx) {
        const auto g = geom();
        const int ncols = g.cols_cols(ctx.batch);
        std::vector<S> dcols;
        nndetail::im2col(g, dy, ctx.batch, dcols);
        CMapM<S> dC(dcols.data(), g.cols_rows(), ncols);
        CMapM<S> X(ctx.input.data(), ic, ncols);
        MapM<S> dW(w.grad.data(), ic, g.cols_rows());
        dW.noalias() += X * dC.transpose();
        const int bhw = ctx.batch * oh * ow;
        for (int c = 0; c < oc; ++c) {
            const S* row = dy.data() + static_cast<size_t>(c) * bhw;
            S s = 0;
            for (int i = 0; i < bhw; ++i) s += row[i];
            b.grad[static_cast<size_t>(c)] += s;
        }
        std::vector<S> dx(static_cast<size_t>(ic) * ncols);
        MapM<S> dX(dx.data(), ic, ncols);
        CMapM<S> W(w.value.data(), ic, g.cols_rows());
        dX.noalias() = W * dC;
        return dx;
    }
};

// Fully connected layer on [features, batch] column-per-sample matrices.
template <typename S>
struct Dense {
    int in = 0, out = 0;
    Param<S> w, b;

    Dense() = default;
    Dense(const std::string& name, int in_f, int out_f)
        : in(in_f), out(out_f), w(name + ".w", {out_f, in_f}), b(name + ".b", {out_f}) {}

    struct Ctx {
        std::vector<S> input;
        int batch = 0;
    };

    std::vector<S> forward(const std::vector<S>& x, int batch, Ctx& ctx) const {
        ctx.input = x;
        ctx.batch = batch;
        std::vector<S> y(static_cast<size_t>(out) * batch);
        MapM<S> Y(y.data(), out, batch);
        CMapM<S> W(w.value.data(), out, in);
        CMapM<S> X(x.data(), in, batch);
        Y.noalias() = W * X;
        Y.colwise() += Eigen::Map<const Eigen::Vector<S, Eigen::Dynamic>>(b.value.data(), out);
        return y;
    }

    std::vector<S> backward(const std::vector<S>& dy, const Ctx& ctx) {
        CMapM<S> dY(dy.data(), out, ctx.batch);
        CMapM<S> X(ctx.input.data(), in, ctx.batch);
        MapM<S> dW(w.grad.data(), out, in);
        dW.noalias() += dY * X.transpose();
        for (int o = 0; o < out; ++o) {
            const S* row = dy.data() + static_cast<size_t>(o) * ctx.batch;
            S s = 0;
            for (int i = 0; i < ctx.batch; ++i) s += row[i];
            b.grad[static_cast<size_t>(o)] += s;
        }
        std::vector<S> dx(static_cast<size_t>(in) * ctx.batch);
        MapM<S> dX(dx.data(), in, ctx.batch);
        CMapM<S> W(w.value.data(), out, in);
        dX.noalias() = W.transpose() * dY;
        return dx;
    }
};

template <typename S>
struct LeakyRelu {
    static constexpr double kSlope = 0.01;
    struct Ctx {
        std::vector<S> input;
    };
    std::vector<S> forward(const std::vector<S>& x, Ctx& ctx) const {
        ctx.input = x;
        std::vector<S> y(x.size());
        for (size_t i = 0; i < x.size(); ++i)
            y[i] = x[i] > S(0) ? x[i] : static_cast<S>(kSlope) * x[i];
        return y;
    }
    std::vector<S> backward(const std::vector<S>& dy, const Ctx& ctx) const {
        std::vector<S> dx(dy.size());
        for (size_t i = 0; i < dy.size(); ++i)
            dx[i] = ctx.input[i] > S(0) ? dy[i] : static_cast<S>(kSlope) * dy[i];
        return dx;
    }
};

template <typename S>
struct Sigmoid {
    struct Ctx {
        std::vector<S> output;
    };
    std::vector<S> forward(const std::vector<S>& x, Ctx& ctx) const {
        std::vector<S> y(x.size());
        for (size_t i = 0; i < x.size(); ++i) y[i] = S(1) / (S(1) + std::exp(-x[i]));
        ctx.output = y;
        return y;
    }
    std::vector<S> backward(const std::vector<S>& dy, const Ctx& ctx) const {
        std::vector<S> dx(dy.size());
        for (size_t i = 0; i < dy.size(); ++i) {
            const S o = ctx.output[i];
            dx[i] = dy[i] * o * (S(1) - o);
        }
        return dx;
    }
};

template <typename S>
inline double global_grad_norm(const std::vector<Param<S>*>& params) {
    double sq = 0.0;
    for (const auto* p : params)
        for (const S g : p->grad) sq += static_cast<double>(g) * static_cast<double>(g);
    return std::sqrt(sq);
}

template <typename S>
inline void clip_global_norm(const std::vector<Param<S>*>& params, double max_norm) {
    const double norm = global_grad_norm(params);
    if (norm <= max_norm || norm == 0.0) return;
    const S scale = static_cast<S>(max_norm / norm);
    for (auto* p : params)
        for (auto& g : p->grad) g *= scale;
}

// Adaptive-moment gradient descent with bias correction.
template <typename S>
struct Adam {
    double lr = 1e-3, beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    int64_t t = 0;
    std::vector<std::vector<double>> m, v;

    void attach(const std::vector<Param<S>*>& params) {
        m.clear();
        v.clear();
        for (const auto* p : params) {
            m.emplace_back(p->size(), 0.0);
            v.emplace_back(p->size(), 0.0);
        }
    }

    void step(const std::vector<Param<S>*>& params) {
        if (m.size() != params.size()) throw Error("Adam: optimizer not attached");
        ++t;
        const double c1 = 1.0 - std::pow(beta1, static_cast<double>(t));
        const double c2 = 1.0 - std::pow(beta2, static_cast<double>(t));
        for (size_t i = 0; i < params.size(); ++i) {
            Param<S>& p = *params[i];
            for (size_t j = 0; j < p.size(); ++j) {
                const double g = static_cast<double>(p.grad[j]);
                m[i][j] = beta1 * m[i][j] + (1.0 - beta1) * g;
                v[i][j] = beta2 * v[i][j] + (1.0 - beta2) * g * g;
                const double mhat = m[i][j] / c1;
                const double vhat = v[i][j] / c2;
                p.value[j] -= static_cast<S>(lr * mhat / (std::sqrt(vhat) + eps));
            }
        }
    }
};

}  // namespace symlab::nn
