#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <string>
#include <vector>

#include "symlab/geometry.hpp"
#include "symlab/image.hpp"
#include "symlab/nn.hpp"
#include "symlab/serialize.hpp"
#include "symlab/version.hpp"

// Object-centric generative model: posterior encoder, action-conditioned
// transition, likelihood decoder, all over diagonal-Gaussian latent beliefs.

namespace symlab {

inline constexpr double kLogvarClamp = 10.0;

template <typename S>
struct GaussianBelief {
    std::vector<S> mean, logvar;

    int dim() const { return static_cast<int>(mean.size()); }
    bool valid() const {
        if (mean.size() != logvar.size()) return false;
        for (const S v : mean)
            if (!std::isfinite(static_cast<double>(v))) return false;
        for (const S v : logvar)
            if (!std::isfinite(static_cast<double>(v)) ||
                std::abs(static_cast<double>(v)) > kLogvarClamp)
                return false;
        return true;
    }
};

// value = mean + exp(logvar/2) * noise, elementwise.
template <typename S>
inline std::vector<S> reparameterized_sample(const GaussianBelief<S>& b,
                                             const std::vector<S>& noise) {
    if (noise.size() != b.mean.size())
        throw ModelIoError("reparameterized_sample: noise dimension mismatch");
    std::vector<S> v(b.mean.size());
    for (size_t i = 0; i < v.size(); ++i)
        v[i] = b.mean[i] + std::exp(b.logvar[i] / S(2)) * noise[i];
    return v;
}

// KL(q || p) for diagonal Gaussians, summed over dimensions.
template <typename S>
inline S kl_divergence(const GaussianBelief<S>& q, const GaussianBelief<S>& p) {
    if (q.dim() != p.dim()) throw ModelIoError("kl_divergence: dimension mismatch");
    double acc = 0.0;
    for (int d = 0; d < q.dim(); ++d) {
        const double lq = static_cast<double>(q.logvar[static_cast<size_t>(d)]);
        const double lp = static_cast<double>(p.logvar[static_cast<size_t>(d)]);
        const double dm = static_cast<double>(p.mean[static_cast<size_t>(d)]) -
                          static_cast<double>(q.mean[static_cast<size_t>(d)]);
        acc += 0.5 * (std::exp(lq - lp) + dm * dm * std::exp(-lp) - 1.0 + (lp - lq));
    }
    return static_cast<S>(acc);
}

struct ModelConfig {
    int latent_dim = 16;
    int width = 64, height = 64;
    std::vector<int> channels = {16, 32, 64, 128};
    int trans_hidden = 128;

    int stages() const { return static_cast<int>(channels.size()); }
    int feat_h() const { return height >> stages(); }
    int feat_w() const { return width >> stages(); }
    int flat_dim() const { return channels.back() * feat_h() * feat_w(); }

    void validate() const {
        if (latent_dim < 1) throw Error("ModelConfig: latent_dim must be positive");
        if (channels.empty()) throw Error("ModelConfig: need at least one conv stage");
        for (const int c : channels)
            if (c < 1) throw Error("ModelConfig: channel counts must be positive");
        if (trans_hidden < 1) throw Error("ModelConfig: trans_hidden must be positive");
        const int div = 1 << stages();
        if (width % div != 0 || height % div != 0 || feat_h() < 1 || feat_w() < 1)
            throw Error("ModelConfig: resolution not divisible by the conv stages");
    }

    std::string fingerprint() const {
        std::string s = "v1/res" + std::to_string(width) + "x" + std::to_string(height) + "/conv";
        for (size_t i = 0; i < channels.size(); ++i)
            s += (i ? "-" : "") + std::to_string(channels[i]);
        s += "/lat" + std::to_string(latent_dim) + "/trans" + std::to_string(trans_hidden);
        return s;
    }
};

inline void to_json(Json& j, const ModelConfig& c) {
    j = Json{{"latent_dim", c.latent_dim},
             {"width", c.width},
             {"height", c.height},
             {"channels", c.channels},
             {"trans_hidden", c.trans_hidden}};
}

inline void from_json(const Json& j, ModelConfig& c) {
    j.at("latent_dim").get_to(c.latent_dim);
    j.at("width").get_to(c.width);
    j.at("height").get_to(c.height);
    j.at("channels").get_to(c.channels);
    j.at("trans_hidden").get_to(c.trans_hidden);
    c.validate();
}

struct LossTerms {
    double loss = 0.0, accuracy = 0.0, complexity = 0.0;
};

// A batch of training pairs. Observations are stored channel-row:
// element (c, b, y, x) at index c*B*H*W + b*H*W + y*W + x. Actions and
// latent batches use row-major [rows, B]: index row*B + b.
template <typename S>
struct PairBatch {
    int batch = 0;
    std::vector<S> o_prev, o_next;
    std::vector<S> actions;
};

template <typename S>
inline void append_observation_cr(std::vector<S>& dst, const Image& img, int batch, int slot) {
    const int hw = img.width * img.height;
    if (dst.empty()) dst.assign(static_cast<size_t>(3) * batch * hw, S(0));
    for (int c = 0; c < 3; ++c)
        for (int y = 0; y < img.height; ++y)
            for (int x = 0; x < img.width; ++x)
                dst[(static_cast<size_t>(c) * batch + slot) * hw + y * img.width + x] =
                    static_cast<S>(img.at(y, x, c));
}

template <typename S>
class Model {
  public:
    explicit Model(ModelConfig cfg) : cfg_(std::move(cfg)) {
        cfg_.validate();
        int h = cfg_.height, w = cfg_.width, in_ch = 3;
        for (int i = 0; i < cfg_.stages(); ++i) {
            enc_convs_.emplace_back("enc" + std::to_string(i), in_ch, cfg_.channels[static_cast<size_t>(i)], h, w);
            in_ch = cfg_.channels[static_cast<size_t>(i)];
            h /= 2;
            w /= 2;
        }
        enc_head_ = nn::Dense<S>("enc_head", cfg_.flat_dim(), 2 * cfg_.latent_dim);
        dec_head_ = nn::Dense<S>("dec_head", cfg_.latent_dim, cfg_.flat_dim());
        int ch = cfg_.channels.back();
        for (int i = 0; i < cfg_.stages(); ++i) {
            const int out_ch = i + 1 < cfg_.stages()
                                   ? cfg_.channels[static_cast<size_t>(cfg_.stages() - 2 - i)]
                                   : 3;
            dec_convs_.emplace_back("dec" + std::to_string(i), ch, out_ch, h, w);
            ch = out_ch;
            h *= 2;
            w *= 2;
        }
        const int tin = cfg_.latent_dim + 9;
        trans_ = {nn::Dense<S>("trans0", tin, cfg_.trans_hidden),
                  nn::Dense<S>("trans1", cfg_.trans_hidden, cfg_.trans_hidden),
                  nn::Dense<S>("trans2", cfg_.trans_hidden, 2 * cfg_.latent_dim)};
    }

    const ModelConfig& config() const { return cfg_; }

    std::vector<nn::Param<S>*> params() {
        std::vector<nn::Param<S>*> out;
        for (auto& c : enc_convs_) {
            out.push_back(&c.w);
            out.push_back(&c.b);
        }
        out.push_back(&enc_head_.w);
        out.push_back(&enc_head_.b);
        out.push_back(&dec_head_.w);
        out.push_back(&dec_head_.b);
        for (auto& c : dec_convs_) {
            out.push_back(&c.w);
            out.push_back(&c.b);
        }
        for (auto& d : trans_) {
            out.push_back(&d.w);
            out.push_back(&d.b);
        }
        return out;
    }

    std::vector<const nn::Param<S>*> params() const {
        auto mut = const_cast<Model*>(this)->params();
        return {mut.begin(), mut.end()};
    }

    void zero_grad() {
        for (auto* p : params()) p->zero_grad();
    }

    // Seeded fan-in-scaled uniform weights; biases stay zero.
    void init(uint64_t seed) {
        uint64_t idx = 0;
        for (auto& c : enc_convs_) {
            Rng rng = Rng::stream(seed, "init", idx++);
            nn::init_uniform(c.w, c.ic * 9, rng);
        }
        {
            Rng rng = Rng::stream(seed, "init", idx++);
            nn::init_uniform(enc_head_.w, enc_head_.in, rng);
        }
        {
            Rng rng = Rng::stream(seed, "init", idx++);
            nn::init_uniform(dec_head_.w, dec_head_.in, rng);
        }
        for (auto& c : dec_convs_) {
            Rng rng = Rng::stream(seed, "init", idx++);
            nn::init_uniform(c.w, c.ic * 9, rng);
        }
        for (auto& d : trans_) {
            Rng rng = Rng::stream(seed, "init", idx++);
            nn::init_uniform(d.w, d.in, rng);
        }
    }

    struct EncCtx {
        std::vector<typename nn::Conv2d<S>::Ctx> conv;
        std::vector<typename nn::LeakyRelu<S>::Ctx> act;
        typename nn::Dense<S>::Ctx head;
        std::vector<S> logvar;
        int batch = 0;
    };

    struct TransCtx {
        typename nn::Dense<S>::Ctx d0, d1, d2;
        typename nn::LeakyRelu<S>::Ctx a0, a1;
        std::vector<S> logvar;
        int batch = 0;
    };

    struct DecCtx {
        typename nn::Dense<S>::Ctx head;
        typename nn::LeakyRelu<S>::Ctx head_act;
        std::vector<typename nn::ConvT2d<S>::Ctx> conv;
        std::vector<typename nn::LeakyRelu<S>::Ctx> act;
        typename nn::Sigmoid<S>::Ctx out;
        int batch = 0;
    };

    // Batched encoder: observations in channel-row layout, beliefs as
    // row-major [D, B] mean/logvar.
    void encode_batch(const std::vector<S>& obs_cr, int batch, std::vector<S>& mean,
                      std::vector<S>& logvar, EncCtx& ctx) const {
        const size_t want = static_cast<size_t>(3) * batch * cfg_.height * cfg_.width;
        if (obs_cr.size() != want) throw ModelIoError("encode: observation size mismatch");
        ctx.conv.resize(enc_convs_.size());
        ctx.act.resize(enc_convs_.size());
        ctx.batch = batch;
        std::vector<S> cur = obs_cr;
        for (size_t i = 0; i < enc_convs_.size(); ++i) {
            cur = enc_convs_[i].forward(cur, batch, ctx.conv[i]);
            cur = lrelu_.forward(cur, ctx.act[i]);
        }
        cur = flatten(cur, cfg_.channels.back(), cfg_.feat_h() * cfg_.feat_w(), batch);
        cur = enc_head_.forward(cur, batch, ctx.head);
        split_head(cur, batch, mean, logvar);
        ctx.logvar = logvar;
    }

    void encode_backward(const EncCtx& ctx, const std::vector<S>& dmean,
                         const std::vector<S>& dlogvar) {
        std::vector<S> dhead = merge_head_grad(ctx.logvar, ctx.batch, dmean, dlogvar);
        std::vector<S> dcur = enc_head_.backward(dhead, ctx.head);
        dcur = unflatten(dcur, cfg_.channels.back(), cfg_.feat_h() * cfg_.feat_w(), ctx.batch);
        for (size_t i = enc_convs_.size(); i-- > 0;) {
            dcur = lrelu_.backward(dcur, ctx.act[i]);
            dcur = enc_convs_[i].backward(dcur, ctx.conv[i]);
        }
    }

    // Transition over a batch of latent states [D, B] and actions [9, B].
    void transition_batch(const std::vector<S>& s, const std::vector<S>& actions, int batch,
                          std::vector<S>& mean, std::vector<S>& logvar, TransCtx& ctx) const {
        if (s.size() != static_cast<size_t>(cfg_.latent_dim) * batch)
            throw ModelIoError("transition: latent size mismatch");
        if (actions.size() != static_cast<size_t>(9) * batch)
            throw ModelIoError("transition: action size mismatch");
        ctx.batch = batch;
        std::vector<S> cur(s.size() + actions.size());
        std::copy(s.begin(), s.end(), cur.begin());
        std::copy(actions.begin(), actions.end(), cur.begin() + static_cast<long>(s.size()));
        cur = trans_[0].forward(cur, batch, ctx.d0);
        cur = lrelu_.forward(cur, ctx.a0);
        cur = trans_[1].forward(cur, batch, ctx.d1);
        cur = lrelu_.forward(cur, ctx.a1);
        cur = trans_[2].forward(cur, batch, ctx.d2);
        split_head(cur, batch, mean, logvar);
        ctx.logvar = logvar;
    }

    // Returns the gradient with respect to the latent-state rows [D, B].
    std::vector<S> transition_backward(const TransCtx& ctx, const std::vector<S>& dmean,
                                       const std::vector<S>& dlogvar) {
        std::vector<S> dcur = merge_head_grad(ctx.logvar, ctx.batch, dmean, dlogvar);
        dcur = trans_[2].backward(dcur, ctx.d2);
        dcur = lrelu_.backward(dcur, ctx.a1);
        dcur = trans_[1].backward(dcur, ctx.d1);
        dcur = lrelu_.backward(dcur, ctx.a0);
        dcur = trans_[0].backward(dcur, ctx.d0);
        dcur.resize(static_cast<size_t>(cfg_.latent_dim) * ctx.batch);
        return dcur;
    }

    // Batched decoder: latents [D, B] to observations in channel-row layout.
    std::vector<S> decode_batch(const std::vector<S>& s, int batch, DecCtx& ctx) const {
        if (s.size() != static_cast<size_t>(cfg_.latent_dim) * batch)
            throw ModelIoError("decode: latent size mismatch");
        ctx.conv.resize(dec_convs_.size());
        ctx.act.resize(dec_convs_.size());
        ctx.batch = batch;
        std::vector<S> cur = dec_head_.forward(s, batch, ctx.head);
        cur = lrelu_.forward(cur, ctx.head_act);
        cur = unflatten(cur, cfg_.channels.back(), cfg_.feat_h() * cfg_.feat_w(), batch);
        for (size_t i = 0; i < dec_convs_.size(); ++i) {
            cur = dec_convs_[i].forward(cur, batch, ctx.conv[i]);
            if (i + 1 < dec_convs_.size())
                cur = lrelu_.forward(cur, ctx.act[i]);
        }
        return sigmoid_.forward(cur, ctx.out);
    }

    std::vector<S> decode_backward(const std::vector<S>& dout, DecCtx& ctx) {
        std::vector<S> dcur = sigmoid_.backward(dout, ctx.out);
        for (size_t i = dec_convs_.size(); i-- > 0;) {
            if (i + 1 < dec_convs_.size())
                dcur = lrelu_.backward(dcur, ctx.act[i]);
            dcur = dec_convs_[i].backward(dcur, ctx.conv[i]);
        }
        dcur = flatten(dcur, cfg_.channels.back(), cfg_.feat_h() * cfg_.feat_w(), ctx.batch);
        dcur = lrelu_.backward(dcur, ctx.head_act);
        return dec_head_.backward(dcur, ctx.head);
    }

    GaussianBelief<S> encode(const Image& o) const {
        if (o.width != cfg_.width || o.height != cfg_.height)
            throw ModelIoError("encode: observation resolution mismatch");
        std::vector<S> cr;
        append_observation_cr(cr, o, 1, 0);
        GaussianBelief<S> b;
        EncCtx ctx;
        encode_batch(cr, 1, b.mean, b.logvar, ctx);
        return b;
    }

    GaussianBelief<S> transition(const std::vector<S>& s, const Action& a) const {
        std::vector<S> a9(9);
        const Vec9 enc = a.encode();
        for (int i = 0; i < 9; ++i) a9[static_cast<size_t>(i)] = static_cast<S>(enc[i]);
        GaussianBelief<S> b;
        TransCtx ctx;
        transition_batch(s, a9, 1, b.mean, b.logvar, ctx);
        return b;
    }

    Image decode(const std::vector<S>& s) const {
        DecCtx ctx;
        const std::vector<S> out = decode_batch(s, 1, ctx);
        Image img(cfg_.width, cfg_.height);
        const int hw = cfg_.width * cfg_.height;
        for (int c = 0; c < 3; ++c)
            for (int y = 0; y < cfg_.height; ++y)
                for (int x = 0; x < cfg_.width; ++x)
                    img.at(y, x, c) = std::clamp(
                        static_cast<float>(out[static_cast<size_t>(c) * hw + y * cfg_.width + x]),
                        0.0f, 1.0f);
        return img;
    }

    // Free energy over a pair batch: accuracy is the squared L2 norm of
    // the residual between the decoded sample of the transitioned belief
    // and the next observation (summed over pixels and channels);
    // complexity is KL(posterior || transitioned prior). Both are
    // batch-averaged. loss = accuracy + beta * complexity.
    // noise1 drives the previous-state sample, noise2 the transitioned one;
    // both are [D, B] unit normals. Gradients accumulate when with_grad.
    LossTerms free_energy(const PairBatch<S>& pb, double beta, const std::vector<S>& noise1,
                          const std::vector<S>& noise2, bool with_grad) {
        const int B = pb.batch;
        const int D = cfg_.latent_dim;
        const size_t n = static_cast<size_t>(D) * B;
        if (noise1.size() != n || noise2.size() != n)
            throw ModelIoError("free_energy: noise size mismatch");
        if (beta <= 0.0) throw Error("free_energy: beta must be positive");

        EncCtx ctxP, ctxQ;
        TransCtx ctxT;
        DecCtx ctxD;
        std::vector<S> muP, lvP, muQ, lvQ, muT, lvT;
        encode_batch(pb.o_prev, B, muP, lvP, ctxP);
        std::vector<S> sPrev(n);
        for (size_t i = 0; i < n; ++i)
            sPrev[i] = muP[i] + std::exp(lvP[i] / S(2)) * noise1[i];
        transition_batch(sPrev, pb.actions, B, muT, lvT, ctxT);
        encode_batch(pb.o_next, B, muQ, lvQ, ctxQ);
        std::vector<S> sHat(n);
        for (size_t i = 0; i < n; ++i)
            sHat[i] = muT[i] + std::exp(lvT[i] / S(2)) * noise2[i];
        const std::vector<S> oHat = decode_batch(sHat, B, ctxD);

        const size_t npix = pb.o_next.size();
        double acc = 0.0;
        for (size_t i = 0; i < npix; ++i) {
            const double d = static_cast<double>(oHat[i]) - static_cast<double>(pb.o_next[i]);
            acc += d * d;
        }
        acc /= B;

        double comp = 0.0;
        for (size_t i = 0; i < n; ++i) {
            const double lq = static_cast<double>(lvQ[i]);
            const double lp = static_cast<double>(lvT[i]);
            const double dm = static_cast<double>(muT[i]) - static_cast<double>(muQ[i]);
            comp += 0.5 * (std::exp(lq - lp) + dm * dm * std::exp(-lp) - 1.0 + (lp - lq));
        }
        comp /= B;

        LossTerms t;
        t.accuracy = acc;
        t.complexity = comp;
        t.loss = acc + beta * comp;

        if (!with_grad) return t;

        std::vector<S> dOHat(npix);
        for (size_t i = 0; i < npix; ++i)
            dOHat[i] = static_cast<S>(2.0 / B) * (oHat[i] - pb.o_next[i]);
        std::vector<S> dSHat = decode_backward(dOHat, ctxD);

        std::vector<S> dMuT(n), dLvT(n), dMuQ(n), dLvQ(n);
        const S kb = static_cast<S>(beta / B);
        for (size_t i = 0; i < n; ++i) {
            dMuT[i] = dSHat[i];
            dLvT[i] = dSHat[i] * noise2[i] * std::exp(lvT[i] / S(2)) / S(2);
            const S e_qp = std::exp(lvQ[i] - lvT[i]);
            const S e_mp = std::exp(-lvT[i]);
            const S dm = muT[i] - muQ[i];
            dMuQ[i] = kb * (-dm) * e_mp;
            dLvQ[i] = kb * (e_qp - S(1)) / S(2);
            dMuT[i] += kb * dm * e_mp;
            dLvT[i] += kb * (S(1) - e_qp - dm * dm * e_mp) / S(2);
        }
        encode_backward(ctxQ, dMuQ, dLvQ);
        std::vector<S> dSPrev = transition_backward(ctxT, dMuT, dLvT);
        std::vector<S> dMuP(n), dLvP(n);
        for (size_t i = 0; i < n; ++i) {
            dMuP[i] = dSPrev[i];
            dLvP[i] = dSPrev[i] * noise1[i] * std::exp(lvP[i] / S(2)) / S(2);
        }
        encode_backward(ctxP, dMuP, dLvP);
        return t;
    }

    LossTerms free_energy_loss(const Image& o_prev, const Action& a, const Image& o_next,
                               double beta, const std::vector<S>& noise1,
                               const std::vector<S>& noise2, bool with_grad = false) {
        PairBatch<S> pb;
        pb.batch = 1;
        append_observation_cr(pb.o_prev, o_prev, 1, 0);
        append_observation_cr(pb.o_next, o_next, 1, 0);
        pb.actions.resize(9);
        const Vec9 enc = a.encode();
        for (int i = 0; i < 9; ++i) pb.actions[static_cast<size_t>(i)] = static_cast<S>(enc[i]);
        return free_energy(pb, beta, noise1, noise2, with_grad);
    }

  private:
    // conv channel-row [C, B*hw] <-> dense [C*hw, B]
    static std::vector<S> flatten(const std::vector<S>& x, int C, int hw, int B) {
        std::vector<S> y(x.size());
        for (int c = 0; c < C; ++c)
            for (int b = 0; b < B; ++b)
                for (int s = 0; s < hw; ++s)
                    y[(static_cast<size_t>(c) * hw + s) * B + b] =
                        x[(static_cast<size_t>(c) * B + b) * hw + s];
        return y;
    }

    static std::vector<S> unflatten(const std::vector<S>& x, int C, int hw, int B) {
        std::vector<S> y(x.size());
        for (int c = 0; c < C; ++c)
            for (int b = 0; b < B; ++b)
                for (int s = 0; s < hw; ++s)
                    y[(static_cast<size_t>(c) * B + b) * hw + s] =
                        x[(static_cast<size_t>(c) * hw + s) * B + b];
        return y;
    }

    // Head output [2D, B] -> mean rows + soft-clamped logvar rows.
    void split_head(const std::vector<S>& head, int batch, std::vector<S>& mean,
                    std::vector<S>& logvar) const {
        const size_t n = static_cast<size_t>(cfg_.latent_dim) * batch;
        mean.assign(head.begin(), head.begin() + static_cast<long>(n));
        logvar.resize(n);
        for (size_t i = 0; i < n; ++i) {
            const double raw = static_cast<double>(head[n + i]);
            logvar[i] = static_cast<S>(kLogvarClamp * std::tanh(raw / kLogvarClamp));
        }
    }

    std::vector<S> merge_head_grad(const std::vector<S>& logvar, int batch,
                                   const std::vector<S>& dmean,
                                   const std::vector<S>& dlogvar) const {
        const size_t n = static_cast<size_t>(cfg_.latent_dim) * batch;
        std::vector<S> dhead(2 * n);
        for (size_t i = 0; i < n; ++i) dhead[i] = dmean[i];
        for (size_t i = 0; i < n; ++i) {
            const S th = logvar[i] / static_cast<S>(kLogvarClamp);
            dhead[n + i] = dlogvar[i] * (S(1) - th * th);
        }
        return dhead;
    }

    ModelConfig cfg_;
    std::vector<nn::Conv2d<S>> enc_convs_;
    nn::Dense<S> enc_head_;
    nn::Dense<S> dec_head_;
    std::vector<nn::ConvT2d<S>> dec_convs_;
    std::vector<nn::Dense<S>> trans_;
    nn::LeakyRelu<S> lrelu_;
    nn::Sigmoid<S> sigmoid_;
};

// Checkpoint = manifest.json + one raw little-endian float32 file per param.
namespace modelio {

template <typename S>
inline void write_f32(const std::filesystem::path& path, const std::vector<S>& v) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ModelIoError("cannot write " + path.string());
    for (const S x : v) {
        const float q = static_cast<float>(x);
        f.write(reinterpret_cast<const char*>(&q), sizeof(float));
    }
}

template <typename S>
inline void read_f32(const std::filesystem::path& path, std::vector<S>& v) {
    std::ifstream f(path, std::ios::binary | std::ios::ate);
    if (!f) throw ModelIoError("cannot read " + path.string());
    const auto bytes = static_cast<size_t>(f.tellg());
    if (bytes != v.size() * sizeof(float))
        throw ModelIoError("size mismatch in " + path.string() + ": expected " +
                           std::to_string(v.size() * sizeof(float)) + " bytes, found " +
                           std::to_string(bytes));
    f.seekg(0);
    for (auto& x : v) {
        float q = 0.0f;
        f.read(reinterpret_cast<char*>(&q), sizeof(float));
        x = static_cast<S>(q);
    }
}

}  // namespace modelio

template <typename S>
inline void save_checkpoint(const Model<S>& model, const std::filesystem::path& dir,
                            const Json& extra = Json::object()) {
    std::filesystem::create_directories(dir);
    Json manifest;
    manifest["format_version"] = 1;
    manifest["tool_version"] = kVersion;
    manifest["fingerprint"] = model.config().fingerprint();
    manifest["model"] = model.config();
    manifest["extra"] = extra;
    Json plist = Json::array();
    for (const auto* p : model.params()) {
        const std::string file = p->name + ".f32";
        plist.push_back(Json{{"name", p->name}, {"shape", p->shape}, {"file", file}});
        modelio::write_f32(dir / file, p->value);
    }
    manifest["params"] = plist;
    std::ofstream f(dir / "manifest.json");
    if (!f) throw ModelIoError("cannot write manifest in " + dir.string());
    f << manifest.dump(2) << "\n";
}

struct Checkpoint {
    Model<float> model{ModelConfig{}};
    Json manifest;
};

inline Checkpoint load_checkpoint(const std::filesystem::path& dir) {
    std::ifstream f(dir / "manifest.json");
    if (!f) throw ModelIoError("missing manifest.json in " + dir.string());
    Json manifest = Json::parse(f);
    const ModelConfig cfg = manifest.at("model").get<ModelConfig>();
    if (manifest.at("fingerprint").get<std::string>() != cfg.fingerprint())
        throw ModelIoError("fingerprint does not match the stored architecture");
    Checkpoint ck{Model<float>(cfg), std::move(manifest)};
    auto params = ck.model.params();
    const Json& plist = ck.manifest.at("params");
    if (plist.size() != params.size())
        throw ModelIoError("parameter list length mismatch in " + dir.string());
    for (size_t i = 0; i < params.size(); ++i) {
        const Json& e = plist[i];
        if (e.at("name").get<std::string>() != params[i]->name)
            throw ModelIoError("parameter order mismatch: " + e.at("name").get<std::string>());
        if (e.at("shape").get<std::vector<int>>() != params[i]->shape)
            throw ModelIoError("shape mismatch for " + params[i]->name);
        modelio::read_f32(dir / e.at("file").get<std::string>(), params[i]->value);
    }
    return ck;
}

}  // namespace symlab
