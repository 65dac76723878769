// Copyright 2026 The edgesel Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "edgesel/convnet.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "edgesel/kernels.hpp"
#include "edgesel/selector_graph.hpp"
#include "token_stream.hpp"

namespace edgesel {

    namespace {

        double sigmoid(double z) {
            return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
        }

        double softplus(double z) {
            return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
        }

        // Y[r] = W X[r] for row-major X (rows x in) and W (out x in).
        void matmul_wt(std::span<const double> x, std::size_t rows, std::size_t in, const double* w, std::size_t out,
                       std::span<double> y) {
            const auto& k = kernels::active();
            for (std::size_t r = 0; r < rows; ++r) {
                k.gemv(w, out, in, x.data() + r * in, nullptr, y.data() + r * out);
            }
        }

        // gW += gY^T X.
        void acc_outer(std::span<const double> gy, std::span<const double> x, std::size_t rows, std::size_t in,
                       std::size_t out, double* gw) {
            const auto& k = kernels::active();
            for (std::size_t r = 0; r < rows; ++r) {
                for (std::size_t o = 0; o < out; ++o) {
                    const double g = gy[r * out + o];
                    if (g != 0.0) {
                        k.axpy(g, x.data() + r * in, gw + o * in, in);
                    }
                }
            }
        }

        // gX += gY W.
        void acc_back(std::span<const double> gy, const double* w, std::size_t rows, std::size_t in, std::size_t out,
                      std::span<double> gx) {
            const auto& k = kernels::active();
            for (std::size_t r = 0; r < rows; ++r) {
                for (std::size_t o = 0; o < out; ++o) {
                    const double g = gy[r * out + o];
                    if (g != 0.0) {
                        k.axpy(g, w + o * in, gx.data() + r * in, in);
                    }
                }
            }
        }

        struct NormCache {
            std::vector<double> xhat;
            std::vector<double> invstd;
            std::vector<double> out;
        };

        // Batch norm over rows of `p` (rows x h). In training mode batch mean and biased variance are used and
        // reported through mean/var.
        void bn_forward(std::span<const double> p, std::size_t rows, std::size_t h, const double* gamma,
                        const double* beta, bool train, double eps, const double* run_mean, const double* run_var,
                        NormCache& c, double* mean_out, double* var_out) {
            c.xhat.assign(rows * h, 0.0);
            c.invstd.assign(h, 0.0);
            c.out.assign(rows * h, 0.0);
            std::vector<double> mean(h, 0.0);
            std::vector<double> var(h, 0.0);
            if (train) {
                for (std::size_t r = 0; r < rows; ++r) {
                    for (std::size_t j = 0; j < h; ++j) {
                        mean[j] += p[r * h + j];
                    }
                }
                for (auto& v : mean) {
                    v /= static_cast<double>(rows);
                }
                for (std::size_t r = 0; r < rows; ++r) {
                    for (std::size_t j = 0; j < h; ++j) {
                        const double d = p[r * h + j] - mean[j];
                        var[j] += d * d;
                    }
                }
                for (auto& v : var) {
                    v /= static_cast<double>(rows);
                }
                if (mean_out) {
                    std::copy(mean.begin(), mean.end(), mean_out);
                    std::copy(var.begin(), var.end(), var_out);
                }
            } else {
                std::copy_n(run_mean, h, mean.begin());
                std::copy_n(run_var, h, var.begin());
            }
            for (std::size_t j = 0; j < h; ++j) {
                c.invstd[j] = 1.0 / std::sqrt(var[j] + eps);
            }
            for (std::size_t r = 0; r < rows; ++r) {
                for (std::size_t j = 0; j < h; ++j) {
                    const double xh = (p[r * h + j] - mean[j]) * c.invstd[j];
                    c.xhat[r * h + j] = xh;
                    c.out[r * h + j] = gamma[j] * xh + beta[j];
                }
            }
        }

        // Training-mode batch-norm backward. `gy` is the gradient at the normalized output.
        void bn_backward(std::span<const double> gy, std::size_t rows, std::size_t h, const double* gamma,
                         const NormCache& c, double* ggamma, double* gbeta, std::span<double> gp) {
            std::vector<double> sum_g(h, 0.0);
            std::vector<double> sum_gx(h, 0.0);
            for (std::size_t r = 0; r < rows; ++r) {
                for (std::size_t j = 0; j < h; ++j) {
                    const double g = gy[r * h + j];
                    ggamma[j] += g * c.xhat[r * h + j];
                    gbeta[j] += g;
                    const double gx = g * gamma[j];
                    sum_g[j] += gx;
                    sum_gx[j] += gx * c.xhat[r * h + j];
                }
            }
            const double nr = static_cast<double>(rows);
            for (std::size_t r = 0; r < rows; ++r) {
                for (std::size_t j = 0; j < h; ++j) {
                    const double gx = gy[r * h + j] * gamma[j];
                    gp[r * h + j] = c.invstd[j] / nr * (nr * gx - sum_g[j] - c.xhat[r * h + j] * sum_gx[j]);
                }
            }
        }

        void check_finite(std::span<const double> v, std::size_t layer, const char* what) {
            for (const double x : v) {
                if (!std::isfinite(x)) {
                    throw std::runtime_error(std::string("convnet: non-finite ") + what + " activation in layer " +
                                             std::to_string(layer));
                }
            }
        }

    }  // namespace

    ConvNetModel::Layout ConvNetModel::make_layout(const Config& c) {
        if (c.hidden < 2 || c.hidden % 2 != 0) {
            throw std::invalid_argument("convnet: hidden width must be even and at least 2");
        }
        const std::size_t h = c.hidden;
        const std::size_t h2 = h / 2;
        Layout l;
        std::size_t at = 0;
        auto take = [&](std::size_t n) {
            const auto o = at;
            at += n;
            return o;
        };
        l.node_w = take(h * 3);
        l.node_b = take(h);
        l.dist_w = take(h2);
        l.dist_b = take(h2);
        l.type_table = take(2 * h2);
        std::size_t run_at = 0;
        auto take_run = [&](std::size_t n) {
            const auto o = run_at;
            run_at += n;
            return o;
        };
        for (std::size_t k = 0; k < c.layers; ++k) {
            LayerOffsets lo{};
            lo.w1 = take(h * h);
            lo.w2 = take(h * h);
            lo.w3 = take(h * h);
            lo.w4 = take(h * h);
            lo.w5 = take(h * h);
            lo.node_gamma = take(h);
            lo.node_beta = take(h);
            lo.edge_gamma = take(h);
            lo.edge_beta = take(h);
            lo.node_mean = take_run(h);
            lo.node_var = take_run(h);
            lo.edge_mean = take_run(h);
            lo.edge_var = take_run(h);
            l.layers.push_back(lo);
        }
        l.head_w1 = take(h * h);
        l.head_b1 = take(h);
        l.head_w2 = take(h);
        l.head_b2 = take(1);
        l.num_params = at;
        l.num_running = run_at;
        return l;
    }

    ConvNetModel::ConvNetModel(Config config)
        : config_(config), layout_(make_layout(config)), params_(layout_.num_params, 0.0),
          running_(layout_.num_running, 0.0) {
        const std::size_t h = config_.hidden;
        for (const auto& lo : layout_.layers) {
            std::fill_n(params_.begin() + static_cast<std::ptrdiff_t>(lo.node_gamma), h, 1.0);
            std::fill_n(params_.begin() + static_cast<std::ptrdiff_t>(lo.edge_gamma), h, 1.0);
            std::fill_n(running_.begin() + static_cast<std::ptrdiff_t>(lo.node_var), h, 1.0);
            std::fill_n(running_.begin() + static_cast<std::ptrdiff_t>(lo.edge_var), h, 1.0);
        }
    }

    void ConvNetModel::initialize(Rng& rng) {
        const std::size_t h = config_.hidden;
        auto fill = [&](std::size_t offset, std::size_t count, double fan_in) {
            const double limit = 1.0 / std::sqrt(fan_in);
            for (std::size_t k = 0; k < count; ++k) {
                params_[offset + k] = rng.uniform(-limit, limit);
            }
        };
        fill(layout_.node_w, h * 3, 3.0);
        fill(layout_.node_b, h, 3.0);
        fill(layout_.dist_w, h / 2, 1.0);
        fill(layout_.dist_b, h / 2, 1.0);
        fill(layout_.type_table, h, 1.0);
        for (const auto& lo : layout_.layers) {
            for (const auto w : {lo.w1, lo.w2, lo.w3, lo.w4, lo.w5}) {
                fill(w, h * h, static_cast<double>(h));
            }
        }
        fill(layout_.head_w1, h * h, static_cast<double>(h));
        fill(layout_.head_b1, h, static_cast<double>(h));
        fill(layout_.head_w2, h, static_cast<double>(h));
        params_[layout_.head_b2] = 0.0;
    }

    void ConvNetModel::zero_head() {
        const std::size_t h = config_.hidden;
        std::fill_n(params_.begin() + static_cast<std::ptrdiff_t>(layout_.head_w2), h, 0.0);
        params_[layout_.head_b2] = 0.0;
    }

    struct ConvNetModel::Cache {
        struct Layer {
            std::vector<double> x;
            std::vector<double> e;
            std::vector<double> s;
            std::vector<double> denom;
            std::vector<double> v;
            NormCache node_bn;
            NormCache edge_bn;
        };
        std::vector<Layer> layers;
        std::vector<double> head_in;
        std::vector<double> head_pre;
        std::vector<double> logits;
    };

    double ConvNetModel::run(const GraphBatch& batch, Mode mode, std::span<const double> targets,
                             std::span<double> grad, std::vector<double>* probs, BatchStats* stats) const {
        const std::size_t h = config_.hidden;
        const std::size_t h2 = h / 2;
        const std::size_t n = batch.num_nodes();
        const std::size_t m = batch.num_edges();
        const std::size_t md = 2 * m;
        if (batch.node_features.size() != n * 3 || batch.edge_distance.size() != m || batch.edge_type.size() != m) {
            throw std::invalid_argument("convnet: inconsistent graph batch");
        }
        if (!targets.empty() && targets.size() != m) {
            throw std::invalid_argument("convnet: target count does not match edge count");
        }
        const bool train = mode == Mode::kTrain;
        const double* P = params_.data();
        const auto& L = layout_;

        std::vector<int> src(md);
        std::vector<int> dst(md);
        for (std::size_t k = 0; k < m; ++k) {
            src[2 * k] = batch.edges[k].first;
            dst[2 * k] = batch.edges[k].second;
            src[2 * k + 1] = batch.edges[k].second;
            dst[2 * k + 1] = batch.edges[k].first;
        }

        std::vector<double> x(n * h);
        matmul_wt(batch.node_features, n, 3, P + L.node_w, h, x);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < h; ++j) {
                x[i * h + j] += P[L.node_b + j];
            }
        }
        std::vector<double> e(md * h);
        for (std::size_t d = 0; d < md; ++d) {
            const std::size_t k = d / 2;
            const auto type = static_cast<std::size_t>(batch.edge_type[k] != 0 ? 1 : 0);
            for (std::size_t j = 0; j < h2; ++j) {
                e[d * h + j] = P[L.dist_w + j] * batch.edge_distance[k] + P[L.dist_b + j];
                e[d * h + h2 + j] = P[L.type_table + type * h2 + j];
            }
        }

        if (stats) {
            stats->values.assign(config_.layers * 4 * h, 0.0);
        }
        Cache cache;
        cache.layers.resize(config_.layers);
        std::vector<double> tmp;

        for (std::size_t l = 0; l < config_.layers; ++l) {
            const auto& lo = L.layers[l];
            auto& c = cache.layers[l];
            c.x = x;
            c.e = e;
            c.s.resize(md * h);
            c.denom.assign(n * h, config_.aggregation_eps);
            for (std::size_t d = 0; d < md; ++d) {
                const auto i = static_cast<std::size_t>(src[d]);
                for (std::size_t j = 0; j < h; ++j) {
                    const double s = sigmoid(e[d * h + j]);
                    c.s[d * h + j] = s;
                    c.denom[i * h + j] += s;
                }
            }
            std::vector<double> pre(n * h);
            matmul_wt(x, n, h, P + lo.w1, h, pre);
            c.v.resize(n * h);
            matmul_wt(x, n, h, P + lo.w2, h, c.v);
            for (std::size_t d = 0; d < md; ++d) {
                const auto i = static_cast<std::size_t>(src[d]);
                const auto jn = static_cast<std::size_t>(dst[d]);
                for (std::size_t j = 0; j < h; ++j) {
                    pre[i * h + j] += c.s[d * h + j] / c.denom[i * h + j] * c.v[jn * h + j];
                }
            }
            double* st = stats ? stats->values.data() + l * 4 * h : nullptr;
            bn_forward(pre, n, h, P + lo.node_gamma, P + lo.node_beta, train, config_.bn_eps,
                       running_.data() + lo.node_mean, running_.data() + lo.node_var, c.node_bn, st,
                       st ? st + h : nullptr);

            std::vector<double> epre(md * h);
            matmul_wt(e, md, h, P + lo.w3, h, epre);
            std::vector<double> a4(n * h);
            std::vector<double> a5(n * h);
            matmul_wt(x, n, h, P + lo.w4, h, a4);
            matmul_wt(x, n, h, P + lo.w5, h, a5);
            for (std::size_t d = 0; d < md; ++d) {
                const auto i = static_cast<std::size_t>(src[d]);
                const auto jn = static_cast<std::size_t>(dst[d]);
                for (std::size_t j = 0; j < h; ++j) {
                    epre[d * h + j] += a4[i * h + j] + a5[jn * h + j];
                }
            }
            bn_forward(epre, md, h, P + lo.edge_gamma, P + lo.edge_beta, train, config_.bn_eps,
                       running_.data() + lo.edge_mean, running_.data() + lo.edge_var, c.edge_bn,
                       st ? st + 2 * h : nullptr, st ? st + 3 * h : nullptr);

            for (std::size_t k = 0; k < n * h; ++k) {
                x[k] += std::max(c.node_bn.out[k], 0.0);
            }
            for (std::size_t k = 0; k < md * h; ++k) {
                e[k] += std::max(c.edge_bn.out[k], 0.0);
            }
            check_finite(x, l, "node");
            check_finite(e, l, "edge");
        }

        cache.head_in.resize(m * h);
        cache.head_pre.resize(m * h);
        cache.logits.resize(m);
        if (probs) {
            probs->resize(m);
        }
        double loss = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            double* hin = cache.head_in.data() + k * h;
            for (std::size_t j = 0; j < h; ++j) {
                hin[j] = 0.5 * (e[2 * k * h + j] + e[(2 * k + 1) * h + j]);
            }
            double* hp = cache.head_pre.data() + k * h;
            kernels::active().gemv(P + L.head_w1, h, h, hin, P + L.head_b1, hp);
            double y = P[L.head_b2];
            for (std::size_t j = 0; j < h; ++j) {
                y += P[L.head_w2 + j] * std::max(hp[j], 0.0);
            }
            if (!std::isfinite(y)) {
                throw std::runtime_error("convnet: non-finite head output");
            }
            cache.logits[k] = y;
            if (probs) {
                (*probs)[k] = sigmoid(y);
            }
            if (!targets.empty()) {
                loss += targets[k] * softplus(-y) + (1.0 - targets[k]) * softplus(y);
            }
        }
        if (m > 0) {
            loss /= static_cast<double>(m);
        }
        if (grad.empty() || targets.empty() || m == 0) {
            return loss;
        }
        if (!train) {
            throw std::logic_error("convnet: gradients require training mode");
        }
        if (grad.size() != params_.size()) {
            throw std::invalid_argument("convnet: gradient buffer has the wrong size");
        }

        double* G = grad.data();
        std::vector<double> ge(md * h, 0.0);
        const double inv_m = 1.0 / static_cast<double>(m);
        std::vector<double> gz(h);
        std::vector<double> gm(h);
        for (std::size_t k = 0; k < m; ++k) {
            const double gy = (sigmoid(cache.logits[k]) - targets[k]) * inv_m;
            const double* hp = cache.head_pre.data() + k * h;
            const double* hin = cache.head_in.data() + k * h;
            G[L.head_b2] += gy;
            for (std::size_t j = 0; j < h; ++j) {
                const double r = std::max(hp[j], 0.0);
                G[L.head_w2 + j] += gy * r;
                gz[j] = hp[j] > 0.0 ? gy * P[L.head_w2 + j] : 0.0;
                G[L.head_b1 + j] += gz[j];
            }
            acc_outer(gz, std::span<const double>(hin, h), 1, h, h, G + L.head_w1);
            std::ranges::fill(gm, 0.0);
            acc_back(gz, P + L.head_w1, 1, h, h, gm);
            for (std::size_t j = 0; j < h; ++j) {
                ge[2 * k * h + j] += 0.5 * gm[j];
                ge[(2 * k + 1) * h + j] += 0.5 * gm[j];
            }
        }
        std::vector<double> gx(n * h, 0.0);

        for (std::size_t l = config_.layers; l-- > 0;) {
            const auto& lo = L.layers[l];
            const auto& c = cache.layers[l];
            std::vector<double> gx_in = gx;
            std::vector<double> ge_in = ge;

            // Node branch.
            std::vector<double> gyn(n * h);
            for (std::size_t k = 0; k < n * h; ++k) {
                gyn[k] = c.node_bn.out[k] > 0.0 ? gx[k] : 0.0;
            }
            std::vector<double> gp(n * h);
            bn_backward(gyn, n, h, P + lo.node_gamma, c.node_bn, G + lo.node_gamma, G + lo.node_beta, gp);
            acc_outer(gp, c.x, n, h, h, G + lo.w1);
            acc_back(gp, P + lo.w1, n, h, h, gx_in);
            std::vector<double> gv(n * h, 0.0);
            std::vector<double> gdenom(n * h, 0.0);
            std::vector<double> gs(md * h);
            for (std::size_t d = 0; d < md; ++d) {
                const auto i = static_cast<std::size_t>(src[d]);
                const auto jn = static_cast<std::size_t>(dst[d]);
                for (std::size_t j = 0; j < h; ++j) {
                    const double den = c.denom[i * h + j];
                    const double eta = c.s[d * h + j] / den;
                    const double g = gp[i * h + j];
                    gv[jn * h + j] += g * eta;
                    const double geta = g * c.v[jn * h + j];
                    gs[d * h + j] = geta / den;
                    gdenom[i * h + j] -= geta * eta / den;
                }
            }
            for (std::size_t d = 0; d < md; ++d) {
                const auto i = static_cast<std::size_t>(src[d]);
                for (std::size_t j = 0; j < h; ++j) {
                    const double s = c.s[d * h + j];
                    ge_in[d * h + j] += (gs[d * h + j] + gdenom[i * h + j]) * s * (1.0 - s);
                }
            }
            acc_outer(gv, c.x, n, h, h, G + lo.w2);
            acc_back(gv, P + lo.w2, n, h, h, gx_in);

            // Edge branch.
            std::vector<double> gye(md * h);
            for (std::size_t k = 0; k < md * h; ++k) {
                gye[k] = c.edge_bn.out[k] > 0.0 ? ge[k] : 0.0;
            }
            std::vector<double> gq(md * h);
            bn_backward(gye, md, h, P + lo.edge_gamma, c.edge_bn, G + lo.edge_gamma, G + lo.edge_beta, gq);
            acc_outer(gq, c.e, md, h, h, G + lo.w3);
            acc_back(gq, P + lo.w3, md, h, h, ge_in);
            std::vector<double> ga4(n * h, 0.0);
            std::vector<double> ga5(n * h, 0.0);
            for (std::size_t d = 0; d < md; ++d) {
                const auto i = static_cast<std::size_t>(src[d]);
                const auto jn = static_cast<std::size_t>(dst[d]);
                for (std::size_t j = 0; j < h; ++j) {
                    ga4[i * h + j] += gq[d * h + j];
                    ga5[jn * h + j] += gq[d * h + j];
                }
            }
            acc_outer(ga4, c.x, n, h, h, G + lo.w4);
            acc_back(ga4, P + lo.w4, n, h, h, gx_in);
            acc_outer(ga5, c.x, n, h, h, G + lo.w5);
            acc_back(ga5, P + lo.w5, n, h, h, gx_in);

            gx = std::move(gx_in);
            ge = std::move(ge_in);
        }

        acc_outer(gx, batch.node_features, n, 3, h, G + L.node_w);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < h; ++j) {
                G[L.node_b + j] += gx[i * h + j];
            }
        }
        for (std::size_t d = 0; d < md; ++d) {
            const std::size_t k = d / 2;
            const auto type = static_cast<std::size_t>(batch.edge_type[k] != 0 ? 1 : 0);
            for (std::size_t j = 0; j < h2; ++j) {
                G[L.dist_w + j] += ge[d * h + j] * batch.edge_distance[k];
                G[L.dist_b + j] += ge[d * h + j];
                G[L.type_table + type * h2 + j] += ge[d * h + h2 + j];
            }
        }
        return loss;
    }

    std::vector<double> ConvNetModel::forward(const GraphBatch& batch, Mode mode, BatchStats* stats) const {
        std::vector<double> probs;
        run(batch, mode, {}, {}, &probs, stats);
        return probs;
    }

    double ConvNetModel::loss_and_gradient(const GraphBatch& batch, std::span<const double> targets,
                                           std::span<double> grad, BatchStats* stats) const {
        if (targets.size() != batch.num_edges()) {
            throw std::invalid_argument("convnet: target count does not match edge count");
        }
        return run(batch, Mode::kTrain, targets, grad, nullptr, stats);
    }

    void ConvNetModel::update_running_stats(const BatchStats& stats) {
        const std::size_t h = config_.hidden;
        if (stats.values.size() != config_.layers * 4 * h) {
            throw std::invalid_argument("convnet: batch statistics have the wrong size");
        }
        const double mom = config_.bn_momentum;
        for (std::size_t l = 0; l < config_.layers; ++l) {
            const auto& lo = layout_.layers[l];
            const double* s = stats.values.data() + l * 4 * h;
            const std::size_t targets[4] = {lo.node_mean, lo.node_var, lo.edge_mean, lo.edge_var};
            for (std::size_t part = 0; part < 4; ++part) {
                for (std::size_t j = 0; j < h; ++j) {
                    double& r = running_[targets[part] + j];
                    r = (1.0 - mom) * r + mom * s[part * h + j];
                }
            }
        }
    }

    std::string ConvNetModel::serialize() const {
        std::string out = "edgesel-convnet 1\n";
        out += "hidden " + std::to_string(config_.hidden) + " layers " + std::to_string(config_.layers) + " eps " +
               text::format_double(config_.aggregation_eps) + " bn_eps " + text::format_double(config_.bn_eps) +
               " momentum " + text::format_double(config_.bn_momentum) + "\n";
        out += "params " + std::to_string(params_.size()) + "\n";
        detail::write_numbers(out, params_);
        out += "running " + std::to_string(running_.size()) + "\n";
        detail::write_numbers(out, running_);
        return out;
    }

    ConvNetModel ConvNetModel::deserialize(std::string_view content) {
        detail::TokenStream ts(content);
        ts.expect("edgesel-convnet");
        if (ts.integer() != 1) {
            throw std::runtime_error("unsupported convnet checkpoint version");
        }
        Config c;
        ts.expect("hidden");
        c.hidden = static_cast<std::size_t>(ts.integer());
        ts.expect("layers");
        c.layers = static_cast<std::size_t>(ts.integer());
        ts.expect("eps");
        c.aggregation_eps = ts.number();
        ts.expect("bn_eps");
        c.bn_eps = ts.number();
        ts.expect("momentum");
        c.bn_momentum = ts.number();
        ConvNetModel model(c);
        ts.expect("params");
        if (static_cast<std::size_t>(ts.integer()) != model.params_.size()) {
            throw std::runtime_error("convnet checkpoint: parameter count does not match the shape");
        }
        ts.numbers(model.params_);
        ts.expect("running");
        if (static_cast<std::size_t>(ts.integer()) != model.running_.size()) {
            throw std::runtime_error("convnet checkpoint: running statistics do not match the shape");
        }
        ts.numbers(model.running_);
        return model;
    }

    void ConvNetModel::save(const std::string& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) {
            throw std::runtime_error("cannot write " + path);
        }
        out << serialize();
    }

    ConvNetModel ConvNetModel::load(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            throw std::runtime_error("cannot read " + path);
        }
        std::stringstream ss;
        ss << in.rdbuf();
        return deserialize(ss.str());
    }

}  // namespace edgesel
