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

#include "edgesel/fnn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "edgesel/kernels.hpp"
#include "token_stream.hpp"

namespace edgesel {

    namespace {

        double sigmoid(double z) {
            return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
        }

        double bce_from_logit(double z, int label) {
            const double s = label == 1 ? z : -z;
            return s > 0.0 ? std::log1p(std::exp(-s)) : -s + std::log1p(std::exp(s));
        }

    }  // namespace

    FnnModel::FnnModel(std::size_t num_inputs, std::span<const std::size_t> hidden)
        : shift_(num_inputs, 0.0), scale_(num_inputs, 1.0) {
        std::size_t in = num_inputs;
        for (std::size_t k = 0; k <= hidden.size(); ++k) {
            const std::size_t out = k < hidden.size() ? hidden[k] : 1;
            if (out == 0) {
                throw std::invalid_argument("fnn: hidden layers must be non-empty");
            }
            layers_.push_back({in, out, std::vector<double>(in * out, 0.0), std::vector<double>(out, 0.0)});
            in = out;
        }
    }

    void FnnModel::initialize(Rng& rng) {
        for (auto& layer : layers_) {
            const double limit = std::sqrt(6.0 / static_cast<double>(layer.inputs));
            for (auto& w : layer.weights) {
                w = rng.uniform(-limit, limit);
            }
            std::ranges::fill(layer.bias, 0.0);
        }
    }

    void FnnModel::set_input_transform(std::vector<double> shift, std::vector<double> scale) {
        if (shift.size() != num_inputs() || scale.size() != num_inputs()) {
            throw std::invalid_argument("fnn: input transform has the wrong dimension");
        }
        shift_ = std::move(shift);
        scale_ = std::move(scale);
    }

    double FnnModel::logit(std::span<const double> x) const {
        if (x.size() != num_inputs()) {
            throw std::invalid_argument("fnn: expected " + std::to_string(num_inputs()) + " inputs, got " +
                                        std::to_string(x.size()));
        }
        std::vector<double> a(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            a[i] = (x[i] - shift_[i]) * scale_[i];
        }
        std::vector<double> z;
        for (std::size_t k = 0; k < layers_.size(); ++k) {
            const auto& L = layers_[k];
            z.assign(L.outputs, 0.0);
            kernels::gemv(L.weights, L.outputs, L.inputs, a, L.bias, z);
            if (k + 1 < layers_.size()) {
                for (auto& v : z) {
                    v = std::max(v, 0.0);
                }
            }
            std::swap(a, z);
        }
        return a[0];
    }

    double FnnModel::predict(std::span<const double> x) const {
        return sigmoid(logit(x));
    }

    std::size_t FnnModel::num_parameters() const {
        std::size_t n = 0;
        for (const auto& L : layers_) {
            n += L.weights.size() + L.bias.size();
        }
        return n;
    }

    std::vector<double> FnnModel::parameters() const {
        std::vector<double> out;
        out.reserve(num_parameters());
        for (const auto& L : layers_) {
            out.insert(out.end(), L.weights.begin(), L.weights.end());
            out.insert(out.end(), L.bias.begin(), L.bias.end());
        }
        return out;
    }

    void FnnModel::set_parameters(std::span<const double> flat) {
        if (flat.size() != num_parameters()) {
            throw std::invalid_argument("fnn: parameter vector has the wrong size");
        }
        std::size_t at = 0;
        for (auto& L : layers_) {
            std::copy_n(flat.begin() + static_cast<std::ptrdiff_t>(at), L.weights.size(), L.weights.begin());
            at += L.weights.size();
            std::copy_n(flat.begin() + static_cast<std::ptrdiff_t>(at), L.bias.size(), L.bias.begin());
            at += L.bias.size();
        }
    }

    double FnnModel::accumulate_gradient(std::span<const double> x, int label, std::span<double> grad) const {
        if (x.size() != num_inputs()) {
            throw std::invalid_argument("fnn: input dimension mismatch");
        }
        // acts[k] is the input of layer k; pre-activations of hidden layers are recoverable from acts[k + 1] > 0.
        std::vector<std::vector<double>> acts(layers_.size() + 1);
        acts[0].resize(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            acts[0][i] = (x[i] - shift_[i]) * scale_[i];
        }
        for (std::size_t k = 0; k < layers_.size(); ++k) {
            const auto& L = layers_[k];
            acts[k + 1].assign(L.outputs, 0.0);
            kernels::gemv(L.weights, L.outputs, L.inputs, acts[k], L.bias, acts[k + 1]);
            if (k + 1 < layers_.size()) {
                for (auto& v : acts[k + 1]) {
                    v = std::max(v, 0.0);
                }
            }
        }
        const double z = acts.back()[0];
        std::vector<double> delta{sigmoid(z) - label};

        std::vector<std::size_t> offset(layers_.size());
        std::size_t at = 0;
        for (std::size_t k = 0; k < layers_.size(); ++k) {
            offset[k] = at;
            at += layers_[k].weights.size() + layers_[k].bias.size();
        }
        for (std::size_t k = layers_.size(); k-- > 0;) {
            const auto& L = layers_[k];
            double* gw = grad.data() + offset[k];
            double* gb = gw + L.weights.size();
            for (std::size_t r = 0; r < L.outputs; ++r) {
                if (delta[r] != 0.0) {
                    kernels::active().axpy(delta[r], acts[k].data(), gw + r * L.inputs, L.inputs);
                }
                gb[r] += delta[r];
            }
            if (k == 0) {
                break;
            }
            std::vector<double> prev(L.inputs, 0.0);
            for (std::size_t r = 0; r < L.outputs; ++r) {
                if (delta[r] != 0.0) {
                    kernels::active().axpy(delta[r], L.weights.data() + r * L.inputs, prev.data(), L.inputs);
                }
            }
            for (std::size_t i = 0; i < L.inputs; ++i) {
                if (acts[k][i] <= 0.0) {
                    prev[i] = 0.0;
                }
            }
            delta = std::move(prev);
        }
        return bce_from_logit(z, label);
    }

    void FnnModel::write_body(std::string& out) const {
        out += "inputs " + std::to_string(num_inputs()) + "\nlayers " + std::to_string(layers_.size());
        for (const auto& L : layers_) {
            out += " " + std::to_string(L.outputs);
        }
        out += "\nshift ";
        detail::write_numbers(out, shift_);
        out += "scale ";
        detail::write_numbers(out, scale_);
        for (std::size_t k = 0; k < layers_.size(); ++k) {
            out += "layer " + std::to_string(k) + "\n";
            detail::write_numbers(out, layers_[k].weights);
            detail::write_numbers(out, layers_[k].bias);
        }
    }

    FnnModel FnnModel::read_body(std::string_view body) {
        detail::TokenStream ts(body);
        ts.expect("inputs");
        const auto inputs = ts.integer();
        ts.expect("layers");
        const auto count = ts.integer();
        if (inputs <= 0 || count <= 0) {
            throw std::runtime_error("fnn model: bad dimensions");
        }
        std::vector<std::size_t> widths;
        for (long long k = 0; k < count; ++k) {
            const auto w = ts.integer();
            if (w <= 0) {
                throw std::runtime_error("fnn model: bad layer width");
            }
            widths.push_back(static_cast<std::size_t>(w));
        }
        if (widths.back() != 1) {
            throw std::runtime_error("fnn model: output layer must have one unit");
        }
        widths.pop_back();
        FnnModel model(static_cast<std::size_t>(inputs), widths);
        ts.expect("shift");
        ts.numbers(model.shift_);
        ts.expect("scale");
        ts.numbers(model.scale_);
        for (std::size_t k = 0; k < model.layers_.size(); ++k) {
            ts.expect("layer");
            if (ts.integer() != static_cast<long long>(k)) {
                throw std::runtime_error("fnn model: layers out of order");
            }
            ts.numbers(model.layers_[k].weights);
            ts.numbers(model.layers_[k].bias);
        }
        return model;
    }

    FnnModel fit_fnn(std::span<const double> features, std::size_t nf, std::span<const int> labels,
                     const FnnParams& params, FnnTrace* trace) {
        const std::size_t n = labels.size();
        if (nf == 0 || features.size() != n * nf) {
            throw std::invalid_argument("fnn: feature matrix does not match label count");
        }
        const auto positives = static_cast<std::size_t>(std::ranges::count(labels, 1));
        if (positives == 0 || positives == n || n - positives != static_cast<std::size_t>(std::ranges::count(labels, 0))) {
            throw std::invalid_argument("fnn: training data must contain both classes and only 0/1 labels");
        }
        if (params.batch_size == 0 || params.epochs < 0 || !(params.learning_rate > 0.0)) {
            throw std::invalid_argument("fnn: invalid parameters");
        }

        FnnModel model(nf, params.hidden);
        Rng rng(params.seed);
        model.initialize(rng);

        std::vector<double> mean(nf, 0.0);
        std::vector<double> scale(nf, 1.0);
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t f = 0; f < nf; ++f) {
                mean[f] += features[r * nf + f];
            }
        }
        for (auto& m : mean) {
            m /= static_cast<double>(n);
        }
        for (std::size_t f = 0; f < nf; ++f) {
            double var = 0.0;
            for (std::size_t r = 0; r < n; ++r) {
                const double d = features[r * nf + f] - mean[f];
                var += d * d;
            }
            const double sd = std::sqrt(var / static_cast<double>(n));
            scale[f] = sd > 1e-12 ? 1.0 / sd : 1.0;
        }
        model.set_input_transform(mean, scale);

        const std::size_t np = model.num_parameters();
        std::vector<double> theta = model.parameters();
        std::vector<double> grad(np);
        std::vector<double> m1(np, 0.0);
        std::vector<double> m2(np, 0.0);
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        long long step = 0;

        for (int epoch = 0; epoch < params.epochs; ++epoch) {
            rng.shuffle(order);
            double epoch_loss = 0.0;
            for (std::size_t start = 0; start < n; start += params.batch_size) {
                const std::size_t end = std::min(n, start + params.batch_size);
                std::ranges::fill(grad, 0.0);
                for (std::size_t k = start; k < end; ++k) {
                    const auto r = order[k];
                    epoch_loss += model.accumulate_gradient(features.subspan(r * nf, nf), labels[r], grad);
                }
                const double inv = 1.0 / static_cast<double>(end - start);
                ++step;
                const double c1 = 1.0 - std::pow(params.beta1, static_cast<double>(step));
                const double c2 = 1.0 - std::pow(params.beta2, static_cast<double>(step));
                for (std::size_t i = 0; i < np; ++i) {
                    const double gi = grad[i] * inv;
                    m1[i] = params.beta1 * m1[i] + (1.0 - params.beta1) * gi;
                    m2[i] = params.beta2 * m2[i] + (1.0 - params.beta2) * gi * gi;
                    theta[i] -= params.learning_rate * (m1[i] / c1) / (std::sqrt(m2[i] / c2) + params.adam_eps);
                }
                model.set_parameters(theta);
            }
            if (trace) {
                trace->epoch_loss.push_back(epoch_loss / static_cast<double>(n));
            }
        }
        return model;
    }

}  // namespace edgesel
