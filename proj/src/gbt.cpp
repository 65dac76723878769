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

#include "edgesel/gbt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "token_stream.hpp"

namespace edgesel {

    namespace {

        double sigmoid(double z) {
            return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
        }

        double log_loss(double logit, int label) {
            // log(1 + e^-z) for y = 1, log(1 + e^z) for y = 0, written stably.
            const double z = label == 1 ? logit : -logit;
            return z > 0.0 ? std::log1p(std::exp(-z)) : -z + std::log1p(std::exp(z));
        }

    }  // namespace

    double RegressionTree::evaluate(std::span<const double> x) const {
        if (nodes.empty()) {
            return 0.0;
        }
        int k = 0;
        while (nodes[static_cast<std::size_t>(k)].feature >= 0) {
            const auto& n = nodes[static_cast<std::size_t>(k)];
            k = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
        }
        return nodes[static_cast<std::size_t>(k)].value;
    }

    void GbtModel::add_stage(RegressionTree tree, double learning_rate) {
        trees_.push_back(std::move(tree));
        rates_.push_back(learning_rate);
    }

    double GbtModel::logit(std::span<const double> x) const {
        if (x.size() != num_features_) {
            throw std::invalid_argument("gbt: expected " + std::to_string(num_features_) + " features");
        }
        double z = init_;
        for (std::size_t m = 0; m < trees_.size(); ++m) {
            z += rates_[m] * trees_[m].evaluate(x);
        }
        return z;
    }

    double GbtModel::predict(std::span<const double> x) const {
        return sigmoid(logit(x));
    }

    void GbtModel::write_body(std::string& out) const {
        out += "features " + std::to_string(num_features_) + "\n";
        out += "init " + text::format_double(init_) + "\n";
        out += "stages " + std::to_string(trees_.size()) + "\n";
        for (std::size_t m = 0; m < trees_.size(); ++m) {
            out += "stage " + text::format_double(rates_[m]) + " " + std::to_string(trees_[m].nodes.size()) + "\n";
            for (const auto& n : trees_[m].nodes) {
                out += std::to_string(n.feature) + " " + text::format_double(n.threshold) + " " +
                       std::to_string(n.left) + " " + std::to_string(n.right) + " " + text::format_double(n.value) +
                       "\n";
            }
        }
    }

    GbtModel GbtModel::read_body(std::string_view body) {
        detail::TokenStream ts(body);
        ts.expect("features");
        const auto nf = ts.integer();
        ts.expect("init");
        const double init = ts.number();
        GbtModel model(static_cast<std::size_t>(nf), init);
        ts.expect("stages");
        const auto stages = ts.integer();
        for (long long m = 0; m < stages; ++m) {
            ts.expect("stage");
            const double rate = ts.number();
            const auto count = ts.integer();
            RegressionTree tree;
            for (long long k = 0; k < count; ++k) {
                RegressionTree::Node n;
                n.feature = static_cast<int>(ts.integer());
                n.threshold = ts.number();
                n.left = static_cast<int>(ts.integer());
                n.right = static_cast<int>(ts.integer());
                n.value = ts.number();
                if (n.feature >= nf || (n.feature >= 0 && (n.left <= k || n.right <= k || n.left >= count ||
                                                           n.right >= count))) {
                    throw std::runtime_error("gbt model: malformed tree");
                }
                tree.nodes.push_back(n);
            }
            model.add_stage(std::move(tree), rate);
        }
        return model;
    }

    namespace {

        struct Split {
            double gain = 0.0;
            int feature = -1;
            double threshold = 0.0;
        };

        // Level-wise tree growth over presorted feature columns.
        RegressionTree grow_tree(std::span<const double> x, std::size_t nf,
                                 const std::vector<std::vector<std::uint32_t>>& sorted, std::span<const double> g,
                                 std::span<const double> h, std::vector<int>& node_of, const GbtParams& p) {
            RegressionTree tree;
            tree.nodes.emplace_back();
            std::vector<int> frontier{0};
            const std::size_t n = g.size();

            for (int depth = 0; !frontier.empty(); ++depth) {
                std::vector<int> slot(tree.nodes.size(), -1);
                for (std::size_t s = 0; s < frontier.size(); ++s) {
                    slot[static_cast<std::size_t>(frontier[s])] = static_cast<int>(s);
                }
                const std::size_t fs = frontier.size();
                std::vector<double> gsum(fs, 0.0);
                std::vector<double> hsum(fs, 0.0);
                for (std::size_t r = 0; r < n; ++r) {
                    if (node_of[r] >= 0) {
                        const auto s = static_cast<std::size_t>(slot[static_cast<std::size_t>(node_of[r])]);
                        gsum[s] += g[r];
                        hsum[s] += h[r];
                    }
                }
                std::vector<Split> best(fs);
                if (depth < p.max_depth) {
                    std::vector<double> gl(fs);
                    std::vector<double> hl(fs);
                    std::vector<double> last(fs);
                    std::vector<std::uint8_t> seen(fs);
                    for (std::size_t f = 0; f < nf; ++f) {
                        std::ranges::fill(gl, 0.0);
                        std::ranges::fill(hl, 0.0);
                        std::ranges::fill(seen, std::uint8_t{0});
                        for (const auto r : sorted[f]) {
                            if (node_of[r] < 0) {
                                continue;
                            }
                            const auto s = static_cast<std::size_t>(slot[static_cast<std::size_t>(node_of[r])]);
                            const double v = x[r * nf + f];
                            if (seen[s] != 0 && v > last[s]) {
                                const double gr = gsum[s] - gl[s];
                                const double hr = hsum[s] - hl[s];
                                if (hl[s] >= p.min_child_hessian && hr >= p.min_child_hessian) {
                                    const double gain = gl[s] * gl[s] / (hl[s] + p.l2) + gr * gr / (hr + p.l2) -
                                                        gsum[s] * gsum[s] / (hsum[s] + p.l2);
                                    if (gain > best[s].gain + 1e-12) {
                                        double thr = 0.5 * (last[s] + v);
                                        if (!(thr < v)) {
                                            thr = last[s];
                                        }
                                        best[s] = {gain, static_cast<int>(f), thr};
                                    }
                                }
                            }
                            gl[s] += g[r];
                            hl[s] += h[r];
                            last[s] = v;
                            seen[s] = 1;
                        }
                    }
                }
                std::vector<int> next;
                for (std::size_t s = 0; s < fs; ++s) {
                    const auto k = static_cast<std::size_t>(frontier[s]);
                    if (best[s].feature < 0) {
                        tree.nodes[k].value = -gsum[s] / (hsum[s] + p.l2);
                        continue;
                    }
                    const int left = static_cast<int>(tree.nodes.size());
                    tree.nodes.emplace_back();
                    tree.nodes.emplace_back();
                    tree.nodes[k].feature = best[s].feature;
                    tree.nodes[k].threshold = best[s].threshold;
                    tree.nodes[k].left = left;
                    tree.nodes[k].right = left + 1;
                    next.push_back(left);
                    next.push_back(left + 1);
                }
                for (std::size_t r = 0; r < n; ++r) {
                    const int k = node_of[r];
                    if (k < 0) {
                        continue;
                    }
                    const auto& node = tree.nodes[static_cast<std::size_t>(k)];
                    if (node.feature < 0) {
                        node_of[r] = -1;
                    } else {
                        node_of[r] = x[r * nf + static_cast<std::size_t>(node.feature)] <= node.threshold
                                         ? node.left
                                         : node.right;
                    }
                }
                frontier = std::move(next);
            }
            return tree;
        }

    }  // namespace

    GbtModel fit_gbt(std::span<const double> features, std::size_t nf, std::span<const int> labels,
                     const GbtParams& params, GbtTrace* trace) {
        const std::size_t n = labels.size();
        if (nf == 0 || features.size() != n * nf) {
            throw std::invalid_argument("gbt: feature matrix does not match label count");
        }
        if (params.num_stages < 0 || params.max_depth < 0 || !(params.learning_rate > 0.0) ||
            !(params.subsample > 0.0 && params.subsample <= 1.0)) {
            throw std::invalid_argument("gbt: invalid parameters");
        }
        const auto positives = static_cast<std::size_t>(std::ranges::count(labels, 1));
        if (positives == 0 || positives == n || n - positives != static_cast<std::size_t>(std::ranges::count(labels, 0))) {
            throw std::invalid_argument("gbt: training data must contain both classes and only 0/1 labels");
        }

        std::vector<std::vector<std::uint32_t>> sorted(nf);
        for (std::size_t f = 0; f < nf; ++f) {
            auto& idx = sorted[f];
            idx.resize(n);
            std::iota(idx.begin(), idx.end(), 0U);
            std::ranges::stable_sort(idx, [&](std::uint32_t a, std::uint32_t b) {
                return features[a * nf + f] < features[b * nf + f];
            });
        }

        const double init = std::log(static_cast<double>(positives) / static_cast<double>(n - positives));
        GbtModel model(nf, init);
        std::vector<double> score(n, init);
        std::vector<double> g(n);
        std::vector<double> h(n);
        std::vector<int> node_of(n);
        Rng rng(params.seed);
        const auto sample_size = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::llround(params.subsample * static_cast<double>(n))));
        std::vector<std::uint32_t> order(n);
        std::iota(order.begin(), order.end(), 0U);

        for (int m = 0; m < params.num_stages; ++m) {
            for (std::size_t r = 0; r < n; ++r) {
                const double pr = sigmoid(score[r]);
                g[r] = pr - labels[r];
                h[r] = std::max(pr * (1.0 - pr), 1e-16);
            }
            if (sample_size < n) {
                std::ranges::fill(node_of, -1);
                rng.shuffle(order);
                for (std::size_t k = 0; k < sample_size; ++k) {
                    node_of[order[k]] = 0;
                }
            } else {
                std::ranges::fill(node_of, 0);
            }
            auto tree = grow_tree(features, nf, sorted, g, h, node_of, params);
            double loss = 0.0;
            for (std::size_t r = 0; r < n; ++r) {
                score[r] += params.learning_rate * tree.evaluate(features.subspan(r * nf, nf));
                loss += log_loss(score[r], labels[r]);
            }
            model.add_stage(std::move(tree), params.learning_rate);
            if (trace) {
                trace->loss.push_back(loss / static_cast<double>(n));
            }
        }
        return model;
    }

}  // namespace edgesel
