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

#include "edgesel/training.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "edgesel/construction.hpp"
#include "edgesel/local_search.hpp"
#include "edgesel/parallel.hpp"
#include "edgesel/text.hpp"
#include "token_stream.hpp"

namespace edgesel {

    Solution solve_exact(const Instance& inst) {
        if (inst.has_time_windows()) {
            throw std::invalid_argument("exact solver handles CVRP only");
        }
        const int n = inst.num_customers();
        if (n > kExactSolverLimit) {
            throw std::invalid_argument("exact solver is limited to " + std::to_string(kExactSolverLimit) +
                                        " customers");
        }
        Solution sol(inst);
        if (n == 0) {
            return sol;
        }
        constexpr double kInf = std::numeric_limits<double>::infinity();
        const auto full = std::size_t{1} << n;
        const auto un = static_cast<std::size_t>(n);
        std::vector<long long> demand(full, 0);
        for (std::size_t mask = 1; mask < full; ++mask) {
            const auto low = static_cast<std::size_t>(std::countr_zero(mask));
            demand[mask] = demand[mask & (mask - 1)] + inst.demand(static_cast<int>(low) + 1);
        }
        // path[mask * n + last]: shortest depot -> ... -> last path visiting exactly `mask`.
        std::vector<double> path(full * un, kInf);
        std::vector<int> parent(full * un, -1);
        for (std::size_t i = 0; i < un; ++i) {
            if (inst.demand(static_cast<int>(i) + 1) <= inst.capacity()) {
                path[(std::size_t{1} << i) * un + i] = inst.distance(0, static_cast<int>(i) + 1);
            }
        }
        std::vector<double> route_cost(full, kInf);
        for (std::size_t mask = 1; mask < full; ++mask) {
            if (demand[mask] > inst.capacity()) {
                continue;
            }
            for (std::size_t last = 0; last < un; ++last) {
                const double base = path[mask * un + last];
                if (base == kInf) {
                    continue;
                }
                route_cost[mask] = std::min(route_cost[mask], base + inst.distance(static_cast<int>(last) + 1, 0));
                for (std::size_t next = 0; next < un; ++next) {
                    const auto bit = std::size_t{1} << next;
                    if ((mask & bit) != 0 || demand[mask | bit] > inst.capacity()) {
                        continue;
                    }
                    const double cand = base + inst.distance(static_cast<int>(last) + 1, static_cast<int>(next) + 1);
                    auto& slot = path[(mask | bit) * un + next];
                    if (cand < slot) {
                        slot = cand;
                        parent[(mask | bit) * un + next] = static_cast<int>(last);
                    }
                }
            }
        }
        std::vector<double> best(full, kInf);
        std::vector<std::size_t> choice(full, 0);
        best[0] = 0.0;
        for (std::size_t mask = 1; mask < full; ++mask) {
            const auto low = mask & (~mask + 1);
            const auto rest = mask ^ low;
            // Submasks of `rest`, each joined with the lowest customer so that every partition is counted once.
            for (std::size_t sub = rest;; sub = (sub - 1) & rest) {
                const auto s = sub | low;
                if (route_cost[s] < kInf && best[mask ^ s] < kInf) {
                    const double cand = route_cost[s] + best[mask ^ s];
                    if (cand < best[mask]) {
                        best[mask] = cand;
                        choice[mask] = s;
                    }
                }
                if (sub == 0) {
                    break;
                }
            }
        }
        if (best[full - 1] == kInf) {
            throw std::invalid_argument("instance has no feasible solution");
        }
        for (std::size_t mask = full - 1; mask != 0;) {
            const auto s = choice[mask];
            std::size_t last = 0;
            double bestv = kInf;
            for (std::size_t i = 0; i < un; ++i) {
                const double v = path[s * un + i];
                if (v < kInf && v + inst.distance(static_cast<int>(i) + 1, 0) < bestv) {
                    bestv = v + inst.distance(static_cast<int>(i) + 1, 0);
                    last = i;
                }
            }
            std::vector<int> route;
            auto cur = s;
            auto at = static_cast<int>(last);
            while (at >= 0) {
                route.push_back(at + 1);
                const int prev = parent[cur * un + static_cast<std::size_t>(at)];
                cur ^= std::size_t{1} << static_cast<std::size_t>(at);
                at = prev;
            }
            std::ranges::reverse(route);
            sol.add_route(std::move(route));
            mask ^= s;
        }
        return sol;
    }

    Solution double_bridge_perturb(const Solution& sol, Rng& rng) {
        auto tour = giant_tour(sol);
        const int n = static_cast<int>(tour.size());
        if (n >= 4) {
            // Three distinct cut positions in [1, n - 1] by a partial Fisher-Yates draw.
            std::vector<int> pool(static_cast<std::size_t>(n - 1));
            std::iota(pool.begin(), pool.end(), 1);
            for (int k = 0; k < 3; ++k) {
                const int j = rng.uniform_int(k, n - 2);
                std::swap(pool[static_cast<std::size_t>(k)], pool[static_cast<std::size_t>(j)]);
            }
            int cuts[3] = {pool[0], pool[1], pool[2]};
            std::sort(std::begin(cuts), std::end(cuts));
            std::vector<int> out;
            out.reserve(tour.size());
            const auto a = tour.begin();
            out.insert(out.end(), a, a + cuts[0]);
            out.insert(out.end(), a + cuts[1], a + cuts[2]);
            out.insert(out.end(), a + cuts[0], a + cuts[1]);
            out.insert(out.end(), a + cuts[2], tour.end());
            tour = std::move(out);
        }
        return greedy_split(sol.instance(), tour);
    }

    Solution reference_solution(const Instance& inst, const ReferenceOptions& options) {
        if (!inst.has_time_windows() && inst.num_customers() <= 10) {
            return solve_exact(inst);
        }
        const Solution start = savings_construct(inst);
        Solution best = start;
        Rng rng(options.seed);
        for (int r = 0; r < std::max(1, options.restarts); ++r) {
            Solution init = start;
            if (r > 0) {
                init = double_bridge_perturb(start, rng);
                for (int k = 0; k < 3; ++k) {
                    init = double_bridge_perturb(init, rng);
                }
            }
            SearchOptions so;
            so.acceptance = Acceptance::kSimulatedAnnealing;
            so.annealing.steps = options.annealing_steps;
            so.seed = options.seed * 1000003ULL + static_cast<std::uint64_t>(r);
            so.shuffle = true;
            Solution cand = descend(init, nullptr, so);
            if (evaluate(cand).feasible && cand.cost() < best.cost() - 1e-9) {
                best = std::move(cand);
            }
        }
        return best;
    }

    std::string_view to_string(SolutionSource s) {
        switch (s) {
            case SolutionSource::kSavings:
                return "savings";
            case SolutionSource::kSweep:
                return "sweep";
            case SolutionSource::kPerturbed:
                return "perturbed";
            case SolutionSource::kOptimal:
                return "optimal";
        }
        return "unknown";
    }

    std::optional<SolutionSource> parse_solution_source(std::string_view s) {
        for (const auto v : {SolutionSource::kSavings, SolutionSource::kSweep, SolutionSource::kPerturbed,
                             SolutionSource::kOptimal}) {
            if (to_string(v) == s) {
                return v;
            }
        }
        return std::nullopt;
    }

    std::size_t LabeledEdgeDataset::positives() const {
        return static_cast<std::size_t>(std::ranges::count_if(rows, [](const auto& r) { return r.label == 1; }));
    }

    std::vector<double> LabeledEdgeDataset::feature_matrix() const {
        std::vector<double> out;
        out.reserve(rows.size() * kNumEdgeFeatures);
        for (const auto& r : rows) {
            const auto v = r.features.values();
            out.insert(out.end(), v.begin(), v.end());
        }
        return out;
    }

    std::vector<int> LabeledEdgeDataset::labels() const {
        std::vector<int> out;
        out.reserve(rows.size());
        for (const auto& r : rows) {
            out.push_back(r.label);
        }
        return out;
    }

    LabeledEdgeDataset build_tabular_dataset(std::span<const Instance> instances, const ReferenceSolver& reference,
                                             const DatasetOptions& options, std::vector<std::string>* warnings) {
        std::vector<std::vector<LabeledEdge>> per(instances.size());
        std::vector<std::string> notes(instances.size());
        parallel_for(instances.size(), [&](std::size_t idx) {
            const Instance& inst = instances[idx];
            const Solution ref = reference(inst);
            if (!evaluate(ref).feasible) {
                notes[idx] = "skipping " + inst.name() + ": reference solution is infeasible";
                return;
            }
            const EdgeSet truth = edges_of(ref);
            auto emit = [&](const Solution& sol, SolutionSource src) {
                for (const auto& row : extract_all_features(sol, options.gamma)) {
                    per[idx].push_back({row.features, truth.contains(row.edge) ? 1 : 0, static_cast<int>(idx), src});
                }
            };
            if (options.savings) {
                emit(savings_construct(inst), SolutionSource::kSavings);
            }
            if (options.sweep) {
                emit(sweep_construct(inst), SolutionSource::kSweep);
            }
            Rng rng(options.seed ^ (0x9e3779b97f4a7c15ULL * (idx + 1)));
            for (int k = 0; k < options.perturbed; ++k) {
                emit(double_bridge_perturb(ref, rng), SolutionSource::kPerturbed);
            }
            if (options.reference) {
                emit(ref, SolutionSource::kOptimal);
            }
        });
        LabeledEdgeDataset out;
        for (std::size_t idx = 0; idx < per.size(); ++idx) {
            out.rows.insert(out.rows.end(), per[idx].begin(), per[idx].end());
            if (warnings && !notes[idx].empty()) {
                warnings->push_back(notes[idx]);
            }
        }
        return out;
    }

    std::pair<LabeledEdgeDataset, LabeledEdgeDataset> split_by_instance(const LabeledEdgeDataset& data,
                                                                        double validation_fraction,
                                                                        std::uint64_t seed) {
        if (!(validation_fraction >= 0.0 && validation_fraction <= 1.0)) {
            throw std::invalid_argument("validation fraction must lie in [0, 1]");
        }
        std::vector<int> ids;
        for (const auto& r : data.rows) {
            ids.push_back(r.instance);
        }
        std::ranges::sort(ids);
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        Rng rng(seed);
        rng.shuffle(ids);
        const auto nval = static_cast<std::size_t>(std::ceil(validation_fraction * static_cast<double>(ids.size())));
        std::vector<int> val(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(std::min(nval, ids.size())));
        std::ranges::sort(val);
        std::pair<LabeledEdgeDataset, LabeledEdgeDataset> out;
        for (const auto& r : data.rows) {
            (std::ranges::binary_search(val, r.instance) ? out.second : out.first).rows.push_back(r);
        }
        return out;
    }

    void write_dataset_csv(std::ostream& out, const LabeledEdgeDataset& data) {
        const std::vector<std::string> extra{"label", "instance", "source"};
        write_feature_csv_header(out, extra);
        for (const auto& r : data.rows) {
            const std::vector<std::string> cols{std::to_string(r.label), std::to_string(r.instance),
                                                std::string(to_string(r.source))};
            write_feature_csv_row(out, r.features, cols);
        }
    }

    LabeledEdgeDataset read_dataset_csv(std::istream& in) {
        LabeledEdgeDataset data;
        std::string line;
        if (!std::getline(in, line) || text::trim(line) != "x1,x2,x3,x4,label,instance,source") {
            throw std::runtime_error("dataset csv: unexpected header");
        }
        std::size_t lineno = 1;
        while (std::getline(in, line)) {
            ++lineno;
            if (text::trim(line).empty()) {
                continue;
            }
            std::vector<std::string_view> cols;
            std::string_view rest = text::trim(line);
            for (auto pos = rest.find(','); ; pos = rest.find(',')) {
                cols.push_back(rest.substr(0, pos));
                if (pos == std::string_view::npos) {
                    break;
                }
                rest.remove_prefix(pos + 1);
            }
            auto fail = [&] { throw std::runtime_error("dataset csv: malformed line " + std::to_string(lineno)); };
            if (cols.size() != 7) {
                fail();
            }
            const auto x1 = text::to_double(cols[0]);
            const auto x2 = text::to_double(cols[1]);
            const auto x3 = text::to_int(cols[2]);
            const auto x4 = text::to_double(cols[3]);
            const auto label = text::to_int(cols[4]);
            const auto inst = text::to_int(cols[5]);
            const auto src = parse_solution_source(cols[6]);
            if (!x1 || !x2 || !x3 || !x4 || !label || !inst || !src || (*label != 0 && *label != 1)) {
                fail();
            }
            data.rows.push_back({{*x1, *x2, static_cast<int>(*x3), *x4},
                                 static_cast<int>(*label),
                                 static_cast<int>(*inst),
                                 *src});
        }
        return data;
    }

    GbtModel train_gbt(const LabeledEdgeDataset& data, const GbtParams& params, GbtTrace* trace) {
        const auto x = data.feature_matrix();
        const auto y = data.labels();
        return fit_gbt(x, kNumEdgeFeatures, y, params, trace);
    }

    FnnModel train_fnn(const LabeledEdgeDataset& data, const FnnParams& params, FnnTrace* trace) {
        const auto x = data.feature_matrix();
        const auto y = data.labels();
        return fit_fnn(x, kNumEdgeFeatures, y, params, trace);
    }

    double accuracy(const EdgeModel& model, const LabeledEdgeDataset& data, double threshold) {
        if (data.rows.empty()) {
            return 0.0;
        }
        std::size_t hits = 0;
        for (const auto& r : data.rows) {
            const auto v = r.features.values();
            hits += (model.predict(v) > threshold ? 1 : 0) == r.label ? 1 : 0;
        }
        return static_cast<double>(hits) / static_cast<double>(data.rows.size());
    }

    void validate_graph_dataset(std::span<const GraphExample> examples) {
        for (const auto& ex : examples) {
            if (!ex.instance) {
                throw std::invalid_argument("graph example without an instance");
            }
            if (!evaluate(ex.reference()).feasible) {
                throw std::invalid_argument("reference solution of " + ex.instance->name() + " is infeasible");
            }
        }
    }

    namespace {

        std::string_view mode_name(GraphMode m) {
            switch (m) {
                case GraphMode::kFull:
                    return "full";
                case GraphMode::kKnn:
                    return "knn";
                case GraphMode::kSolutionEdges:
                    return "solution";
            }
            return "knn";
        }

        GraphMode parse_mode(std::string_view s) {
            if (s == "full") {
                return GraphMode::kFull;
            }
            if (s == "knn") {
                return GraphMode::kKnn;
            }
            if (s == "solution") {
                return GraphMode::kSolutionEdges;
            }
            throw std::runtime_error("unknown graph mode '" + std::string(s) + "'");
        }

        void write_file(const std::filesystem::path& p, const std::string& content) {
            std::ofstream out(p, std::ios::binary);
            if (!out) {
                throw std::runtime_error("cannot write " + p.string());
            }
            out << content;
        }

    }  // namespace

    void write_graph_dataset(const std::string& dir, std::span<const GraphExample> examples) {
        namespace fs = std::filesystem;
        fs::create_directories(dir);
        std::string manifest;
        for (std::size_t k = 0; k < examples.size(); ++k) {
            const auto& ex = examples[k];
            const bool tw = ex.instance->has_time_windows();
            const std::string inst_file = "inst-" + std::to_string(k) + (tw ? ".txt" : ".vrp");
            const std::string sol_file = "inst-" + std::to_string(k) + ".sol";
            write_file(fs::path(dir) / inst_file, tw ? render_solomon(*ex.instance) : render_cvrplib(*ex.instance));
            write_file(fs::path(dir) / sol_file, render_solution(ex.reference()));
            manifest += inst_file + " " + sol_file + " " + std::string(mode_name(ex.graph.mode)) + " " +
                        std::to_string(ex.graph.k) + "\n";
        }
        write_file(fs::path(dir) / "manifest.txt", manifest);
    }

    std::vector<GraphExample> read_graph_dataset(const std::string& dir) {
        namespace fs = std::filesystem;
        std::ifstream in(fs::path(dir) / "manifest.txt");
        if (!in) {
            throw std::runtime_error("no manifest.txt in " + dir);
        }
        std::vector<GraphExample> out;
        std::string line;
        while (std::getline(in, line)) {
            const auto tok = text::split_ws(line);
            if (tok.empty()) {
                continue;
            }
            if (tok.size() != 4) {
                throw std::runtime_error("manifest: expected 4 fields in '" + line + "'");
            }
            GraphExample ex;
            ex.instance = std::make_shared<const Instance>(load_instance((fs::path(dir) / std::string(tok[0])).string()));
            const auto sol = load_solution(*ex.instance, (fs::path(dir) / std::string(tok[1])).string());
            ex.reference_routes = sol.route_sequences();
            ex.graph.mode = parse_mode(tok[2]);
            const auto k = text::to_int(tok[3]);
            if (!k) {
                throw std::runtime_error("manifest: bad k in '" + line + "'");
            }
            ex.graph.k = static_cast<int>(*k);
            out.push_back(std::move(ex));
        }
        return out;
    }

    namespace {

        struct PreparedGraph {
            GraphBatch batch;
            std::vector<double> targets;
        };

        PreparedGraph prepare(const GraphExample& ex) {
            const Solution ref = ex.reference();
            PreparedGraph p;
            p.batch = build_graph(*ex.instance, ex.graph, &ref);
            p.targets = edge_targets(p.batch, edges_of(ref));
            return p;
        }

        std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
            std::uint64_t z = a * 0x9e3779b97f4a7c15ULL + b + 0x632be59bd9b4e019ULL;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            return z ^ (z >> 31);
        }

    }  // namespace

    GraphEvaluation evaluate_graph_examples(const ConvNetModel& model, std::span<const GraphExample> examples,
                                            double threshold) {
        GraphEvaluation ev;
        PrecisionCounts counts;
        std::size_t edges = 0;
        for (const auto& ex : examples) {
            const auto p = prepare(ex);
            const auto probs = model.forward(p.batch, ConvNetModel::Mode::kInference);
            for (std::size_t k = 0; k < probs.size(); ++k) {
                const double pr = std::clamp(probs[k], 1e-15, 1.0 - 1e-15);
                ev.loss -= p.targets[k] * std::log(pr) + (1.0 - p.targets[k]) * std::log(1.0 - pr);
                if (probs[k] > threshold) {
                    (p.targets[k] > 0.5 ? counts.true_positives : counts.false_positives) += 1;
                }
            }
            edges += probs.size();
        }
        if (edges > 0) {
            ev.loss /= static_cast<double>(edges);
        }
        ev.precision = precision(counts);
        return ev;
    }

    ConvNetTrainer::ConvNetTrainer(ConvNetTrainOptions options)
        : options_(std::move(options)), model_(options_.model) {
        Rng rng(options_.seed);
        model_.initialize(rng);
        m1_.assign(model_.parameters().size(), 0.0);
        m2_.assign(model_.parameters().size(), 0.0);
    }

    ConvNetTrainer::ConvNetTrainer(ConvNetTrainOptions options, ConvNetModel warm_start)
        : options_(std::move(options)), model_(std::move(warm_start)) {
        options_.model = model_.config();
        m1_.assign(model_.parameters().size(), 0.0);
        m2_.assign(model_.parameters().size(), 0.0);
    }

    void ConvNetTrainer::adam_step(std::span<const double> grad) {
        ++step_;
        const double c1 = 1.0 - std::pow(options_.beta1, static_cast<double>(step_));
        const double c2 = 1.0 - std::pow(options_.beta2, static_cast<double>(step_));
        auto params = model_.parameters();
        for (std::size_t i = 0; i < params.size(); ++i) {
            m1_[i] = options_.beta1 * m1_[i] + (1.0 - options_.beta1) * grad[i];
            m2_[i] = options_.beta2 * m2_[i] + (1.0 - options_.beta2) * grad[i] * grad[i];
            params[i] -= options_.learning_rate * (m1_[i] / c1) / (std::sqrt(m2_[i] / c2) + options_.adam_eps);
        }
    }

    EpochMetrics ConvNetTrainer::train_epoch(const CurriculumStage& stage, std::size_t stage_index) {
        if (stage.train.empty()) {
            throw std::invalid_argument("curriculum stage '" + stage.name + "' has no training examples");
        }
        if (stage_index != stage_) {
            stage_ = stage_index;
            stage_epoch_ = 0;
        }
        std::vector<std::size_t> order(stage.train.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        Rng rng(mix(options_.seed, static_cast<std::uint64_t>(epoch_)));
        rng.shuffle(order);
        const std::size_t per_step = std::max<std::size_t>(1, stage.graphs_per_step);
        std::vector<double> grad(model_.parameters().size());
        double loss_sum = 0.0;
        std::size_t edge_sum = 0;
        for (std::size_t start = 0; start < order.size(); start += per_step) {
            std::vector<GraphBatch> graphs;
            std::vector<double> targets;
            for (std::size_t k = start; k < std::min(order.size(), start + per_step); ++k) {
                auto p = prepare(stage.train[order[k]]);
                targets.insert(targets.end(), p.targets.begin(), p.targets.end());
                graphs.push_back(std::move(p.batch));
            }
            const GraphBatch batch = graphs.size() == 1 ? std::move(graphs.front()) : concat_graphs(graphs);
            if (batch.num_edges() == 0) {
                continue;
            }
            std::ranges::fill(grad, 0.0);
            ConvNetModel::BatchStats stats;
            const double loss = model_.loss_and_gradient(batch, targets, grad, &stats);
            adam_step(grad);
            model_.update_running_stats(stats);
            loss_sum += loss * static_cast<double>(batch.num_edges());
            edge_sum += batch.num_edges();
        }
        EpochMetrics m;
        m.stage = stage_index;
        m.epoch = epoch_;
        m.train_loss = edge_sum > 0 ? loss_sum / static_cast<double>(edge_sum) : 0.0;
        const auto& val = stage.validation.empty() ? stage.train : stage.validation;
        const auto ev = evaluate_graph_examples(model_, val, options_.metric_threshold);
        m.validation_loss = ev.loss;
        m.validation_precision = ev.precision;
        metrics_.push_back(m);
        ++epoch_;
        ++stage_epoch_;

        if (options_.metrics_csv) {
            const bool fresh = !std::filesystem::exists(*options_.metrics_csv);
            std::ofstream out(*options_.metrics_csv, std::ios::app);
            if (fresh) {
                out << "stage,epoch,train_loss,val_loss,val_precision\n";
            }
            out << m.stage << ',' << m.epoch << ',' << text::format_double(m.train_loss) << ','
                << text::format_double(m.validation_loss) << ','
                << (m.validation_precision ? text::format_double(*m.validation_precision) : std::string("undefined"))
                << '\n';
        }
        if (options_.checkpoint_dir) {
            std::filesystem::create_directories(*options_.checkpoint_dir);
            save_checkpoint((std::filesystem::path(*options_.checkpoint_dir) / "latest.ckpt").string());
        }
        return m;
    }

    void ConvNetTrainer::run_stage(const CurriculumStage& stage, std::size_t stage_index) {
        if (stage.train.empty()) {
            throw std::invalid_argument("curriculum stage '" + stage.name + "' has no training examples");
        }
        if (stage_index != stage_) {
            stage_ = stage_index;
            stage_epoch_ = 0;
        }
        while (stage_epoch_ < stage.epochs) {
            train_epoch(stage, stage_index);
        }
        if (options_.checkpoint_dir) {
            std::filesystem::create_directories(*options_.checkpoint_dir);
            save_checkpoint(
                (std::filesystem::path(*options_.checkpoint_dir) / ("stage-" + std::to_string(stage_index) + ".ckpt"))
                    .string());
        }
    }

    void ConvNetTrainer::save_checkpoint(const std::string& path) const {
        std::string out = "edgesel-trainer 1\n";
        out += "step " + std::to_string(step_) + " epoch " + std::to_string(epoch_) + " stage " +
               std::to_string(stage_) + " stage_epoch " + std::to_string(stage_epoch_) + "\n";
        out += "m1 " + std::to_string(m1_.size()) + "\n";
        detail::write_numbers(out, m1_);
        out += "m2 " + std::to_string(m2_.size()) + "\n";
        detail::write_numbers(out, m2_);
        out += "model\n";
        out += model_.serialize();
        write_file(path, out);
    }

    ConvNetTrainer ConvNetTrainer::load_checkpoint(const std::string& path, ConvNetTrainOptions options) {
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            throw std::runtime_error("cannot read " + path);
        }
        std::stringstream ss;
        ss << in.rdbuf();
        const std::string content = ss.str();
        const auto model_at = content.find("\nmodel\n");
        if (model_at == std::string::npos) {
            throw std::runtime_error("trainer checkpoint without a model section");
        }
        ConvNetTrainer t(std::move(options), ConvNetModel::deserialize(std::string_view(content).substr(model_at + 7)));
        detail::TokenStream ts(std::string_view(content).substr(0, model_at));
        ts.expect("edgesel-trainer");
        if (ts.integer() != 1) {
            throw std::runtime_error("unsupported trainer checkpoint version");
        }
        ts.expect("step");
        t.step_ = ts.integer();
        ts.expect("epoch");
        t.epoch_ = static_cast<int>(ts.integer());
        ts.expect("stage");
        t.stage_ = static_cast<std::size_t>(ts.integer());
        ts.expect("stage_epoch");
        t.stage_epoch_ = static_cast<int>(ts.integer());
        ts.expect("m1");
        if (static_cast<std::size_t>(ts.integer()) != t.m1_.size()) {
            throw std::runtime_error("trainer checkpoint: optimizer state does not match the model");
        }
        ts.numbers(t.m1_);
        ts.expect("m2");
        if (static_cast<std::size_t>(ts.integer()) != t.m2_.size()) {
            throw std::runtime_error("trainer checkpoint: optimizer state does not match the model");
        }
        ts.numbers(t.m2_);
        return t;
    }

    ConvNetModel train_convnet(std::span<const CurriculumStage> stages, const ConvNetTrainOptions& options,
                               std::vector<StageReport>* reports, std::optional<ConvNetModel> warm_start) {
        if (stages.empty()) {
            throw std::invalid_argument("curriculum has no stages");
        }
        int prev_size = 0;
        for (const auto& st : stages) {
            if (st.train.empty()) {
                throw std::invalid_argument("curriculum stage '" + st.name + "' has no training examples");
            }
            int size = 0;
            for (const auto& ex : st.train) {
                size = std::max(size, ex.instance->size());
            }
            if (size < prev_size) {
                throw std::invalid_argument("curriculum stages must be ordered by instance size");
            }
            prev_size = size;
        }
        ConvNetTrainer trainer = warm_start ? ConvNetTrainer(options, std::move(*warm_start)) : ConvNetTrainer(options);
        for (std::size_t k = 0; k < stages.size(); ++k) {
            trainer.run_stage(stages[k], k);
            if (reports) {
                const auto& val = stages[k].validation.empty() ? stages[k].train : stages[k].validation;
                reports->push_back({stages[k].name, evaluate_graph_examples(trainer.model(), val,
                                                                            options.metric_threshold)});
            }
        }
        return trainer.model();
    }

}  // namespace edgesel
