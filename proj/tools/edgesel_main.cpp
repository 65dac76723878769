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

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "edgesel/bench_stats.hpp"
#include "edgesel/construction.hpp"
#include "edgesel/convnet.hpp"
#include "edgesel/fnn.hpp"
#include "edgesel/gbt.hpp"
#include "edgesel/instance.hpp"
#include "edgesel/metaheuristics.hpp"
#include "edgesel/selector_graph.hpp"
#include "edgesel/selector_tabular.hpp"
#include "edgesel/text.hpp"
#include "edgesel/training.hpp"
#include "edgesel/wilcoxon.hpp"

namespace fs = std::filesystem;
using namespace edgesel;

namespace {

    std::string read_text(const std::string& path) {
        std::ifstream in(path);
        if (!in) {
            throw std::runtime_error("cannot open " + path);
        }
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    void write_text(const std::string& path, const std::string& content) {
        std::ofstream out(path);
        if (!out) {
            throw std::runtime_error("cannot write " + path);
        }
        out << content;
    }

    struct ModelPaths {
        std::string gbt;
        std::string fnn;
        std::string convnet;

        void add_options(CLI::App& app) {
            app.add_option("--gbt", gbt, "GBT model file")->check(CLI::ExistingFile);
            app.add_option("--fnn", fnn, "FNN model file")->check(CLI::ExistingFile);
            app.add_option("--convnet", convnet, "ConvNet model file")->check(CLI::ExistingFile);
        }

        SelectorModels load() const {
            SelectorModels m;
            if (!gbt.empty()) {
                m.gbt = load_model(gbt);
            }
            if (!fnn.empty()) {
                m.fnn = load_model(fnn);
            }
            if (!convnet.empty()) {
                m.convnet = std::make_shared<const ConvNetModel>(ConvNetModel::load(convnet));
            }
            return m;
        }
    };

    // ---- solve ----

    struct SolveArgs {
        std::string instance;
        std::string variant = "FILO2";
        std::uint64_t seed = 0;
        std::optional<double> time_limit;
        std::optional<long long> iterations;
        std::optional<double> bks;
        std::string output;
        std::string solution_out;
        ModelPaths models;
    };

    int run_solve(const SolveArgs& a) {
        const Instance inst = load_instance(a.instance);
        VariantConfig cfg = lookup_variant(a.variant, inst.num_customers());
        cfg.seed = a.seed;
        cfg.time_limit = a.time_limit.value_or(default_time_limit(inst, 0.01));
        cfg.max_iterations = a.iterations;
        const auto selector = make_selector(cfg, a.models.load());
        RunContext ctx;
        ctx.selector = selector.get();
        ctx.bks = a.bks;
        const RunResult res = run_variant(inst, cfg, ctx);
        if (a.output == "-") {
            write_run_jsonl(std::cout, res.record);
        } else if (!a.output.empty()) {
            std::ofstream out(a.output, std::ios::app);
            write_run_jsonl(out, res.record);
        }
        if (!a.solution_out.empty()) {
            write_text(a.solution_out, render_solution(res.best));
        }
        std::cerr << fmt::format("{} {} seed={} cost={} routes={} feasible={} iterations={} time={:.2f}s\n",
                                 inst.name(), cfg.name, cfg.seed, text::format_double(res.best.cost()),
                                 res.best.num_routes(), res.record.feasible ? "yes" : "no", res.record.iterations,
                                 res.record.elapsed);
        if (res.record.gap) {
            std::cerr << fmt::format("gap={:.3f}%\n", *res.record.gap);
        }
        return res.record.feasible ? 0 : 2;
    }

    // ---- bench ----

    // Manifest: "key = value" lines. Keys: instances (space separated paths), variants, runs, time_limit,
    // max_iterations, bks, gbt, fnn, convnet, output, workers. Relative paths resolve against the manifest.
    struct BenchManifest {
        std::vector<std::string> instances;
        std::vector<std::string> variants{"FILO2"};
        int runs = 5;
        std::optional<double> time_limit;
        std::optional<long long> max_iterations;
        std::string bks;
        ModelPaths models;
        std::string output;
        int workers = 0;
    };

    BenchManifest parse_manifest(const std::string& path) {
        BenchManifest m;
        const fs::path base = fs::path(path).parent_path();
        auto resolve = [&](std::string_view p) {
            const fs::path q(p);
            return (q.is_absolute() ? q : base / q).string();
        };
        int line_no = 0;
        const std::string content = read_text(path);
        for (const auto& raw : text::split_lines(content)) {
            ++line_no;
            auto line = std::string_view(raw);
            if (const auto hash = line.find('#'); hash != std::string_view::npos) {
                line = line.substr(0, hash);
            }
            line = text::trim(line);
            if (line.empty() || line.front() == '[') {
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string_view::npos) {
                throw std::runtime_error(fmt::format("{}:{}: expected key = value", path, line_no));
            }
            const std::string key(text::trim(line.substr(0, eq)));
            std::string value(text::trim(line.substr(eq + 1)));
            std::erase(value, '"');
            const auto words = text::split_ws(value);
            auto need_number = [&]<typename T>(std::optional<T> v) {
                if (!v) {
                    throw std::runtime_error(fmt::format("{}:{}: bad number for {}", path, line_no, key));
                }
                return *v;
            };
            if (key == "instances") {
                for (const auto w : words) {
                    m.instances.push_back(resolve(w));
                }
            } else if (key == "variants") {
                m.variants.assign(words.begin(), words.end());
            } else if (key == "runs") {
                m.runs = static_cast<int>(need_number(text::to_int(value)));
            } else if (key == "time_limit") {
                m.time_limit = need_number(text::to_double(value));
            } else if (key == "max_iterations") {
                m.max_iterations = need_number(text::to_int(value));
            } else if (key == "workers") {
                m.workers = static_cast<int>(need_number(text::to_int(value)));
            } else if (key == "bks") {
                m.bks = resolve(value);
            } else if (key == "gbt") {
                m.models.gbt = resolve(value);
            } else if (key == "fnn") {
                m.models.fnn = resolve(value);
            } else if (key == "convnet") {
                m.models.convnet = resolve(value);
            } else if (key == "output") {
                m.output = resolve(value);
            } else {
                throw std::runtime_error(fmt::format("{}:{}: unknown key {}", path, line_no, key));
            }
        }
        if (m.instances.empty()) {
            throw std::runtime_error(path + ": no instances");
        }
        if (m.bks.empty()) {
            throw std::runtime_error(path + ": no bks file");
        }
        return m;
    }

    int run_bench(const std::string& manifest_path, std::optional<double> time_limit, std::optional<int> runs,
                  const std::string& output_override) {
        BenchManifest m = parse_manifest(manifest_path);
        if (time_limit) {
            m.time_limit = time_limit;
        }
        if (runs) {
            m.runs = *runs;
        }
        if (!output_override.empty()) {
            m.output = output_override;
        }
        std::vector<Instance> suite;
        for (const auto& p : m.instances) {
            suite.push_back(load_instance(p));
        }
        const BksRegistry bks = BksRegistry::load(m.bks);
        const SelectorModels models = m.models.load();
        std::vector<std::shared_ptr<const EdgeSelector>> owned;
        std::vector<BenchmarkVariant> variants;
        for (const auto& name : m.variants) {
            BenchmarkVariant v;
            v.config = lookup_variant(name, suite.front().num_customers());
            owned.push_back(make_selector(v.config, models));
            v.selector = owned.back().get();
            variants.push_back(std::move(v));
        }
        BenchmarkOptions opts;
        opts.runs = m.runs;
        opts.time_limit = m.time_limit.value_or(10.0);
        opts.max_iterations = m.max_iterations;
        opts.workers = m.workers;
        const auto records = run_benchmark(suite, variants, bks, opts);
        if (!m.output.empty()) {
            std::ofstream out(m.output);
            for (const auto& r : records) {
                write_run_jsonl(out, r);
            }
        }
        std::cout << report_tables(records, GroupBy::kInstance).table;
        return 0;
    }

    // ---- generate / make-dataset ----

    struct GenerateArgs {
        int customers = 50;
        int count = 1;
        std::uint64_t seed = 0;
        std::string distribution = "R";
        std::string depot = "center";
        std::string demand = "uniform";
        double route_size = 8.0;
        std::string out_dir = ".";
    };

    std::vector<Instance> generate_many(const GenerateArgs& a) {
        static const std::map<std::string, CustomerDistribution> dists{
            {"R", CustomerDistribution::kRandom},
            {"C", CustomerDistribution::kClustered},
            {"RC", CustomerDistribution::kRandomClustered}};
        static const std::map<std::string, DepotPosition> depots{
            {"center", DepotPosition::kCenter}, {"corner", DepotPosition::kCorner}, {"random", DepotPosition::kRandom}};
        static const std::map<std::string, DemandProfile> demands{{"unit", DemandProfile::kUnit},
                                                                  {"small", DemandProfile::kSmall},
                                                                  {"large", DemandProfile::kLarge},
                                                                  {"uniform", DemandProfile::kUniform},
                                                                  {"quadrant", DemandProfile::kQuadrant}};
        GeneratorOptions go;
        go.route_size = a.route_size;
        std::vector<Instance> out;
        for (int k = 0; k < a.count; ++k) {
            out.push_back(generate_instance(a.seed + static_cast<std::uint64_t>(k), a.customers, depots.at(a.depot),
                                            dists.at(a.distribution), demands.at(a.demand), go));
        }
        return out;
    }

    int run_generate(const GenerateArgs& a) {
        fs::create_directories(a.out_dir);
        for (const auto& inst : generate_many(a)) {
            const auto path = (fs::path(a.out_dir) / (inst.name() + ".vrp")).string();
            write_text(path, render_cvrplib(inst));
            std::cout << path << '\n';
        }
        return 0;
    }

    std::vector<Instance> load_or_generate(const std::vector<std::string>& files, const GenerateArgs& gen) {
        if (files.empty()) {
            return generate_many(gen);
        }
        std::vector<Instance> out;
        for (const auto& f : files) {
            out.push_back(load_instance(f));
        }
        return out;
    }

    struct DatasetArgs {
        std::string kind = "tabular";
        std::vector<std::string> instances;
        GenerateArgs gen;
        std::string out_dir;
        int restarts = 3;
        int annealing_steps = 5000;
        int k = 10;
    };

    int run_make_dataset(const DatasetArgs& a) {
        const auto instances = load_or_generate(a.instances, a.gen);
        ReferenceOptions ro;
        ro.restarts = a.restarts;
        ro.annealing_steps = a.annealing_steps;
        const ReferenceSolver reference = [ro](const Instance& inst) { return reference_solution(inst, ro); };
        fs::create_directories(a.out_dir);
        if (a.kind == "tabular") {
            DatasetOptions dopts;
            std::vector<std::string> warnings;
            const auto data = build_tabular_dataset(instances, reference, dopts, &warnings);
            for (const auto& w : warnings) {
                std::cerr << "warning: " << w << '\n';
            }
            std::ofstream out(fs::path(a.out_dir) / "dataset.csv");
            write_dataset_csv(out, data);
            std::cout << fmt::format("{} rows, {} positive\n", data.size(), data.positives());
            return 0;
        }
        if (a.kind == "graph") {
            std::vector<GraphExample> examples;
            for (const auto& inst : instances) {
                GraphExample ex;
                ex.instance = std::make_shared<const Instance>(inst);
                ex.reference_routes = reference(inst).route_sequences();
                ex.graph.mode = GraphMode::kKnn;
                ex.graph.k = std::min(a.k, inst.size() - 1);
                examples.push_back(std::move(ex));
            }
            write_graph_dataset(a.out_dir, examples);
            std::cout << fmt::format("{} graph examples\n", examples.size());
            return 0;
        }
        throw std::runtime_error("unknown dataset kind " + a.kind);
    }

    // ---- training ----

    struct TrainTabularArgs {
        std::string dataset_dir;
        std::string model = "gbt";
        std::string out;
        double validation = 0.2;
        std::uint64_t seed = 0;
        int stages = 100;
        int depth = 3;
        int epochs = 30;
    };

    int run_train_tabular(const TrainTabularArgs& a) {
        std::ifstream in(fs::path(a.dataset_dir) / "dataset.csv");
        if (!in) {
            throw std::runtime_error("no dataset.csv in " + a.dataset_dir);
        }
        const auto data = read_dataset_csv(in);
        const auto [train, val] = split_by_instance(data, a.validation, a.seed);
        std::unique_ptr<EdgeModel> model;
        if (a.model == "gbt") {
            GbtParams p;
            p.num_stages = a.stages;
            p.max_depth = a.depth;
            p.seed = a.seed;
            model = std::make_unique<GbtModel>(train_gbt(train, p));
        } else if (a.model == "fnn") {
            FnnParams p;
            p.epochs = a.epochs;
            p.seed = a.seed;
            model = std::make_unique<FnnModel>(train_fnn(train, p));
        } else {
            throw std::runtime_error("unknown model kind " + a.model);
        }
        std::cout << fmt::format("train accuracy {:.4f}\n", accuracy(*model, train));
        if (val.size() > 0) {
            std::cout << fmt::format("validation accuracy {:.4f}\n", accuracy(*model, val));
        }
        save_model(*model, a.out.empty() ? (fs::path(a.dataset_dir) / (a.model + ".model")).string() : a.out);
        return 0;
    }

    struct TrainGnnArgs {
        std::string dataset_dir;
        std::string out;
        int epochs = 10;
        std::size_t graphs_per_step = 8;
        std::size_t hidden = 64;
        std::size_t layers = 4;
        double learning_rate = 1e-3;
        double validation = 0.1;
        std::uint64_t seed = 0;
        std::string checkpoint_dir;
        std::string metrics_csv;
        std::string warm_start;
    };

    int run_train_gnn(const TrainGnnArgs& a) {
        auto examples = read_graph_dataset(a.dataset_dir);
        validate_graph_dataset(examples);
        // One curriculum stage per distinct instance size, smallest first.
        std::map<int, std::vector<GraphExample>> by_size;
        for (auto& ex : examples) {
            by_size[ex.instance->size()].push_back(std::move(ex));
        }
        std::vector<CurriculumStage> stages;
        for (auto& [size, group] : by_size) {
            CurriculumStage st;
            st.name = "n" + std::to_string(size);
            st.epochs = a.epochs;
            st.graphs_per_step = a.graphs_per_step;
            const auto nval = static_cast<std::size_t>(a.validation * static_cast<double>(group.size()));
            st.validation.assign(group.end() - static_cast<std::ptrdiff_t>(nval), group.end());
            st.train.assign(group.begin(), group.end() - static_cast<std::ptrdiff_t>(nval));
            if (st.train.empty()) {
                continue;
            }
            stages.push_back(std::move(st));
        }
        ConvNetTrainOptions opts;
        opts.model.hidden = a.hidden;
        opts.model.layers = a.layers;
        opts.learning_rate = a.learning_rate;
        opts.seed = a.seed;
        if (!a.checkpoint_dir.empty()) {
            opts.checkpoint_dir = a.checkpoint_dir;
        }
        if (!a.metrics_csv.empty()) {
            opts.metrics_csv = a.metrics_csv;
        }
        std::optional<ConvNetModel> warm;
        if (!a.warm_start.empty()) {
            warm = ConvNetModel::load(a.warm_start);
        }
        std::vector<StageReport> reports;
        const auto model = train_convnet(stages, opts, &reports, std::move(warm));
        for (const auto& r : reports) {
            std::cout << fmt::format("stage {} validation loss {:.5f} precision {}\n", r.name, r.validation.loss,
                                     r.validation.precision ? fmt::format("{:.4f}", *r.validation.precision) : "n/a");
        }
        model.save(a.out.empty() ? (fs::path(a.dataset_dir) / "convnet.model").string() : a.out);
        return 0;
    }

    // ---- label ----

    int run_label(const std::string& instance_path, const std::string& solution_path, const std::string& model_path,
                  double threshold, std::uint64_t seed) {
        const Instance inst = load_instance(instance_path);
        const Solution sol = load_solution(inst, solution_path);
        const std::string head = read_text(model_path).substr(0, 32);
        EdgeLabeling labeling;
        Rng rng(seed);
        if (head.starts_with("edgesel-convnet")) {
            GraphLabelOptions go;
            go.threshold = threshold;
            labeling = label_solution_graph(sol, ConvNetModel::load(model_path), go);
        } else {
            TabularOptions to;
            to.rule = ThresholdRule::deterministic(threshold);
            labeling = label_solution_tabular(sol, *load_model(model_path), to, rng);
        }
        std::cout << "a,b,prob,fixed\n";
        for (std::size_t k = 0; k < labeling.size(); ++k) {
            std::cout << fmt::format("{},{},{:.6f},{}\n", labeling.edges[k].a, labeling.edges[k].b, labeling.prob[k],
                                     static_cast<int>(labeling.fixed[k]));
        }
        std::cerr << fmt::format("{} of {} edges fixed\n", labeling.num_fixed(), labeling.size());
        return 0;
    }

    // ---- stats / report ----

    // One value per line, or "key,value" lines paired by key. A non-numeric first line is a header.
    std::vector<std::pair<std::string, double>> read_samples(const std::string& path) {
        std::vector<std::pair<std::string, double>> out;
        bool first = true;
        const std::string content = read_text(path);
        for (const auto& raw : text::split_lines(content)) {
            const auto line = text::trim(raw);
            if (line.empty()) {
                continue;
            }
            const auto comma = line.rfind(',');
            const auto value_text = comma == std::string_view::npos ? line : line.substr(comma + 1);
            const auto value = text::to_double(text::trim(value_text));
            if (!value) {
                if (first) {
                    first = false;
                    continue;
                }
                throw std::runtime_error(path + ": bad value '" + std::string(line) + "'");
            }
            first = false;
            const std::string key =
                comma == std::string_view::npos ? std::to_string(out.size()) : std::string(line.substr(0, comma));
            out.emplace_back(key, *value);
        }
        return out;
    }

    int run_wilcoxon(const std::string& a_path, const std::string& b_path, double alpha, const std::string& method) {
        const auto a = read_samples(a_path);
        const auto b = read_samples(b_path);
        std::map<std::string, double> b_by_key(b.begin(), b.end());
        std::vector<double> va;
        std::vector<double> vb;
        for (const auto& [key, value] : a) {
            if (const auto it = b_by_key.find(key); it != b_by_key.end()) {
                va.push_back(value);
                vb.push_back(it->second);
            }
        }
        const WilcoxonMethod m = method == "exact"    ? WilcoxonMethod::kExact
                                 : method == "normal" ? WilcoxonMethod::kNormal
                                                      : WilcoxonMethod::kAuto;
        const auto res = wilcoxon_one_tailed(va, vb, alpha, m);
        if (!res.p_value) {
            std::cout << fmt::format("pairs={} used=0 p=undefined reject=no\n", va.size());
            return 0;
        }
        std::cout << fmt::format("pairs={} used={} W+={} p={:.6g} method={} reject={}\n", va.size(), res.pairs_used,
                                 res.w_plus, *res.p_value, res.exact ? "exact" : "normal", res.reject ? "yes" : "no");
        return 0;
    }

    int run_report(const std::string& path, const std::string& group_by, const std::string& csv_out) {
        std::ifstream in(path);
        if (!in) {
            throw std::runtime_error("cannot open " + path);
        }
        const auto records = read_run_jsonl(in);
        const GroupBy g = group_by == "size"           ? GroupBy::kSizeBand
                          : group_by == "distribution" ? GroupBy::kDistribution
                          : group_by == "instance"     ? GroupBy::kInstance
                                                       : throw std::runtime_error("unknown grouping " + group_by);
        const auto report = report_tables(records, g);
        std::cout << report.table;
        if (!csv_out.empty()) {
            write_text(csv_out, report.csv);
        }
        return 0;
    }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Edge-selection hybrid metaheuristics for vehicle routing"};
    app.set_config("--config", "", "INI/TOML file with option defaults; flags take precedence");
    app.require_subcommand(1);
    int status = 0;

    SolveArgs solve;
    auto* solve_cmd = app.add_subcommand("solve", "Run one variant on one instance");
    solve_cmd->add_option("instance", solve.instance)->required()->check(CLI::ExistingFile);
    solve_cmd->add_option("--variant", solve.variant, "Variant name, e.g. FILO2-alpha or HGS-mu");
    solve_cmd->add_option("--seed", solve.seed);
    solve_cmd->add_option("--time-limit", solve.time_limit, "Seconds; default scales with instance size");
    solve_cmd->add_option("--iterations", solve.iterations, "Iteration budget");
    solve_cmd->add_option("--bks", solve.bks, "Best-known cost used for gap reporting");
    solve_cmd->add_option("--output", solve.output, "JSON-lines file to append to, '-' for stdout");
    solve_cmd->add_option("--solution", solve.solution_out, "Write the best solution here");
    solve.models.add_options(*solve_cmd);
    solve_cmd->callback([&] { status = run_solve(solve); });

    std::string manifest;
    std::optional<double> bench_time;
    std::optional<int> bench_runs;
    std::string bench_out;
    auto* bench_cmd = app.add_subcommand("bench", "Run an instance x variant x seed grid from a manifest");
    bench_cmd->add_option("manifest", manifest)->required()->check(CLI::ExistingFile);
    bench_cmd->add_option("--time-limit", bench_time);
    bench_cmd->add_option("--runs", bench_runs);
    bench_cmd->add_option("--output", bench_out, "JSON-lines records file");
    bench_cmd->callback([&] { status = run_bench(manifest, bench_time, bench_runs, bench_out); });

    GenerateArgs gen;
    auto add_gen_options = [&](CLI::App* cmd, GenerateArgs& g) {
        cmd->add_option("--customers", g.customers)->check(CLI::Range(1, 100000));
        cmd->add_option("--count", g.count)->check(CLI::PositiveNumber);
        cmd->add_option("--seed", g.seed);
        cmd->add_option("--distribution", g.distribution)->check(CLI::IsMember({"R", "C", "RC"}));
        cmd->add_option("--depot", g.depot)->check(CLI::IsMember({"center", "corner", "random"}));
        cmd->add_option("--demand", g.demand)->check(CLI::IsMember({"unit", "small", "large", "uniform", "quadrant"}));
        cmd->add_option("--route-size", g.route_size);
    };
    auto* gen_cmd = app.add_subcommand("generate", "Write generated CVRP instances");
    add_gen_options(gen_cmd, gen);
    gen_cmd->add_option("--out", gen.out_dir);
    gen_cmd->callback([&] { status = run_generate(gen); });

    DatasetArgs ds;
    auto* ds_cmd = app.add_subcommand("make-dataset", "Build a tabular or graph training set");
    ds_cmd->add_option("kind", ds.kind)->required()->check(CLI::IsMember({"tabular", "graph"}));
    ds_cmd->add_option("--instances", ds.instances, "Instance files; generated when omitted");
    add_gen_options(ds_cmd, ds.gen);
    ds_cmd->add_option("--out", ds.out_dir)->required();
    ds_cmd->add_option("--restarts", ds.restarts);
    ds_cmd->add_option("--annealing-steps", ds.annealing_steps);
    ds_cmd->add_option("--k", ds.k, "Nearest neighbours per node in graph examples");
    ds_cmd->callback([&] { status = run_make_dataset(ds); });

    TrainTabularArgs tt;
    auto* tt_cmd = app.add_subcommand("train-tabular", "Train a GBT or FNN edge classifier");
    tt_cmd->add_option("dataset-dir", tt.dataset_dir)->required()->check(CLI::ExistingDirectory);
    tt_cmd->add_option("--model", tt.model)->check(CLI::IsMember({"gbt", "fnn"}));
    tt_cmd->add_option("--out", tt.out);
    tt_cmd->add_option("--validation", tt.validation)->check(CLI::Range(0.0, 0.9));
    tt_cmd->add_option("--seed", tt.seed);
    tt_cmd->add_option("--stages", tt.stages);
    tt_cmd->add_option("--depth", tt.depth);
    tt_cmd->add_option("--epochs", tt.epochs);
    tt_cmd->callback([&] { status = run_train_tabular(tt); });

    TrainGnnArgs tg;
    auto* tg_cmd = app.add_subcommand("train-gnn", "Train the graph ConvNet with a size curriculum");
    tg_cmd->add_option("dataset-dir", tg.dataset_dir)->required()->check(CLI::ExistingDirectory);
    tg_cmd->add_option("--out", tg.out);
    tg_cmd->add_option("--epochs", tg.epochs);
    tg_cmd->add_option("--graphs-per-step", tg.graphs_per_step)->check(CLI::PositiveNumber);
    tg_cmd->add_option("--hidden", tg.hidden);
    tg_cmd->add_option("--layers", tg.layers);
    tg_cmd->add_option("--learning-rate", tg.learning_rate);
    tg_cmd->add_option("--validation", tg.validation)->check(CLI::Range(0.0, 0.9));
    tg_cmd->add_option("--seed", tg.seed);
    tg_cmd->add_option("--checkpoint-dir", tg.checkpoint_dir);
    tg_cmd->add_option("--metrics", tg.metrics_csv);
    tg_cmd->add_option("--warm-start", tg.warm_start)->check(CLI::ExistingFile);
    tg_cmd->callback([&] { status = run_train_gnn(tg); });

    std::string label_inst;
    std::string label_sol;
    std::string label_model;
    double label_threshold = 0.8;
    std::uint64_t label_seed = 0;
    auto* label_cmd = app.add_subcommand("label", "Print edge probabilities and fixed flags for a solution");
    label_cmd->add_option("instance", label_inst)->required()->check(CLI::ExistingFile);
    label_cmd->add_option("solution", label_sol)->required()->check(CLI::ExistingFile);
    label_cmd->add_option("--model", label_model)->required()->check(CLI::ExistingFile);
    label_cmd->add_option("--threshold", label_threshold)->check(CLI::Range(0.0, 1.0));
    label_cmd->add_option("--seed", label_seed);
    label_cmd->callback([&] { status = run_label(label_inst, label_sol, label_model, label_threshold, label_seed); });

    auto* stats_cmd = app.add_subcommand("stats", "Statistical comparisons");
    stats_cmd->require_subcommand(1);
    std::string wa;
    std::string wb;
    double alpha = 0.05;
    std::string method = "auto";
    auto* wil_cmd = stats_cmd->add_subcommand("wilcoxon", "One-tailed signed-rank test that b improves on a");
    wil_cmd->add_option("a", wa)->required()->check(CLI::ExistingFile);
    wil_cmd->add_option("b", wb)->required()->check(CLI::ExistingFile);
    wil_cmd->add_option("--alpha", alpha)->check(CLI::Range(0.0, 1.0));
    wil_cmd->add_option("--method", method)->check(CLI::IsMember({"auto", "exact", "normal"}));
    wil_cmd->callback([&] { status = run_wilcoxon(wa, wb, alpha, method); });

    std::string records_path;
    std::string group_by = "size";
    std::string report_csv;
    auto* report_cmd = app.add_subcommand("report", "Gap tables from JSON-lines run records");
    report_cmd->add_option("records", records_path)->required()->check(CLI::ExistingFile);
    report_cmd->add_option("--group-by", group_by)->check(CLI::IsMember({"size", "distribution", "instance"}));
    report_cmd->add_option("--csv", report_csv);
    report_cmd->callback([&] { status = run_report(records_path, group_by, report_csv); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return status;
}
