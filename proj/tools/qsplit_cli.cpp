// Command-line front end: instance generation, solving, SVM training and the
// two benchmark harnesses. Every command takes one master --seed (environment
// variable QSPLIT_SEED as fallback); all internal randomness is derived from
// it with fixed component labels, so non-timing output is reproducible.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qsplit/embed.hpp"
#include "qsplit/errors.hpp"
#include "qsplit/qsplit.hpp"
#include "qsplit/qubo.hpp"
#include "qsplit/qubo_io.hpp"
#include "qsplit/samplers.hpp"
#include "qsplit/seeds.hpp"
#include "qsplit/svm.hpp"

namespace {

using namespace qsplit;

constexpr const char* kCsvVersion = "# qsplit-toolkit v1\n";

// Annealing budget for the 128-variable benchmark; lighter than the sampler
// defaults so a full cut-dim sweep stays in the minutes range.
constexpr std::size_t kBenchReads = 20;
constexpr std::size_t kBenchSweeps = 300;

// Assignments drawn for the random-energy reference point of normalized_gap.
constexpr std::size_t kBaselineDraws = 1000;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("write to '" + path + "' failed");
}

double round_ms(double seconds) { return std::round(seconds * 1000.0) / 1000.0; }

double elapsed_s(std::chrono::steady_clock::time_point from) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - from).count();
}

double mean(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double total = 0.0;
    for (double x : v) total += x;
    return total / static_cast<double>(v.size());
}

// Reports show at most this many samples; a full SA sample set can hold
// hundreds and the tail is rarely interesting.
constexpr std::size_t kReportSamples = 5;

nlohmann::json samples_to_json(const SampleSet& set) {
    nlohmann::json out = nlohmann::json::array();
    for (const Sample& s : set.samples()) {
        if (out.size() == kReportSamples) break;
        std::vector<int> bits(s.assignment.begin(), s.assignment.end());
        out.push_back({{"assignment", bits},
                       {"energy", s.energy},
                       {"occurrences", s.occurrences}});
    }
    return out;
}

// ---- gen-qubo ----

struct GenQuboOpts {
    std::size_t vars = 16;
    std::uint64_t seed = 0;
    std::string out;
};

void cmd_gen_qubo(const GenQuboOpts& opt) {
    QuboMatrix q = random_clique_qubo(opt.vars, opt.seed);
    write_output(opt.out, serialize_qubo_file(q));
}

// ---- solve ----

struct SolveOpts {
    std::string in;
    std::string method = "sa";
    std::optional<std::size_t> cut_dim;
    std::size_t k = 5;
    std::uint64_t seed = 0;
    std::string out;
};

void cmd_solve(const SolveOpts& opt) {
    QuboMatrix q = parse_qubo_file(read_file(opt.in));
    nlohmann::json report;
    report["method"] = opt.method;
    report["num_variables"] = q.size();

    if (opt.method == "qsplit") {
        if (!opt.cut_dim) throw ParameterError("--cut-dim is required with --method qsplit");
        QSplitConfig cfg;
        cfg.cut_dim = *opt.cut_dim;
        cfg.k = opt.k;
        cfg.sampler = SamplerKind::sa;
        cfg.seed = opt.seed;
        SolveReport solved = qsplit_solve(q, cfg);
        report["best_energy"] = solved.best.best().energy;
        report["cpu_time_s"] = round_ms(solved.cpu_time);
        report["sampler_time_s"] = round_ms(solved.sampler_time);
        report["sampler_calls"] = solved.sampler_calls;
        report["max_padded_size"] = solved.max_padded_size;
        report["samples"] = samples_to_json(solved.best);
    } else {
        SamplerKind kind = parse_sampler_kind(opt.method);
        SamplerParams params;
        params.seed = opt.seed;
        auto start = std::chrono::steady_clock::now();
        SamplerOutcome outcome = sampler_dispatch(kind, q, params);
        double wall = elapsed_s(start);
        report["best_energy"] = outcome.samples.best().energy;
        report["cpu_time_s"] = round_ms(std::max(0.0, wall - outcome.sampler_time));
        report["sampler_time_s"] = round_ms(outcome.sampler_time);
        report["sampler_calls"] = outcome.calls;
        report["samples"] = samples_to_json(outcome.samples);
    }
    write_output(opt.out, report.dump(2) + "\n");
}

// ---- bench-qsplit ----

struct BenchQsplitOpts {
    std::size_t vars = 128;
    std::vector<std::size_t> cut_dims;
    std::size_t trials = 10;
    std::size_t k = 5;
    std::uint64_t seed = 0;
    std::string out;
};

void cmd_bench_qsplit(const BenchQsplitOpts& opt) {
    if (opt.cut_dims.empty()) throw ParameterError("--cut-dims needs at least one value");
    if (opt.trials == 0) throw ParameterError("--trials must be at least 1");
    for (std::size_t d : opt.cut_dims)
        if (d < 2 || d > opt.vars)
            throw ParameterError("cut dims must lie in [2, --vars]");

    const std::uint64_t instance_base = derive_seed(opt.seed, label_code("bench-qsplit/instance"));
    const std::uint64_t direct_base = derive_seed(opt.seed, label_code("bench-qsplit/direct"));
    const std::uint64_t random_base = derive_seed(opt.seed, label_code("bench-qsplit/baseline"));
    const std::uint64_t qsplit_base = derive_seed(opt.seed, label_code("bench-qsplit/qsplit"));

    SamplerParams params;
    params.num_reads = kBenchReads;
    params.num_sweeps = kBenchSweeps;

    const std::size_t dims = opt.cut_dims.size();
    std::vector<std::vector<double>> energy_rows(dims), cpu_rows(dims), sampler_rows(dims),
        call_rows(dims);
    std::vector<double> direct_energy, direct_wall, random_mean;
    std::vector<double> best_known(opt.trials);

    for (std::size_t t = 0; t < opt.trials; ++t) {
        QuboMatrix q = random_clique_qubo(opt.vars, derive_seed(instance_base, t));

        SplitMix64 rng(derive_seed(random_base, t));
        double random_total = 0.0;
        Assignment x(opt.vars);
        for (std::size_t draw = 0; draw < kBaselineDraws; ++draw) {
            for (auto& bit : x) bit = static_cast<std::uint8_t>(rng.next_u64() & 1u);
            random_total += energy(q, x);
        }
        random_mean.push_back(random_total / kBaselineDraws);

        SamplerParams direct_params = params;
        direct_params.seed = derive_seed(direct_base, t);
        auto start = std::chrono::steady_clock::now();
        SamplerOutcome direct = sampler_dispatch(SamplerKind::sa, q, direct_params);
        direct_wall.push_back(elapsed_s(start));
        direct_energy.push_back(direct.samples.best().energy);

        best_known[t] = direct_energy.back();
        for (std::size_t d = 0; d < dims; ++d) {
            QSplitConfig cfg;
            cfg.cut_dim = opt.cut_dims[d];
            cfg.k = opt.k;
            cfg.sampler = SamplerKind::sa;
            cfg.params = params;
            cfg.seed = derive_seed(derive_seed(qsplit_base, opt.cut_dims[d]), t);
            SolveReport solved = qsplit_solve(q, cfg);
            energy_rows[d].push_back(solved.best.best().energy);
            cpu_rows[d].push_back(solved.cpu_time);
            sampler_rows[d].push_back(solved.sampler_time);
            call_rows[d].push_back(static_cast<double>(solved.sampler_calls));
            best_known[t] = std::min(best_known[t], energy_rows[d].back());
        }
    }

    double baseline_time = round_ms(mean(direct_wall));
    std::vector<double> direct_gaps;
    for (std::size_t t = 0; t < opt.trials; ++t)
        direct_gaps.push_back(normalized_gap(direct_energy[t], best_known[t], random_mean[t]));
    double baseline_gap = mean(direct_gaps);

    std::string csv = kCsvVersion;
    csv +=
        "cut_dim,cpu_time_s,sampler_time_s,sampler_calls,best_energy,"
        "normalized_gap,baseline_total_time_s,baseline_gap\n";
    for (std::size_t d = 0; d < dims; ++d) {
        std::vector<double> gaps;
        for (std::size_t t = 0; t < opt.trials; ++t)
            gaps.push_back(normalized_gap(energy_rows[d][t], best_known[t], random_mean[t]));
        csv += std::to_string(opt.cut_dims[d]) + "," + format_double(round_ms(mean(cpu_rows[d]))) +
               "," + format_double(round_ms(mean(sampler_rows[d]))) + "," +
               format_double(mean(call_rows[d])) + "," + format_double(mean(energy_rows[d])) +
               "," + format_double(mean(gaps)) + "," + format_double(baseline_time) + "," +
               format_double(baseline_gap) + "\n";
    }
    csv += "direct,0," + format_double(baseline_time) + ",1," +
           format_double(mean(direct_energy)) + "," + format_double(baseline_gap) + "," +
           format_double(baseline_time) + "," + format_double(baseline_gap) + "\n";
    write_output(opt.out, csv);
}

// ---- bench-embed ----

struct BenchEmbedOpts {
    std::vector<std::size_t> cliques;
    std::vector<std::size_t> target = {16, 16, 4};
    std::size_t seeds = 5;
    double timeout = 10.0;
    std::uint64_t seed = 0;
    std::string out;
};

void cmd_bench_embed(const BenchEmbedOpts& opt) {
    if (opt.cliques.empty()) throw ParameterError("--cliques needs at least one value");
    if (opt.seeds == 0) throw ParameterError("--seeds must be at least 1");
    if (opt.target.size() != 3)
        throw ParameterError("--target expects rows,cols,shore");

    HardwareGraph hw = chimera_graph(opt.target[0], opt.target[1], opt.target[2]);
    const std::uint64_t base = derive_seed(opt.seed, label_code("bench-embed"));

    std::string csv = kCsvVersion;
    csv += "clique_n,embedding_nodes,avg_time_s,success_rate\n";
    for (std::size_t n : opt.cliques) {
        if (n == 0) throw ParameterError("clique sizes must be at least 1");
        ProblemGraph problem = clique_graph(n);
        std::vector<double> times, nodes;
        std::size_t successes = 0;
        for (std::size_t r = 0; r < opt.seeds; ++r) {
            auto start = std::chrono::steady_clock::now();
            auto found =
                find_embedding(problem, hw, derive_seed(derive_seed(base, n), r), opt.timeout);
            times.push_back(elapsed_s(start));
            if (found) {
                ++successes;
                nodes.push_back(static_cast<double>(found->total_nodes()));
            }
        }
        double rate = static_cast<double>(successes) / static_cast<double>(opt.seeds);
        csv += std::to_string(n) + "," + format_double(mean(nodes)) + "," +
               format_double(round_ms(mean(times))) + "," + format_double(rate) + "\n";
    }
    write_output(opt.out, csv);
}

// ---- svm ----

struct SvmGenOpts {
    std::size_t n = 40;
    double margin = 0.3;
    double noise = 0.0;
    std::uint64_t seed = 0;
    std::string out;
};

void cmd_svm_gen(const SvmGenOpts& opt) {
    Dataset data = synthetic_axis_dataset(opt.n, opt.margin, opt.noise, opt.seed);
    write_output(opt.out, kCsvVersion + serialize_dataset_csv(data));
}

struct SvmTrainOpts {
    std::string data;
    std::size_t bits = 3;
    double lambda = 0.0;  // <= 0 selects the 5 * max|K| default
    std::string kernel = "linear";
    double gamma = 1.0;
    std::size_t ensemble = 3;
    std::string method = "sa";
    std::size_t cut_dim = 32;
    std::size_t k = 5;
    std::uint64_t seed = 0;
    std::string out;
};

SvmSolver::Method parse_svm_method(const std::string& name) {
    if (name == "exhaustive") return SvmSolver::Method::exhaustive;
    if (name == "sa") return SvmSolver::Method::sa;
    if (name == "qsplit") return SvmSolver::Method::qsplit;
    throw ParameterError("unknown training method '" + name + "'");
}

KernelSpec parse_kernel(const std::string& name, double gamma) {
    KernelSpec spec;
    if (name == "linear") {
        spec.kind = KernelSpec::Kind::linear;
    } else if (name == "rbf") {
        spec.kind = KernelSpec::Kind::rbf;
        spec.gamma = gamma;
    } else {
        throw ParameterError("unknown kernel '" + name + "'");
    }
    return spec;
}

void cmd_svm_train(const SvmTrainOpts& opt) {
    Dataset data = parse_dataset_csv(read_file(opt.data));
    KernelSpec kernel = parse_kernel(opt.kernel, opt.gamma);
    SvmSolver solver;
    solver.method = parse_svm_method(opt.method);
    solver.cut_dim = opt.cut_dim;
    solver.k = opt.k;
    solver.seed = opt.seed;
    EnsembleModel model = train(data, kernel, opt.bits, opt.lambda, solver, opt.ensemble);
    write_output(opt.out, serialize_ensemble_json(model));
}

struct SvmPredictOpts {
    std::string model;
    std::string data;
    std::string out;
};

void cmd_svm_predict(const SvmPredictOpts& opt) {
    EnsembleModel model = parse_ensemble_json(read_file(opt.model));
    if (model.members.empty()) throw ParseError("model has no ensemble members");
    Dataset data = parse_dataset_csv(read_file(opt.data));
    const std::size_t model_dim = model.members.front().data.dim();
    if (data.dim() != model_dim)
        throw ParseError("data dimension " + std::to_string(data.dim()) +
                         " does not match model dimension " + std::to_string(model_dim));

    std::string csv = kCsvVersion;
    csv += "predicted_label\n";
    std::vector<int> predictions;
    for (const auto& point : data.points) {
        int label = predict(model, point);
        predictions.push_back(label);
        csv += std::to_string(label) + "\n";
    }
    write_output(opt.out, csv);
    std::cout << "f1 " << format_double(f1_score(predictions, data.labels)) << "\n";
}

void add_seed_option(CLI::App* cmd, std::uint64_t& seed) {
    cmd->add_option("--seed", seed, "Master seed; all internal seeds derive from it")
        ->envname("QSPLIT_SEED");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"QUBO toolkit: decomposition solver, SVM trainer and benchmarks"};
    app.require_subcommand(1);

    GenQuboOpts gen_opt;
    auto* gen = app.add_subcommand("gen-qubo", "Write a random fully dense QUBO instance");
    gen->add_option("--vars", gen_opt.vars, "Number of binary variables")->required();
    add_seed_option(gen, gen_opt.seed);
    gen->add_option("--out", gen_opt.out, "Output path (stdout when omitted)");
    gen->callback([&] { cmd_gen_qubo(gen_opt); });

    SolveOpts solve_opt;
    auto* solve = app.add_subcommand("solve", "Solve a QUBO file with a chosen backend");
    solve->add_option("--in", solve_opt.in, "QUBO input file")->required();
    solve->add_option("--method", solve_opt.method, "exhaustive, sa or qsplit");
    solve->add_option("--cut-dim", solve_opt.cut_dim,
                      "Recursion stops at this size (qsplit only)");
    solve->add_option("--k", solve_opt.k, "Candidates kept per merge (qsplit only)");
    add_seed_option(solve, solve_opt.seed);
    solve->add_option("--out", solve_opt.out, "Report path (stdout when omitted)");
    solve->callback([&] { cmd_solve(solve_opt); });

    BenchQsplitOpts bq_opt;
    auto* bench_qsplit = app.add_subcommand(
        "bench-qsplit", "Compare decomposition against the direct sampler on random cliques");
    bench_qsplit->add_option("--vars", bq_opt.vars, "Instance size");
    bench_qsplit->add_option("--cut-dims", bq_opt.cut_dims, "Cut dimensions to sweep")
        ->required()
        ->delimiter(',');
    bench_qsplit->add_option("--trials", bq_opt.trials, "Instances per cut dimension");
    bench_qsplit->add_option("--k", bq_opt.k, "Candidates kept per merge");
    add_seed_option(bench_qsplit, bq_opt.seed);
    bench_qsplit->add_option("--out", bq_opt.out, "CSV path (stdout when omitted)");
    bench_qsplit->callback([&] { cmd_bench_qsplit(bq_opt); });

    BenchEmbedOpts be_opt;
    auto* bench_embed =
        app.add_subcommand("bench-embed", "Embedding cost of cliques on a chimera target");
    bench_embed->add_option("--cliques", be_opt.cliques, "Clique sizes to embed")
        ->required()
        ->delimiter(',');
    bench_embed->add_option("--target", be_opt.target, "Topology as rows,cols,shore")
        ->delimiter(',');
    bench_embed->add_option("--seeds", be_opt.seeds, "Search repetitions per size");
    bench_embed->add_option("--timeout", be_opt.timeout, "Per-search timeout in seconds");
    add_seed_option(bench_embed, be_opt.seed);
    bench_embed->add_option("--out", be_opt.out, "CSV path (stdout when omitted)");
    bench_embed->callback([&] { cmd_bench_embed(be_opt); });

    auto* svm = app.add_subcommand("svm", "Train and apply binary classifiers");
    svm->require_subcommand(1);

    SvmGenOpts sg_opt;
    auto* svm_gen = svm->add_subcommand("gen", "Write a synthetic two-class dataset");
    svm_gen->add_option("--n", sg_opt.n, "Number of points (even)");
    svm_gen->add_option("--margin", sg_opt.margin, "Class separation in (0, 1)");
    svm_gen->add_option("--noise", sg_opt.noise, "Fraction of labels flipped");
    add_seed_option(svm_gen, sg_opt.seed);
    svm_gen->add_option("--out", sg_opt.out, "CSV path (stdout when omitted)");
    svm_gen->callback([&] { cmd_svm_gen(sg_opt); });

    SvmTrainOpts st_opt;
    auto* svm_train = svm->add_subcommand("train", "Train an ensemble from labeled CSV data");
    svm_train->add_option("--data", st_opt.data, "Training CSV")->required();
    svm_train->add_option("--bits", st_opt.bits, "Bits per dual coefficient");
    svm_train->add_option("--lambda", st_opt.lambda,
                          "Balance penalty weight (<= 0 selects 5 * max|K|)");
    svm_train->add_option("--kernel", st_opt.kernel, "linear or rbf");
    svm_train->add_option("--gamma", st_opt.gamma, "RBF width parameter");
    svm_train->add_option("--ensemble", st_opt.ensemble, "Members in the majority vote");
    svm_train->add_option("--method", st_opt.method, "exhaustive, sa or qsplit");
    svm_train->add_option("--cut-dim", st_opt.cut_dim, "Recursion cutoff (qsplit method)");
    svm_train->add_option("--k", st_opt.k, "Candidates kept per merge (qsplit method)");
    add_seed_option(svm_train, st_opt.seed);
    svm_train->add_option("--out", st_opt.out, "Model JSON path (stdout when omitted)");
    svm_train->callback([&] { cmd_svm_train(st_opt); });

    SvmPredictOpts sp_opt;
    auto* svm_predict = svm->add_subcommand("predict", "Classify CSV rows with a trained model");
    svm_predict->add_option("--model", sp_opt.model, "Model JSON file")->required();
    svm_predict->add_option("--data", sp_opt.data, "CSV rows to classify")->required();
    svm_predict->add_option("--out", sp_opt.out, "Predictions CSV path (stdout when omitted)");
    svm_predict->callback([&] { cmd_svm_predict(sp_opt); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;  // bad usage is exit 1, help is success
    } catch (const qsplit::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const qsplit::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const qsplit::CapacityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
