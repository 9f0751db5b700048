#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "causaldna/ci.hpp"
#include "causaldna/common.hpp"
#include "causaldna/dna_learn.hpp"
#include "causaldna/graph.hpp"
#include "causaldna/harness.hpp"
#include "causaldna/json_io.hpp"
#include "causaldna/sem.hpp"
#include "causaldna/structure.hpp"

namespace {

using namespace causaldna;

struct OracleArgs {
    std::string oracle = "dsep";
    std::string graph;
    std::string data;
    double lambda = 0.01;
    double lambda_dep = 0.2;
};

void add_oracle_options(CLI::App* sub, OracleArgs& args) {
    sub->add_option("--oracle", args.oracle, "Independence oracle: dsep, gauss-pop or gauss-sample")
        ->check(CLI::IsMember({"dsep", "gauss-pop", "gauss-sample"}));
    sub->add_option("--graph", args.graph,
                    "Graph, linear model or covariance JSON file (per the oracle)");
    sub->add_option("--data", args.data, "Dataset CSV file (gauss-sample oracle)");
    sub->add_option("--lambda", args.lambda, "Independence threshold on partial correlations");
    sub->add_option("--lambda-dep", args.lambda_dep,
                    "Dependence threshold: gauss-sample verdicts and the d-connection step of"
                    " relation learning");
}

// Accepts either a plain graph file or a linear model file.
Dag load_dag_like(const std::string& path) {
    nlohmann::json j = load_json_file(path);
    if (j.is_object() && j.contains("coefficients")) {
        return sem_from_json(j).dag();
    }
    return dag_from_json(j);
}

// Accepts either a linear model file (implied covariance) or a covariance file.
CovarianceMatrix load_covariance_like(const std::string& path) {
    nlohmann::json j = load_json_file(path);
    if (j.is_object() && j.contains("coefficients")) {
        return covariance_of(sem_from_json(j));
    }
    if (j.is_object() && j.contains("matrix")) {
        return covariance_from_json(j);
    }
    throw std::invalid_argument("'" + path + "' holds neither a linear model nor a covariance");
}

std::string require_path(const std::string& path, const std::string& what) {
    if (path.empty()) {
        throw std::invalid_argument(what);
    }
    return path;
}

std::unique_ptr<CiTester> build_tester(const OracleArgs& args) {
    if (args.oracle == "dsep") {
        return make_dsep_oracle(
            load_dag_like(require_path(args.graph, "--graph is required with the dsep oracle")));
    }
    if (args.oracle == "gauss-pop") {
        return make_gaussian_population(
            load_covariance_like(
                require_path(args.graph, "--graph is required with the gauss-pop oracle")),
            args.lambda);
    }
    Eigen::MatrixXd data = load_dataset_file(
        require_path(args.data, "--data is required with the gauss-sample oracle"));
    return make_gaussian_sample(data, args.lambda, args.lambda_dep);
}

DnaSet run_dna(const std::string& algo, int k, const OracleArgs& args) {
    if (algo == "small") {
        auto tester = build_tester(args);
        return learn_dna_small(*tester, k, args.lambda_dep);
    }
    if (args.oracle == "dsep") {
        return learn_dna_large(
            load_dag_like(require_path(args.graph, "--graph is required with the dsep oracle")), k);
    }
    if (args.oracle == "gauss-pop") {
        return learn_dna_large(
            load_covariance_like(
                require_path(args.graph, "--graph is required with the gauss-pop oracle")),
            k, args.lambda);
    }
    Eigen::MatrixXd data = load_dataset_file(
        require_path(args.data, "--data is required with the gauss-sample oracle"));
    return learn_dna_large(empirical_covariance(data), k, args.lambda);
}

LearnResult run_learn(const std::string& algo, int k, int depth, int restarts,
                      const OracleArgs& args) {
    auto tester = build_tester(args);
    if (algo == "pc") {
        return pc(*tester);
    }
    if (algo == "pc-dna") {
        DnaSet d = learn_dna_small(*tester, k, args.lambda_dep);
        return pc_with_dna(*tester, d);
    }
    if (algo == "sp") {
        return sp_exhaustive(*tester);
    }
    SpConfig config;
    config.depth = depth;
    config.restarts = restarts;
    if (algo == "tsp") {
        Ordering init(tester->num_variables());
        std::iota(init.begin(), init.end(), 0);
        return tsp_greedy(*tester, config, init);
    }
    config.mode = tester->num_variables() <= 7 ? SpMode::Exhaustive : SpMode::GreedyTsp;
    DnaConfig dna{DnaMode::SmallSets, k, args.lambda_dep};
    return layered_sp(*tester, dna, config);
}

template <typename Records, typename Writer>
void save_csv(const std::string& path, const Records& records, Writer writer) {
    std::ofstream out(path);
    if (!out.is_open()) {
        throw io_error("cannot open '" + path + "'");
    }
    writer(out, records);
    if (!out) {
        throw io_error("write to '" + path + "' failed");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Learning definite non-ancestral relations from conditional independence tests"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("gen", "Sample a random DAG and write it as JSON");
    std::string gen_family = "er";
    int gen_p = 10;
    double gen_s = 3.0;
    std::uint64_t gen_seed = 0;
    std::string gen_out;
    gen->add_option("--family", gen_family, "Graph family: er or plaw")
        ->check(CLI::IsMember({"er", "plaw"}));
    gen->add_option("--p", gen_p, "Number of vertices");
    gen->add_option("--s", gen_s, "Expected degree (er) or attachments per vertex (plaw)");
    gen->add_option("--seed", gen_seed, "Random seed");
    gen->add_option("--out", gen_out, "Output JSON path")->required();

    auto* sem = app.add_subcommand("sem", "Draw random linear model parameters for a graph");
    std::string sem_graph;
    std::uint64_t sem_seed = 0;
    std::string sem_out;
    int sem_n = 0;
    std::string sem_data_out;
    sem->add_option("--graph", sem_graph, "Graph JSON file")->required();
    sem->add_option("--seed", sem_seed, "Random seed");
    sem->add_option("--out", sem_out, "Output JSON path")->required();
    sem->add_option("--n", sem_n, "Also draw this many observations");
    sem->add_option("--data-out", sem_data_out, "Dataset CSV path for --n");

    auto* dna = app.add_subcommand("dna", "Learn definite non-ancestral pairs");
    std::string dna_algo = "small";
    int dna_k = 0;
    OracleArgs dna_oracle;
    std::string dna_out;
    dna->add_option("--algo", dna_algo, "Learner: small or large")
        ->check(CLI::IsMember({"small", "large"}));
    dna->add_option("--k", dna_k, "Conditioning budget");
    add_oracle_options(dna, dna_oracle);
    dna->add_option("--out", dna_out, "Output JSON path")->required();

    auto* learn = app.add_subcommand("learn", "Learn a graph from independence tests");
    std::string learn_algo = "pc";
    int learn_k = 0;
    int learn_depth = 4;
    int learn_restarts = 5;
    OracleArgs learn_oracle;
    std::string learn_out;
    learn->add_option("--algo", learn_algo, "Learner: pc, pc-dna, sp, tsp or layered-sp")
        ->check(CLI::IsMember({"pc", "pc-dna", "sp", "tsp", "layered-sp"}));
    learn->add_option("--k", learn_k, "Conditioning budget for the non-ancestral scan");
    learn->add_option("--depth", learn_depth, "Covered-arrow walk depth (greedy search)");
    learn->add_option("--restarts", learn_restarts, "Initial orderings tried (greedy search)");
    add_oracle_options(learn, learn_oracle);
    learn->add_option("--out", learn_out, "Output JSON path")->required();

    auto* bench = app.add_subcommand("bench", "Run a benchmark sweep and write CSV");
    std::string bench_mode;
    BenchConfig cfg;
    std::string bench_out;
    bench->add_option("mode", bench_mode, "population, sample or coverage")
        ->required()
        ->check(CLI::IsMember({"population", "sample", "coverage"}));
    bench->add_option("--p", cfg.p, "Number of vertices");
    bench->add_option("--s-min", cfg.s_min, "Smallest expected degree");
    bench->add_option("--s-max", cfg.s_max, "Largest expected degree");
    auto* reps_opt = bench->add_option("--reps", cfg.reps, "Replicates per sweep point");
    auto* lambda_opt = bench->add_option("--lambda", cfg.lambda, "Independence threshold");
    bench->add_option("--lambda-dep", cfg.lambda_dep,
                      "Dependence threshold: sample verdicts and the d-connection step of"
                      " relation learning");
    bench->add_option("--n", cfg.n, "Observations per replicate (sample mode)");
    bench->add_option("--k-list", cfg.k_list, "Conditioning budgets (coverage mode)")
        ->delimiter(',');
    bench->add_option("--seed", cfg.seed, "Base seed");
    bench->add_option("--threads", cfg.threads, "Worker threads");
    bench->add_option("--out", bench_out, "Output CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*gen) {
            Dag g = gen_family == "er"
                        ? random_er_dag(gen_p, gen_s, gen_seed)
                        : random_powerlaw_dag(gen_p, static_cast<int>(std::llround(gen_s)), gen_seed);
            save_json_file(gen_out, dag_to_json(g));
        } else if (*sem) {
            LinearSem model = random_linear_sem(load_dag_like(sem_graph), sem_seed);
            save_json_file(sem_out, sem_to_json(model));
            if (sem_n > 0 || !sem_data_out.empty()) {
                require_path(sem_data_out, "--data-out is required with --n");
                if (sem_n <= 0) {
                    throw std::invalid_argument("--n must be positive with --data-out");
                }
                save_dataset_file(sem_data_out, draw_samples(model, sem_n, sem_seed + 1));
            }
        } else if (*dna) {
            save_json_file(dna_out, dna_to_json(run_dna(dna_algo, dna_k, dna_oracle)));
        } else if (*learn) {
            LearnResult result =
                run_learn(learn_algo, learn_k, learn_depth, learn_restarts, learn_oracle);
            save_json_file(learn_out, learn_result_to_json(result));
        } else if (*bench) {
            if (reps_opt->count() == 0) {
                cfg.reps = bench_mode == "population" ? 50 : bench_mode == "sample" ? 20 : 200;
            }
            if (lambda_opt->count() == 0) {
                cfg.lambda = bench_mode == "sample" ? 0.02 : 0.01;
            }
            if (bench_mode == "population") {
                cfg.experiment = Experiment::Population;
                save_csv(bench_out, run_population_benchmark(cfg),
                         [](std::ostream& out, const std::vector<BenchRecord>& records) {
                             write_benchmark_csv(out, records);
                         });
            } else if (bench_mode == "sample") {
                cfg.experiment = Experiment::Sample;
                save_csv(bench_out, run_sample_benchmark(cfg),
                         [](std::ostream& out, const std::vector<BenchRecord>& records) {
                             write_benchmark_csv(out, records);
                         });
            } else {
                cfg.experiment = Experiment::Coverage;
                save_csv(bench_out, run_coverage_benchmark(cfg),
                         [](std::ostream& out, const std::vector<CoverageRecord>& records) {
                             write_coverage_csv(out, records);
                         });
            }
        }
        return 0;
    } catch (const io_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const numeric_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
