#include "causaldna/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <numeric>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <utility>

#include "causaldna/ci.hpp"
#include "causaldna/dna_learn.hpp"
#include "causaldna/rng.hpp"
#include "causaldna/sem.hpp"
#include "causaldna/structure.hpp"

namespace causaldna {

bool mec_recovered(const Cpdag& estimate, const Cpdag& truth) {
    if (estimate.num_vertices() != truth.num_vertices())
        throw std::invalid_argument("mec_recovered: vertex counts differ.");
    return estimate == truth;
}

namespace {

bool known_algorithm(const std::string& algo) {
    return algo == "pc" || algo == "pc-dna" || algo == "sp" || algo == "tsp" ||
           algo == "layered-sp";
}

void validate(const BenchConfig& cfg, Experiment experiment) {
    if (cfg.p < 2) throw std::invalid_argument("benchmark: p must be >= 2.");
    if (cfg.reps < 1) throw std::invalid_argument("benchmark: reps must be >= 1.");
    if (cfg.s_min < 0.0 || cfg.s_min > cfg.s_max || cfg.s_max > cfg.p - 1)
        throw std::invalid_argument("benchmark: s range must satisfy 0 <= s_min <= s_max <= p-1.");
    if (cfg.threads < 1) throw std::invalid_argument("benchmark: threads must be >= 1.");
    if (cfg.dna_k < 0) throw std::invalid_argument("benchmark: dna level must be >= 0.");
    if (cfg.lambda <= 0.0) throw std::invalid_argument("benchmark: lambda must be positive.");
    if (experiment != Experiment::Coverage) {
        if (cfg.algorithms.empty())
            throw std::invalid_argument("benchmark: at least one algorithm required.");
        for (const auto& algo : cfg.algorithms)
            if (!known_algorithm(algo))
                throw std::invalid_argument("benchmark: unknown algorithm '" + algo + "'.");
        if (cfg.lambda_dep < cfg.lambda)
            throw std::invalid_argument("benchmark: lambda_dep must be >= lambda.");
    }
    if (experiment == Experiment::Sample) {
        if (cfg.n < cfg.p + 2)
            throw std::invalid_argument("benchmark: sample size must be at least p + 2.");
    }
    if (experiment == Experiment::Coverage) {
        if (cfg.k_list.empty())
            throw std::invalid_argument("benchmark: coverage needs at least one learning level.");
        for (int k : cfg.k_list)
            if (k < 0) throw std::invalid_argument("benchmark: learning levels must be >= 0.");
    }
}

std::vector<double> sweep_values(const BenchConfig& cfg) {
    std::vector<double> values;
    for (double s = cfg.s_min; s <= cfg.s_max + 1e-9; s += 1.0) values.push_back(s);
    return values;
}

// Runs count tasks across the configured workers; task indices are handed
// out atomically, results must land in preassigned slots.
template <typename Task>
void run_tasks(int threads, int count, Task&& task) {
    if (threads <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) task(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    int workers = std::min(threads, count);
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) {
        pool.emplace_back([&] {
            while (true) {
                int i = next.fetch_add(1);
                if (i >= count) break;
                try {
                    task(i);
                } catch (...) {
                    std::lock_guard<std::mutex> hold(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& worker : pool) worker.join();
    if (error) std::rethrow_exception(error);
}

struct AlgoOutcome {
    Cpdag estimate;
    LearnCounts counts;
    DnaSet learned;
};

SpConfig auto_sp_config(int p, std::uint64_t seed) {
    SpConfig sp;
    sp.mode = p <= 7 ? SpMode::Exhaustive : SpMode::GreedyTsp;
    sp.depth = 4;
    sp.restarts = 5;
    sp.seed = seed;
    return sp;
}

AlgoOutcome run_algorithm(CiTester& tester, const std::string& algo, const BenchConfig& cfg,
                          std::uint64_t sp_seed) {
    int p = tester.num_variables();
    if (algo == "pc") {
        LearnResult result = pc(tester);
        return {result.completed(), result.counts, DnaSet(p)};
    }
    if (algo == "pc-dna") {
        DnaSet d = learn_dna_small(tester, cfg.dna_k, cfg.lambda_dep);
        LearnResult result = pc_with_dna(tester, d);
        return {result.completed(), result.counts, std::move(d)};
    }
    SpConfig sp = auto_sp_config(p, sp_seed);
    if (algo == "sp" || algo == "tsp") {
        if (algo == "tsp") sp.mode = SpMode::GreedyTsp;
        if (sp.mode == SpMode::Exhaustive) {
            LearnResult result = sp_exhaustive(tester);
            return {result.completed(), result.counts, DnaSet(p)};
        }
        Ordering init(p);
        std::iota(init.begin(), init.end(), 0);
        LearnResult result = tsp_greedy(tester, sp, init);
        return {result.completed(), result.counts, DnaSet(p)};
    }
    if (algo == "layered-sp") {
        DnaConfig base{DnaMode::SmallSets, cfg.dna_k, cfg.lambda_dep};
        LearnResult result = layered_sp(tester, base, sp);
        // Replays the learner on the warm cache to report what it found.
        DnaSet d = learn_dna_small(tester, cfg.dna_k, cfg.lambda_dep);
        return {result.completed(), result.counts, std::move(d)};
    }
    throw std::invalid_argument("benchmark: unknown algorithm '" + algo + "'.");
}

BenchRecord run_one(const BenchConfig& cfg, CiTester& tester, const std::string& algo, double s,
                    int rep, std::uint64_t grep, const Cpdag& truth, const DnaSet& dna_truth) {
    auto start = std::chrono::steady_clock::now();
    AlgoOutcome outcome = run_algorithm(tester, algo, cfg, derive_seed(cfg.seed, grep, algo));
    std::chrono::duration<double, std::milli> elapsed = std::chrono::steady_clock::now() - start;
    BenchRecord record;
    record.rep = rep;
    record.p = cfg.p;
    record.s = s;
    record.algo = algo;
    record.lambda = cfg.lambda;
    record.recovered = mec_recovered(outcome.estimate, truth) ? 1 : 0;
    record.ci_tests = outcome.counts.ci_tests;
    for (auto [a, b] : outcome.learned.pairs())
        ++(dna_truth.contains(a, b) ? record.dna_tp : record.dna_fp);
    record.runtime_ms = elapsed.count();
    record.failed = 0;
    return record;
}

BenchRecord failed_record(const BenchConfig& cfg, const std::string& algo, double s, int rep) {
    BenchRecord record;
    record.rep = rep;
    record.p = cfg.p;
    record.s = s;
    record.algo = algo;
    record.lambda = cfg.lambda;
    record.failed = 1;
    return record;
}

std::vector<BenchRecord> population_task(const BenchConfig& cfg, double s, std::uint64_t grep,
                                         int rep) {
    Dag g = random_er_dag(cfg.p, s, derive_seed(cfg.seed, grep, "graph"));
    LinearSem sem = random_linear_sem(g, derive_seed(cfg.seed, grep, "sem"));
    CovarianceMatrix sigma = covariance_of(sem);
    Cpdag truth = cpdag_of(g);
    DnaSet dna_truth = dna_from_cpdag(truth);
    std::vector<BenchRecord> records;
    records.reserve(cfg.algorithms.size());
    for (const auto& algo : cfg.algorithms) {
        auto tester = make_gaussian_population(sigma, cfg.lambda);
        records.push_back(run_one(cfg, *tester, algo, s, rep, grep, truth, dna_truth));
    }
    return records;
}

std::vector<BenchRecord> sample_task(const BenchConfig& cfg, double s, std::uint64_t grep,
                                     int rep) {
    Dag g = random_er_dag(cfg.p, s, derive_seed(cfg.seed, grep, "graph"));
    LinearSem sem = random_linear_sem(g, derive_seed(cfg.seed, grep, "sem"));
    Cpdag truth = cpdag_of(g);
    DnaSet dna_truth = dna_from_cpdag(truth);
    std::optional<CovarianceMatrix> empirical;
    try {
        Eigen::MatrixXd data = draw_samples(sem, cfg.n, derive_seed(cfg.seed, grep, "samples"));
        empirical = empirical_covariance(data);
    } catch (const std::exception&) {
    }
    std::vector<BenchRecord> records;
    records.reserve(cfg.algorithms.size());
    for (const auto& algo : cfg.algorithms) {
        if (!empirical) {
            records.push_back(failed_record(cfg, algo, s, rep));
            continue;
        }
        try {
            auto tester = make_gaussian_sample(*empirical, cfg.n, cfg.lambda, cfg.lambda_dep);
            records.push_back(run_one(cfg, *tester, algo, s, rep, grep, truth, dna_truth));
        } catch (const std::exception&) {
            records.push_back(failed_record(cfg, algo, s, rep));
        }
    }
    return records;
}

std::vector<BenchRecord> run_bench(const BenchConfig& cfg, Experiment experiment) {
    validate(cfg, experiment);
    std::vector<double> s_values = sweep_values(cfg);
    int count = static_cast<int>(s_values.size()) * cfg.reps;
    std::vector<std::vector<BenchRecord>> slots(count);
    run_tasks(cfg.threads, count, [&](int task) {
        double s = s_values[task / cfg.reps];
        int rep = task % cfg.reps;
        auto grep = static_cast<std::uint64_t>(task);
        slots[task] = experiment == Experiment::Population ? population_task(cfg, s, grep, rep)
                                                           : sample_task(cfg, s, grep, rep);
    });
    std::vector<BenchRecord> records;
    records.reserve(static_cast<std::size_t>(count) * cfg.algorithms.size());
    for (auto& slot : slots)
        for (auto& record : slot) records.push_back(std::move(record));
    return records;
}

std::string format_double(double x) {
    char buffer[32];
    auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), x);
    return std::string(buffer, end);
}

}  // namespace

std::vector<BenchRecord> run_population_benchmark(const BenchConfig& config) {
    return run_bench(config, Experiment::Population);
}

std::vector<BenchRecord> run_sample_benchmark(const BenchConfig& config) {
    return run_bench(config, Experiment::Sample);
}

std::vector<CoverageRecord> run_coverage_benchmark(const BenchConfig& config) {
    validate(config, Experiment::Coverage);
    std::vector<double> s_values = sweep_values(config);
    int per_family = static_cast<int>(s_values.size()) * config.reps;
    int count = 2 * per_family;
    std::vector<std::vector<CoverageRecord>> slots(count);
    run_tasks(config.threads, count, [&](int task) {
        bool powerlaw = task >= per_family;
        int within = powerlaw ? task - per_family : task;
        double s = s_values[within / config.reps];
        int rep = within % config.reps;
        auto grep = static_cast<std::uint64_t>(task);
        int m = std::max(1, std::min(config.p - 1, static_cast<int>(std::llround(s))));
        Dag g = powerlaw ? random_powerlaw_dag(config.p, m, derive_seed(config.seed, grep, "plaw"))
                         : random_er_dag(config.p, s, derive_seed(config.seed, grep, "er"));
        DnaSet truth = dna_from_cpdag(cpdag_of(g));
        auto oracle = make_dsep_oracle(g);
        std::vector<CoverageRecord> records;
        records.reserve(config.k_list.size());
        for (int k : config.k_list) {
            DnaSet learned = learn_dna_small(*oracle, k);
            Layering layers = layering_from_dna(learned);
            std::vector<int> layer_of(config.p, -1);
            for (std::size_t index = 0; index < layers.size(); ++index)
                for (int v : layers[index]) layer_of[v] = static_cast<int>(index);
            int crossing = 0;
            for (auto [a, b] : g.edges())
                if (layer_of[a] != layer_of[b]) ++crossing;
            CoverageRecord record;
            record.rep = rep;
            record.family = powerlaw ? "plaw" : "er";
            record.p = config.p;
            record.param = powerlaw ? static_cast<double>(m) : s;
            record.avg_degree = 2.0 * g.num_edges() / config.p;
            record.k = k;
            record.dna_proportion =
                truth.size() == 0
                    ? 1.0
                    : static_cast<double>(learned.size()) / static_cast<double>(truth.size());
            record.interlayer_proportion =
                g.num_edges() == 0 ? 1.0
                                   : static_cast<double>(crossing) /
                                         static_cast<double>(g.num_edges());
            records.push_back(std::move(record));
        }
        slots[task] = std::move(records);
    });
    std::vector<CoverageRecord> records;
    records.reserve(static_cast<std::size_t>(count) * config.k_list.size());
    for (auto& slot : slots)
        for (auto& record : slot) records.push_back(std::move(record));
    return records;
}

void write_benchmark_csv(std::ostream& out, const std::vector<BenchRecord>& records) {
    out << "rep,p,s,algo,lambda,recovered,ci_tests,dna_tp,dna_fp,runtime_ms,failed\n";
    for (const auto& r : records)
        out << r.rep << ',' << r.p << ',' << format_double(r.s) << ',' << r.algo << ','
            << format_double(r.lambda) << ',' << r.recovered << ',' << r.ci_tests << ','
            << r.dna_tp << ',' << r.dna_fp << ',' << format_double(r.runtime_ms) << ','
            << r.failed << '\n';
}

void write_coverage_csv(std::ostream& out, const std::vector<CoverageRecord>& records) {
    out << "rep,family,p,param,avg_degree,k,dna_proportion,interlayer_proportion\n";
    for (const auto& r : records)
        out << r.rep << ',' << r.family << ',' << r.p << ',' << format_double(r.param) << ','
            << format_double(r.avg_degree) << ',' << r.k << ',' << format_double(r.dna_proportion)
            << ',' << format_double(r.interlayer_proportion) << '\n';
}

}  // namespace causaldna
