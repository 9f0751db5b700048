#ifndef CAUSALDNA_HARNESS_HPP
#define CAUSALDNA_HARNESS_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "causaldna/graph.hpp"

namespace causaldna {

enum class Experiment { Population, Sample, Coverage };

// Shared configuration for the three experiment runners. The s range is
// swept in steps of one; coverage reuses each s value as the power-law
// attachment count, rounded and clamped to [1, p - 1].
struct BenchConfig {
    Experiment experiment = Experiment::Population;
    int p = 10;
    double s_min = 2.0;
    double s_max = 7.0;
    int reps = 50;
    double lambda = 0.01;
    // Dependence threshold: the sample testers' upper decision bound and the
    // d-connection floor of relation learning in both benchmark modes.
    double lambda_dep = 0.2;
    int n = 10000;
    std::vector<int> k_list = {0, 1};
    std::vector<std::string> algorithms = {"pc", "pc-dna", "sp", "layered-sp"};
    int dna_k = 0;
    std::uint64_t seed = 0;
    int threads = 1;
};

struct BenchRecord {
    int rep = 0;
    int p = 0;
    double s = 0.0;
    std::string algo;
    double lambda = 0.0;
    int recovered = 0;
    long ci_tests = 0;
    long dna_tp = 0;
    long dna_fp = 0;
    double runtime_ms = 0.0;
    int failed = 0;
};

struct CoverageRecord {
    int rep = 0;
    std::string family;
    int p = 0;
    double param = 0.0;
    double avg_degree = 0.0;
    int k = 0;
    double dna_proportion = 0.0;
    double interlayer_proportion = 0.0;
};

// Exact equality of directed and undirected edge sets.
bool mec_recovered(const Cpdag& estimate, const Cpdag& truth);

// Per (s, replicate): an Erdős–Rényi DAG with a random linear model, a
// population partial-correlation tester on its implied covariance, and one
// record per algorithm. Records are sorted by (s, replicate, algorithm).
std::vector<BenchRecord> run_population_benchmark(const BenchConfig& config);

// As the population runner, but the testers see the empirical covariance of
// n draws and use the two-threshold decision rule. Replicates that fail
// numerically are recorded with the failure flag set.
std::vector<BenchRecord> run_sample_benchmark(const BenchConfig& config);

// Per replicate and learning level: the proportion of the definite
// non-ancestral ground truth recovered, and the proportion of true edges
// crossing distinct learned layers, for both graph families.
std::vector<CoverageRecord> run_coverage_benchmark(const BenchConfig& config);

void write_benchmark_csv(std::ostream& out, const std::vector<BenchRecord>& records);
void write_coverage_csv(std::ostream& out, const std::vector<CoverageRecord>& records);

}  // namespace causaldna

#endif  // CAUSALDNA_HARNESS_HPP
