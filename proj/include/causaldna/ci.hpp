#ifndef CAUSALDNA_CI_HPP
#define CAUSALDNA_CI_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "causaldna/graph.hpp"

namespace causaldna {

enum class CiKind { Independent, Dependent, Inconclusive };

struct CiVerdict {
    CiKind kind;
    // Absolute partial correlation when the tester computes one.
    std::optional<double> strength;

    bool independent() const { return kind == CiKind::Independent; }
    bool dependent() const { return kind == CiKind::Dependent; }
    bool inconclusive() const { return kind == CiKind::Inconclusive; }
};

// Canonical query: u < v, s sorted ascending.
struct CiQuery {
    int u;
    int v;
    std::vector<int> s;

    bool operator==(const CiQuery& o) const { return u == o.u && v == o.v && s == o.s; }
};

// Symmetric positive definite matrix; symmetry checked within 1e-12,
// definiteness by Cholesky.
class CovarianceMatrix {
public:
    explicit CovarianceMatrix(Eigen::MatrixXd m);

    int dim() const { return static_cast<int>(m_.rows()); }
    const Eigen::MatrixXd& matrix() const { return m_; }
    double operator()(int i, int j) const { return m_(i, j); }

private:
    Eigen::MatrixXd m_;
};

// Partial correlation of i and j given s, from the inverse of the submatrix of
// sigma over {i, j} union s. Throws numeric_error on near-singular submatrices.
double partial_correlation(const CovarianceMatrix& sigma, int i, int j, const std::vector<int>& s);

// Undirected graph over the subset with an edge wherever the inverse of the
// covariance submatrix exceeds the threshold in absolute value. Vertex indices
// are preserved.
UndirectedGraph precision_moral_edges(const CovarianceMatrix& sigma_hat,
                                      const std::vector<int>& subset, double threshold);

// Record of every distinct conditional independence query a tester has
// answered. Verdicts are cached so repeated queries are free and counts do not
// depend on how often callers re-ask.
class TestLedger {
public:
    long total() const { return total_; }
    const std::vector<CiQuery>& independences() const { return independences_; }
    const std::vector<CiQuery>& dependences() const { return dependences_; }
    long num_inconclusive() const { return inconclusive_; }
    long num_numeric_warnings() const { return numeric_warnings_; }

    std::optional<CiVerdict> lookup(std::uint64_t key) const;
    void record(std::uint64_t key, CiQuery query, CiVerdict verdict);
    void note_numeric_warning() { ++numeric_warnings_; }

    // Adds the other ledger's counts and entries to this one.
    void merge(const TestLedger& other);

private:
    long total_ = 0;
    long inconclusive_ = 0;
    long numeric_warnings_ = 0;
    std::vector<CiQuery> independences_;
    std::vector<CiQuery> dependences_;
    std::unordered_map<std::uint64_t, CiVerdict> cache_;
};

// Conditional independence tester over variables {0, ..., p-1}. Queries are
// canonicalized (symmetric in u, v; conditioning set order-free), validated,
// cached and recorded on the ledger. Numeric failures in concrete testers
// surface as Inconclusive verdicts plus a ledger warning.
class CiTester {
public:
    explicit CiTester(int num_variables);
    virtual ~CiTester() = default;

    virtual CiVerdict test(int u, int v, const std::vector<int>& s);
    int num_variables() const { return p_; }
    const TestLedger& ledger() const { return ledger_; }
    TestLedger& ledger() { return ledger_; }

    virtual std::unique_ptr<CiTester> clone() const = 0;

    // Set when the tester answers from a known graph.
    virtual const Dag* oracle_dag() const { return nullptr; }
    // Set when the tester answers from a covariance matrix.
    virtual const CovarianceMatrix* covariance() const { return nullptr; }
    // Threshold above which an absolute partial correlation counts as dependent.
    virtual std::optional<double> dependence_threshold() const { return std::nullopt; }

protected:
    virtual CiVerdict test_impl(int u, int v, const std::vector<int>& s) const = 0;

private:
    int p_;
    TestLedger ledger_;
    bool warned_ = false;
};

// Answers queries by d-separation in a known DAG.
class DsepOracle : public CiTester {
public:
    explicit DsepOracle(Dag g);

    std::unique_ptr<CiTester> clone() const override;
    const Dag* oracle_dag() const override { return &g_; }

protected:
    CiVerdict test_impl(int u, int v, const std::vector<int>& s) const override;

private:
    Dag g_;
};

// Thresholds population partial correlations: independent iff |rho| <= lambda.
class GaussianPopulationTester : public CiTester {
public:
    GaussianPopulationTester(CovarianceMatrix sigma, double lambda);

    std::unique_ptr<CiTester> clone() const override;
    const CovarianceMatrix* covariance() const override { return &sigma_; }
    std::optional<double> dependence_threshold() const override { return lambda_; }

protected:
    CiVerdict test_impl(int u, int v, const std::vector<int>& s) const override;

private:
    CovarianceMatrix sigma_;
    double lambda_;
};

// Dual-threshold rule on sample partial correlations: independent iff
// |rho| <= lambda, dependent iff |rho| > lambda_dep, inconclusive between.
class GaussianSampleTester : public CiTester {
public:
    GaussianSampleTester(CovarianceMatrix sn, long n, double lambda, double lambda_dep);

    std::unique_ptr<CiTester> clone() const override;
    const CovarianceMatrix* covariance() const override { return &sn_; }
    std::optional<double> dependence_threshold() const override { return lambda_dep_; }
    long sample_size() const { return n_; }

protected:
    CiVerdict test_impl(int u, int v, const std::vector<int>& s) const override;

private:
    CovarianceMatrix sn_;
    long n_;
    double lambda_;
    double lambda_dep_;
};

std::unique_ptr<CiTester> make_dsep_oracle(Dag g);
std::unique_ptr<CiTester> make_gaussian_population(CovarianceMatrix sigma, double lambda);
std::unique_ptr<CiTester> make_gaussian_sample(CovarianceMatrix sn, long n, double lambda,
                                               double lambda_dep);
// Rows are observations; the empirical covariance uses denominator n.
std::unique_ptr<CiTester> make_gaussian_sample(const Eigen::MatrixXd& data, double lambda,
                                               double lambda_dep);

// Empirical covariance of the data about its column means, denominator n.
CovarianceMatrix empirical_covariance(const Eigen::MatrixXd& data);

}  // namespace causaldna

#endif  // CAUSALDNA_CI_HPP
