#ifndef CAUSALDNA_SEM_HPP
#define CAUSALDNA_SEM_HPP

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "causaldna/ci.hpp"
#include "causaldna/graph.hpp"

namespace causaldna {

// Linear structural equation model X_v = sum_{u in pa(v)} beta_uv X_u + eps_v
// with independent Gaussian errors. Coefficients are stored in the order of
// dag().edges(); construction validates nonzero coefficients and positive
// variances.
class LinearSem {
public:
    LinearSem(Dag dag, std::vector<double> coefficients, std::vector<double> variances);

    const Dag& dag() const { return dag_; }
    const std::vector<double>& coefficients() const { return coefficients_; }
    const std::vector<double>& variances() const { return variances_; }
    double coefficient(int parent, int child) const;

private:
    Dag dag_;
    std::vector<double> coefficients_;
    std::vector<double> variances_;
};

enum class GraphFamily { ErdosRenyi, PowerLaw };

// Generation parameters for one simulated instance; s drives the
// Erdős–Rényi family, m the power-law family.
struct SimConfig {
    GraphFamily family = GraphFamily::ErdosRenyi;
    int p = 10;
    double s = 3.0;
    int m = 1;
    double coef_lo = 0.3;
    double coef_hi = 1.0;
    double var_lo = 1.0;
    double var_hi = 2.0;
    std::uint64_t seed = 0;
};

// Uniform random topological order; each order-respecting edge independently
// present with probability min(s / (p - 1), 1). Expected degree s.
Dag random_er_dag(int p, double s, std::uint64_t seed);

// Preferential attachment: vertex t attaches to min(m, t) distinct earlier
// vertices with probability proportional to degree + 1, edges oriented by
// arrival order. Edge count is exactly m * (p - m) + m * (m - 1) / 2.
Dag random_powerlaw_dag(int p, int m, std::uint64_t seed);

// Coefficient magnitudes uniform on [coef_lo, coef_hi] with independent fair
// signs, drawn in dag.edges() order; variances uniform on [var_lo, var_hi] in
// vertex order.
LinearSem random_linear_sem(const Dag& g, std::uint64_t seed, double coef_lo = 0.3,
                            double coef_hi = 1.0, double var_lo = 1.0, double var_hi = 2.0);

LinearSem random_linear_sem(const Dag& g, const SimConfig& config);

// Implied covariance (I - B^T)^{-1} diag(variances) (I - B)^{-1}, computed by
// accumulating total effects in topological order.
CovarianceMatrix covariance_of(const LinearSem& sem);

// n draws from the model, one variable per column: Gaussian errors per vertex
// in index order, then forward substitution in topological order.
Eigen::MatrixXd draw_samples(const LinearSem& sem, int n, std::uint64_t seed);

}  // namespace causaldna

#endif  // CAUSALDNA_SEM_HPP
