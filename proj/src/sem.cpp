#include "causaldna/sem.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "causaldna/rng.hpp"

namespace causaldna {

LinearSem::LinearSem(Dag dag, std::vector<double> coefficients, std::vector<double> variances)
    : dag_(std::move(dag)), coefficients_(std::move(coefficients)),
      variances_(std::move(variances)) {
    if (coefficients_.size() != dag_.edges().size())
        throw std::invalid_argument("LinearSem: one coefficient per edge required.");
    if (static_cast<int>(variances_.size()) != dag_.num_vertices())
        throw std::invalid_argument("LinearSem: one variance per vertex required.");
    for (double b : coefficients_)
        if (b == 0.0) throw std::invalid_argument("LinearSem: coefficients must be nonzero.");
    for (double v : variances_)
        if (v <= 0.0) throw std::invalid_argument("LinearSem: variances must be positive.");
}

double LinearSem::coefficient(int parent, int child) const {
    const auto& edges = dag_.edges();
    for (std::size_t e = 0; e < edges.size(); ++e)
        if (edges[e].first == parent && edges[e].second == child) return coefficients_[e];
    throw std::invalid_argument("LinearSem: no such edge.");
}

Dag random_er_dag(int p, double s, std::uint64_t seed) {
    if (p < 1) throw std::invalid_argument("random_er_dag: p must be >= 1.");
    if (s < 0.0 || s > p - 1)
        throw std::invalid_argument("random_er_dag: s must lie in [0, p - 1].");
    Rng rng(seed);
    std::vector<int> order = rng.permutation(p);
    std::vector<Edge> edges;
    if (p >= 2) {
        double prob = std::min(s / (p - 1), 1.0);
        for (int i = 0; i < p; ++i)
            for (int j = i + 1; j < p; ++j)
                if (rng.bernoulli(prob)) edges.emplace_back(order[i], order[j]);
    }
    return Dag(p, std::move(edges));
}

Dag random_powerlaw_dag(int p, int m, std::uint64_t seed) {
    if (p < 1) throw std::invalid_argument("random_powerlaw_dag: p must be >= 1.");
    if (m < 1 || m >= p)
        throw std::invalid_argument("random_powerlaw_dag: m must lie in [1, p - 1].");
    Rng rng(seed);
    std::vector<double> weights(p, 1.0);  // degree + 1, updated as edges arrive
    std::vector<Edge> edges;
    for (int t = 1; t < p; ++t) {
        int k = std::min(m, t);
        std::vector<double> pool(weights.begin(), weights.begin() + t);
        for (int u : rng.weighted_sample_without_replacement(pool, k)) {
            edges.emplace_back(u, t);
            weights[u] += 1.0;
            weights[t] += 1.0;
        }
    }
    return Dag(p, std::move(edges));
}

LinearSem random_linear_sem(const Dag& g, std::uint64_t seed, double coef_lo, double coef_hi,
                            double var_lo, double var_hi) {
    if (coef_lo <= 0.0 || coef_lo > coef_hi)
        throw std::invalid_argument("random_linear_sem: coefficient range must be positive.");
    if (var_lo <= 0.0 || var_lo > var_hi)
        throw std::invalid_argument("random_linear_sem: variance range must be positive.");
    Rng rng(seed);
    std::vector<double> coefficients;
    coefficients.reserve(g.edges().size());
    for (std::size_t e = 0; e < g.edges().size(); ++e) {
        double magnitude = rng.uniform(coef_lo, coef_hi);
        coefficients.push_back(rng.bernoulli(0.5) ? magnitude : -magnitude);
    }
    std::vector<double> variances;
    variances.reserve(g.num_vertices());
    for (int v = 0; v < g.num_vertices(); ++v) variances.push_back(rng.uniform(var_lo, var_hi));
    return LinearSem(g, std::move(coefficients), std::move(variances));
}

LinearSem random_linear_sem(const Dag& g, const SimConfig& config) {
    return random_linear_sem(g, config.seed, config.coef_lo, config.coef_hi, config.var_lo,
                             config.var_hi);
}

CovarianceMatrix covariance_of(const LinearSem& sem) {
    const Dag& g = sem.dag();
    int p = g.num_vertices();
    // total(v, e): weight of error e in X_v once all parents are substituted.
    Eigen::MatrixXd total = Eigen::MatrixXd::Identity(p, p);
    for (int v : g.topological_order())
        for (int u : g.parents(v)) total.row(v) += sem.coefficient(u, v) * total.row(u);
    Eigen::VectorXd variances =
        Eigen::Map<const Eigen::VectorXd>(sem.variances().data(), p);
    Eigen::MatrixXd sigma = total * variances.asDiagonal() * total.transpose();
    sigma = ((sigma + sigma.transpose()) / 2.0).eval();
    return CovarianceMatrix(std::move(sigma));
}

Eigen::MatrixXd draw_samples(const LinearSem& sem, int n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("draw_samples: n must be >= 1.");
    const Dag& g = sem.dag();
    int p = g.num_vertices();
    Rng rng(seed);
    Eigen::MatrixXd x(n, p);
    for (int v = 0; v < p; ++v) {
        double scale = std::sqrt(sem.variances()[v]);
        for (int i = 0; i < n; ++i) x(i, v) = scale * rng.gaussian();
    }
    for (int v : g.topological_order())
        for (int u : g.parents(v)) x.col(v) += sem.coefficient(u, v) * x.col(u);
    return x;
}

}  // namespace causaldna
