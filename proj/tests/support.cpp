#include "support.hpp"

#include <cmath>

namespace testsupport {

std::vector<causaldna::Dag> all_dags(int p) {
    std::vector<std::pair<int, int>> slots;
    for (int a = 0; a < p; ++a)
        for (int b = a + 1; b < p; ++b) slots.emplace_back(a, b);
    std::vector<causaldna::Dag> out;
    std::vector<int> choice(slots.size(), 0);
    while (true) {
        std::vector<Edge> edges;
        for (std::size_t i = 0; i < slots.size(); ++i) {
            if (choice[i] == 1) edges.emplace_back(slots[i].first, slots[i].second);
            if (choice[i] == 2) edges.emplace_back(slots[i].second, slots[i].first);
        }
        try {
            out.emplace_back(p, std::move(edges));
        } catch (const std::invalid_argument&) {
        }
        std::size_t i = 0;
        while (i < choice.size() && choice[i] == 2) choice[i++] = 0;
        if (i == choice.size()) break;
        ++choice[i];
    }
    return out;
}

Eigen::MatrixXd sem_covariance_by_inversion(int p, const std::vector<std::pair<Edge, double>>& coefficients,
                                            const std::vector<double>& variances) {
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(p, p);
    for (const auto& [edge, beta] : coefficients) b(edge.first, edge.second) = beta;
    Eigen::MatrixXd inv = (Eigen::MatrixXd::Identity(p, p) - b.transpose()).inverse();
    Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(variances.data(), p);
    Eigen::MatrixXd sigma = inv * d.asDiagonal() * inv.transpose();
    return (sigma + sigma.transpose()) / 2.0;
}

std::pair<std::vector<std::pair<Edge, double>>, std::vector<double>> random_sem_parameters(
    const causaldna::Dag& g, causaldna::Rng& rng) {
    std::vector<std::pair<Edge, double>> coefficients;
    for (auto e : g.edges()) {
        double beta = rng.uniform(0.3, 1.0);
        if (rng.bernoulli(0.5)) beta = -beta;
        coefficients.emplace_back(e, beta);
    }
    std::vector<double> variances;
    for (int v = 0; v < g.num_vertices(); ++v) variances.push_back(rng.uniform(1.0, 2.0));
    return {coefficients, variances};
}

double residual_partial_correlation(const Eigen::MatrixXd& sigma, int i, int j,
                                    const std::vector<int>& s) {
    auto k = static_cast<Eigen::Index>(s.size());
    double var_i = sigma(i, i);
    double var_j = sigma(j, j);
    double cov_ij = sigma(i, j);
    if (k > 0) {
        Eigen::MatrixXd ss(k, k);
        Eigen::VectorXd si(k), sj(k);
        for (Eigen::Index a = 0; a < k; ++a) {
            si(a) = sigma(s[a], i);
            sj(a) = sigma(s[a], j);
            for (Eigen::Index b = 0; b < k; ++b) ss(a, b) = sigma(s[a], s[b]);
        }
        Eigen::LDLT<Eigen::MatrixXd> ldlt(ss);
        var_i -= si.dot(ldlt.solve(si));
        var_j -= sj.dot(ldlt.solve(sj));
        cov_ij -= si.dot(ldlt.solve(sj));
    }
    return cov_ij / std::sqrt(var_i * var_j);
}

}  // namespace testsupport
