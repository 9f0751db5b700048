#include "causaldna/ci.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>

#include "causaldna/common.hpp"

namespace causaldna {

namespace {

constexpr int kMaxTesterVariables = 48;
constexpr double kConditionFloor = 1e-12;

Eigen::MatrixXd submatrix(const Eigen::MatrixXd& m, const std::vector<int>& idx) {
    auto k = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXd out(k, k);
    for (Eigen::Index a = 0; a < k; ++a)
        for (Eigen::Index b = 0; b < k; ++b) out(a, b) = m(idx[a], idx[b]);
    return out;
}

Eigen::MatrixXd invert_spd(const Eigen::MatrixXd& m, const char* who) {
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success)
        throw numeric_error(std::string(who) + ": submatrix is not positive definite.");
    if (llt.rcond() < kConditionFloor)
        throw numeric_error(std::string(who) + ": submatrix is near-singular.");
    return llt.solve(Eigen::MatrixXd::Identity(m.rows(), m.cols()));
}

}  // namespace

CovarianceMatrix::CovarianceMatrix(Eigen::MatrixXd m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() == 0)
        throw std::invalid_argument("CovarianceMatrix: matrix must be square and non-empty.");
    if (!m_.isApprox(m_.transpose(), 1e-12)) {
        double gap = (m_ - m_.transpose()).cwiseAbs().maxCoeff();
        if (gap > 1e-12)
            throw std::invalid_argument("CovarianceMatrix: matrix is not symmetric.");
    }
    Eigen::LLT<Eigen::MatrixXd> llt(m_);
    if (llt.info() != Eigen::Success)
        throw numeric_error("CovarianceMatrix: matrix is not positive definite.");
}

double partial_correlation(const CovarianceMatrix& sigma, int i, int j, const std::vector<int>& s) {
    int p = sigma.dim();
    auto check = [p](int v) {
        if (v < 0 || v >= p) throw std::out_of_range("partial_correlation: index out of range.");
    };
    check(i);
    check(j);
    if (i == j) throw std::invalid_argument("partial_correlation: i and j must differ.");
    std::vector<int> idx{i, j};
    for (int w : s) {
        check(w);
        if (w == i || w == j)
            throw std::invalid_argument("partial_correlation: s may not contain i or j.");
        idx.push_back(w);
    }
    std::vector<int> sorted(idx.begin() + 2, idx.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("partial_correlation: duplicate index in s.");

    Eigen::MatrixXd omega = invert_spd(submatrix(sigma.matrix(), idx), "partial_correlation");
    return -omega(0, 1) / std::sqrt(omega(0, 0) * omega(1, 1));
}

UndirectedGraph precision_moral_edges(const CovarianceMatrix& sigma_hat,
                                      const std::vector<int>& subset, double threshold) {
    int p = sigma_hat.dim();
    if (threshold < 0.0)
        throw std::invalid_argument("precision_moral_edges: threshold must be nonnegative.");
    std::vector<int> idx(subset);
    std::sort(idx.begin(), idx.end());
    if (std::adjacent_find(idx.begin(), idx.end()) != idx.end())
        throw std::invalid_argument("precision_moral_edges: duplicate vertex in subset.");
    for (int v : idx)
        if (v < 0 || v >= p) throw std::out_of_range("precision_moral_edges: index out of range.");
    if (idx.empty()) return UndirectedGraph(p, {});

    Eigen::MatrixXd omega = invert_spd(submatrix(sigma_hat.matrix(), idx), "precision_moral_edges");
    std::vector<Edge> edges;
    for (std::size_t a = 0; a < idx.size(); ++a)
        for (std::size_t b = a + 1; b < idx.size(); ++b)
            if (std::abs(omega(a, b)) > threshold) edges.emplace_back(idx[a], idx[b]);
    return UndirectedGraph(p, std::move(edges));
}

std::optional<CiVerdict> TestLedger::lookup(std::uint64_t key) const {
    auto it = cache_.find(key);
    if (it == cache_.end()) return std::nullopt;
    return it->second;
}

void TestLedger::record(std::uint64_t key, CiQuery query, CiVerdict verdict) {
    cache_.emplace(key, verdict);
    ++total_;
    switch (verdict.kind) {
        case CiKind::Independent:
            independences_.push_back(std::move(query));
            break;
        case CiKind::Dependent:
            dependences_.push_back(std::move(query));
            break;
        case CiKind::Inconclusive:
            ++inconclusive_;
            break;
    }
}

void TestLedger::merge(const TestLedger& other) {
    total_ += other.total_;
    inconclusive_ += other.inconclusive_;
    numeric_warnings_ += other.numeric_warnings_;
    independences_.insert(independences_.end(), other.independences_.begin(),
                          other.independences_.end());
    dependences_.insert(dependences_.end(), other.dependences_.begin(), other.dependences_.end());
    for (const auto& [key, verdict] : other.cache_) cache_.emplace(key, verdict);
}

CiTester::CiTester(int num_variables) : p_(num_variables) {
    if (p_ <= 0) throw std::invalid_argument("CiTester: variable count must be positive.");
    if (p_ > kMaxTesterVariables)
        throw capacity_error("CiTester: variable count exceeds the supported maximum.");
}

CiVerdict CiTester::test(int u, int v, const std::vector<int>& s) {
    auto check = [this](int x) {
        if (x < 0 || x >= p_) throw std::out_of_range("CiTester::test: index out of range.");
    };
    check(u);
    check(v);
    if (u == v) throw std::invalid_argument("CiTester::test: u and v must differ.");
    int a = std::min(u, v);
    int b = std::max(u, v);
    std::vector<int> cond(s);
    std::sort(cond.begin(), cond.end());
    std::uint64_t mask = 0;
    int prev = -1;
    for (int w : cond) {
        check(w);
        if (w == a || w == b)
            throw std::invalid_argument("CiTester::test: conditioning set may not contain u or v.");
        if (w == prev) throw std::invalid_argument("CiTester::test: duplicate conditioning index.");
        prev = w;
        mask |= std::uint64_t{1} << w;
    }
    std::uint64_t key = mask | (std::uint64_t(a) << 48) | (std::uint64_t(b) << 56);

    if (auto hit = ledger_.lookup(key)) return *hit;

    CiVerdict verdict;
    try {
        verdict = test_impl(a, b, cond);
    } catch (const numeric_error& e) {
        verdict = {CiKind::Inconclusive, std::nullopt};
        ledger_.note_numeric_warning();
        if (!warned_) {
            warned_ = true;
            std::cerr << "warning: " << e.what() << " (verdict inconclusive; further warnings"
                      << " on this tester suppressed)\n";
        }
    }
    ledger_.record(key, CiQuery{a, b, std::move(cond)}, verdict);
    return verdict;
}

DsepOracle::DsepOracle(Dag g) : CiTester(g.num_vertices()), g_(std::move(g)) {}

std::unique_ptr<CiTester> DsepOracle::clone() const { return std::make_unique<DsepOracle>(g_); }

CiVerdict DsepOracle::test_impl(int u, int v, const std::vector<int>& s) const {
    return {d_separated(g_, u, v, s) ? CiKind::Independent : CiKind::Dependent, std::nullopt};
}

GaussianPopulationTester::GaussianPopulationTester(CovarianceMatrix sigma, double lambda)
    : CiTester(sigma.dim()), sigma_(std::move(sigma)), lambda_(lambda) {
    if (lambda_ < 0.0)
        throw std::invalid_argument("GaussianPopulationTester: lambda must be nonnegative.");
}

std::unique_ptr<CiTester> GaussianPopulationTester::clone() const {
    return std::make_unique<GaussianPopulationTester>(sigma_, lambda_);
}

CiVerdict GaussianPopulationTester::test_impl(int u, int v, const std::vector<int>& s) const {
    double rho = std::abs(partial_correlation(sigma_, u, v, s));
    return {rho <= lambda_ ? CiKind::Independent : CiKind::Dependent, rho};
}

GaussianSampleTester::GaussianSampleTester(CovarianceMatrix sn, long n, double lambda,
                                           double lambda_dep)
    : CiTester(sn.dim()), sn_(std::move(sn)), n_(n), lambda_(lambda), lambda_dep_(lambda_dep) {
    if (n_ <= 0) throw std::invalid_argument("GaussianSampleTester: n must be positive.");
    if (lambda_ < 0.0 || lambda_dep_ < lambda_)
        throw std::invalid_argument("GaussianSampleTester: thresholds must satisfy 0 <= lambda <= lambda_dep.");
}

std::unique_ptr<CiTester> GaussianSampleTester::clone() const {
    return std::make_unique<GaussianSampleTester>(sn_, n_, lambda_, lambda_dep_);
}

CiVerdict GaussianSampleTester::test_impl(int u, int v, const std::vector<int>& s) const {
    double rho = std::abs(partial_correlation(sn_, u, v, s));
    if (rho <= lambda_) return {CiKind::Independent, rho};
    if (rho > lambda_dep_) return {CiKind::Dependent, rho};
    return {CiKind::Inconclusive, rho};
}

std::unique_ptr<CiTester> make_dsep_oracle(Dag g) { return std::make_unique<DsepOracle>(std::move(g)); }

std::unique_ptr<CiTester> make_gaussian_population(CovarianceMatrix sigma, double lambda) {
    return std::make_unique<GaussianPopulationTester>(std::move(sigma), lambda);
}

std::unique_ptr<CiTester> make_gaussian_sample(CovarianceMatrix sn, long n, double lambda,
                                               double lambda_dep) {
    return std::make_unique<GaussianSampleTester>(std::move(sn), n, lambda, lambda_dep);
}

std::unique_ptr<CiTester> make_gaussian_sample(const Eigen::MatrixXd& data, double lambda,
                                               double lambda_dep) {
    return make_gaussian_sample(empirical_covariance(data), data.rows(), lambda, lambda_dep);
}

CovarianceMatrix empirical_covariance(const Eigen::MatrixXd& data) {
    if (data.rows() < 2 || data.cols() < 1)
        throw std::invalid_argument("empirical_covariance: need at least two observations.");
    Eigen::MatrixXd centered = data.rowwise() - data.colwise().mean();
    Eigen::MatrixXd sn = centered.transpose() * centered / static_cast<double>(data.rows());
    sn = ((sn + sn.transpose()) / 2.0).eval();
    return CovarianceMatrix(std::move(sn));
}

}  // namespace causaldna
