#include <cmath>

#include "smellwatt/error.hpp"
#include "smellwatt/predictor.hpp"

namespace smellwatt {

EvalMetrics evaluate(const std::vector<double>& predictions, const std::vector<double>& truths) {
    if (predictions.size() != truths.size())
        throw Error(ErrorCode::LengthMismatch,
                    std::to_string(predictions.size()) + " predictions, " + std::to_string(truths.size()) + " truths");
    if (predictions.empty()) throw Error(ErrorCode::EmptyEval, "nothing to evaluate");
    double sse = 0;
    for (std::size_t i = 0; i < truths.size(); ++i) sse += (predictions[i] - truths[i]) * (predictions[i] - truths[i]);
    EvalMetrics m;
    m.mse = sse / static_cast<double>(truths.size());
    m.rmse = std::sqrt(m.mse);
    return m;
}

double naive_baseline(const std::vector<double>& targets, std::size_t target_index) {
    if (targets.size() < 2) throw Error(ErrorCode::SingleExample, "leave-one-out needs at least 2 examples");
    if (target_index >= targets.size()) throw Error(ErrorCode::BadInput, "target index out of range");
    double sum = 0;
    for (std::size_t i = 0; i < targets.size(); ++i)
        if (i != target_index) sum += targets[i];
    return sum / static_cast<double>(targets.size() - 1);
}

ImpactPrediction naive_baseline(const std::vector<LabeledExample>& data, std::size_t target_index) {
    std::vector<double> cpu, mem;
    for (const auto& e : data) {
        cpu.push_back(e.target_dcpu_pct);
        mem.push_back(e.target_dmem_pct);
    }
    return {naive_baseline(cpu, target_index), naive_baseline(mem, target_index)};
}

FitStatistics fit_statistics(const Dataset& data, const std::vector<std::string>& selected) {
    std::vector<bool> mask(data.features.size(), false);
    for (const auto& name : selected) {
        bool found = false;
        for (std::size_t j = 0; j < data.features.size(); ++j)
            if (data.features[j] == name) mask[j] = found = true;
        if (!found) throw Error(ErrorCode::MissingFeature, name);
    }
    const auto sub = data.select(mask);
    const Eigen::Index n = sub.x.rows(), p = sub.x.cols();
    if (!sub.y.allFinite()) throw Error(ErrorCode::NonFiniteTarget, "targets must be finite");
    if (n - p - 1 < 1) throw Error(ErrorCode::TooFewExamples, "no residual degrees of freedom");

    Eigen::MatrixXd x(n, p + 1);
    x.col(0).setOnes();
    x.rightCols(p) = sub.x;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    qr.setThreshold(1e-10);
    if (qr.rank() < p + 1) throw Error(ErrorCode::RankDeficient, "design matrix is not of full column rank");
    const Eigen::VectorXd beta = qr.solve(sub.y);

    // (X'X)^-1 = P R^-1 R^-T P'
    const Eigen::MatrixXd r = qr.matrixR().topLeftCorner(p + 1, p + 1).triangularView<Eigen::Upper>();
    const Eigen::MatrixXd r_inv =
        r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p + 1, p + 1));
    const Eigen::MatrixXd cov_perm = r_inv * r_inv.transpose();
    const auto perm = qr.colsPermutation();
    const Eigen::MatrixXd cov = perm * cov_perm * perm.transpose();

    const Eigen::VectorXd resid = sub.y - x * beta;
    double rss = resid.squaredNorm();
    const double tss = (sub.y.array() - sub.y.mean()).square().sum();
    if (rss <= 1e-20 * std::max(1.0, sub.y.squaredNorm())) rss = 0;  // exact fit up to rounding

    FitStatistics out;
    const auto df = static_cast<double>(n - p - 1);
    out.residual_variance = rss / df;
    out.r_squared = tss > 0 ? 1.0 - rss / tss : (rss == 0 ? 1.0 : 0.0);
    out.adjusted_r_squared = p == 0 ? 0.0 : 1.0 - (1.0 - out.r_squared) * static_cast<double>(n - 1) / df;
    for (Eigen::Index j = 0; j <= p; ++j) {
        Coefficient c;
        c.name = j == 0 ? "(intercept)" : sub.features[static_cast<std::size_t>(j - 1)];
        c.estimate = beta(j);
        c.standard_error = std::sqrt(out.residual_variance * cov(j, j));
        if (c.standard_error > 0) c.t_value = c.estimate / c.standard_error;
        out.coefficients.push_back(std::move(c));
    }
    return out;
}

}  // namespace smellwatt
