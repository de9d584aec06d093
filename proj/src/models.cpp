#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>

#include <json.hpp>

#include "smellwatt/error.hpp"
#include "smellwatt/predictor.hpp"

namespace smellwatt {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

struct Scaling {
    VectorXd mean;
    VectorXd scale;  // population standard deviation
};

Scaling column_scaling(const MatrixXd& x) {
    Scaling s;
    const auto n = static_cast<double>(x.rows());
    s.mean = x.colwise().mean().transpose();
    s.scale.resize(x.cols());
    for (Index j = 0; j < x.cols(); ++j)
        s.scale(j) = std::sqrt((x.col(j).array() - s.mean(j)).square().sum() / n);
    return s;
}

bool degenerate(double scale, double mean) { return scale <= 1e-12 * std::max(1.0, std::abs(mean)); }

MatrixXd standardize(const MatrixXd& x, const Scaling& s) {
    MatrixXd z(x.rows(), x.cols());
    for (Index j = 0; j < x.cols(); ++j) {
        const double sc = degenerate(s.scale(j), s.mean(j)) ? 1.0 : s.scale(j);
        z.col(j) = (x.col(j).array() - s.mean(j)) / sc;
    }
    return z;
}

MatrixXd polynomial_expand(const MatrixXd& x) {
    const Index p = x.cols();
    MatrixXd out(x.rows(), p + p * (p + 1) / 2);
    out.leftCols(p) = x;
    Index c = p;
    for (Index i = 0; i < p; ++i)
        for (Index j = i; j < p; ++j) out.col(c++) = x.col(i).cwiseProduct(x.col(j));
    return out;
}

std::vector<std::string> polynomial_terms(const std::vector<std::string>& names) {
    std::vector<std::string> out = names;
    for (std::size_t i = 0; i < names.size(); ++i)
        for (std::size_t j = i; j < names.size(); ++j) out.push_back(names[i] + "*" + names[j]);
    return out;
}

void require_full_rank(const MatrixXd& z) {
    if (z.cols() == 0) return;
    if (z.rows() < z.cols() + 1) throw Error(ErrorCode::RankDeficient, "fewer examples than coefficients");
    Eigen::ColPivHouseholderQR<MatrixXd> qr(z);
    qr.setThreshold(1e-10);
    if (qr.rank() < z.cols()) throw Error(ErrorCode::RankDeficient, "design matrix is not of full column rank");
}

/// Intercept then coefficients in the units of `x`.
std::vector<double> to_original_units(const VectorXd& b, const Scaling& s, double y_mean) {
    std::vector<double> out(static_cast<std::size_t>(b.size()) + 1);
    double intercept = y_mean;
    for (Index j = 0; j < b.size(); ++j) {
        const double beta = degenerate(s.scale(j), s.mean(j)) ? 0.0 : b(j) / s.scale(j);
        out[static_cast<std::size_t>(j) + 1] = beta;
        intercept -= beta * s.mean(j);
    }
    out[0] = intercept;
    return out;
}

std::vector<double> fit_ols(const MatrixXd& x, const VectorXd& y) {
    const double y_mean = y.mean();
    if (x.cols() == 0) return {y_mean};
    const auto s = column_scaling(x);
    for (Index j = 0; j < x.cols(); ++j)
        if (degenerate(s.scale(j), s.mean(j)))
            throw Error(ErrorCode::RankDeficient, "constant column " + std::to_string(j));
    const MatrixXd z = standardize(x, s);
    require_full_rank(z);
    const VectorXd b = z.colPivHouseholderQr().solve((y.array() - y_mean).matrix());
    return to_original_units(b, s, y_mean);
}

double soft_threshold(double v, double lambda) {
    if (v > lambda) return v - lambda;
    if (v < -lambda) return v + lambda;
    return 0.0;
}

/// Minimizes (1/2n)|y - Zb|^2 + lambda |b|_1 over standardized Z and centered y,
/// warm-started from `b`. Columns of Z that are all zero stay at 0.
void coordinate_descent(const MatrixXd& z, const VectorXd& yc, double lambda, const TrainingConfig& cfg, VectorXd& b) {
    const auto n = static_cast<double>(z.rows());
    VectorXd norm(z.cols());
    for (Index j = 0; j < z.cols(); ++j) norm(j) = z.col(j).squaredNorm() / n;
    VectorXd r = yc - z * b;
    for (int sweep = 0; sweep < cfg.lasso_max_sweeps; ++sweep) {
        double largest = 0.0;
        for (Index j = 0; j < z.cols(); ++j) {
            if (norm(j) == 0.0) continue;
            const double rho = z.col(j).dot(r) / n + norm(j) * b(j);
            const double next = soft_threshold(rho, lambda) / norm(j);
            const double delta = next - b(j);
            if (delta != 0.0) {
                r -= delta * z.col(j);
                b(j) = next;
                largest = std::max(largest, std::abs(delta));
            }
        }
        if (largest < cfg.lasso_tolerance) break;
    }
}

std::vector<double> penalty_grid(const MatrixXd& z, const VectorXd& yc, const TrainingConfig& cfg) {
    const auto n = static_cast<double>(z.rows());
    const double top = z.cols() == 0 ? 0.0 : (z.transpose() * yc).cwiseAbs().maxCoeff() / n;
    if (top <= 0.0 || cfg.lasso_grid_size <= 1) return {top};
    std::vector<double> grid;
    const double step = std::log(cfg.lasso_grid_ratio) / (cfg.lasso_grid_size - 1);
    for (int i = 0; i < cfg.lasso_grid_size; ++i) grid.push_back(top * std::exp(step * i));
    return grid;
}

double choose_penalty(const MatrixXd& x, const VectorXd& y, const TrainingConfig& cfg, std::uint64_t seed) {
    const auto s = column_scaling(x);
    const MatrixXd z = standardize(x, s);
    const VectorXd yc = (y.array() - y.mean()).matrix();
    const auto grid = penalty_grid(z, yc, cfg);
    const auto n = static_cast<std::size_t>(x.rows());
    const int k = std::min<int>(cfg.lasso_folds, static_cast<int>(n));
    if (grid.size() == 1 || k < 2) return grid.front();
    const auto folds = make_folds(n, k, seed);
    std::vector<double> error(grid.size(), 0.0);
    for (int f = 0; f < k; ++f) {
        std::vector<Index> train, test;
        for (std::size_t i = 0; i < n; ++i) (folds[i] == f ? test : train).push_back(static_cast<Index>(i));
        if (train.size() < 2 || test.empty()) continue;
        MatrixXd xt(static_cast<Index>(train.size()), x.cols());
        VectorXd yt(static_cast<Index>(train.size()));
        for (std::size_t i = 0; i < train.size(); ++i) {
            xt.row(static_cast<Index>(i)) = x.row(train[i]);
            yt(static_cast<Index>(i)) = y(train[i]);
        }
        const auto fs = column_scaling(xt);
        const MatrixXd zt = standardize(xt, fs);
        const double ym = yt.mean();
        const VectorXd ytc = (yt.array() - ym).matrix();
        VectorXd b = VectorXd::Zero(x.cols());
        for (std::size_t g = 0; g < grid.size(); ++g) {
            coordinate_descent(zt, ytc, grid[g], cfg, b);
            const auto coef = to_original_units(b, fs, ym);
            double sse = 0.0;
            for (Index t : test) {
                double pred = coef[0];
                for (Index j = 0; j < x.cols(); ++j) pred += coef[static_cast<std::size_t>(j) + 1] * x(t, j);
                sse += (pred - y(t)) * (pred - y(t));
            }
            error[g] += sse / static_cast<double>(test.size());
        }
    }
    return grid[static_cast<std::size_t>(std::min_element(error.begin(), error.end()) - error.begin())];
}

std::vector<double> fit_lasso(const MatrixXd& x, const VectorXd& y, const TrainingConfig& cfg, std::uint64_t seed) {
    const double y_mean = y.mean();
    if (x.cols() == 0) return {y_mean};
    const auto s = column_scaling(x);
    for (Index j = 0; j < x.cols(); ++j)
        if (degenerate(s.scale(j), s.mean(j)))
            throw Error(ErrorCode::RankDeficient, "constant column " + std::to_string(j));
    const MatrixXd z = standardize(x, s);
    require_full_rank(z);
    const double lambda = cfg.lasso_penalty ? *cfg.lasso_penalty : choose_penalty(x, y, cfg, seed);
    if (lambda < 0 || !std::isfinite(lambda)) throw Error(ErrorCode::BadInput, "lasso penalty must be >= 0");
    VectorXd b = VectorXd::Zero(x.cols());
    coordinate_descent(z, (y.array() - y_mean).matrix(), lambda, cfg, b);
    auto out = to_original_units(b, s, y_mean);
    out.push_back(lambda);
    return out;
}

// ---- random forest --------------------------------------------------------------
// Node layout in the parameter blob: feature (-1 for a leaf), threshold, left, right, value.

struct Node {
    int feature = -1;
    double threshold = 0;
    int left = -1;
    int right = -1;
    double value = 0;
};

class TreeBuilder {
public:
    TreeBuilder(const MatrixXd& x, const VectorXd& y, int max_depth, std::mt19937_64& rng)
        : x_(x), y_(y), max_depth_(max_depth), rng_(rng) {}

    std::vector<Node> build(std::vector<Index> sample) {
        nodes_.clear();
        grow(std::move(sample), 0);
        fill_leaves();
        return std::move(nodes_);
    }

private:
    const MatrixXd& x_;
    const VectorXd& y_;
    int max_depth_;
    std::mt19937_64& rng_;
    std::vector<Node> nodes_;

    int grow(std::vector<Index> sample, int depth) {
        const int id = static_cast<int>(nodes_.size());
        nodes_.emplace_back();
        if (depth >= max_depth_ || sample.size() < 2) return id;

        const auto p = static_cast<std::size_t>(x_.cols());
        std::vector<std::size_t> features(p);
        std::iota(features.begin(), features.end(), 0);
        const auto mtry = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(p)))));
        for (std::size_t i = 0; i < mtry && i < p; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, p - 1);
            std::swap(features[i], features[pick(rng_)]);
        }

        double total = 0, total_sq = 0;
        for (Index i : sample) {
            total += y_(i);
            total_sq += y_(i) * y_(i);
        }
        const auto n = static_cast<double>(sample.size());
        const double parent_sse = total_sq - total * total / n;
        double best_sse = parent_sse;
        int best_feature = -1;
        double best_threshold = 0;
        for (std::size_t f = 0; f < std::min(mtry, p); ++f) {
            const auto col = static_cast<Index>(features[f]);
            auto sorted = sample;
            std::stable_sort(sorted.begin(), sorted.end(), [&](Index a, Index b) { return x_(a, col) < x_(b, col); });
            double left = 0, left_sq = 0;
            for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
                left += y_(sorted[i]);
                left_sq += y_(sorted[i]) * y_(sorted[i]);
                const double a = x_(sorted[i], col), b = x_(sorted[i + 1], col);
                if (a == b) continue;
                const auto nl = static_cast<double>(i + 1), nr = n - nl;
                const double right = total - left, right_sq = total_sq - left_sq;
                const double sse = (left_sq - left * left / nl) + (right_sq - right * right / nr);
                if (sse < best_sse - 1e-12 * std::max(1.0, parent_sse)) {
                    best_sse = sse;
                    best_feature = static_cast<int>(col);
                    best_threshold = a + (b - a) / 2;
                }
            }
        }
        if (best_feature < 0) return id;
        std::vector<Index> lo, hi;
        for (Index i : sample) (x_(i, best_feature) <= best_threshold ? lo : hi).push_back(i);
        const int l = grow(std::move(lo), depth + 1);
        const int r = grow(std::move(hi), depth + 1);
        nodes_[static_cast<std::size_t>(id)].feature = best_feature;
        nodes_[static_cast<std::size_t>(id)].threshold = best_threshold;
        nodes_[static_cast<std::size_t>(id)].left = l;
        nodes_[static_cast<std::size_t>(id)].right = r;
        return id;
    }

    // Leaf values average every training row routed to the leaf, not only the
    // bootstrap draw that shaped the tree.
    void fill_leaves() {
        std::vector<double> sum(nodes_.size(), 0.0), count(nodes_.size(), 0.0);
        for (Index i = 0; i < x_.rows(); ++i) {
            std::size_t at = 0;
            while (nodes_[at].feature >= 0)
                at = static_cast<std::size_t>(x_(i, nodes_[at].feature) <= nodes_[at].threshold ? nodes_[at].left
                                                                                                 : nodes_[at].right);
            sum[at] += y_(i);
            count[at] += 1;
        }
        for (std::size_t k = 0; k < nodes_.size(); ++k)
            if (nodes_[k].feature < 0 && count[k] > 0) nodes_[k].value = sum[k] / count[k];
    }
};

std::vector<double> fit_forest(const MatrixXd& x, const VectorXd& y, const TrainingConfig& cfg, std::uint64_t seed) {
    if (cfg.forest_trees < 1 || cfg.forest_max_depth < 0) throw Error(ErrorCode::BadInput, "forest configuration");
    std::mt19937_64 rng(seed);
    std::vector<double> out{static_cast<double>(cfg.forest_trees)};
    const auto n = static_cast<std::size_t>(x.rows());
    std::uniform_int_distribution<std::size_t> draw(0, n - 1);
    for (int t = 0; t < cfg.forest_trees; ++t) {
        std::vector<Index> sample(n);
        for (auto& s : sample) s = static_cast<Index>(draw(rng));
        TreeBuilder builder(x, y, cfg.forest_max_depth, rng);
        const auto nodes = builder.build(std::move(sample));
        out.push_back(static_cast<double>(nodes.size()));
        for (const auto& node : nodes) {
            out.push_back(node.feature);
            out.push_back(node.threshold);
            out.push_back(node.left);
            out.push_back(node.right);
            out.push_back(node.value);
        }
    }
    return out;
}

double predict_forest(const std::vector<double>& p, const Eigen::Ref<const VectorXd>& row) {
    const auto trees = static_cast<std::size_t>(p.at(0));
    std::size_t at = 1;
    double sum = 0;
    for (std::size_t t = 0; t < trees; ++t) {
        const auto count = static_cast<std::size_t>(p.at(at));
        const std::size_t base = at + 1;
        std::size_t node = 0;
        while (p.at(base + node * 5) >= 0) {
            const auto feature = static_cast<Index>(p[base + node * 5]);
            node = static_cast<std::size_t>(row(feature) <= p[base + node * 5 + 1] ? p[base + node * 5 + 2]
                                                                                   : p[base + node * 5 + 3]);
        }
        sum += p.at(base + node * 5 + 4);
        at = base + count * 5;
    }
    return sum / static_cast<double>(trees);
}

// ---- neural network -------------------------------------------------------------
// Blob: p, h, mean(p), scale(p), y_mean, y_scale, W1 (h x p, row-major), b1 (h), w2 (h), b2.

std::vector<double> fit_ann(const MatrixXd& x, const VectorXd& y, const TrainingConfig& cfg, std::uint64_t seed) {
    if (cfg.ann_hidden < 1 || cfg.ann_epochs < 0 || !(cfg.ann_learning_rate > 0))
        throw Error(ErrorCode::BadInput, "ann configuration");
    const Index n = x.rows(), p = x.cols(), h = cfg.ann_hidden;
    auto s = column_scaling(x);
    for (Index j = 0; j < p; ++j)
        if (degenerate(s.scale(j), s.mean(j))) s.scale(j) = 1.0;
    const MatrixXd z = standardize(x, s);
    const double y_mean = y.mean();
    double y_scale = std::sqrt((y.array() - y_mean).square().sum() / static_cast<double>(n));
    if (degenerate(y_scale, y_mean)) y_scale = 1.0;
    const VectorXd t = ((y.array() - y_mean) / y_scale).matrix();

    std::mt19937_64 rng(seed);
    MatrixXd w1(h, p);
    VectorXd b1 = VectorXd::Zero(h), w2(h);
    double b2 = 0;
    std::uniform_real_distribution<double> init1(-1.0, 1.0);
    const double a1 = std::sqrt(6.0 / static_cast<double>(p + h)), a2 = std::sqrt(6.0 / static_cast<double>(h + 1));
    for (Index i = 0; i < h; ++i)
        for (Index j = 0; j < p; ++j) w1(i, j) = a1 * init1(rng);
    for (Index i = 0; i < h; ++i) w2(i) = a2 * init1(rng);

    const double lr = cfg.ann_learning_rate, inv_n = 1.0 / static_cast<double>(n);
    for (int epoch = 0; epoch < cfg.ann_epochs; ++epoch) {
        MatrixXd hidden = (z * w1.transpose()).rowwise() + b1.transpose();
        hidden = hidden.array().tanh();
        const VectorXd err = ((hidden * w2).array() + b2).matrix() - t;
        const VectorXd g_w2 = hidden.transpose() * err * inv_n;
        const double g_b2 = err.sum() * inv_n;
        const MatrixXd delta = ((err * w2.transpose()).array() * (1.0 - hidden.array().square())).matrix();
        const MatrixXd g_w1 = delta.transpose() * z * inv_n;
        const VectorXd g_b1 = delta.colwise().sum().transpose() * inv_n;
        w2 -= lr * g_w2;
        b2 -= lr * g_b2;
        w1 -= lr * g_w1;
        b1 -= lr * g_b1;
    }

    std::vector<double> out{static_cast<double>(p), static_cast<double>(h)};
    for (Index j = 0; j < p; ++j) out.push_back(s.mean(j));
    for (Index j = 0; j < p; ++j) out.push_back(s.scale(j));
    out.push_back(y_mean);
    out.push_back(y_scale);
    for (Index i = 0; i < h; ++i)
        for (Index j = 0; j < p; ++j) out.push_back(w1(i, j));
    for (Index i = 0; i < h; ++i) out.push_back(b1(i));
    for (Index i = 0; i < h; ++i) out.push_back(w2(i));
    out.push_back(b2);
    return out;
}

double predict_ann(const std::vector<double>& blob, const Eigen::Ref<const VectorXd>& row) {
    const auto p = static_cast<std::size_t>(blob.at(0)), h = static_cast<std::size_t>(blob.at(1));
    if (blob.size() != 2 + 2 * p + 2 + h * p + 2 * h + 1 || static_cast<std::size_t>(row.size()) != p)
        throw Error(ErrorCode::BadInput, "ann parameter blob does not match its shape");
    const double* mean = blob.data() + 2;
    const double* scale = mean + p;
    const double y_mean = scale[p], y_scale = scale[p + 1];
    const double* w1 = scale + p + 2;
    const double* b1 = w1 + h * p;
    const double* w2 = b1 + h;
    const double b2 = w2[h];
    double out = b2;
    for (std::size_t i = 0; i < h; ++i) {
        double a = b1[i];
        for (std::size_t j = 0; j < p; ++j) a += w1[i * p + j] * (row(static_cast<Index>(j)) - mean[j]) / scale[j];
        out += w2[i] * std::tanh(a);
    }
    return out * y_scale + y_mean;
}

double predict_linear(const std::vector<double>& coef, const Eigen::Ref<const VectorXd>& terms) {
    if (coef.size() < static_cast<std::size_t>(terms.size()) + 1)
        throw Error(ErrorCode::BadInput, "coefficient count does not match the model terms");
    double out = coef[0];
    for (Index j = 0; j < terms.size(); ++j) out += coef[static_cast<std::size_t>(j) + 1] * terms(j);
    return out;
}

}  // namespace

std::string_view to_string(ModelKind kind) noexcept {
    switch (kind) {
        case ModelKind::Linear: return "linear";
        case ModelKind::Polynomial: return "polynomial";
        case ModelKind::Lasso: return "lasso";
        case ModelKind::RandomForest: return "random-forest";
        case ModelKind::Ann: return "ann";
    }
    return "linear";
}

std::optional<ModelKind> parse_model_kind(std::string_view text) noexcept {
    for (auto k : kModelKinds)
        if (to_string(k) == text) return k;
    if (text == "rf" || text == "random_forest") return ModelKind::RandomForest;
    return std::nullopt;
}

TrainedModel train(const Dataset& data, ModelKind kind, const TrainingConfig& config, std::uint64_t seed) {
    if (data.x.rows() != data.y.size() || static_cast<std::size_t>(data.x.cols()) != data.features.size())
        throw Error(ErrorCode::BadInput, "dataset shape mismatch");
    if (data.x.rows() < 2) throw Error(ErrorCode::TooFewExamples, "need at least 2 examples");
    if (!data.y.allFinite()) throw Error(ErrorCode::NonFiniteTarget, "targets must be finite");
    if (!data.x.allFinite()) throw Error(ErrorCode::BadInput, "features must be finite");
    TrainedModel m;
    m.kind = kind;
    m.selected_features = data.features;
    m.seed = seed;
    m.config = config;
    switch (kind) {
        case ModelKind::Linear: m.parameters = fit_ols(data.x, data.y); break;
        case ModelKind::Polynomial: m.parameters = fit_ols(polynomial_expand(data.x), data.y); break;
        case ModelKind::Lasso: m.parameters = fit_lasso(data.x, data.y, config, seed); break;
        case ModelKind::RandomForest: m.parameters = fit_forest(data.x, data.y, config, seed); break;
        case ModelKind::Ann: m.parameters = fit_ann(data.x, data.y, config, seed); break;
    }
    return m;
}

double predict_row(const TrainedModel& model, const Eigen::Ref<const VectorXd>& row) {
    if (static_cast<std::size_t>(row.size()) != model.selected_features.size())
        throw Error(ErrorCode::BadInput, "row length does not match the model features");
    if (model.parameters.empty()) throw Error(ErrorCode::BadInput, "model has no parameters");
    switch (model.kind) {
        case ModelKind::Linear:
        case ModelKind::Lasso: return predict_linear(model.parameters, row);
        case ModelKind::Polynomial: {
            const MatrixXd expanded = polynomial_expand(row.transpose());
            return predict_linear(model.parameters, expanded.row(0).transpose());
        }
        case ModelKind::RandomForest: return predict_forest(model.parameters, row);
        case ModelKind::Ann: return predict_ann(model.parameters, row);
    }
    return 0.0;
}

double predict(const TrainedModel& model, const std::map<std::string, double>& features) {
    VectorXd row(static_cast<Index>(model.selected_features.size()));
    for (std::size_t j = 0; j < model.selected_features.size(); ++j) {
        const auto it = features.find(model.selected_features[j]);
        if (it == features.end()) throw Error(ErrorCode::MissingFeature, model.selected_features[j]);
        row(static_cast<Index>(j)) = it->second;
    }
    return predict_row(model, row);
}

ImpactPrediction predict(const ImpactModel& model, const FeatureVector& fv) {
    if (!model.cpu || !model.memory) throw Error(ErrorCode::BadInput, "impact model needs both a cpu and a memory model");
    const auto m = fv.to_map();
    return {predict(*model.cpu, m), predict(*model.memory, m)};
}

std::vector<double> linear_coefficients(const TrainedModel& model) {
    if (model.kind == ModelKind::RandomForest || model.kind == ModelKind::Ann)
        throw Error(ErrorCode::BadInput, "model has no linear coefficients");
    const auto terms = model_terms(model).size();
    return {model.parameters.begin(), model.parameters.begin() + static_cast<std::ptrdiff_t>(terms + 1)};
}

std::vector<std::string> model_terms(const TrainedModel& model) {
    if (model.kind == ModelKind::Polynomial) return polynomial_terms(model.selected_features);
    return model.selected_features;
}

std::vector<VectorXd> lasso_path(const Dataset& data, const std::vector<double>& penalties,
                                 const TrainingConfig& config) {
    const auto s = column_scaling(data.x);
    const MatrixXd z = standardize(data.x, s);
    const VectorXd yc = (data.y.array() - data.y.mean()).matrix();
    VectorXd b = VectorXd::Zero(data.x.cols());
    std::vector<VectorXd> out;
    for (double lambda : penalties) {
        coordinate_descent(z, yc, lambda, config, b);
        out.push_back(b);
    }
    return out;
}

// ---- serialization --------------------------------------------------------------

namespace {

nlohmann::ordered_json config_json(const TrainingConfig& c) {
    nlohmann::ordered_json j;
    j["lasso_penalty"] = c.lasso_penalty ? nlohmann::ordered_json(*c.lasso_penalty) : nlohmann::ordered_json();
    j["lasso_grid_size"] = c.lasso_grid_size;
    j["lasso_grid_ratio"] = c.lasso_grid_ratio;
    j["lasso_folds"] = c.lasso_folds;
    j["lasso_max_sweeps"] = c.lasso_max_sweeps;
    j["lasso_tolerance"] = c.lasso_tolerance;
    j["forest_trees"] = c.forest_trees;
    j["forest_max_depth"] = c.forest_max_depth;
    j["ann_hidden"] = c.ann_hidden;
    j["ann_epochs"] = c.ann_epochs;
    j["ann_learning_rate"] = c.ann_learning_rate;
    return j;
}

TrainingConfig parse_config(const nlohmann::json& j) {
    TrainingConfig c;
    if (j.contains("lasso_penalty") && !j["lasso_penalty"].is_null()) c.lasso_penalty = j["lasso_penalty"].get<double>();
    c.lasso_grid_size = j.value("lasso_grid_size", c.lasso_grid_size);
    c.lasso_grid_ratio = j.value("lasso_grid_ratio", c.lasso_grid_ratio);
    c.lasso_folds = j.value("lasso_folds", c.lasso_folds);
    c.lasso_max_sweeps = j.value("lasso_max_sweeps", c.lasso_max_sweeps);
    c.lasso_tolerance = j.value("lasso_tolerance", c.lasso_tolerance);
    c.forest_trees = j.value("forest_trees", c.forest_trees);
    c.forest_max_depth = j.value("forest_max_depth", c.forest_max_depth);
    c.ann_hidden = j.value("ann_hidden", c.ann_hidden);
    c.ann_epochs = j.value("ann_epochs", c.ann_epochs);
    c.ann_learning_rate = j.value("ann_learning_rate", c.ann_learning_rate);
    return c;
}

nlohmann::ordered_json trained_json(const TrainedModel& m) {
    nlohmann::ordered_json j;
    j["kind"] = to_string(m.kind);
    j["seed"] = m.seed;
    j["config"] = config_json(m.config);
    j["selected_features"] = m.selected_features;
    if (m.kind != ModelKind::RandomForest && m.kind != ModelKind::Ann) j["terms"] = model_terms(m);
    j["parameters"] = m.parameters;
    return j;
}

TrainedModel parse_trained(const nlohmann::json& j) {
    TrainedModel m;
    const auto kind = parse_model_kind(j.at("kind").get<std::string>());
    if (!kind) throw Error(ErrorCode::BadInput, "unknown model kind");
    m.kind = *kind;
    m.seed = j.at("seed").get<std::uint64_t>();
    m.config = parse_config(j.at("config"));
    m.selected_features = j.at("selected_features").get<std::vector<std::string>>();
    m.parameters = j.at("parameters").get<std::vector<double>>();
    if (m.parameters.empty()) throw Error(ErrorCode::BadInput, "model has no parameters");
    return m;
}

}  // namespace

std::string model_json(const ImpactModel& model) {
    nlohmann::ordered_json j;
    j["cpu"] = model.cpu ? trained_json(*model.cpu) : nlohmann::ordered_json();
    j["memory"] = model.memory ? trained_json(*model.memory) : nlohmann::ordered_json();
    return j.dump(2) + "\n";
}

ImpactModel parse_model_json(std::string_view text) {
    try {
        const auto j = nlohmann::json::parse(text);
        ImpactModel m;
        if (j.contains("cpu") && !j["cpu"].is_null()) m.cpu = parse_trained(j["cpu"]);
        if (j.contains("memory") && !j["memory"].is_null()) m.memory = parse_trained(j["memory"]);
        if (!m.cpu && !m.memory) throw Error(ErrorCode::BadInput, "model file holds no model");
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::BadInput, std::string("model json: ") + e.what());
    }
}

}  // namespace smellwatt
