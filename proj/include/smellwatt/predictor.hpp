#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "smellwatt/catalog.hpp"
#include "smellwatt/detector.hpp"
#include "smellwatt/impact_store.hpp"

namespace smellwatt {

struct FeatureVector {
    std::array<double, kSmellKindCount> smell_counts{};
    double loc = 0;
    double smelly_loc = 0;
    double wmc_mean = 0;
    double fan_in_mean = 0;
    double fan_out_mean = 0;
    AppCategory category = AppCategory::EmailClient;

    /// Flattened by feature name, category expanded to a one-hot block.
    [[nodiscard]] std::map<std::string, double> to_map() const;

    bool operator==(const FeatureVector&) const = default;
};

/// count:<kind> x16, loc, smelly_loc, wmc_mean, fan_in_mean, fan_out_mean,
/// category:<name> x12.
const std::vector<std::string>& feature_names();

/// loc sums nloc over top-level classes and free functions; the means run
/// over every class row.
FeatureVector build_feature_vector(const MetricsTable& metrics, const std::vector<SmellInstance>& smells,
                                   AppCategory category);

std::string feature_vector_json(const FeatureVector& fv);
/// Accepts the flattened map form, with either `category` or one-hot keys.
FeatureVector parse_feature_vector_json(std::string_view text);

struct LabeledExample {
    std::string app;
    SmellKind kind = SmellKind::CyclicDependency;
    FeatureVector features;
    double target_dcpu_pct = 0;
    double target_dmem_pct = 0;
};

std::vector<LabeledExample> parse_bench_csv(std::string_view content);
std::vector<LabeledExample> load_bench_csv(const std::filesystem::path& path);
std::string export_bench_csv(const std::vector<LabeledExample>& examples);

enum class Target { Cpu, Memory };
std::string_view to_string(Target target) noexcept;
std::optional<Target> parse_target(std::string_view text) noexcept;

enum class ModelKind { Linear, Polynomial, Lasso, RandomForest, Ann };
inline constexpr std::array<ModelKind, 5> kModelKinds{ModelKind::Linear, ModelKind::Polynomial, ModelKind::Lasso,
                                                      ModelKind::RandomForest, ModelKind::Ann};
std::string_view to_string(ModelKind kind) noexcept;
std::optional<ModelKind> parse_model_kind(std::string_view text) noexcept;

/// Design matrix over named columns.
struct Dataset {
    std::vector<std::string> features;
    Eigen::MatrixXd x;
    Eigen::VectorXd y;

    [[nodiscard]] Dataset select(const std::vector<bool>& mask) const;
    [[nodiscard]] Dataset rows(const std::vector<std::size_t>& index) const;
};

/// Uses every name in `features` (all features when empty).
Dataset make_dataset(const std::vector<LabeledExample>& examples, Target target,
                     const std::vector<std::string>& features = {});

struct TrainingConfig {
    std::optional<double> lasso_penalty;  // fixed penalty; otherwise chosen by CV over the grid
    int lasso_grid_size = 20;
    double lasso_grid_ratio = 1e-3;  // smallest / largest penalty on the grid
    int lasso_folds = 5;
    int lasso_max_sweeps = 100000;
    double lasso_tolerance = 1e-12;
    int forest_trees = 100;
    int forest_max_depth = 8;
    int ann_hidden = 16;
    int ann_epochs = 2000;
    double ann_learning_rate = 0.01;

    bool operator==(const TrainingConfig&) const = default;
};

struct TrainedModel {
    ModelKind kind = ModelKind::Linear;
    std::vector<std::string> selected_features;
    std::vector<double> parameters;
    std::uint64_t seed = 0;
    TrainingConfig config;

    bool operator==(const TrainedModel&) const = default;
};

TrainedModel train(const Dataset& data, ModelKind kind, const TrainingConfig& config, std::uint64_t seed);

/// `row` follows the model's selected_features order.
double predict_row(const TrainedModel& model, const Eigen::Ref<const Eigen::VectorXd>& row);
/// Throws MissingFeature when a selected feature is absent.
double predict(const TrainedModel& model, const std::map<std::string, double>& features);

/// Intercept followed by one coefficient per term, in the original units.
/// Linear, polynomial and lasso models only.
std::vector<double> linear_coefficients(const TrainedModel& model);
/// Terms the coefficients refer to (degree-2 expansion for polynomial).
std::vector<std::string> model_terms(const TrainedModel& model);

/// Coefficients on standardized columns along a penalty path.
std::vector<Eigen::VectorXd> lasso_path(const Dataset& data, const std::vector<double>& penalties,
                                        const TrainingConfig& config);

struct ImpactPrediction {
    double dcpu_pct = 0;
    double dmem_pct = 0;
};

/// Independently trained models per resource.
struct ImpactModel {
    std::optional<TrainedModel> cpu;
    std::optional<TrainedModel> memory;
};

ImpactPrediction predict(const ImpactModel& model, const FeatureVector& fv);

std::string model_json(const ImpactModel& model);
ImpactModel parse_model_json(std::string_view text);

struct EvalMetrics {
    double mse = 0;
    double rmse = 0;
    std::optional<double> adjusted_r_squared;
};

EvalMetrics evaluate(const std::vector<double>& predictions, const std::vector<double>& truths);

/// Mean of every target except the one at `target_index`.
double naive_baseline(const std::vector<double>& targets, std::size_t target_index);
ImpactPrediction naive_baseline(const std::vector<LabeledExample>& data, std::size_t target_index);

/// Fold id per example: a seeded shuffle dealt round-robin.
std::vector<int> make_folds(std::size_t n, int k, std::uint64_t seed);

/// Mean held-out MSE over the folds; +inf when a fold cannot be fitted.
double cv_mse(const Dataset& data, const std::vector<bool>& mask, ModelKind kind, const TrainingConfig& config,
              const std::vector<int>& folds, std::uint64_t seed);

struct GaConfig {
    int population = 30;
    int generations = 50;
    double mutation_rate = 0.05;
    double crossover_rate = 0.9;
    int tournament = 3;
    int elitism = 1;
    int folds = 5;
};

struct FeatureSubset {
    std::vector<std::string> features;
    std::vector<bool> mask;
    double fitness = 0;  // mean CV MSE
};

FeatureSubset ga_select(const Dataset& data, ModelKind kind, std::uint64_t seed, const GaConfig& ga = {},
                        const TrainingConfig& config = {});

struct Coefficient {
    std::string name;
    double estimate = 0;
    double standard_error = 0;
    std::optional<double> t_value;  // absent when standard_error is 0
};

struct FitStatistics {
    std::vector<Coefficient> coefficients;  // "(intercept)" first
    double residual_variance = 0;
    double r_squared = 0;
    double adjusted_r_squared = 0;
};

FitStatistics fit_statistics(const Dataset& data, const std::vector<std::string>& selected);

}  // namespace smellwatt
