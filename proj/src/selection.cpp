#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>

#include "smellwatt/error.hpp"
#include "smellwatt/predictor.hpp"

namespace smellwatt {

std::vector<int> make_folds(std::size_t n, int k, std::uint64_t seed) {
    if (k < 1) throw Error(ErrorCode::BadInput, "fold count must be >= 1");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<int> folds(n);
    for (std::size_t i = 0; i < n; ++i) folds[order[i]] = static_cast<int>(i % static_cast<std::size_t>(k));
    return folds;
}

double cv_mse(const Dataset& data, const std::vector<bool>& mask, ModelKind kind, const TrainingConfig& config,
              const std::vector<int>& folds, std::uint64_t seed) {
    const auto subset = data.select(mask);
    const int k = folds.empty() ? 0 : *std::max_element(folds.begin(), folds.end()) + 1;
    double total = 0;
    int used = 0;
    for (int f = 0; f < k; ++f) {
        std::vector<std::size_t> fit_rows, test;
        for (std::size_t i = 0; i < folds.size(); ++i) (folds[i] == f ? test : fit_rows).push_back(i);
        if (test.empty()) continue;
        try {
            const auto model = train(subset.rows(fit_rows), kind, config, seed);
            double sse = 0;
            for (auto i : test) {
                const double e = predict_row(model, subset.x.row(static_cast<Eigen::Index>(i)).transpose()) -
                                 subset.y(static_cast<Eigen::Index>(i));
                sse += e * e;
            }
            total += sse / static_cast<double>(test.size());
            ++used;
        } catch (const Error& e) {
            if (e.code() == ErrorCode::RankDeficient || e.code() == ErrorCode::TooFewExamples)
                return std::numeric_limits<double>::infinity();
            throw;
        }
    }
    return used == 0 ? std::numeric_limits<double>::infinity() : total / used;
}

FeatureSubset ga_select(const Dataset& data, ModelKind kind, std::uint64_t seed, const GaConfig& ga,
                        const TrainingConfig& config) {
    const auto p = data.features.size();
    if (p == 0) throw Error(ErrorCode::NoFeatures, "no candidate features");
    const auto n = static_cast<std::size_t>(data.x.rows());
    if (ga.folds < 2 || n < static_cast<std::size_t>(ga.folds))
        throw Error(ErrorCode::TooFewExamplesForCV, std::to_string(n) + " examples for " + std::to_string(ga.folds) + " folds");
    if (ga.population < 1 || ga.generations < 0 || ga.tournament < 1 || ga.elitism < 0 || ga.elitism > ga.population)
        throw Error(ErrorCode::BadInput, "genetic algorithm configuration");

    const auto folds = make_folds(n, ga.folds, seed);
    std::map<std::vector<bool>, double> cache;
    auto fitness = [&](const std::vector<bool>& mask) {
        const auto it = cache.find(mask);
        if (it != cache.end()) return it->second;
        const double f = cv_mse(data, mask, kind, config, folds, seed);
        cache.emplace(mask, f);
        return f;
    };

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> any_bit(0, p - 1);
    auto repair = [&](std::vector<bool>& mask) {
        if (std::none_of(mask.begin(), mask.end(), [](bool b) { return b; })) mask[any_bit(rng)] = true;
    };

    // sparse start: wide random subsets are rarely of full rank on small data
    const double on = std::min(0.5, 4.0 / static_cast<double>(p));
    std::vector<std::vector<bool>> population(static_cast<std::size_t>(ga.population), std::vector<bool>(p));
    for (auto& c : population) {
        for (std::size_t j = 0; j < p; ++j) c[j] = unit(rng) < on;
        repair(c);
    }

    FeatureSubset best;
    best.fitness = std::numeric_limits<double>::infinity();
    std::vector<double> scores(population.size());
    auto score_all = [&] {
        for (std::size_t i = 0; i < population.size(); ++i) {
            scores[i] = fitness(population[i]);
            if (best.mask.empty() || scores[i] < best.fitness) {
                best.fitness = scores[i];
                best.mask = population[i];
            }
        }
    };
    std::uniform_int_distribution<std::size_t> any_member(0, population.size() - 1);
    auto tournament = [&]() -> const std::vector<bool>& {
        std::size_t winner = any_member(rng);
        for (int t = 1; t < ga.tournament; ++t) {
            const auto c = any_member(rng);
            if (scores[c] < scores[winner]) winner = c;
        }
        return population[winner];
    };

    score_all();
    for (int g = 0; g < ga.generations && p > 1; ++g) {
        std::vector<std::size_t> rank(population.size());
        std::iota(rank.begin(), rank.end(), 0);
        std::stable_sort(rank.begin(), rank.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
        std::vector<std::vector<bool>> next;
        for (int e = 0; e < ga.elitism; ++e) next.push_back(population[rank[static_cast<std::size_t>(e)]]);
        std::uniform_int_distribution<std::size_t> cut_at(1, p - 1);
        while (next.size() < population.size()) {
            const auto& a = tournament();
            const auto& b = tournament();
            auto child = a;
            if (unit(rng) < ga.crossover_rate) {
                const auto cut = cut_at(rng);
                for (std::size_t j = cut; j < p; ++j) child[j] = b[j];
            }
            for (std::size_t j = 0; j < p; ++j)
                if (unit(rng) < ga.mutation_rate) child[j] = !child[j];
            repair(child);
            next.push_back(std::move(child));
        }
        population = std::move(next);
        score_all();
    }

    if (!std::isfinite(best.fitness))
        throw Error(ErrorCode::RankDeficient, "no evaluated feature subset could be fitted in every fold");
    for (std::size_t j = 0; j < p; ++j)
        if (best.mask[j]) best.features.push_back(data.features[j]);
    return best;
}

}  // namespace smellwatt
