#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "smellwatt/catalog.hpp"
#include "smellwatt/detector.hpp"
#include "smellwatt/predictor.hpp"

namespace oracle {

using namespace smellwatt;

struct Manifest {
    std::map<std::string, long> totals;
    std::vector<std::vector<std::string>> classes, methods, smells;
};

inline Manifest read_manifest(const std::filesystem::path& path) {
    Manifest m;
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.starts_with("features ")) continue;
        std::istringstream ss(line);
        std::vector<std::string> f;
        for (std::string w; ss >> w;) f.push_back(w);
        if (f[0] == "class") m.classes.push_back(f);
        else if (f[0] == "method") m.methods.push_back(f);
        else if (f[0] == "smell") m.smells.push_back(f);
        else m.totals[f[0]] = std::stol(f[1]);
    }
    return m;
}


inline std::vector<SmellInstance> expected_smells(const Manifest& m) {
    std::vector<SmellInstance> expected;
    for (const auto& f : m.smells) {
        SmellInstance s;
        s.kind = *parse_smell_kind(f[1]);
        s.unit_path = f[2];
        s.entity_name = f[3];
        s.line_span = {std::stoi(f[4]), std::stoi(f[5])};
        for (std::size_t i = 6; i < f.size(); ++i) {
            const auto eq = f[i].find('=');
            s.evidence[f[i].substr(0, eq)] = std::stod(f[i].substr(eq + 1));
        }
        expected.push_back(s);
    }
    return expected;
}

// Reachability closure by repeated relaxation; mutually reachable pairs form
// the components.
inline std::vector<std::vector<std::string>> brute_force_cycles(const std::vector<std::string>& nodes,
                                                         const std::vector<std::vector<bool>>& adj) {
    const auto n = nodes.size();
    auto reach = adj;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (reach[i][k] && reach[k][j]) reach[i][j] = true;
    std::vector<bool> taken(n, false);
    std::vector<std::vector<std::string>> out;
    for (std::size_t i = 0; i < n; ++i) {
        if (taken[i]) continue;
        std::vector<std::string> comp{nodes[i]};
        for (std::size_t j = i + 1; j < n; ++j)
            if (reach[i][j] && reach[j][i]) {
                comp.push_back(nodes[j]);
                taken[j] = true;
            }
        if (comp.size() >= 2) {
            std::sort(comp.begin(), comp.end());
            out.push_back(comp);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Normal equations (X'X) b = X'y solved by Gauss-Jordan in long double; the
// inverse doubles as the covariance factor.
struct OlsOracle {
    std::vector<long double> beta, se;
    long double adjusted_r2 = 0;
};

inline OlsOracle normal_equations(const Dataset& d) {
    const std::size_t n = static_cast<std::size_t>(d.x.rows()), p = static_cast<std::size_t>(d.x.cols()) + 1;
    auto xv = [&](std::size_t i, std::size_t j) -> long double {
        return j == 0 ? 1.0L : static_cast<long double>(d.x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j - 1)));
    };
    std::vector<std::vector<long double>> a(p, std::vector<long double>(2 * p, 0.0L));
    std::vector<long double> xty(p, 0.0L);
    for (std::size_t r = 0; r < p; ++r) {
        for (std::size_t c = 0; c < p; ++c)
            for (std::size_t i = 0; i < n; ++i) a[r][c] += xv(i, r) * xv(i, c);
        a[r][p + r] = 1.0L;
        for (std::size_t i = 0; i < n; ++i) xty[r] += xv(i, r) * d.y(static_cast<Eigen::Index>(i));
    }
    for (std::size_t col = 0; col < p; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < p; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
        std::swap(a[col], a[piv]);
        const long double div = a[col][col];
        for (auto& v : a[col]) v /= div;
        for (std::size_t r = 0; r < p; ++r) {
            if (r == col) continue;
            const long double f = a[r][col];
            for (std::size_t c = 0; c < 2 * p; ++c) a[r][c] -= f * a[col][c];
        }
    }
    OlsOracle o;
    o.beta.assign(p, 0.0L);
    for (std::size_t r = 0; r < p; ++r)
        for (std::size_t c = 0; c < p; ++c) o.beta[r] += a[r][p + c] * xty[c];
    long double rss = 0, mean = 0, tss = 0;
    for (std::size_t i = 0; i < n; ++i) mean += d.y(static_cast<Eigen::Index>(i));
    mean /= static_cast<long double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        long double fit = 0;
        for (std::size_t j = 0; j < p; ++j) fit += o.beta[j] * xv(i, j);
        const long double y = d.y(static_cast<Eigen::Index>(i));
        rss += (y - fit) * (y - fit);
        tss += (y - mean) * (y - mean);
    }
    const long double df = static_cast<long double>(n - p);
    const long double sigma2 = rss / df;
    for (std::size_t j = 0; j < p; ++j) o.se.push_back(std::sqrt(sigma2 * a[j][p + j]));
    o.adjusted_r2 = 1.0L - (rss / tss) * static_cast<long double>(n - 1) / df;
    return o;
}

}  // namespace oracle
