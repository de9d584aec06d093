#include <algorithm>
#include <functional>
#include <map>

#include "smellwatt/detector.hpp"

namespace smellwatt {

namespace {

std::string node_name(const SourceUnit& u) {
    return u.package_or_module.empty() ? "(default)" : u.package_or_module;
}

// Longest dotted prefix of `name` (itself included) that is a node.
std::optional<std::string> longest_node_prefix(std::string name, const std::set<std::string>& nodes) {
    while (!name.empty()) {
        if (nodes.contains(name)) return name;
        const auto dot = name.rfind('.');
        if (dot == std::string::npos) break;
        name.resize(dot);
    }
    return std::nullopt;
}

}  // namespace

void DependencyGraph::add_edge(const std::string& from, const std::string& to) {
    if (from != to) edges.emplace(from, to);
}

DependencyGraph build_dependency_graph(const Corpus& corpus) {
    std::set<std::string> nodes;
    for (const auto& u : corpus.units) nodes.insert(node_name(u));
    DependencyGraph g;
    g.nodes.assign(nodes.begin(), nodes.end());
    for (const auto& u : corpus.units) {
        const auto from = node_name(u);
        for (const auto& imp : u.imports) {
            if (corpus.flavor == Flavor::PythonLike) {
                bool named_module = false;
                for (const auto& n : imp.names) {
                    const auto full = imp.target.empty() ? n : imp.target + "." + n;
                    if (nodes.contains(full)) {
                        g.add_edge(from, full);
                        named_module = true;
                    }
                }
                if (named_module) continue;
            }
            if (const auto to = longest_node_prefix(imp.target, nodes)) g.add_edge(from, *to);
        }
    }
    return g;
}

std::vector<std::vector<std::string>> find_cycles(const DependencyGraph& graph) {
    std::map<std::string, std::size_t> id;
    std::vector<std::string> names;
    auto node = [&](const std::string& n) {
        auto [it, inserted] = id.emplace(n, names.size());
        if (inserted) names.push_back(n);
        return it->second;
    };
    for (const auto& n : graph.nodes) node(n);
    std::vector<std::vector<std::size_t>> adj(names.size());
    for (const auto& [a, b] : graph.edges) {
        const auto ia = node(a), ib = node(b);
        adj.resize(names.size());
        adj[ia].push_back(ib);
    }
    adj.resize(names.size());

    // Tarjan's strongly connected components.
    const std::size_t n = names.size();
    constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> index(n, kUnset), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::size_t counter = 0;
    std::vector<std::vector<std::string>> out;
    std::function<void(std::size_t)> connect = [&](std::size_t v) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = true;
        for (auto w : adj[v]) {
            if (index[w] == kUnset) {
                connect(w);
                low[v] = std::min(low[v], low[w]);
            } else if (on_stack[w]) {
                low[v] = std::min(low[v], index[w]);
            }
        }
        if (low[v] != index[v]) return;
        std::vector<std::string> component;
        std::size_t w;
        do {
            w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            component.push_back(names[w]);
        } while (w != v);
        if (component.size() >= 2) {
            std::sort(component.begin(), component.end());
            out.push_back(std::move(component));
        }
    };
    for (std::size_t v = 0; v < n; ++v)
        if (index[v] == kUnset) connect(v);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace smellwatt
