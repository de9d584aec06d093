#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <sstream>

#include <unistd.h>

#include <gtest/gtest.h>

#include "smellwatt/detector.hpp"
#include "smellwatt/error.hpp"

#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace smellwatt;

namespace {

const fs::path kFixtures = SMELLWATT_FIXTURE_DIR;

class TempDir {
public:
    TempDir() {
        path_ = fs::temp_directory_path() / ("smellwatt-detector-" + std::to_string(::getpid()) + "-" +
                                             std::to_string(counter_++));
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    const fs::path& path() const { return path_; }
    void write(const std::string& rel, const std::string& content) const {
        fs::create_directories((path_ / rel).parent_path());
        std::ofstream(path_ / rel) << content;
    }

private:
    static inline int counter_ = 0;
    fs::path path_;
};

std::optional<ErrorCode> code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return std::nullopt;
}

Corpus java(const std::map<std::string, std::string>& files) {
    Corpus c;
    c.flavor = Flavor::JavaLike;
    for (const auto& [path, src] : files) c.units.push_back(parse_unit(src, path, Flavor::JavaLike));
    return c;
}

Corpus python(const std::map<std::string, std::string>& files) {
    Corpus c;
    c.flavor = Flavor::PythonLike;
    for (const auto& [path, src] : files) c.units.push_back(parse_unit(src, path, Flavor::PythonLike));
    return c;
}

std::vector<SmellInstance> of_kind(const std::vector<SmellInstance>& all, SmellKind kind) {
    std::vector<SmellInstance> out;
    std::copy_if(all.begin(), all.end(), std::back_inserter(out), [&](const auto& s) { return s.kind == kind; });
    return out;
}

Corpus fixture_corpus() { return ingest_corpus({kFixtures / "corpus"}, Flavor::JavaLike); }
RuleConfig fixture_rules() { return load_rule_config(kFixtures / "rules.toml"); }

}  // namespace

// ---- ingestion -------------------------------------------------------------

TEST(Ingest, SingleClassWithTwoParameterMethod) {
    TempDir dir;
    dir.write("A.java", "class A {\n    void m(int a, int b) {\n    }\n}\n");
    const auto c = ingest_corpus({dir.path()}, Flavor::JavaLike);
    ASSERT_EQ(c.units.size(), 1u);
    ASSERT_EQ(c.units[0].classes.size(), 1u);
    ASSERT_EQ(c.units[0].classes[0].methods.size(), 1u);
    EXPECT_EQ(c.units[0].classes[0].methods[0].params.size(), 2u);
    EXPECT_EQ(c.units[0].path, "A.java");
}

TEST(Ingest, EmptyInputs) {
    TempDir dir;
    EXPECT_EQ(code_of([&] { ingest_corpus({dir.path()}, Flavor::JavaLike); }), ErrorCode::EmptyCorpus);
    EXPECT_EQ(code_of([&] { ingest_corpus({}, Flavor::JavaLike); }), ErrorCode::EmptyCorpus);
    EXPECT_EQ(code_of([&] { ingest_corpus({dir.path() / "missing"}, Flavor::JavaLike); }), ErrorCode::IoFailure);
}

TEST(Ingest, UnparseableFileIsSkippedWithReason) {
    TempDir dir;
    dir.write("Good.java", "class Good {\n}\n");
    dir.write("Bad.java", "class Bad {\n    String s = \"open;\n}\n");
    const auto c = ingest_corpus({dir.path()}, Flavor::JavaLike);
    ASSERT_EQ(c.units.size(), 1u);
    ASSERT_EQ(c.skipped.size(), 1u);
    EXPECT_EQ(c.skipped[0].path, "Bad.java");
    EXPECT_FALSE(c.skipped[0].reason.empty());
}

TEST(Ingest, UnitsSortedAndSpansInsideUnit) {
    const auto c = fixture_corpus();
    for (std::size_t i = 1; i < c.units.size(); ++i) EXPECT_LT(c.units[i - 1].path, c.units[i].path);
    for (const auto& u : c.units) {
        for (const auto& k : u.classes) {
            EXPECT_GE(k.span.start, 1);
            EXPECT_LE(k.span.end, u.line_count);
            for (const auto& m : k.methods) {
                EXPECT_GE(m.span.start, k.span.start);
                EXPECT_LE(m.span.end, k.span.end);
            }
        }
    }
}

TEST(Ingest, FixtureEntityCountsMatchManifest) {
    const auto c = fixture_corpus();
    const auto m = oracle::read_manifest(kFixtures / "corpus.manifest");
    long classes = 0, methods = 0, fields = 0;
    for (const auto& u : c.units)
        for (const auto& k : u.classes) {
            ++classes;
            methods += static_cast<long>(k.methods.size());
            fields += static_cast<long>(k.fields.size());
        }
    EXPECT_TRUE(c.skipped.empty());
    EXPECT_EQ(static_cast<long>(c.units.size()), m.totals.at("units"));
    EXPECT_EQ(classes, m.totals.at("classes"));
    EXPECT_EQ(methods, m.totals.at("methods"));
    EXPECT_EQ(fields, m.totals.at("fields"));
}

// ---- metrics -----------------------------------------------------------------

TEST(Metrics, WmcIsSumOfMethodComplexities) {
    const auto c = java({{"W.java", "class W {\n"
                                    "    void a() { }\n"
                                    "    void b(int x) { if (x > 0) { x--; } }\n"
                                    "    void d(int x) {\n"
                                    "        if (x > 0) { x--; }\n"
                                    "        for (int i = 0; i < x; i++) { x--; }\n"
                                    "        while (x > 3) { x--; }\n"
                                    "    }\n"
                                    "}\n"}});
    const auto t = compute_metrics(c);
    const auto* w = t.find(EntityType::Class, "W.java", "W", 1);
    ASSERT_NE(w, nullptr);
    EXPECT_EQ(w->wmc, 7);
    EXPECT_EQ(w->method_count, 3);
    const auto* d = t.find(EntityType::Method, "W.java", "W.d", 4);
    ASSERT_NE(d, nullptr);
    EXPECT_EQ(d->complexity, 4);
    EXPECT_EQ(d->nloc, 5);
}

TEST(Metrics, BranchKeywordsInsideStringsAndCommentsDoNotCount) {
    const auto c = java({{"S.java", "class S {\n"
                                    "    String f() {\n"
                                    "        // if while for\n"
                                    "        return \"if for while case\";\n"
                                    "    }\n"
                                    "}\n"}});
    const auto t = compute_metrics(c);
    const auto* f = t.find(EntityType::Method, "S.java", "S.f", 2);
    ASSERT_NE(f, nullptr);
    EXPECT_EQ(f->complexity, 1);
    EXPECT_EQ(f->nloc, 3);
}

TEST(Metrics, FixtureMatchesHandCount) {
    const auto table = compute_metrics(fixture_corpus());
    const auto m = oracle::read_manifest(kFixtures / "corpus.manifest");
    auto by_name = [&](EntityType type, const std::string& path, const std::string& name) -> const EntityMetrics* {
        for (const auto& r : table.rows)
            if (r.type == type && r.unit_path == path && r.name == name) return &r;
        return nullptr;
    };
    for (const auto& f : m.classes) {
        SCOPED_TRACE(f[1] + " " + f[2]);
        const auto* r = by_name(EntityType::Class, f[1], f[2]);
        ASSERT_NE(r, nullptr);
        EXPECT_EQ(r->nloc, std::stoi(f[3]));
        EXPECT_EQ(r->wmc, std::stoi(f[4]));
        EXPECT_EQ(r->method_count, std::stoi(f[5]));
        EXPECT_EQ(r->fan_in, std::stoi(f[6]));
        EXPECT_EQ(r->fan_out, std::stoi(f[7]));
    }
    for (const auto& f : m.methods) {
        SCOPED_TRACE(f[1] + " " + f[2]);
        const auto* r = by_name(EntityType::Method, f[1], f[2]);
        ASSERT_NE(r, nullptr);
        EXPECT_EQ(r->nloc, std::stoi(f[3]));
        EXPECT_EQ(r->parameter_count, std::stoi(f[4]));
        EXPECT_EQ(r->complexity, std::stoi(f[5]));
        EXPECT_EQ(r->fan_in, std::stoi(f[6]));
    }
}

TEST(Metrics, InvariantsHoldOnFixture) {
    const auto table = compute_metrics(fixture_corpus());
    ASSERT_FALSE(table.rows.empty());
    for (const auto& r : table.rows) {
        EXPECT_GE(r.nloc, 0);
        EXPECT_GE(r.fan_in, 0);
        EXPECT_GE(r.fan_out, 0);
        if (r.type == EntityType::Class) EXPECT_GE(r.wmc, r.method_count);
        else EXPECT_GE(r.complexity, 1);
    }
}

TEST(Metrics, EmptyCorpusGivesEmptyTable) {
    Corpus c;
    EXPECT_TRUE(compute_metrics(c).rows.empty());
}

// ---- dependency graph ----------------------------------------------------------

TEST(Graph, MutualImportsGiveBothEdges) {
    const auto c = java({{"a/A.java", "package a;\nimport b.B;\nclass A { B b; }\n"},
                         {"b/B.java", "package b;\nimport a.A;\nclass B { A a; }\n"}});
    const auto g = build_dependency_graph(c);
    EXPECT_EQ(g.nodes, (std::vector<std::string>{"a", "b"}));
    EXPECT_EQ(g.edges, (std::set<std::pair<std::string, std::string>>{{"a", "b"}, {"b", "a"}}));
    EXPECT_EQ(find_cycles(g), (std::vector<std::vector<std::string>>{{"a", "b"}}));
}

TEST(Graph, ExternalImportsOnly) {
    const auto c = java({{"a/A.java", "package a;\nimport java.util.List;\nclass A { List<String> xs; }\n"}});
    const auto g = build_dependency_graph(c);
    EXPECT_EQ(g.nodes, (std::vector<std::string>{"a"}));
    EXPECT_TRUE(g.edges.empty());
}

TEST(Graph, SelfLoopsDroppedAndEdgesDeduplicated) {
    DependencyGraph g;
    g.nodes = {"a", "b"};
    g.add_edge("a", "a");
    g.add_edge("a", "b");
    g.add_edge("a", "b");
    EXPECT_EQ(g.edges.size(), 1u);
}

TEST(Graph, DagHasNoCycles) {
    DependencyGraph g;
    g.nodes = {"a", "b", "c", "d"};
    g.add_edge("a", "b");
    g.add_edge("b", "c");
    g.add_edge("a", "c");
    g.add_edge("c", "d");
    EXPECT_TRUE(find_cycles(g).empty());
}

TEST(Graph, TwoCycleWithTail) {
    DependencyGraph g;
    g.nodes = {"A", "B", "C"};
    g.add_edge("A", "B");
    g.add_edge("B", "A");
    g.add_edge("B", "C");
    EXPECT_EQ(find_cycles(g), (std::vector<std::vector<std::string>>{{"A", "B"}}));
}

TEST(Graph, PythonFixtureEdgesMatchManifest) {
    const auto c = ingest_corpus({kFixtures / "pydeps"}, Flavor::PythonLike);
    const auto g = build_dependency_graph(c);
    std::set<std::pair<std::string, std::string>> expected;
    std::ifstream in(kFixtures / "pydeps.manifest");
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string from, to;
        ss >> from >> to;
        expected.emplace(from, to);
    }
    EXPECT_EQ(g.nodes, (std::vector<std::string>{"app", "models", "report", "store", "util"}));
    EXPECT_EQ(g.edges, expected);
    EXPECT_TRUE(find_cycles(g).empty());
}

TEST(Graph, CyclesAgreeWithBruteForceOnRandomGraphs) {
    std::mt19937 rng(20240501);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 1 + rng() % 8;
        const double density = std::uniform_real_distribution<double>(0.05, 0.5)(rng);
        std::vector<std::string> nodes;
        for (std::size_t i = 0; i < n; ++i) nodes.push_back(std::string(1, static_cast<char>('a' + i)));
        DependencyGraph g;
        g.nodes = nodes;
        std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j && std::bernoulli_distribution(density)(rng)) {
                    adj[i][j] = true;
                    g.add_edge(nodes[i], nodes[j]);
                }
        ASSERT_EQ(find_cycles(g), oracle::brute_force_cycles(nodes, adj)) << "trial " << trial;
    }
}

// ---- rule configuration ----------------------------------------------------------

TEST(Rules, DefaultsAndFileOverrides) {
    const RuleConfig d;
    EXPECT_EQ(d.long_parameter_max, 5);
    const auto r = fixture_rules();
    EXPECT_EQ(r.god_method_nloc, 25);
    EXPECT_EQ(r.shotgun_callers, 3);
    EXPECT_EQ(r.long_parameter_max, 5);
    EXPECT_EQ(parse_rule_config("[default]\ngod_class_nloc = 9\n").god_class_nloc, 9);
}

TEST(Rules, InvalidConfigurationsAreRejected) {
    EXPECT_EQ(code_of([] { parse_rule_config("god_method_nloc = 0\n"); }), ErrorCode::BadRuleConfig);
    EXPECT_EQ(code_of([] { parse_rule_config("god_method_nloc = -4\n"); }), ErrorCode::BadRuleConfig);
    EXPECT_EQ(code_of([] { parse_rule_config("no_such_rule = 3\n"); }), ErrorCode::BadRuleConfig);
    EXPECT_EQ(code_of([] { parse_rule_config("god_method_nloc = many\n"); }), ErrorCode::BadRuleConfig);
    RuleConfig bad;
    bad.duplicate_window = 0;
    EXPECT_EQ(code_of([&] { detect_smells(Corpus{}, bad); }), ErrorCode::BadRuleConfig);
}

// ---- detection -------------------------------------------------------------------

TEST(Detect, SevenParametersIsOneLongParameterInstance) {
    const auto c = java({{"P.java", "class P {\n"
                                    "    int m(int a, int b, int c, int d, int e, int f, int g) {\n"
                                    "        return a + b + c + d + e + f + g;\n"
                                    "    }\n"
                                    "    int n(int a, int b, int c, int d, int e) {\n"
                                    "        return a + b + c + d + e;\n"
                                    "    }\n"
                                    "}\n"}});
    const auto found = of_kind(detect_smells(c, RuleConfig{}), SmellKind::LongParameter);
    ASSERT_EQ(found.size(), 1u);
    EXPECT_EQ(found[0].entity_name, "P.m");
    EXPECT_EQ(found[0].evidence, (std::map<std::string, double>{{"parameter_count", 7}}));
    EXPECT_EQ(found[0].line_span.start, 2);
    EXPECT_EQ(found[0].line_span.end, 4);
}

TEST(Detect, NoEntitiesNoSmells) {
    const auto c = java({{"E.java", "package only.here;\n\nimport java.util.List;\n"}});
    EXPECT_TRUE(detect_smells(c, RuleConfig{}).empty());
    EXPECT_TRUE(detect_smells(Corpus{}, RuleConfig{}).empty());
}

TEST(Detect, FixturePrecisionAndRecallAreOne) {
    const auto found = detect_smells(fixture_corpus(), fixture_rules());
    const auto m = oracle::read_manifest(kFixtures / "corpus.manifest");
    const auto expected = oracle::expected_smells(m);
    ASSERT_EQ(expected.size(), kSmellKindCount);
    std::size_t hits = 0;
    for (const auto& e : expected) {
        const bool hit = std::find(found.begin(), found.end(), e) != found.end();
        EXPECT_TRUE(hit) << "missed " << to_string(e.kind) << " " << e.unit_path << " " << e.entity_name;
        hits += hit ? 1 : 0;
    }
    for (const auto& f : found)
        EXPECT_TRUE(std::find(expected.begin(), expected.end(), f) != expected.end())
            << "spurious " << to_string(f.kind) << " " << f.unit_path << " " << f.entity_name << " "
            << f.line_span.start << "-" << f.line_span.end;
    const double precision = found.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(found.size());
    const double recall = static_cast<double>(hits) / static_cast<double>(expected.size());
    EXPECT_EQ(precision, 1.0);
    EXPECT_EQ(recall, 1.0);
    std::set<SmellKind> kinds;
    for (const auto& f : found) kinds.insert(f.kind);
    EXPECT_EQ(kinds.size(), kSmellKindCount);
}

TEST(Detect, OutputIsSortedAndByteDeterministic) {
    const auto rules = fixture_rules();
    const auto a = detect_smells(fixture_corpus(), rules);
    const auto b = detect_smells(fixture_corpus(), rules);
    EXPECT_EQ(smells_json(a), smells_json(b));
    for (std::size_t i = 1; i < a.size(); ++i)
        EXPECT_LE(std::tie(a[i - 1].unit_path, a[i - 1].line_span.start, a[i - 1].kind),
                  std::tie(a[i].unit_path, a[i].line_span.start, a[i].kind));
}

TEST(Detect, RaisingLongParameterThresholdNeverAddsInstances) {
    std::string src = "class Q {\n";
    for (int n = 0; n <= 12; ++n) {
        src += "    int m" + std::to_string(n) + "(";
        std::string body = "0";
        for (int p = 0; p < n; ++p) {
            src += (p ? ", int p" : "int p") + std::to_string(p);
            body += " + p" + std::to_string(p);
        }
        src += ") {\n        return " + body + ";\n    }\n";
    }
    src += "}\n";
    const auto c = java({{"Q.java", src}});
    std::size_t previous = SIZE_MAX;
    for (int t = 1; t <= 14; ++t) {
        RuleConfig r;
        r.long_parameter_max = t;
        const auto n = of_kind(detect_smells(c, r), SmellKind::LongParameter).size();
        EXPECT_LE(n, previous) << "threshold " << t;
        EXPECT_EQ(n, static_cast<std::size_t>(std::max(0, 12 - t)));
        previous = n;
    }
}

TEST(Detect, EvidenceReproducibleFromMetrics) {
    const auto corpus = fixture_corpus();
    const auto table = compute_metrics(corpus);
    const auto found = detect_smells(corpus, fixture_rules());
    int checked = 0;
    for (const auto& s : found) {
        const auto* method = table.find(EntityType::Method, s.unit_path, s.entity_name, s.line_span.start);
        const auto* klass = table.find(EntityType::Class, s.unit_path, s.entity_name, s.line_span.start);
        const auto* row = method ? method : klass;
        for (const auto& [key, value] : s.evidence) {
            std::optional<int> expected;
            if (key == "nloc") expected = row->nloc;
            else if (key == "parameter_count") expected = row->parameter_count;
            else if (key == "complexity") expected = row->complexity;
            else if (key == "wmc") expected = row->wmc;
            else if (key == "method_fan_in") expected = row->fan_in;
            if (!expected) continue;
            EXPECT_EQ(value, *expected) << to_string(s.kind) << " " << s.entity_name << " " << key;
            ++checked;
        }
    }
    EXPECT_GE(checked, 8);
}

TEST(Detect, CountsSumToInstanceTotal) {
    const auto found = detect_smells(fixture_corpus(), fixture_rules());
    const auto counts = count_by_kind(found);
    long total = 0;
    for (const auto& [kind, n] : counts) total += n;
    EXPECT_EQ(total, static_cast<long>(found.size()));
    for (const auto& [kind, n] : counts) EXPECT_EQ(n, 1) << to_string(kind);
}

TEST(Detect, JsonCarriesEveryField) {
    const auto found = detect_smells(fixture_corpus(), fixture_rules());
    const auto text = smells_json(found);
    EXPECT_NE(text.find("\"kind\": \"cyclic-dependency\""), std::string::npos);
    EXPECT_NE(text.find("\"entity_name\": \"fx.cycle,fx.godmethod\""), std::string::npos);
    EXPECT_NE(text.find("\"cycle_size\": 2"), std::string::npos);
    EXPECT_EQ(smells_json({}), "[]\n");
}

TEST(Detect, PythonRules) {
    const auto c = python({{"shop/billing.py",
                            "RATE = 3\n"
                            "\n"
                            "\n"
                            "def _unused(x):\n"
                            "    return x\n"
                            "\n"
                            "\n"
                            "def invoice(a, b, c, d, e, f, g):\n"
                            "    return a + b + c + d + e + f + g + _used()\n"
                            "\n"
                            "\n"
                            "def _used():\n"
                            "    return 1\n"
                            "\n"
                            "\n"
                            "class Session:\n"
                            "    def __init__(self, user):\n"
                            "        self.user = user\n"
                            "\n"
                            "    def login(self, token):\n"
                            "        self.token = token\n"
                            "        return self.user + self.token\n"
                            "\n"
                            "    def logout(self):\n"
                            "        return self.user\n"},
                           {"shop/a.py", "from shop.billing import RATE\n\n\ndef fa(v):\n    return v * RATE\n"},
                           {"shop/b.py", "import shop.billing\n\n\ndef fb(v):\n    return v + shop.billing.RATE\n"}});
    const auto found = detect_smells(c, RuleConfig{});
    const auto lp = of_kind(found, SmellKind::LongParameter);
    ASSERT_EQ(lp.size(), 1u);
    EXPECT_EQ(lp[0].entity_name, "invoice");
    const auto dead = of_kind(found, SmellKind::DeadCode);
    ASSERT_EQ(dead.size(), 1u);
    EXPECT_EQ(dead[0].entity_name, "_unused");
    EXPECT_EQ(dead[0].line_span.start, 4);
    const auto temp = of_kind(found, SmellKind::TemporaryField);
    ASSERT_EQ(temp.size(), 1u);
    EXPECT_EQ(temp[0].entity_name, "Session.token");
    const auto orphan = of_kind(found, SmellKind::OrphanVariable);
    ASSERT_EQ(orphan.size(), 1u);
    EXPECT_EQ(orphan[0].entity_name, "RATE");
    EXPECT_EQ(orphan[0].evidence.at("external_modules"), 2);
}

TEST(Detect, PythonMatchWithManyCases) {
    std::string src = "def label(code):\n    match code:\n";
    for (int i = 0; i < 12; ++i) src += "        case " + std::to_string(i) + ":\n            return 'c" + std::to_string(i) + "'\n";
    src += "    return 'none'\n";
    const auto c = python({{"codes.py", src}});
    const auto ls = of_kind(detect_smells(c, RuleConfig{}), SmellKind::LongStatement);
    ASSERT_EQ(ls.size(), 1u);
    EXPECT_EQ(ls[0].evidence.at("switch_cases"), 12);
    EXPECT_EQ(ls[0].line_span.start, 2);
    EXPECT_EQ(ls[0].line_span.end, 26);
}

TEST(Detect, PythonCycleIsOneInstance) {
    const auto c = python({{"x.py", "import y\n\n\ndef fx():\n    return y.fy\n"},
                           {"y.py", "import z\n\n\ndef fy():\n    return z.fz\n"},
                           {"z.py", "from x import fx\n\n\ndef fz():\n    return fx\n"}});
    const auto cyc = of_kind(detect_smells(c, RuleConfig{}), SmellKind::CyclicDependency);
    ASSERT_EQ(cyc.size(), 1u);
    EXPECT_EQ(cyc[0].entity_name, "x,y,z");
    EXPECT_EQ(cyc[0].unit_path, "x.py");
    EXPECT_EQ(cyc[0].evidence.at("cycle_size"), 3);
}
