#include "smellwatt/catalog.hpp"

#include <gtest/gtest.h>

#include <json.hpp>
#include <set>

using namespace smellwatt;

TEST(Catalog, SixteenDistinctKindsInFixedOrder) {
    const auto& kinds = all_smell_kinds();
    ASSERT_EQ(kinds.size(), 16u);
    std::set<std::string_view> names;
    for (std::size_t i = 0; i < kinds.size(); ++i) {
        EXPECT_EQ(static_cast<std::size_t>(kinds[i]), i);
        names.insert(to_string(kinds[i]));
    }
    EXPECT_EQ(names.size(), 16u);
    EXPECT_EQ(to_string(kinds.front()), "cyclic-dependency");
    EXPECT_EQ(to_string(kinds.back()), "middleman");
}

TEST(Catalog, LookupExamples) {
    const auto& god_class = catalog_lookup(SmellKind::GodClass);
    EXPECT_EQ(god_class.cpu_direction, ImpactDirection::Worsens);
    EXPECT_EQ(god_class.mem_direction, ImpactDirection::Worsens);

    const auto& long_param = catalog_lookup(SmellKind::LongParameter);
    EXPECT_EQ(long_param.cpu_direction, ImpactDirection::Improves);
    EXPECT_EQ(long_param.mem_direction, ImpactDirection::Worsens);

    const auto& cyclic = catalog_lookup(SmellKind::CyclicDependency);
    EXPECT_EQ(cyclic.cpu_direction, ImpactDirection::Improves);
    EXPECT_EQ(cyclic.mem_direction, ImpactDirection::Improves);
}

TEST(Catalog, ExpectedDirectionIsProjection) {
    EXPECT_EQ(expected_direction(SmellKind::DeadCode, Resource::Cpu), ImpactDirection::Improves);
    EXPECT_EQ(expected_direction(SmellKind::GodMethod, Resource::Memory), ImpactDirection::Worsens);
    EXPECT_EQ(expected_direction(SmellKind::LongParameter, Resource::Memory), ImpactDirection::Worsens);
    for (auto k : all_smell_kinds()) {
        EXPECT_EQ(expected_direction(k, Resource::Cpu), catalog_lookup(k).cpu_direction);
        EXPECT_EQ(expected_direction(k, Resource::Memory), catalog_lookup(k).mem_direction);
    }
}

TEST(Catalog, PartitionTwoWorsenOneMixedThirteenImprove) {
    int worsen_both = 0, split = 0, improve_both = 0;
    for (auto k : all_smell_kinds()) {
        const auto& d = catalog_lookup(k);
        EXPECT_EQ(d.kind, k);
        if (d.cpu_direction == ImpactDirection::Worsens && d.mem_direction == ImpactDirection::Worsens) ++worsen_both;
        else if (d.cpu_direction == ImpactDirection::Improves && d.mem_direction == ImpactDirection::Worsens) ++split;
        else if (d.cpu_direction == ImpactDirection::Improves && d.mem_direction == ImpactDirection::Improves) ++improve_both;
    }
    EXPECT_EQ(worsen_both, 2);
    EXPECT_EQ(split, 1);
    EXPECT_EQ(improve_both, 13);
}

TEST(Catalog, LookupIsPure) {
    for (auto k : all_smell_kinds()) EXPECT_EQ(&catalog_lookup(k), &catalog_lookup(k));
}

TEST(Catalog, DirectionOrderForTieBreaking) {
    EXPECT_LT(ImpactDirection::Improves, ImpactDirection::MixedUnknown);
    EXPECT_LT(ImpactDirection::MixedUnknown, ImpactDirection::Worsens);
}

TEST(Catalog, NamesRoundTrip) {
    for (auto k : all_smell_kinds()) EXPECT_EQ(parse_smell_kind(to_string(k)), k);
    EXPECT_FALSE(parse_smell_kind("feature-envy").has_value());
}

TEST(Catalog, JsonExport) {
    const auto doc = nlohmann::json::parse(catalog_json());
    ASSERT_TRUE(doc.is_array());
    ASSERT_EQ(doc.size(), 16u);
    EXPECT_EQ(doc[4]["kind"], "god-class");
    EXPECT_EQ(doc[4]["cpu_direction"], "WORSENS");
    EXPECT_EQ(doc[11]["mem_direction"], "WORSENS");
    for (const auto& item : doc) {
        EXPECT_TRUE(item.contains("property"));
        EXPECT_TRUE(item.contains("technique"));
    }
}
