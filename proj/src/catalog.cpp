#include "smellwatt/catalog.hpp"

#include <json.hpp>

namespace smellwatt {

namespace {

constexpr auto I = ImpactDirection::Improves;
constexpr auto W = ImpactDirection::Worsens;

// clang-format off
constexpr std::array<SmellDescriptor, kSmellKindCount> kCatalog{{
    {SmellKind::CyclicDependency,
     "packages or modules reach each other through a dependency cycle",
     "collapse the packages of a cycle into one unit owned together", I, I},
    {SmellKind::GodMethod,
     "one method carries out many unrelated activities",
     "extract method: split into several smaller methods", W, W},
    {SmellKind::SpaghettiCode,
     "long, branch-heavy procedural code that keeps growing without cleanup",
     "restructure procedural segments into object-oriented design", I, I},
    {SmellKind::ShotgunSurgery,
     "one behaviour is spread over many classes that all call into it",
     "move method / move field to gather the behaviour in one class", I, I},
    {SmellKind::GodClass,
     "one class takes on the work of many classes",
     "extract class: split into smaller classes", W, W},
    {SmellKind::LazyClass,
     "a class that does too little to justify its existence",
     "inline the class or remove the redundant re-implementation", I, I},
    {SmellKind::RefusedBequest,
     "a subclass ignores most of what it inherits",
     "replace inheritance with delegation", I, I},
    {SmellKind::TemporaryField,
     "an instance field only meaningful inside one method",
     "turn the field into a local or remove it", I, I},
    {SmellKind::SpeculativeGenerality,
     "abstractions or parameters added for needs that never arrived",
     "remove unused parameters and collapse single-implementer abstractions", I, I},
    {SmellKind::DeadCode,
     "declared code that nothing references",
     "delete the unreferenced members", I, I},
    {SmellKind::DuplicateCode,
     "the same token sequence copied into several places",
     "pull the shared block into one reusable place", I, I},
    {SmellKind::LongParameter,
     "a method taking more than five parameters",
     "introduce a parameter object or split the method", I, W},
    {SmellKind::LongStatement,
     "a single statement or switch that is far too long",
     "split the statement into smaller cooperating statements", I, I},
    {SmellKind::PrimitiveObsession,
     "primitives or legacy synchronized string buffers standing in for objects",
     "introduce value objects; use an unsynchronized string builder", I, I},
    {SmellKind::OrphanVariable,
     "a constant used by other classes but not by the class declaring it",
     "move the constant to the class that uses it", I, I},
    {SmellKind::Middleman,
     "a class that mostly forwards calls to another object",
     "remove the middle man and call the delegate directly", I, I},
}};

constexpr std::array<std::string_view, kSmellKindCount> kNames{
    "cyclic-dependency", "god-method",     "spaghetti-code", "shotgun-surgery",
    "god-class",         "lazy-class",     "refused-bequest", "temporary-field",
    "speculative-generality", "dead-code", "duplicate-code", "long-parameter",
    "long-statement",    "primitive-obsession", "orphan-variable", "middleman",
};
// clang-format on

constexpr std::array<SmellKind, kSmellKindCount> make_all_kinds() {
    std::array<SmellKind, kSmellKindCount> kinds{};
    for (std::size_t i = 0; i < kSmellKindCount; ++i) kinds[i] = static_cast<SmellKind>(i);
    return kinds;
}

constexpr auto kAllKinds = make_all_kinds();

static_assert([] {
    for (std::size_t i = 0; i < kSmellKindCount; ++i)
        if (static_cast<std::size_t>(kCatalog[i].kind) != i) return false;
    return true;
}(), "catalog table must follow enumeration order");

}  // namespace

const std::array<SmellKind, kSmellKindCount>& all_smell_kinds() noexcept { return kAllKinds; }

const SmellDescriptor& catalog_lookup(SmellKind kind) noexcept {
    return kCatalog[static_cast<std::size_t>(kind)];
}

ImpactDirection expected_direction(SmellKind kind, Resource resource) noexcept {
    const auto& d = catalog_lookup(kind);
    return resource == Resource::Cpu ? d.cpu_direction : d.mem_direction;
}

std::string_view to_string(SmellKind kind) noexcept { return kNames[static_cast<std::size_t>(kind)]; }

std::string_view to_string(ImpactDirection direction) noexcept {
    switch (direction) {
        case ImpactDirection::Improves: return "IMPROVES";
        case ImpactDirection::MixedUnknown: return "MIXED-UNKNOWN";
        case ImpactDirection::Worsens: return "WORSENS";
    }
    return "MIXED-UNKNOWN";
}

std::string_view to_string(Resource resource) noexcept {
    return resource == Resource::Cpu ? "cpu" : "memory";
}

std::optional<SmellKind> parse_smell_kind(std::string_view text) noexcept {
    for (std::size_t i = 0; i < kSmellKindCount; ++i)
        if (kNames[i] == text) return static_cast<SmellKind>(i);
    return std::nullopt;
}

std::optional<ImpactDirection> parse_direction(std::string_view text) noexcept {
    for (auto d : {ImpactDirection::Improves, ImpactDirection::MixedUnknown, ImpactDirection::Worsens})
        if (to_string(d) == text) return d;
    return std::nullopt;
}

std::optional<Resource> parse_resource(std::string_view text) noexcept {
    if (text == "cpu" || text == "CPU") return Resource::Cpu;
    if (text == "memory" || text == "mem" || text == "MEMORY") return Resource::Memory;
    return std::nullopt;
}

std::string catalog_json() {
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const auto& d : kCatalog) {
        doc.push_back({{"kind", to_string(d.kind)},
                       {"property", d.property},
                       {"technique", d.refactoring_technique},
                       {"cpu_direction", to_string(d.cpu_direction)},
                       {"mem_direction", to_string(d.mem_direction)}});
    }
    return doc.dump(2) + "\n";
}

}  // namespace smellwatt
