#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace smellwatt {

/// The 16 studied smell kinds. The enumerator order is the canonical
/// catalog order used for every listing (plans, reports, feature names).
enum class SmellKind : int {
    CyclicDependency = 0,
    GodMethod,
    SpaghettiCode,
    ShotgunSurgery,
    GodClass,
    LazyClass,
    RefusedBequest,
    TemporaryField,
    SpeculativeGenerality,
    DeadCode,
    DuplicateCode,
    LongParameter,
    LongStatement,
    PrimitiveObsession,
    OrphanVariable,
    Middleman,
};

inline constexpr std::size_t kSmellKindCount = 16;

/// Ordered IMPROVES < MIXED-UNKNOWN < WORSENS so that std::max picks the
/// more pessimistic direction.
enum class ImpactDirection : int {
    Improves = 0,
    MixedUnknown = 1,
    Worsens = 2,
};

enum class Resource { Cpu, Memory };

struct SmellDescriptor {
    SmellKind kind;
    std::string_view property;
    std::string_view refactoring_technique;
    ImpactDirection cpu_direction;
    ImpactDirection mem_direction;
};

const std::array<SmellKind, kSmellKindCount>& all_smell_kinds() noexcept;

const SmellDescriptor& catalog_lookup(SmellKind kind) noexcept;

ImpactDirection expected_direction(SmellKind kind, Resource resource) noexcept;

std::string_view to_string(SmellKind kind) noexcept;
std::string_view to_string(ImpactDirection direction) noexcept;
std::string_view to_string(Resource resource) noexcept;

std::optional<SmellKind> parse_smell_kind(std::string_view text) noexcept;
std::optional<ImpactDirection> parse_direction(std::string_view text) noexcept;
std::optional<Resource> parse_resource(std::string_view text) noexcept;

/// Catalog as a JSON array, one object per kind in catalog order.
std::string catalog_json();

}  // namespace smellwatt
