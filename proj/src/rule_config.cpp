#include <CLI11.hpp>
#include <sstream>

#include "smellwatt/detector.hpp"
#include "smellwatt/error.hpp"
#include "smellwatt/text.hpp"

namespace smellwatt {

const std::vector<std::pair<std::string_view, double RuleConfig::*>>& RuleConfig::keys() {
    static const std::vector<std::pair<std::string_view, double RuleConfig::*>> k{
        {"long_parameter_max", &RuleConfig::long_parameter_max},
        {"god_method_nloc", &RuleConfig::god_method_nloc},
        {"god_class_nloc", &RuleConfig::god_class_nloc},
        {"lazy_class_nloc", &RuleConfig::lazy_class_nloc},
        {"lazy_class_wmc", &RuleConfig::lazy_class_wmc},
        {"duplicate_window", &RuleConfig::duplicate_window},
        {"shotgun_callers", &RuleConfig::shotgun_callers},
        {"long_statement_tokens", &RuleConfig::long_statement_tokens},
        {"long_statement_cases", &RuleConfig::long_statement_cases},
        {"spaghetti_nloc", &RuleConfig::spaghetti_nloc},
        {"spaghetti_complexity", &RuleConfig::spaghetti_complexity},
        {"refused_bequest_min_inherited", &RuleConfig::refused_bequest_min_inherited},
        {"middleman_min_methods", &RuleConfig::middleman_min_methods},
        {"primitive_prefix_fields", &RuleConfig::primitive_prefix_fields},
        {"orphan_min_references", &RuleConfig::orphan_min_references},
    };
    return k;
}

void validate_rule_config(const RuleConfig& config) {
    for (const auto& [name, member] : RuleConfig::keys())
        if (!(config.*member > 0.0))
            throw Error(ErrorCode::BadRuleConfig, std::string(name) + " must be positive");
}

RuleConfig parse_rule_config(std::string_view content) {
    std::vector<CLI::ConfigItem> items;
    try {
        std::istringstream in{std::string(content)};
        items = CLI::ConfigTOML().from_config(in);
    } catch (const CLI::Error& e) {
        throw Error(ErrorCode::BadRuleConfig, e.what());
    }
    RuleConfig config;
    for (const auto& item : items) {
        std::string key = item.name;
        for (auto it = item.parents.rbegin(); it != item.parents.rend(); ++it)
            if (*it != "default") key = *it + "." + key;
        if (key == "++" || key == "--") continue;  // section markers
        const auto& keys = RuleConfig::keys();
        const auto found = std::find_if(keys.begin(), keys.end(), [&](const auto& k) { return k.first == key; });
        if (found == keys.end()) throw Error(ErrorCode::BadRuleConfig, "unknown rule key '" + key + "'");
        if (item.inputs.size() != 1) throw Error(ErrorCode::BadRuleConfig, key + " needs one number");
        try {
            config.*(found->second) = text::parse_double(item.inputs.front());
        } catch (const Error&) {
            throw Error(ErrorCode::BadRuleConfig, key + " is not a number: '" + item.inputs.front() + "'");
        }
    }
    validate_rule_config(config);
    return config;
}

RuleConfig load_rule_config(const std::filesystem::path& path) { return parse_rule_config(text::read_file(path)); }

}  // namespace smellwatt
