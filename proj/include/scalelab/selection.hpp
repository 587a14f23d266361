#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "scalelab/entities.hpp"

namespace scalelab {

enum class Role { Anonymous, Contributor, Admin };

std::string_view to_string(Role role);
Role parse_role(std::string_view text);

/// Who is asking. Anonymous viewers only ever see PUBLIC data.
struct AccessContext {
    Role role = Role::Anonymous;
    std::optional<std::string> token;
    std::string contributor;  // identity bound to the token

    static AccessContext anonymous() { return {}; }
    static AccessContext admin() { return {Role::Admin, std::nullopt, "admin"}; }

    bool can_write() const { return role != Role::Anonymous; }
    bool can_see(const Configuration& c) const;
};

/// A comparison basis is one of these; the other two are held fixed.
enum class Dimension { Approach, Machine, Environment };

inline constexpr Dimension kAllDimensions[] = {Dimension::Approach, Dimension::Machine, Dimension::Environment};

std::string_view to_string(Dimension d);
Dimension parse_dimension(std::string_view text);

/// The non-basis dimensions in the order the protocol fixes them.
std::vector<Dimension> fixed_dimensions(Dimension basis);

/// Filter state of the category -> problem -> memory model -> basis -> instances -> fixed choices flow.
/// Unset optionals and empty containers mean "not chosen yet".
struct FilterSelection {
    std::optional<EntityId> category_id;
    std::optional<EntityId> problem_id;
    std::optional<MemoryModel> memory_model;
    std::optional<Dimension> basis;
    std::vector<EntityId> basis_instance_ids;
    std::map<Dimension, EntityId> fixed_choices;
    TimingKind timing_kind = TimingKind::Alg;

    friend bool operator==(const FilterSelection&, const FilterSelection&) = default;
};

void to_json(nlohmann::json& j, const FilterSelection& s);
void from_json(const nlohmann::json& j, FilterSelection& s);

enum class SelectionStep { Category, Problem, MemoryModel, Basis, BasisInstances, FixedChoice, Complete };

std::string_view to_string(SelectionStep step);

struct Option {
    std::string value;  // entity id in decimal, or an enum name
    std::string label;

    friend bool operator==(const Option&, const Option&) = default;
};

struct OptionSet {
    SelectionStep step = SelectionStep::Category;
    std::optional<Dimension> dimension;  // for BasisInstances and FixedChoice
    std::vector<Option> values;
    /// At the first fixed-choice step: further basis instances that can still be added
    /// without making the selection empty.
    std::vector<Option> additional_instances;
};

void to_json(nlohmann::json& j, const OptionSet& o);

/// Restricts a query to one contributor's records, optionally mixing in PUBLIC data.
struct DataScope {
    std::optional<std::string> contributor;
    bool include_public = false;

    bool admits(const Configuration& c) const;
};

}  // namespace scalelab
