#include "scalelab/selection.hpp"

#include "scalelab/error.hpp"

namespace scalelab {

using nlohmann::json;

std::string_view to_string(Role role) {
    switch (role) {
        case Role::Anonymous: return "ANONYMOUS";
        case Role::Contributor: return "CONTRIBUTOR";
        case Role::Admin: return "ADMIN";
    }
    return "ANONYMOUS";
}

Role parse_role(std::string_view text) {
    if (text == "ANONYMOUS" || text == "anonymous") return Role::Anonymous;
    if (text == "CONTRIBUTOR" || text == "contributor") return Role::Contributor;
    if (text == "ADMIN" || text == "admin") return Role::Admin;
    throw Error(ErrorCode::ValidationError, "unknown role '" + std::string(text) + "'");
}

bool AccessContext::can_see(const Configuration& c) const {
    switch (role) {
        case Role::Admin: return true;
        case Role::Contributor:
            return c.visibility != Visibility::Private || c.contributor == contributor;
        case Role::Anonymous: return c.visibility == Visibility::Public;
    }
    return false;
}

bool DataScope::admits(const Configuration& c) const {
    if (!contributor) return true;
    if (c.contributor == *contributor) return true;
    return include_public && c.visibility == Visibility::Public;
}

std::string_view to_string(Dimension d) {
    switch (d) {
        case Dimension::Approach: return "APPROACH";
        case Dimension::Machine: return "MACHINE";
        case Dimension::Environment: return "ENVIRONMENT";
    }
    return "APPROACH";
}

Dimension parse_dimension(std::string_view text) {
    for (Dimension d : kAllDimensions) {
        if (text == to_string(d)) return d;
    }
    throw Error(ErrorCode::ValidationError, "unknown basis '" + std::string(text) + "'");
}

std::vector<Dimension> fixed_dimensions(Dimension basis) {
    std::vector<Dimension> out;
    for (Dimension d : kAllDimensions) {
        if (d != basis) out.push_back(d);
    }
    return out;
}

std::string_view to_string(SelectionStep step) {
    switch (step) {
        case SelectionStep::Category: return "category";
        case SelectionStep::Problem: return "problem";
        case SelectionStep::MemoryModel: return "memory_model";
        case SelectionStep::Basis: return "basis";
        case SelectionStep::BasisInstances: return "basis_instances";
        case SelectionStep::FixedChoice: return "fixed_choice";
        case SelectionStep::Complete: return "complete";
    }
    return "category";
}

void to_json(json& j, const FilterSelection& s) {
    j = json::object();
    if (s.category_id) j["category_id"] = *s.category_id;
    if (s.problem_id) j["problem_id"] = *s.problem_id;
    if (s.memory_model) j["memory_model"] = to_string(*s.memory_model);
    if (s.basis) j["basis"] = to_string(*s.basis);
    j["basis_instance_ids"] = s.basis_instance_ids;
    json fixed = json::object();
    for (const auto& [dim, id] : s.fixed_choices) fixed[std::string(to_string(dim))] = id;
    j["fixed_choices"] = std::move(fixed);
    j["timing_kind"] = to_string(s.timing_kind);
}

void from_json(const json& j, FilterSelection& s) {
    if (!j.is_object()) throw Error(ErrorCode::ValidationError, "selection must be an object");
    static const char* const known[] = {"category_id",    "problem_id",    "memory_model", "basis",
                                        "basis_instance_ids", "fixed_choices", "timing_kind"};
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) throw Error(ErrorCode::ValidationError, "unknown selection field '" + key + "'");
    }
    s = FilterSelection{};
    try {
        if (j.contains("category_id") && !j["category_id"].is_null()) s.category_id = j["category_id"].get<EntityId>();
        if (j.contains("problem_id") && !j["problem_id"].is_null()) s.problem_id = j["problem_id"].get<EntityId>();
        if (j.contains("memory_model") && !j["memory_model"].is_null())
            s.memory_model = parse_memory_model(j["memory_model"].get<std::string>());
        if (j.contains("basis") && !j["basis"].is_null()) s.basis = parse_dimension(j["basis"].get<std::string>());
        if (j.contains("basis_instance_ids")) s.basis_instance_ids = j["basis_instance_ids"].get<std::vector<EntityId>>();
        if (j.contains("fixed_choices")) {
            for (const auto& [key, value] : j["fixed_choices"].items()) {
                s.fixed_choices[parse_dimension(key)] = value.get<EntityId>();
            }
        }
        if (j.contains("timing_kind")) s.timing_kind = parse_timing_kind(j["timing_kind"].get<std::string>());
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ValidationError, std::string("malformed selection: ") + e.what());
    }
}

void to_json(json& j, const OptionSet& o) {
    auto options = [](const std::vector<Option>& values) {
        json arr = json::array();
        for (const Option& v : values) arr.push_back(json{{"value", v.value}, {"label", v.label}});
        return arr;
    };
    j = json{{"step", to_string(o.step)}, {"values", options(o.values)}};
    if (o.dimension) j["dimension"] = to_string(*o.dimension);
    j["additional_instances"] = options(o.additional_instances);
}

}  // namespace scalelab
