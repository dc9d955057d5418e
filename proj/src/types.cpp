#include "stgen/types.hpp"

#include "stgen/text.hpp"

namespace stgen {

ParamDirection param_direction_from_string(std::string_view s) {
    const std::string u = text::to_upper(text::trim(s));
    if (u == "IN") return ParamDirection::In;
    if (u == "OUT") return ParamDirection::Out;
    if (u == "INOUT" || u == "IN_OUT") return ParamDirection::InOut;
    throw std::invalid_argument("invalid direction '" + std::string(s) +
                                "' (expected IN, OUT or INOUT)");
}

std::string to_string(ParamDirection d) {
    switch (d) {
        case ParamDirection::In: return "IN";
        case ParamDirection::Out: return "OUT";
        case ParamDirection::InOut: return "INOUT";
    }
    return "IN";
}

UnitKind unit_kind_from_string(std::string_view s) {
    const std::string u = text::to_upper(text::trim(s));
    if (u == "FUNCTION_BLOCK") return UnitKind::FunctionBlock;
    if (u == "FUNCTION") return UnitKind::Function;
    throw std::invalid_argument("invalid unit kind '" + std::string(s) +
                                "' (expected FUNCTION_BLOCK or FUNCTION)");
}

std::string to_string(UnitKind k) {
    return k == UnitKind::FunctionBlock ? "FUNCTION_BLOCK" : "FUNCTION";
}

std::string Task::io_summary() const {
    std::string out;
    for (const auto& p : io) {
        out += p.name + " : " + p.type_name + " (" + to_string(p.direction) + ")";
        if (!p.description.empty()) out += " - " + p.description;
        out += "\n";
    }
    return out;
}

bool Plan::empty() const {
    if (kind == PlanKind::Linear) return steps.empty();
    return states.empty() && transitions.empty();
}

std::vector<std::string> Plan::query_texts() const {
    if (kind == PlanKind::Linear) return steps;
    std::vector<std::string> out;
    for (const auto& s : states) out.push_back(s.description.empty() ? s.name : s.description);
    for (const auto& t : transitions) out.push_back(t.condition);
    return out;
}

std::string Plan::headline() const {
    if (empty()) return "";
    if (kind == PlanKind::Linear) return steps.front();
    std::vector<std::string> names;
    names.reserve(states.size());
    for (const auto& s : states) names.push_back(s.name);
    return "states: " + text::join(names, ", ");
}

std::string Plan::render() const {
    std::string out;
    if (kind == PlanKind::Linear) {
        for (size_t i = 0; i < steps.size(); ++i)
            out += std::to_string(i + 1) + ". " + steps[i] + "\n";
        return out;
    }
    out += "States:\n";
    for (const auto& s : states) out += "- " + s.name + ": " + s.description + "\n";
    out += "Transitions:\n";
    for (const auto& t : transitions)
        out += "- " + t.from_state + " -> " + t.to_state + " when " + t.condition + "\n";
    return out;
}

void to_json(nlohmann::json& j, const ParamSpec& p) {
    j = nlohmann::json{{"name", p.name},
                       {"type", p.type_name},
                       {"direction", to_string(p.direction)},
                       {"description", p.description}};
}

void from_json(const nlohmann::json& j, ParamSpec& p) {
    p.name = j.at("name").get<std::string>();
    p.type_name = j.at("type").get<std::string>();
    p.direction = param_direction_from_string(j.at("direction").get<std::string>());
    p.description = j.value("description", "");
}

void to_json(nlohmann::json& j, const Task& t) {
    j = nlohmann::json{{"name", t.name},
                       {"req", t.req},
                       {"io", t.io},
                       {"unit_kind", to_string(t.unit_kind)},
                       {"vendor_target", t.vendor_target}};
}

void from_json(const nlohmann::json& j, Task& t) {
    t.name = j.at("name").get<std::string>();
    t.req = j.at("req").get<std::string>();
    t.io = j.value("io", std::vector<ParamSpec>{});
    t.unit_kind = unit_kind_from_string(j.value("unit_kind", "FUNCTION_BLOCK"));
    t.vendor_target = j.value("vendor_target", "");
}

void to_json(nlohmann::json& j, const StateSpec& s) {
    j = nlohmann::json{{"name", s.name}, {"description", s.description}};
}

void from_json(const nlohmann::json& j, StateSpec& s) {
    s.name = j.at("name").get<std::string>();
    s.description = j.value("description", "");
}

void to_json(nlohmann::json& j, const TransitionSpec& t) {
    j = nlohmann::json{{"from", t.from_state}, {"to", t.to_state}, {"condition", t.condition}};
}

void from_json(const nlohmann::json& j, TransitionSpec& t) {
    t.from_state = j.at("from").get<std::string>();
    t.to_state = j.at("to").get<std::string>();
    t.condition = j.value("condition", "");
}

void to_json(nlohmann::json& j, const Plan& p) {
    if (p.kind == PlanKind::Linear) {
        j = nlohmann::json{{"kind", "LINEAR"}, {"steps", p.steps}};
    } else {
        j = nlohmann::json{{"kind", "STATE_MACHINE"},
                           {"states", p.states},
                           {"transitions", p.transitions}};
    }
}

void from_json(const nlohmann::json& j, Plan& p) {
    // Legacy case records may carry the plan as one free-text blob.
    if (j.is_string()) {
        p.kind = PlanKind::Linear;
        p.steps.clear();
        const std::string blob = text::trim(j.get<std::string>());
        if (!blob.empty()) p.steps.push_back(blob);
        return;
    }
    const std::string kind = text::to_upper(j.value("kind", "LINEAR"));
    if (kind == "STATE_MACHINE") {
        p.kind = PlanKind::StateMachine;
        p.states = j.value("states", std::vector<StateSpec>{});
        p.transitions = j.value("transitions", std::vector<TransitionSpec>{});
    } else {
        p.kind = PlanKind::Linear;
        p.steps = j.value("steps", std::vector<std::string>{});
    }
}

}  // namespace stgen
