#pragma once
// Domain types shared across the pipeline: I/O parameter specs, tasks,
// and plans. JSON mappings live here so knowledge-base files, benchmark
// task files and pipeline artifacts all use one schema.

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace stgen {

enum class ParamDirection { In, Out, InOut };

ParamDirection param_direction_from_string(std::string_view s);
std::string to_string(ParamDirection d);

struct ParamSpec {
    std::string name;
    std::string type_name;
    ParamDirection direction = ParamDirection::In;
    std::string description;

    bool operator==(const ParamSpec&) const = default;
};

enum class UnitKind { FunctionBlock, Function };

UnitKind unit_kind_from_string(std::string_view s);
std::string to_string(UnitKind k);

// The generation request: what to build, its interface, and for whom.
struct Task {
    std::string name;
    std::string req;
    std::vector<ParamSpec> io;
    UnitKind unit_kind = UnitKind::FunctionBlock;
    std::string vendor_target;

    // One line per I/O variable, used as retrieval text and in prompts.
    std::string io_summary() const;

    bool operator==(const Task&) const = default;
};

enum class PlanKind { Linear, StateMachine };

struct StateSpec {
    std::string name;
    std::string description;
    bool operator==(const StateSpec&) const = default;
};

struct TransitionSpec {
    std::string from_state;
    std::string to_state;
    std::string condition;
    bool operator==(const TransitionSpec&) const = default;
};

// Either a linear step list or a natural-language state machine.
struct Plan {
    PlanKind kind = PlanKind::Linear;
    std::vector<std::string> steps;           // Linear
    std::vector<StateSpec> states;            // StateMachine
    std::vector<TransitionSpec> transitions;  // StateMachine

    bool empty() const;
    // Texts used as retrieval queries: steps, or state descriptions plus
    // transition conditions for state machines.
    std::vector<std::string> query_texts() const;
    // Short one-line summary for rerank prompts.
    std::string headline() const;
    // Multi-line rendering for prompts and case exemplars.
    std::string render() const;

    bool operator==(const Plan&) const = default;
};

void to_json(nlohmann::json& j, const ParamSpec& p);
void from_json(const nlohmann::json& j, ParamSpec& p);
void to_json(nlohmann::json& j, const Task& t);
void from_json(const nlohmann::json& j, Task& t);
void to_json(nlohmann::json& j, const StateSpec& s);
void from_json(const nlohmann::json& j, StateSpec& s);
void to_json(nlohmann::json& j, const TransitionSpec& t);
void from_json(const nlohmann::json& j, TransitionSpec& t);
void to_json(nlohmann::json& j, const Plan& p);
void from_json(const nlohmann::json& j, Plan& p);

}  // namespace stgen
