#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "hsk/core.hpp"

namespace hsk {

// One default value in a scenario's parameter table. `origin` records where
// the number comes from: "literature" (stated in the source material),
// "chosen" (fixed here because the source leaves it open), or "structural"
// (forced by the construction itself).
struct ScenarioParam {
    double value = 0.0;
    std::string origin;
    std::string note;
};

struct ScenarioInfo {
    std::string name;
    std::string anchor;       // short label for the construction being reproduced
    std::string description;
    std::map<std::string, ScenarioParam> params;
    bool has_reference = false;
};

// A ready-to-run closed loop: system, initial condition, recommended solver
// settings, and naming metadata for export.
struct BuiltScenario {
    HybridSystem system;
    Vec x0;
    SolverConfig config;
    std::vector<std::string> state_names;
    std::map<std::string, double> params;  // resolved values after overrides
    ScenarioInfo info;
};

struct UnknownScenario : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvalidOverride : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NoCounterpart : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<ScenarioInfo> list_scenarios();

BuiltScenario build_scenario(const std::string& name,
                             const std::map<std::string, double>& overrides = {});

// Averaged / target counterpart used for closeness comparisons. Throws
// NoCounterpart for scenarios without one.
BuiltScenario build_reference(const std::string& name,
                              const std::map<std::string, double>& overrides = {});

// Simulates the counterpart at its recommended settings.
HybridArc reference_arc(const std::string& name,
                        const std::map<std::string, double>& overrides = {});

// Coordinates meaningful when comparing a scenario against its counterpart.
// Empty means "all coordinates".
std::vector<int> reference_mask(const std::string& name);

}  // namespace hsk
