#pragma once

#include <string>

#include "ropt/scenario.hpp"

// Shared fixture environments. S1: no demand uncertainty. S2: demand
// uncertainty with a top gap D*(2)=1 > D_low(2)=0.5. S3: demand uncertainty
// with matching demands at the top, where the floor mechanism is not optimal.

inline std::string fixture_path(const std::string& name) {
    return std::string(ROPT_SOURCE_DIR) + "/fixtures/" + name;
}

inline ropt::Environment load_fixture(const std::string& name) {
    return ropt::parse_scenario_file(fixture_path(name)).build_environment();
}

inline ropt::Environment s1() { return load_fixture("s1.json"); }
inline ropt::Environment s2() { return load_fixture("s2.json"); }
inline ropt::Environment s3() { return load_fixture("s3.json"); }

// S1 plus one extra admissible demand D(p) = 3.2 - p.
inline ropt::Environment s1_with_extra_demand() {
    auto sc = ropt::parse_scenario_file(fixture_path("s1.json"));
    sc.extra_demand_knots.push_back({{0.0, 3.2}, {3.2, 0.0}});
    return sc.build_environment();
}
