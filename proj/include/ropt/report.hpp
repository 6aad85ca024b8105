#pragma once

#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

namespace ropt {

/// Outcome of one named constraint/assumption check. `slack` and `grid` are
/// parallel arrays when the check is evaluated pointwise; `binding` lists the
/// grid points whose slack sits at the worst value (within tolerance).
struct CheckResult {
    std::string name;
    bool pass = true;
    double worst_slack = std::numeric_limits<double>::infinity();
    std::vector<double> grid;
    std::vector<double> slack;
    std::vector<double> binding;
    std::string note;

    static CheckResult scalar(std::string name, double slack, double tol) {
        CheckResult r;
        r.name = std::move(name);
        r.worst_slack = slack;
        r.pass = slack >= -tol;
        return r;
    }

    static CheckResult pointwise(std::string name, std::vector<double> grid,
                                 std::vector<double> slack, double tol) {
        CheckResult r;
        r.name = std::move(name);
        r.grid = std::move(grid);
        r.slack = std::move(slack);
        for (double s : r.slack) r.worst_slack = std::min(r.worst_slack, s);
        r.pass = r.worst_slack >= -tol;
        for (std::size_t i = 0; i < r.slack.size(); ++i)
            if (r.slack[i] <= r.worst_slack + tol) r.binding.push_back(r.grid[i]);
        return r;
    }
};

struct VerificationReport {
    std::string subject;
    std::vector<CheckResult> checks;

    bool pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }

    const CheckResult* find(const std::string& name) const {
        for (const auto& c : checks)
            if (c.name == name) return &c;
        return nullptr;
    }

    nlohmann::ordered_json to_json(bool verbose = false) const {
        nlohmann::ordered_json out;
        out["subject"] = subject;
        out["pass"] = pass();
        out["checks"] = nlohmann::ordered_json::array();
        for (const auto& c : checks) {
            nlohmann::ordered_json jc;
            jc["name"] = c.name;
            jc["pass"] = c.pass;
            jc["worst_slack"] = c.worst_slack;
            jc["binding"] = c.binding;
            if (!c.note.empty()) jc["note"] = c.note;
            if (verbose && !c.slack.empty()) {
                jc["grid"] = c.grid;
                jc["slack"] = c.slack;
            }
            out["checks"].push_back(jc);
        }
        return out;
    }
};

}  // namespace ropt
