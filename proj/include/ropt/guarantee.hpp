#pragma once

#include "ropt/mechanism.hpp"
#include "ropt/report.hpp"

namespace ropt {

/// Worst-case welfare profile W_low(theta, q) = V_low(q(theta)) - theta
/// q(theta) - u(theta) evaluated on the mechanism's grid. The mechanism's
/// guarantee is the profile minimum.
struct GuaranteeProfile {
    std::vector<double> grid;
    std::vector<double> values;
    double minimum = 0.0;
    double argmin_max = 0.0;  // largest grid theta attaining the minimum
};

enum class MajorizationForm { Pointwise, Dwl, Endpoint };

GuaranteeProfile worst_case_profile(const QuantityMechanism& mech, const Environment& env);

/// G* = V_low(q_l) - theta_high * q_l.
double max_guarantee(const Environment& env);

/// Short-list membership: zero top rent plus the per-theta robustness
/// constraint W_low >= G*. With `crossing_fast_path` the profile is scanned
/// only at the endpoints and at below-to-above crossings of q vs D_low; the
/// result must agree with the full scan (property-tested).
VerificationReport shortlist_check(const QuantityMechanism& mech, const Environment& env,
                                   double tol = 1e-9, bool crossing_fast_path = false);

/// The three equivalent majorization formulations of the robustness
/// constraint set, evaluated on the schedule's grid.
VerificationReport majorization_check(const QuantitySchedule& schedule, const Environment& env,
                                      MajorizationForm form, double tol = 1e-9);

/// q >= q_l everywhere and q(theta_high) = q_l.
VerificationReport quantity_bound_check(const QuantitySchedule& schedule, const Environment& env,
                                        double tol = 1e-9);

}  // namespace ropt
