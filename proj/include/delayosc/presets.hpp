#pragma once

#include <string>
#include <vector>

#include "delayosc/cauchy.hpp"

namespace delayosc {

struct Preset {
    std::string name;
    std::string phi;
    std::string f;
    Problem problem;
};

/// The default verification set: classical reduction, pure delay, mixed
/// frequencies with a nontrivial history, a forced problem, and a forced
/// pure-ish case with polynomial history. Horizons cover [0, 5*tau] with
/// one interval to spare.
inline std::vector<Preset> canned_problems() {
    auto make = [](std::string name, double w1, double w2, double tau, int intervals,
                   std::string phi, std::string f) {
        Preset p;
        p.name = std::move(name);
        p.phi = std::move(phi);
        p.f = std::move(f);
        p.problem.omega1 = w1;
        p.problem.omega2 = w2;
        p.problem.tau = tau;
        p.problem.intervals = intervals;
        p.problem.history = Expression::parse(p.phi);
        p.problem.forcing = Expression::parse(p.f);
        return p;
    };
    std::vector<Preset> out;
    out.push_back(make("classical", 1.0, 0.0, 1.0, 6, "1", "0"));
    out.push_back(make("pure-delay", 0.0, 1.0, 1.0, 6, "1", "0"));
    out.push_back(make("mixed-history", 1.0, 0.5, 1.0, 6, "sin(t)", "0"));
    out.push_back(make("forced", 1.0, 0.5, 1.0, 6, "sin(t)", "cos(2*t)"));
    out.push_back(make("forced-short-delay", 0.5, 1.5, 0.5, 6, "1 - t^2/2", "exp(-t)"));
    return out;
}

}  // namespace delayosc
