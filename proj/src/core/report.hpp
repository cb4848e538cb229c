#pragma once

#include <string>

namespace bhmap {

// Machine-readable outcome of one inequality check. A check never silently
// passes on vacuous data: zero fields set `vacuous` while keeping fraction 1.
struct InequalityReport {
    std::string name;
    double fraction = 1.0;          // satisfied fraction over the population
    double worst_margin = 0.0;      // most negative (lhs - rhs) + tolerance slack seen
    double empirical_constant = 0.0;
    long long population = 0;
    double tolerance = 0.0;
    bool vacuous = false;
    bool hypothesis_met = true;     // e.g. the small-energy condition of eps-regularity
    std::string note;

    std::string to_json() const;
};

} // namespace bhmap
