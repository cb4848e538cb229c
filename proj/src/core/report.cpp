#include "report.hpp"

#include "io.hpp"

namespace bhmap {

std::string InequalityReport::to_json() const {
    std::string s = "{";
    s += "\"name\": \"" + name + "\", ";
    s += "\"fraction\": " + fmt17(fraction) + ", ";
    s += "\"worst_margin\": " + fmt17(worst_margin) + ", ";
    s += "\"empirical_constant\": " + fmt17(empirical_constant) + ", ";
    s += "\"population\": " + std::to_string(population) + ", ";
    s += "\"tolerance\": " + fmt17(tolerance) + ", ";
    s += "\"vacuous\": " + std::string(vacuous ? "true" : "false") + ", ";
    s += "\"hypothesis_met\": " + std::string(hypothesis_met ? "true" : "false");
    if (!note.empty()) s += ", \"note\": \"" + note + "\"";
    s += "}";
    return s;
}

} // namespace bhmap
