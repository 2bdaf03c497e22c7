#pragma once

#include <string>

#include "mstn/instance.hpp"
#include "mstn/solve_report.hpp"

namespace mstn {

// 2D rendering of the neighborhoods and the solution tree. Planar
// instances only (CapabilityError otherwise).
std::string render_solution_svg(const Instance& instance, const SolveReport& report);

}  // namespace mstn
