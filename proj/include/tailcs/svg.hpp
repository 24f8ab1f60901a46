#pragma once

#include <string>

#include "tailcs/experiments.hpp"

namespace tailcs {

// Static polyline chart of success rate vs sparsity, one curve per method.
std::string svg_success_chart(const SweepTable& table);

}  // namespace tailcs
