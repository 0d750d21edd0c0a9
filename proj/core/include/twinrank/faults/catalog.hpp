#pragma once

#include <vector>

#include "twinrank/faults/fault_spec.hpp"

namespace twinrank::faults {

inline constexpr int kCatalogSize = 64;

/// The 64 matmul workfault classes with their predicted behaviour.
std::vector<Scenario> catalog();

/// Throws std::out_of_range for ids outside 1..64.
Scenario scenario(int id);

}  // namespace twinrank::faults
