#pragma once

#include "analysis.hpp"
#include "montecarlo.hpp"
#include "numerics.hpp"
#include "pam.hpp"
#include "rng.hpp"
#include "scheme.hpp"

namespace skmod {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace skmod
