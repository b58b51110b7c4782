// Copyright 2026 gasplan contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <limits>

namespace gasplan {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace gasplan
