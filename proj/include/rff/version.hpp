// Copyright (c) 2026 the rff developers
// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace rff {

inline constexpr const char* version_string = "rff 0.1.0";

}  // namespace rff
