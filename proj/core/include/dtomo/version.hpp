// Copyright 2026 The dtomo authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace dtomo {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace dtomo
