// Copyright 2026 The dtomo authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "dtomo/calibration.hpp"
#include "dtomo/config.hpp"
#include "dtomo/counts.hpp"
#include "dtomo/errors.hpp"
#include "dtomo/io.hpp"
#include "dtomo/merit.hpp"
#include "dtomo/probes.hpp"
#include "dtomo/simplex.hpp"
#include "dtomo/simulator.hpp"
#include "dtomo/solver.hpp"
#include "dtomo/version.hpp"
#include "dtomo/wigner.hpp"
