// Copyright 2026 The dtomo authors
// SPDX-License-Identifier: Apache-2.0

#include "dtomo/calibration.hpp"

#include <cmath>
#include <string>

#include "dtomo/errors.hpp"

namespace dtomo {

void CalibrationConstants::validate() const {
  if (!(eta_cal > 0.0 && eta_cal <= 1.0)) {
    throw DomainError("calibration efficiency eta_cal must lie in (0, 1], got " +
                      std::to_string(eta_cal));
  }
  if (!(eta_cal_sigma >= 0.0)) {
    throw DomainError("eta_cal_sigma must be non-negative");
  }
  if (!(dark_prob_cal >= 0.0)) {
    throw DomainError("dark_prob_cal must be non-negative");
  }
}

double calibrate_mean_photon(double p_click, const CalibrationConstants& calib) {
  calib.validate();
  if (!(p_click >= 0.0)) {
    throw DomainError("click probability must be non-negative, got " + std::to_string(p_click));
  }
  if (!(p_click < 1.0)) {
    throw DomainError("click probability saturated (p >= 1), mean photon number undefined");
  }
  // -log1p(-p) is exact at p = 0 and accurate for small p.
  return -std::log1p(-p_click) / calib.eta_cal;
}

}  // namespace dtomo
