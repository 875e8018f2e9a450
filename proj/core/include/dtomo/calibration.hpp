// Copyright 2026 The dtomo authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace dtomo {

/// Properties of the calibrated reference detector used to determine the
/// mean photon numbers of the probe states.
struct CalibrationConstants {
  double eta_cal = 0.83;        // detection efficiency, in (0, 1]
  double eta_cal_sigma = 0.05;  // relative 1-sigma uncertainty on eta_cal
  double dark_prob_cal = 0.0;   // dark-count probability per pulse (informational)

  void validate() const;
};

/// Mean photon number per pulse inferred from the click probability of the
/// calibration detector: n = -ln(1 - p_click) / eta_cal.
///
/// p_click must lie in [0, 1); inputs are expected to be pre-corrected for
/// calibration-detector dark counts by the caller.
double calibrate_mean_photon(double p_click, const CalibrationConstants& calib);

}  // namespace dtomo
