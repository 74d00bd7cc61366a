// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace hda {

// Autocorrelation of a unit-energy root-raised-cosine pulse (the raised-cosine
// pulse) at offset t_s, roll-off beta in [0, 1], chip duration Tc_s.
double pulse_autocorrelation(double t_s, double beta, double Tc_s);

}  // namespace hda
