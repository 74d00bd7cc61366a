// SPDX-License-Identifier: Apache-2.0
#include "hda/pulse.hpp"

#include <cmath>

#include "hda/errors.hpp"
#include "hda/types.hpp"

namespace hda {

namespace {

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(kPi * x) / (kPi * x); }

}  // namespace

double pulse_autocorrelation(double t, double beta, double Tc) {
    if (!(beta >= 0.0 && beta <= 1.0)) throw DomainError("roll-off must be in [0, 1]");
    if (!(Tc > 0.0)) throw DomainError("chip duration must be > 0");
    const double x = t / Tc;
    const double d = 2.0 * beta * x;
    if (beta > 0.0 && std::abs(std::abs(d) - 1.0) < 1e-9)
        return kPi / 4.0 * sinc(1.0 / (2.0 * beta));
    return sinc(x) * std::cos(kPi * beta * x) / (1.0 - d * d);
}

}  // namespace hda
