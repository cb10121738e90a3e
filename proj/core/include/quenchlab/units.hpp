// Copyright 2026 the quenchlab developers.
// SPDX-License-Identifier: Apache-2.0

#ifndef QUENCHLAB_UNITS_HPP
#define QUENCHLAB_UNITS_HPP

#include <numbers>

namespace quenchlab {

// Internal units: hbar = 1, energies in units of the mean nearest-neighbor
// hopping J1, time in 1/J1. The device reference value is J1 = 2*pi x 11.5 MHz.
struct DeviceUnits {
  double j1_mhz = 11.5;  // J1 / (2*pi), in MHz

  /// Angular J1 in rad/us.
  double j1_rad_per_us() const { return 2.0 * std::numbers::pi * j1_mhz; }

  /// Frequency given as f MHz (meaning 2*pi*f angular) -> energy in J1 units.
  double energy_from_mhz(double f_mhz) const { return f_mhz / j1_mhz; }
  double mhz_from_energy(double e) const { return e * j1_mhz; }

  /// Wall time in ns -> dimensionless J1*t.
  double time_from_ns(double t_ns) const { return j1_rad_per_us() * 1e-3 * t_ns; }
  double ns_from_time(double jt) const { return jt / (j1_rad_per_us() * 1e-3); }

  /// Rate 1/T with T in us -> rate in units of J1 (e.g. decay Gamma = 1/T1).
  double rate_from_inverse_us(double t_us) const { return 1.0 / (t_us * j1_rad_per_us()); }
};

}  // namespace quenchlab

#endif
