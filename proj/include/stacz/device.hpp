#pragma once

#include <limits>

namespace stacz {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Internal units: angular frequency in rad/ns, time in ns.
constexpr double ghz_to_rad_per_ns(double ghz) { return kTwoPi * ghz; }
constexpr double mhz_to_rad_per_ns(double mhz) { return kTwoPi * mhz * 1e-3; }
constexpr double rad_per_ns_to_ghz(double w) { return w / kTwoPi; }
constexpr double rad_per_ns_to_mhz(double w) { return w / kTwoPi * 1e3; }
constexpr double us_to_ns(double us) { return us * 1e3; }
constexpr double ns_to_us(double ns) { return ns * 1e-3; }

inline constexpr double kNoDecay = std::numeric_limits<double>::infinity();

struct DeviceParams {
  double omega_qA = 0.0;       // idle frequency of Q_A
  double omega_qB = 0.0;
  double anharmonicity = 0.0;  // negative for transmons
  double g = 0.0;
  double t1_a = kNoDecay;
  double t1_b = kNoDecay;
  double t2star_a = kNoDecay;
  double t2star_b = kNoDecay;
};

/// Two-Xmon device: 5.52 / 4.97 GHz, -240 MHz, g = 9.19 MHz,
/// T1 = 14.4 / 12.9 us, T2* = 12.3 / 3.5 us.
DeviceParams default_device();

/// Same device with the decoherence times removed.
DeviceParams closed_system(DeviceParams params);

/// Throws ConfigError naming the first violated constraint.
void validate(const DeviceParams& params);

/// Resonance of |11> with |20>: omega_qB - anharmonicity.
inline double resonance_frequency(const DeviceParams& p) { return p.omega_qB - p.anharmonicity; }

}  // namespace stacz
