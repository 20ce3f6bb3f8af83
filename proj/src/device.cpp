#include "stacz/device.hpp"

#include "stacz/basis.hpp"
#include "stacz/errors.hpp"

#include <cmath>
#include <string>

namespace stacz {

std::string_view basis_label(int i) {
  static constexpr std::string_view kLabels[kDim] = {"00", "01", "02", "10", "11",
                                                     "12", "20", "21", "22"};
  return kLabels[i];
}

DeviceParams default_device() {
  DeviceParams p;
  p.omega_qA = ghz_to_rad_per_ns(5.52);
  p.omega_qB = ghz_to_rad_per_ns(4.97);
  p.anharmonicity = mhz_to_rad_per_ns(-240.0);
  p.g = mhz_to_rad_per_ns(9.19);
  p.t1_a = us_to_ns(14.4);
  p.t1_b = us_to_ns(12.9);
  p.t2star_a = us_to_ns(12.3);
  p.t2star_b = us_to_ns(3.5);
  return p;
}

DeviceParams closed_system(DeviceParams params) {
  params.t1_a = params.t1_b = kNoDecay;
  params.t2star_a = params.t2star_b = kNoDecay;
  return params;
}

void validate(const DeviceParams& p) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("invalid device parameters: ") + what);
  };
  require(std::isfinite(p.omega_qA) && std::isfinite(p.omega_qB), "qubit frequencies must be finite");
  require(p.g > 0.0, "coupling g must be positive");
  require(p.anharmonicity < 0.0, "anharmonicity must be negative");
  require(p.omega_qA > p.omega_qB, "omega_qA must exceed omega_qB");
  require(p.t1_a > 0.0 && p.t1_b > 0.0, "T1 must be positive");
  require(p.t2star_a > 0.0 && p.t2star_b > 0.0, "T2* must be positive");
  require(p.t2star_a <= 2.0 * p.t1_a || std::isinf(p.t1_a), "T2* of Q_A exceeds 2 T1");
  require(p.t2star_b <= 2.0 * p.t1_b || std::isinf(p.t1_b), "T2* of Q_B exceeds 2 T1");
}

}  // namespace stacz
