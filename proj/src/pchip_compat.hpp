#pragma once

// Boost 1.74's pchip calls isnan unqualified, which only resolves when the
// name is visible at global scope.
#include <cmath>
using std::isnan;

#include <boost/math/interpolators/pchip.hpp>
