#pragma once

#include <boost/multiprecision/float128.hpp>

namespace charged_drop {

/// IEEE quadruple precision (113-bit significand). The two-charge energy
/// landscape is flat to ~1e-18 around its minimum for eps ~ 1e-3, which is
/// below double and extended precision resolution.
using quad = boost::multiprecision::float128;

/// Extended precision used for coarse scans.
using extended = long double;

}  // namespace charged_drop
