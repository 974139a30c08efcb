#pragma once

#include <cmath>

namespace flmob {

inline double dbm_to_linear_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

inline double linear_mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

inline constexpr double kHzPerMHz = 1.0e6;

}  // namespace flmob
