#pragma once

#include <cmath>

namespace mmcov
{

inline double db_to_linear(double db)
{
  return std::pow(10.0, db / 10.0);
}

inline double linear_to_db(double linear)
{
  return 10.0 * std::log10(linear);
}

inline double dbm_to_watts(double dbm)
{
  return 1e-3 * db_to_linear(dbm);
}

// Path-loss intercept of the LOS tier, -61.4 dB.
inline const double default_beta = db_to_linear(-61.4);

// Thermal noise over 1 GHz (-174 dBm/Hz + 90 dB) plus a 10 dB noise figure.
inline const double default_noise_watts = dbm_to_watts(-174.0 + 90.0 + 10.0);

// NLOS tier: exponent 4, intercept -72 dB.
inline constexpr double default_nlos_alpha = 4.0;
inline const double default_nlos_beta = db_to_linear(-72.0);

} // namespace mmcov
