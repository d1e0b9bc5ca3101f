#pragma once

// Reference implementations for cross-checking the production flux solver.
// Kept deliberately separate from the library: a heavily damped fixed-point
// scheme run to a fixed iteration count, and a bisection solution of the
// neutral system. Agreement between unlike schemes is the point, so nothing
// here may include library headers.

#include <algorithm>
#include <cmath>

namespace oracle {

constexpr double kKappa = 0.4;
constexpr double kG = 9.81;
constexpr double kCp = 1004.67;
constexpr double kRdry = 287.05;
constexpr double kNu = 1.5e-5;
constexpr double kZetaMin = -200.0;
constexpr double kZetaMax = 10.0;

inline double psi_m(double z) {
  if (z >= 0.0) return -5.0 * z;
  const double x = std::pow(1.0 - 16.0 * z, 0.25);
  return 2.0 * std::log((1.0 + x) / 2.0) + std::log((1.0 + x * x) / 2.0) -
         2.0 * std::atan(x) + 2.0 * std::atan(1.0);
}

inline double psi_h(double z) {
  if (z >= 0.0) return -5.0 * z;
  const double y = std::sqrt(1.0 - 16.0 * z);
  return 2.0 * std::log((1.0 + y) / 2.0);
}

inline double qsat(double t, double p) {
  const double es = 6.1121 * std::exp(17.502 * t / (240.97 + t));
  return 0.622 * es / (p - 0.378 * es);
}

inline double charnock(double u10n) {
  return std::max(0.0017 * u10n - 0.005, 0.001);
}

struct Result {
  double ustar, tau, h, e, u10n;
};

// Damped Picard iteration, fixed 300 sweeps with 0.5 blending on the three
// scales. Slow but stubbornly stable; no convergence test at all.
inline Result solve_damped(double u, double zu, double ta, double zt, double ts,
                           double p, double qa, int iters = 300) {
  const double ueff = std::max(u, 0.1);
  const double tv = (ta + 273.15) * (1.0 + 0.61 * qa);
  const double qsea = 0.98 * qsat(ts, p);
  double ustar = kKappa * ueff / std::log(zu / 1e-4);
  double u10n = ueff;
  double l_inv = 0.0;
  double tstar = 0.0;
  double qstar = 0.0;
  double z0 = 1e-4;
  for (int it = 0; it < iters; ++it) {
    const double alpha = charnock(std::max(u10n, 0.0));
    z0 = alpha * ustar * ustar / kG + 0.11 * kNu / ustar;
    const double rr = ustar * z0 / kNu;
    const double z0t = std::min(1.15e-4, 5.5e-5 * std::pow(rr, -0.6));
    const double zeta_u = std::clamp(zu * l_inv, kZetaMin, kZetaMax);
    const double zeta_t = std::clamp(zt * l_inv, kZetaMin, kZetaMax);
    const double un = kKappa * ueff / (std::log(zu / z0) - psi_m(zeta_u));
    const double den = std::log(zt / z0t) - psi_h(zeta_t);
    const double tn = kKappa * (ta - ts) / den;
    const double qn = kKappa * (qa - qsea) / den;
    ustar = 0.5 * ustar + 0.5 * un;
    tstar = 0.5 * tstar + 0.5 * tn;
    qstar = 0.5 * qstar + 0.5 * qn;
    const double tvstar =
        tstar * (1.0 + 0.61 * qa) + 0.61 * (ta + 273.15) * qstar;
    l_inv = kKappa * kG * tvstar / (ustar * ustar * tv);
    u10n = ustar / kKappa * std::log(10.0 / z0);
  }
  const double rho = 100.0 * p / (kRdry * tv);
  const double lv = (2.501 - 0.00237 * ts) * 1e6;
  return Result{ustar, rho * ustar * ustar, -rho * kCp * ustar * tstar,
                -rho * lv * ustar * qstar, u10n};
}

// Neutral closure: for a trial ustar, settle the z0/u10n pair by direct
// substitution, then report the log-law residual at the measurement height.
inline double neutral_residual(double ustar, double ueff, double z) {
  double u10n = ueff;
  double z0 = 1e-4;
  for (int i = 0; i < 200; ++i) {
    z0 = charnock(std::max(u10n, 0.0)) * ustar * ustar / kG + 0.11 * kNu / ustar;
    u10n = ustar / kKappa * std::log(10.0 / z0);
  }
  return kKappa * ueff / std::log(z / z0) - ustar;
}

// Bisection on the neutral residual; returns the 10 m neutral wind implied
// by the converged friction velocity.
inline double neutral_u10n_bisect(double u, double z) {
  const double ueff = std::max(u, 0.1);
  double lo = 1e-5;
  double hi = 5.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (neutral_residual(mid, ueff, z) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double ustar = 0.5 * (lo + hi);
  double u10n = ueff;
  double z0 = 1e-4;
  for (int i = 0; i < 200; ++i) {
    z0 = charnock(std::max(u10n, 0.0)) * ustar * ustar / kG + 0.11 * kNu / ustar;
    u10n = ustar / kKappa * std::log(10.0 / z0);
  }
  return u10n;
}

}  // namespace oracle
