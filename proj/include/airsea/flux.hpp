#pragma once

// Bulk air-sea fluxes from single-point met-ocean samples.
//
// The solver iterates Monin-Obukhov similarity with Businger-Dyer stability
// functions and a wind-speed dependent Charnock parameter until the friction
// velocity settles. All functions are pure; nothing here touches globals, so
// concurrent calls on distinct samples are safe.

#include <cstdint>
#include <limits>

namespace airsea {

// Physical constants used across the flux computation. SI units.
struct PhysConstants {
  double kappa = 0.4;          // von Karman constant
  double g = 9.81;             // gravitational acceleration [m/s2]
  double cp = 1004.67;         // specific heat of air at constant pressure [J/(kg K)]
  double r_dry = 287.05;       // gas constant of dry air [J/(kg K)]
  double nu_air = 1.5e-5;      // kinematic viscosity of air [m2/s]
  double charnock_m = 0.0017;  // Charnock slope against 10 m neutral wind [s/m]
  double charnock_b = -0.005;  // Charnock intercept
  double z_ref = 10.0;         // reference height for adjusted winds [m]

  // Throws std::domain_error unless every member except charnock_b is > 0.
  void validate() const;
};

// Surface-layer stability classes, encoded exactly as stored in matchup files.
enum class StabilityClass : int { unstable = 0, neutral = 1, stable = 2 };

// Classify stability from the sea-air temperature difference: a sea surface
// warmer than the air is unstable, exact equality is neutral, colder is
// stable. Non-finite input throws std::domain_error.
StabilityClass classify_stability(double t_sea_c, double t_air_c);

// Integrated stability function for momentum. zeta = z/L. Unstable side
// (zeta < 0) uses x = (1 - 16 zeta)^(1/4):
//   psi_m = 2 ln((1+x)/2) + ln((1+x^2)/2) - 2 atan(x) + pi/2
// Stable side is -5 zeta. psi_m(0) is exactly 0.
double psi_m(double zeta);

// Integrated stability function for heat and moisture. Unstable side uses
// y = (1 - 16 zeta)^(1/2): psi_h = 2 ln((1+y)/2). Stable side is -5 zeta.
double psi_h(double zeta);

// Wind-speed dependent Charnock parameter m*u10n + b, clamped below at 0.001.
// u10n must be finite and non-negative.
double charnock_alpha(double u10n, const PhysConstants& c = {});

// Saturation specific humidity [kg/kg] over fresh water from air temperature
// t_c [C] and pressure p_hpa [hPa]. Valid for t_c in [-5, 45] and p_hpa in
// [800, 1100]. Callers apply the 0.98 salinity factor at the sea surface.
double saturation_specific_humidity(double t_c, double p_hpa);

// Moist air density [kg/m3] via the virtual temperature.
double air_density(double t_air_c, double q_kgkg, double p_hpa,
                   const PhysConstants& c = {});

// Neutral log-profile adjustment of a wind measured at height z_m to the
// 10 m level given a roughness length z0_m. Requires z_m > z0_m > 0.
double wind_to_10m_neutral(double u_ms, double z_m, double z0_m,
                           const PhysConstants& c = {});

// Fixed-coefficient buoy anemometer adjustment to 10 m:
//   u10 = 8.87403 * u / ln(z / 0.0016)
// with z in metres and 0.0016 m the assumed open-ocean roughness.
// Requires z_m > 0.0016.
double wind_to_10m_buoy(double u_ms, double z_m);

// One met-ocean observation. Wave fields are carried for provenance only and
// may be NaN; everything else must satisfy validate().
struct MetSample {
  double u_wind = 0.0;  // wind speed at z_u [m/s], >= 0
  double z_u = 10.0;    // wind measurement height [m], > 0
  double t_air = 0.0;   // air temperature [C], in [-5, 45]
  double z_t = 10.0;    // temperature/humidity measurement height [m], > 0
  double t_sea = 0.0;   // sea surface temperature [C], in [-5, 45]
  double p_air = 1013.25;  // surface pressure [hPa], in [800, 1100]
  double q_air = 0.0;      // specific humidity [kg/kg], in [0, 0.04]
  double hs = std::numeric_limits<double>::quiet_NaN();  // significant wave height [m]
  double tp = std::numeric_limits<double>::quiet_NaN();  // peak wave period [s]

  // Throws std::domain_error with the offending field named.
  void validate() const;
};

// Solver output. Heat fluxes are positive from ocean to atmosphere.
struct FluxResult {
  double u_star = 0.0;      // friction velocity [m/s]
  double tau = 0.0;         // wind stress [N/m2]
  double cd1000 = 0.0;      // drag coefficient * 1000
  double h_sensible = 0.0;  // sensible heat flux [W/m2]
  double e_latent = 0.0;    // latent heat flux [W/m2]
  double obukhov_l = 0.0;   // Obukhov length [m]; +/-infinity marks neutral
  double z0 = 0.0;          // momentum roughness length [m]
  double u10n = 0.0;        // 10 m neutral wind [m/s]
  int iterations = 0;       // fixed-point iterations run
  bool converged = false;   // |delta u*| < tol_ustar reached within max_iter
};

struct FluxOptions {
  double tol_ustar = 1e-4;  // convergence threshold on |delta u*| [m/s]
  int max_iter = 50;
  double wind_floor = 0.1;  // effective wind floor so calm records stay solvable [m/s]
  // z/L is clamped to this range inside the stability functions; strongly
  // stable profiles have no fixed point under psi = -5 zeta otherwise.
  double zeta_min = -200.0;
  double zeta_max = 10.0;
  PhysConstants constants{};
};

// Iterative bulk flux computation. Throws std::domain_error for an invalid
// sample; never throws for non-convergence (converged is false instead).
FluxResult compute_fluxes(const MetSample& sample, const FluxOptions& opts = {});

}  // namespace airsea
