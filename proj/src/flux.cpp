#include "airsea/flux.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace airsea {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::domain_error(msg);
}

}  // namespace

void PhysConstants::validate() const {
  require(kappa > 0 && g > 0 && cp > 0 && r_dry > 0 && nu_air > 0 &&
              charnock_m > 0 && z_ref > 0,
          "PhysConstants: all members except charnock_b must be positive");
  require(std::isfinite(charnock_b), "PhysConstants: charnock_b must be finite");
}

StabilityClass classify_stability(double t_sea_c, double t_air_c) {
  require(std::isfinite(t_sea_c) && std::isfinite(t_air_c),
          "classify_stability: temperatures must be finite");
  if (t_sea_c > t_air_c) return StabilityClass::unstable;
  if (t_sea_c == t_air_c) return StabilityClass::neutral;
  return StabilityClass::stable;
}

double psi_m(double zeta) {
  require(std::isfinite(zeta), "psi_m: zeta must be finite");
  if (zeta >= 0.0) return -5.0 * zeta;
  const double x = std::pow(1.0 - 16.0 * zeta, 0.25);
  return 2.0 * std::log((1.0 + x) / 2.0) + std::log((1.0 + x * x) / 2.0) -
         2.0 * std::atan(x) + kPi / 2.0;
}

double psi_h(double zeta) {
  require(std::isfinite(zeta), "psi_h: zeta must be finite");
  if (zeta >= 0.0) return -5.0 * zeta;
  const double y = std::sqrt(1.0 - 16.0 * zeta);
  return 2.0 * std::log((1.0 + y) / 2.0);
}

double charnock_alpha(double u10n, const PhysConstants& c) {
  require(std::isfinite(u10n) && u10n >= 0.0,
          "charnock_alpha: u10n must be finite and non-negative");
  return std::max(c.charnock_m * u10n + c.charnock_b, 0.001);
}

double saturation_specific_humidity(double t_c, double p_hpa) {
  require(std::isfinite(t_c) && t_c >= -5.0 && t_c <= 45.0,
          "saturation_specific_humidity: temperature outside [-5, 45] C");
  require(std::isfinite(p_hpa) && p_hpa >= 800.0 && p_hpa <= 1100.0,
          "saturation_specific_humidity: pressure outside [800, 1100] hPa");
  const double es = 6.1121 * std::exp(17.502 * t_c / (240.97 + t_c));
  return 0.622 * es / (p_hpa - 0.378 * es);
}

double air_density(double t_air_c, double q_kgkg, double p_hpa,
                   const PhysConstants& c) {
  require(std::isfinite(t_air_c) && t_air_c > -273.15,
          "air_density: temperature must be finite and above absolute zero");
  require(std::isfinite(q_kgkg) && q_kgkg >= 0.0 && q_kgkg <= 0.04,
          "air_density: specific humidity outside [0, 0.04]");
  require(std::isfinite(p_hpa) && p_hpa > 0.0,
          "air_density: pressure must be positive");
  const double tv = (t_air_c + 273.15) * (1.0 + 0.61 * q_kgkg);
  return 100.0 * p_hpa / (c.r_dry * tv);
}

double wind_to_10m_neutral(double u_ms, double z_m, double z0_m,
                           const PhysConstants& c) {
  require(std::isfinite(u_ms) && u_ms >= 0.0,
          "wind_to_10m_neutral: wind speed must be finite and non-negative");
  require(std::isfinite(z0_m) && z0_m > 0.0,
          "wind_to_10m_neutral: roughness length must be positive");
  require(std::isfinite(z_m) && z_m > z0_m,
          "wind_to_10m_neutral: height must exceed the roughness length");
  return u_ms * (std::log(c.z_ref / z0_m) / std::log(z_m / z0_m));
}

double wind_to_10m_buoy(double u_ms, double z_m) {
  require(std::isfinite(u_ms) && u_ms >= 0.0,
          "wind_to_10m_buoy: wind speed must be finite and non-negative");
  require(std::isfinite(z_m) && z_m > 0.0016,
          "wind_to_10m_buoy: height must exceed 0.0016 m");
  return 8.87403 * u_ms / std::log(z_m / 0.0016);
}

void MetSample::validate() const {
  require(std::isfinite(u_wind) && u_wind >= 0.0,
          "MetSample: u_wind must be finite and non-negative");
  require(std::isfinite(z_u) && z_u > 0.0, "MetSample: z_u must be positive");
  require(std::isfinite(z_t) && z_t > 0.0, "MetSample: z_t must be positive");
  require(std::isfinite(t_air) && t_air >= -5.0 && t_air <= 45.0,
          "MetSample: t_air outside [-5, 45] C");
  require(std::isfinite(t_sea) && t_sea >= -5.0 && t_sea <= 45.0,
          "MetSample: t_sea outside [-5, 45] C");
  require(std::isfinite(p_air) && p_air >= 800.0 && p_air <= 1100.0,
          "MetSample: p_air outside [800, 1100] hPa");
  require(std::isfinite(q_air) && q_air >= 0.0 && q_air <= 0.04,
          "MetSample: q_air outside [0, 0.04]");
}

FluxResult compute_fluxes(const MetSample& sample, const FluxOptions& opts) {
  sample.validate();
  opts.constants.validate();
  require(opts.tol_ustar > 0 && opts.max_iter > 0 && opts.wind_floor > 0,
          "FluxOptions: tolerance, iteration cap and wind floor must be positive");
  const PhysConstants& c = opts.constants;

  const double u_eff = std::max(sample.u_wind, opts.wind_floor);
  const double t_k = sample.t_air + 273.15;
  const double tv = t_k * (1.0 + 0.61 * sample.q_air);  // virtual temperature [K]
  const double q_sea = 0.98 * saturation_specific_humidity(sample.t_sea, sample.p_air);

  // First guess: neutral profile over a 1e-4 m roughness.
  double u_star = c.kappa * u_eff / std::log(sample.z_u / 1e-4);
  double u10n = u_eff;
  double l_inv = 0.0;  // 1/L; zero encodes neutral
  double t_star = 0.0;
  double q_star = 0.0;
  double z0 = 1e-4;

  int iterations = 0;
  bool converged = false;
  while (iterations < opts.max_iter) {
    ++iterations;

    const double alpha = charnock_alpha(std::max(u10n, 0.0), c);
    z0 = alpha * u_star * u_star / c.g + 0.11 * c.nu_air / u_star;
    const double rr = u_star * z0 / c.nu_air;  // roughness Reynolds number
    const double z0t = std::min(1.15e-4, 5.5e-5 * std::pow(rr, -0.6));

    const double zeta_u =
        std::clamp(sample.z_u * l_inv, opts.zeta_min, opts.zeta_max);
    const double zeta_t =
        std::clamp(sample.z_t * l_inv, opts.zeta_min, opts.zeta_max);

    const double u_star_new =
        c.kappa * u_eff / (std::log(sample.z_u / z0) - psi_m(zeta_u));
    const double denom_h = std::log(sample.z_t / z0t) - psi_h(zeta_t);
    t_star = c.kappa * (sample.t_air - sample.t_sea) / denom_h;
    q_star = c.kappa * (sample.q_air - q_sea) / denom_h;

    const double tv_star = t_star * (1.0 + 0.61 * sample.q_air) + 0.61 * t_k * q_star;
    l_inv = c.kappa * c.g * tv_star / (u_star_new * u_star_new * tv);
    u10n = u_star_new / c.kappa * std::log(c.z_ref / z0);

    const double delta = std::abs(u_star_new - u_star);
    u_star = u_star_new;
    if (delta < opts.tol_ustar) {
      converged = true;
      break;
    }
  }

  const double rho = air_density(sample.t_air, sample.q_air, sample.p_air, c);
  const double lv = (2.501 - 0.00237 * sample.t_sea) * 1e6;  // vaporization heat [J/kg]

  FluxResult r;
  r.u_star = u_star;
  r.tau = rho * u_star * u_star;
  r.cd1000 = 1000.0 * (u_star / u_eff) * (u_star / u_eff);
  r.h_sensible = -rho * c.cp * u_star * t_star;
  r.e_latent = -rho * lv * u_star * q_star;
  r.obukhov_l = l_inv == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / l_inv;
  r.z0 = z0;
  r.u10n = u10n;
  r.iterations = iterations;
  r.converged = converged;
  return r;
}

}  // namespace airsea
