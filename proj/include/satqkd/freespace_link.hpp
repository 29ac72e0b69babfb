#pragma once

#include "satqkd/constants.hpp"
#include "satqkd/conventions.hpp"

// Deterministic ground-to-satellite free-space link budget: Gaussian-beam
// diffraction, exponential-atmosphere extinction along the slant path, and a
// lumped setup efficiency.
namespace satqkd::link {

struct LinkGeometry {
  double height = 0.0;        // h, m
  double zenith_angle = 0.0;  // θ, rad, in [0, π/2)
  double ground_radius = constants::earth_radius;

  void validate() const;
};

struct OpticalSetup {
  double setup_efficiency = 0.4;          // T_eff
  double extinction_coefficient = 5e-6;   // α₀ at sea level, 1/m
  double extinction_scale_height = 6600;  // h̃, m
  double beam_waist = 0.2;                // w₀, m
  double receiver_aperture = 0.4;         // a_R, m
  double wavelength = constants::speed_of_light / constants::default_peak_frequency;  // m
  double fiber_loss_db_per_km = 0.2;      // for the fiber-equivalent loss model

  void validate() const;
  double rayleigh_range() const;
};

struct LinkBudget {
  double slant_distance = 0.0;
  double atmospheric = 1.0;
  double diffraction = 1.0;
  double total = 1.0;
  double loss_db = 0.0;
};

double slant_distance(const LinkGeometry& geom);

// ∫₀^z exp(−alt(ξ)/h̃) dξ along the line of sight, in meters.
double atmospheric_path_integral(const LinkGeometry& geom, const OpticalSetup& setup);
double atmospheric_transmissivity(const LinkGeometry& geom, const OpticalSetup& setup);

// Beam spot size after propagating `distance` meters.
double spot_size(double distance, const OpticalSetup& setup);
double diffraction_transmissivity(const LinkGeometry& geom, const OpticalSetup& setup);

// T_eff · T_atm · T_d
double total_transmissivity(const LinkGeometry& geom, const OpticalSetup& setup);

// freespace: the product above. fiber_equivalent: fiber_loss_db_per_km over the
// slant distance. loss_db is computed in the dB domain for both, so it stays
// finite where the transmissivity underflows.
LinkBudget link_budget(const LinkGeometry& geom, const OpticalSetup& setup, LossModel model);

double transmissivity_to_db(double transmissivity);
double db_to_transmissivity(double loss_db);

}  // namespace satqkd::link
