#pragma once

#include <array>
#include <vector>

#include "rachsim/core.hpp"
#include "rachsim/rng.hpp"

namespace rachsim {

enum class TrafficKind { UniformBurst, Wavefront, PoissonBackground };

struct TrafficModel {
  TrafficKind kind = TrafficKind::UniformBurst;
  // UniformBurst
  int n_devices = 0;
  double window_ms = 10.0;
  // Wavefront (epicenter at the cell center)
  double density_per_km2 = 60.0;
  double cell_radius_km = 2.0;
  double wave_speed_km_s = 10.0;
  // PoissonBackground
  double rate_per_s = 0.0;
  double horizon_ms = 0.0;

  void validate() const;
};

struct WavefrontArrival {
  std::array<double, 2> position_km;
  double activation_ms;
};

// n i.i.d. uniform activation times on [0, window_ms), sorted ascending.
std::vector<double> generate_uniform_burst(int n, double window_ms, Rng& rng);

// round(pi r^2 rho) devices uniform over the disk; activation = distance from
// the center divided by the wave speed. Sorted by activation time.
std::vector<WavefrontArrival> generate_wavefront(double density_per_km2, double radius_km,
                                                 double speed_km_s, Rng& rng);

// Homogeneous Poisson arrival times on [0, horizon_ms).
std::vector<double> generate_poisson(double rate_per_s, double horizon_ms, Rng& rng);

// Device list for a scenario: activation times from the traffic model, the
// first round(n * htc_fraction) devices classed HTC, the rest low-priority MTC.
std::vector<Device> build_devices(const TrafficModel& traffic, double htc_fraction, Rng& rng);

}  // namespace rachsim
