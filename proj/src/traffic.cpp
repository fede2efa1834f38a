#include "rachsim/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rachsim {

void TrafficModel::validate() const {
  switch (kind) {
    case TrafficKind::UniformBurst:
      if (n_devices < 0) throw std::invalid_argument("traffic: n_devices must be >= 0");
      if (window_ms <= 0) throw std::invalid_argument("traffic: window_ms must be > 0");
      break;
    case TrafficKind::Wavefront:
      if (density_per_km2 <= 0 || cell_radius_km <= 0 || wave_speed_km_s <= 0) {
        throw std::invalid_argument("traffic: wavefront parameters must be > 0");
      }
      break;
    case TrafficKind::PoissonBackground:
      if (rate_per_s <= 0) throw std::invalid_argument("traffic: rate_per_s must be > 0");
      if (horizon_ms < 0) throw std::invalid_argument("traffic: horizon_ms must be >= 0");
      break;
  }
}

std::vector<double> generate_uniform_burst(int n, double window_ms, Rng& rng) {
  if (n < 0) throw std::invalid_argument("generate_uniform_burst: n must be >= 0");
  if (window_ms <= 0) throw std::invalid_argument("generate_uniform_burst: window must be > 0");
  std::vector<double> t(static_cast<std::size_t>(n));
  for (auto& v : t) v = rng.uniform(0.0, window_ms);
  std::sort(t.begin(), t.end());
  return t;
}

std::vector<WavefrontArrival> generate_wavefront(double density_per_km2, double radius_km,
                                                 double speed_km_s, Rng& rng) {
  if (density_per_km2 <= 0 || radius_km <= 0 || speed_km_s <= 0) {
    throw std::invalid_argument("generate_wavefront: parameters must be > 0");
  }
  const auto n = static_cast<std::size_t>(
      std::llround(std::numbers::pi * radius_km * radius_km * density_per_km2));
  std::vector<WavefrontArrival> out(n);
  for (auto& a : out) {
    // uniform over the disk: radius via sqrt, angle uniform
    const double r = radius_km * std::sqrt(rng.uniform());
    const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
    a.position_km = {r * std::cos(phi), r * std::sin(phi)};
    a.activation_ms = r / speed_km_s * 1000.0;
  }
  std::sort(out.begin(), out.end(),
            [](const WavefrontArrival& a, const WavefrontArrival& b) {
              return a.activation_ms < b.activation_ms;
            });
  return out;
}

std::vector<double> generate_poisson(double rate_per_s, double horizon_ms, Rng& rng) {
  if (rate_per_s <= 0) throw std::invalid_argument("generate_poisson: rate must be > 0");
  std::vector<double> t;
  const double mean_gap_ms = 1000.0 / rate_per_s;
  double now = 0.0;
  for (;;) {
    now += -std::log(1.0 - rng.uniform()) * mean_gap_ms;
    if (now >= horizon_ms) break;
    t.push_back(now);
  }
  return t;
}

std::vector<Device> build_devices(const TrafficModel& traffic, double htc_fraction, Rng& rng) {
  traffic.validate();
  std::vector<Device> devices;
  auto push = [&](double act_ms, std::optional<std::array<double, 2>> pos) {
    Device d;
    d.id = static_cast<DeviceId>(devices.size());
    d.activation_ms = act_ms;
    d.position_km = pos;
    devices.push_back(d);
  };
  switch (traffic.kind) {
    case TrafficKind::UniformBurst:
      for (double t : generate_uniform_burst(traffic.n_devices, traffic.window_ms, rng)) {
        push(t, std::nullopt);
      }
      break;
    case TrafficKind::Wavefront:
      for (const auto& a : generate_wavefront(traffic.density_per_km2, traffic.cell_radius_km,
                                              traffic.wave_speed_km_s, rng)) {
        push(a.activation_ms, a.position_km);
      }
      break;
    case TrafficKind::PoissonBackground:
      for (double t : generate_poisson(traffic.rate_per_s, traffic.horizon_ms, rng)) {
        push(t, std::nullopt);
      }
      break;
  }
  const auto n_htc = static_cast<std::size_t>(
      std::llround(htc_fraction * static_cast<double>(devices.size())));
  for (std::size_t i = 0; i < devices.size(); ++i) {
    devices[i].cls = i < n_htc ? DeviceClass::Htc : DeviceClass::MtcLowPriority;
  }
  return devices;
}

}  // namespace rachsim
