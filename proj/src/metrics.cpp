#include "rachsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "rachsim/engine.hpp"

namespace rachsim {

namespace {

struct PerDevice {
  int attempts = 0;
  bool succeeded = false;
  bool outage = false;
  double first_attempt_ms = -1.0;
  double success_ms = -1.0;
  bool first_collided = false;
};

double mean_of(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

}  // namespace

MetricsRecord summarize(const EventTrace& trace, const Scenario& scenario) {
  std::map<DeviceId, PerDevice> per_device;
  std::map<int, int> activations_per_frame;
  // per radio frame: distinct collided preambles and successful decodes
  std::map<int, std::set<std::pair<double, PreambleId>>> collided_per_frame;
  std::map<int, int> successes_per_frame;
  long long total_attempts = 0;
  long long total_successes = 0;
  int max_frame = -1;

  for (const TraceEvent& ev : trace.events) {
    const int frame = static_cast<int>(ev.t_ms / kFrameMs);
    switch (ev.kind) {
      case EventKind::Activation:
        per_device[ev.device];
        activations_per_frame[frame] += 1;
        break;
      case EventKind::Attempt: {
        PerDevice& d = per_device.at(ev.device);
        d.attempts += 1;
        if (d.first_attempt_ms < 0) d.first_attempt_ms = ev.t_ms;
        total_attempts += 1;
        max_frame = std::max(max_frame, frame);
        break;
      }
      case EventKind::Success: {
        PerDevice& d = per_device.at(ev.device);
        d.succeeded = true;
        d.success_ms = ev.t_ms;
        total_successes += 1;
        successes_per_frame[frame] += 1;
        max_frame = std::max(max_frame, frame);
        break;
      }
      case EventKind::Collision: {
        PerDevice& d = per_device.at(ev.device);
        if (d.attempts == 1) d.first_collided = true;
        collided_per_frame[frame].insert({ev.t_ms, ev.preamble});
        max_frame = std::max(max_frame, frame);
        break;
      }
      case EventKind::Outage:
        per_device.at(ev.device).outage = true;
        break;
      case EventKind::Barred:
      case EventKind::TreeAssigned:
      case EventKind::Sib2Broadcast:
        break;
    }
  }

  MetricsRecord out;
  out.n_devices = static_cast<int>(per_device.size());
  for (const auto& [frame, n] : activations_per_frame) {
    out.simultaneous_attempts = std::max(out.simultaneous_attempts, n);
  }

  std::vector<double> retrans_succeeded, retrans_all, delays;
  int outages = 0, first_attempted = 0, first_collided = 0;
  for (const auto& [id, d] : per_device) {
    if (!d.succeeded && !d.outage) {
      throw std::logic_error("summarize: device neither succeeded nor flagged outage");
    }
    if (d.succeeded) {
      retrans_succeeded.push_back(d.attempts - 1);
      delays.push_back(d.success_ms - d.first_attempt_ms);
    }
    if (d.outage) outages += 1;
    retrans_all.push_back(std::max(0, d.attempts - 1));
    if (d.first_attempt_ms >= 0) {
      first_attempted += 1;
      if (d.first_collided) first_collided += 1;
    }
  }
  out.avg_retransmissions = mean_of(retrans_succeeded);
  out.avg_retransmissions_all = mean_of(retrans_all);
  out.outage_probability =
      out.n_devices > 0 ? static_cast<double>(outages) / out.n_devices : 0.0;
  out.mean_access_delay_ms = mean_of(delays);
  out.success_rate =
      total_attempts > 0 ? static_cast<double>(total_successes) / total_attempts : 0.0;
  out.first_attempt_collision_fraction =
      first_attempted > 0 ? static_cast<double>(first_collided) / first_attempted : 0.0;
  out.horizon_truncated = trace.truncated;

  const int frames = std::max(max_frame + 1, static_cast<int>(std::ceil(trace.end_ms / kFrameMs)));
  out.kappa_series.assign(std::max(frames, 0), 0.0);
  for (int f = 0; f < frames; ++f) {
    const auto cit = collided_per_frame.find(f);
    const int collided = cit == collided_per_frame.end() ? 0 : static_cast<int>(cit->second.size());
    const auto sit = successes_per_frame.find(f);
    const int succ = sit == successes_per_frame.end() ? 0 : sit->second;
    out.kappa_series[f] = static_cast<double>(collided) / std::max(1, succ);
  }

  // nominal opportunity count: the initial slot density times the contention
  // preambles open to the classes present (schemes that re-tune the slot
  // density make this a lower bound)
  const int spf = prach_slots_per_frame(scenario.prach_config_index);
  const long long slots = static_cast<long long>(frames) * spf;
  int contention = scenario.pool.mtc_count;
  if (scenario.htc_fraction > 0.0) contention += scenario.pool.htc_count();
  const double opportunities = static_cast<double>(slots) * contention;
  out.throughput_per_opportunity =
      opportunities > 0 ? static_cast<double>(total_successes) / opportunities : 0.0;
  return out;
}

namespace {

FieldStats stats_of(const std::vector<double>& xs) {
  FieldStats st;
  st.mean = mean_of(xs);
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - st.mean) * (x - st.mean);
    st.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return st;
}

}  // namespace

MetricsSummary aggregate(const std::vector<MetricsRecord>& records) {
  MetricsSummary out;
  out.repetitions = static_cast<int>(records.size());
  std::vector<double> a, b, c, d, e, f;
  for (const MetricsRecord& r : records) {
    a.push_back(r.avg_retransmissions);
    b.push_back(r.outage_probability);
    c.push_back(r.mean_access_delay_ms);
    d.push_back(r.success_rate);
    e.push_back(r.throughput_per_opportunity);
    f.push_back(r.first_attempt_collision_fraction);
  }
  out.avg_retransmissions = stats_of(a);
  out.outage_probability = stats_of(b);
  out.mean_access_delay_ms = stats_of(c);
  out.success_rate = stats_of(d);
  out.throughput_per_opportunity = stats_of(e);
  out.first_attempt_collision_fraction = stats_of(f);
  return out;
}

}  // namespace rachsim
