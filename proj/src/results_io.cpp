#include "rachsim/results_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rachsim {

namespace {

// locale-independent, shortest round-trip-ish formatting
std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace

std::string results_csv_header() {
  return "scenario,point,rep,seed,scheme,n_devices,simultaneous_attempts,"
         "prach_config_index,slots_per_frame,cap,m,avg_retransmissions,"
         "avg_retransmissions_all,outage_probability,mean_access_delay_ms,"
         "success_rate,throughput_per_opportunity,first_attempt_collision_fraction,"
         "horizon_flag";
}

std::string results_csv(const std::vector<BatchRecord>& records) {
  std::ostringstream out;
  out << results_csv_header() << "\n";
  for (const BatchRecord& r : records) {
    const Scenario& sc = r.scenario;
    const MetricsRecord& m = r.metrics;
    out << sc.name << ',' << r.point << ',' << r.rep << ',' << r.seed << ','
        << scheme_name(sc.scheme.kind) << ',' << m.n_devices << ','
        << m.simultaneous_attempts << ',' << sc.prach_config_index << ','
        << prach_slots_per_frame(sc.prach_config_index) << ','
        << (sc.retransmission_cap ? std::to_string(*sc.retransmission_cap) : "none") << ',';
    if (sc.scheme.kind == SchemeKind::CrbRa) {
      out << sc.scheme.crb.fixed_m.value_or(sc.scheme.crb.m0);
    }
    out << ',' << fmt(m.avg_retransmissions) << ',' << fmt(m.avg_retransmissions_all) << ','
        << fmt(m.outage_probability) << ',' << fmt(m.mean_access_delay_ms) << ','
        << fmt(m.success_rate) << ',' << fmt(m.throughput_per_opportunity) << ','
        << fmt(m.first_attempt_collision_fraction) << ','
        << (m.horizon_truncated ? "truncated" : "complete") << "\n";
  }
  return out.str();
}

void write_results_csv(const std::string& path, const std::vector<BatchRecord>& records) {
  write_file(path, results_csv(records));
}

std::string manifest_text(const std::string& scenario_name, std::uint64_t seed, int points,
                          int repetitions) {
  std::ostringstream out;
  out << "artifact=rachsim\n"
      << "version=" << kArtifactVersion << "\n"
      << "scenario=" << scenario_name << "\n"
      << "seed=" << seed << "\n"
      << "grid_points=" << points << "\n"
      << "repetitions=" << repetitions << "\n"
      << "rows=" << points * static_cast<long long>(repetitions) << "\n";
  return out.str();
}

void write_manifest(const std::string& path, const std::string& scenario_name,
                    std::uint64_t seed, int points, int repetitions) {
  write_file(path, manifest_text(scenario_name, seed, points, repetitions));
}

std::string trace_csv(const EventTrace& trace) {
  std::ostringstream out;
  out << "t_ms,event,device,frame,subframe,preamble,node,level\n";
  for (const TraceEvent& ev : trace.events) {
    out << fmt(ev.t_ms) << ',' << event_name(ev.kind) << ',' << ev.device << ','
        << ev.slot.frame << ',' << ev.slot.subframe << ',' << ev.preamble << ','
        << ev.node_id << ',' << ev.level << "\n";
  }
  return out.str();
}

void write_trace_csv(const std::string& path, const EventTrace& trace) {
  write_file(path, trace_csv(trace));
}

std::vector<CsvRow> read_results_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument(path + ": empty file");
  if (line == results_csv_header() + std::string("\r")) line.pop_back();
  if (line != results_csv_header()) {
    throw std::invalid_argument(path + ": header does not match the results schema");
  }
  std::vector<CsvRow> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    CsvRow row;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) row.fields.push_back(field);
    if (row.fields.size() != 19) {
      throw std::invalid_argument(path + ": row with wrong column count");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace rachsim
