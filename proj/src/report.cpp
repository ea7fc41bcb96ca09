#include "repsim/report.hpp"

#include <cstdio>
#include <fstream>

#include "repsim/types.hpp"

namespace repsim::sim {

uint64_t hash_line(uint64_t h, const std::string& line) {
  auto mix = [&h](unsigned char c) {
    h ^= c;
    h *= 1099511628211ULL;
  };
  for (char c : line) mix(static_cast<unsigned char>(c));
  mix('\n');
  return h;
}

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string opt(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

} // namespace

std::string sweep_csv(const std::vector<metrics::RunMetrics>& rows) {
  std::string out =
      "malicious_count,rep_efficiency,dmg_selfish,dmg_malicious,detection_rate_pct,"
      "paper_literal_pct\n";
  for (const auto& r : rows) {
    out += std::to_string(r.malicious_count);
    out += ',';
    out += num(r.rep_efficiency);
    out += ',';
    out += num(r.dmg_selfish);
    out += ',';
    out += num(r.dmg_malicious);
    out += ',';
    out += opt(r.detection_rate_pct);
    out += ',';
    out += opt(r.undetected_pct);
    out += '\n';
  }
  return out;
}

std::string run_csv(const std::vector<metrics::RunMetrics>& per_run,
                    const metrics::RunMetrics& aggregate) {
  std::string out =
      "run,malicious_count,rep_efficiency,dmg_selfish,dmg_selfish_energy,dmg_malicious,"
      "dmg_malicious_energy,detection_rate_pct,undetected_pct\n";
  auto row = [&](const std::string& label, const metrics::RunMetrics& m) {
    out += label;
    out += ',';
    out += std::to_string(m.malicious_count);
    out += ',';
    out += num(m.rep_efficiency);
    out += ',';
    out += num(m.dmg_selfish);
    out += ',';
    out += num(m.dmg_selfish_energy);
    out += ',';
    out += num(m.dmg_malicious);
    out += ',';
    out += num(m.dmg_malicious_energy);
    out += ',';
    out += opt(m.detection_rate_pct);
    out += ',';
    out += opt(m.undetected_pct);
    out += '\n';
  };
  for (size_t i = 0; i < per_run.size(); ++i) row(std::to_string(i), per_run[i]);
  row("mean", aggregate);
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open for writing: " + path);
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) throw Error("write failed: " + path);
}

} // namespace repsim::sim
