#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "repsim/metrics.hpp"

namespace repsim::sim {

/** FNV-1a over a line plus newline; feeds the run's trace hash. */
uint64_t hash_line(uint64_t h, const std::string& line);

constexpr uint64_t FNV_OFFSET = 1469598103934665603ULL;

/** Pinned sweep schema: one row per malicious count, damage columns in reputation units. */
std::string sweep_csv(const std::vector<metrics::RunMetrics>& rows);

/** Per-run table for a single configuration, mean row last. Carries both damage flavors. */
std::string run_csv(const std::vector<metrics::RunMetrics>& per_run,
                    const metrics::RunMetrics& aggregate);

/** Writes content as-is (LF endings, UTF-8). Errors name the offending path. */
void write_file(const std::string& path, const std::string& content);

} // namespace repsim::sim
