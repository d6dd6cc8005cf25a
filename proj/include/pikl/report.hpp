#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "pikl/bench.hpp"
#include "pikl/config.hpp"
#include "pikl/effdim.hpp"

namespace pikl {

/// Bumped whenever a column is added, removed or reinterpreted.
inline constexpr int kSchemaVersion = 1;

/// Shortest decimal text that parses back to the same double; "nan" and
/// "inf" otherwise. Every number written by the tool goes through here.
std::string format_real(real v);

/// Long format: one "seed" row per (estimator, n, seed) followed by one
/// "aggregate" row per (estimator, n) carrying mean, sample std and count.
/// Timings are deliberately absent so the file is reproducible.
void write_report_csv(const RunReport& report, std::ostream& os);
json report_to_json(const RunReport& report);
/// Wall-clock seconds per phase, one line per seed row.
void write_timings_csv(const RunReport& report, std::ostream& os);

/// Per-method aggregate table of a wave comparison.
void write_wave_table_csv(const RunReport& report, real sigma, std::ostream& os);

/// Columns schema_version,name,m,n,lambda,mu,N_eff.
void write_effdim_csv(const std::string& name, const std::vector<EffDimPoint>& points, std::ostream& os);
/// Columns schema_version,k,sigma.
void write_spectrum_csv(const SpectrumReport& spectrum, std::ostream& os);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(const std::string& bytes);
/// 16-digit hex FNV-1a of raw bytes.
std::string content_hash(const std::string& bytes);
/// Hex FNV-1a of the canonical (sorted-key, compact) dump.
std::string config_hash(const json& config);

/// Library version and build details recorded in manifests.
json build_info();

/// Everything needed to rerun a command: the resolved configuration, its
/// hash, the thread count and a content hash per output file.
json make_manifest(const std::string& command, const json& config, unsigned threads,
                   const std::vector<std::string>& output_files);

}  // namespace pikl
