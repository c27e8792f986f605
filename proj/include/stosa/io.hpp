#pragma once

#include <span>
#include <string>
#include <vector>

#include "stosa/mars.hpp"
#include "stosa/pce.hpp"
#include "stosa/pipeline.hpp"
#include "stosa/sobol.hpp"
#include "stosa/version.hpp"

namespace stosa {

/// Stamp carried by every output file (CSV comment line / JSON "meta" block).
struct RunMetadata {
  std::string tool_version = kVersion;
  std::uint64_t seed = 0;
  std::string config_hash;
};

/// FNV-1a hex digest of a canonical config string.
std::string config_hash(const std::string& canonical_text);

std::string metadata_comment(const RunMetadata& meta);

// CSV writers (comma separated, '.' decimal, mandatory headers, one leading
// '#' metadata comment). Doubles are printed with %.17g so identical runs
// produce identical bytes.
void write_index_sample_csv(const IndexSample& sample, const RunMetadata& meta,
                            const std::string& path);
void write_convergence_csv(const ConvergenceTable& table,
                           const RunMetadata& meta, const std::string& path);
void write_mean_time_series_csv(const TimeResolvedIndices& result,
                                std::span<const std::string> names,
                                const RunMetadata& meta,
                                const std::string& path);
void write_curve_csv(std::span<const std::pair<double, double>> xy,
                     const std::string& x_name, const std::string& y_name,
                     const RunMetadata& meta, const std::string& path);
void write_expectations_csv(const IndexVector& values,
                            std::span<const std::string> names,
                            const RunMetadata& meta, const std::string& path);

// JSON writers.
void write_moments_json(std::span<const MomentEstimate> estimates,
                        const RunMetadata& meta, const std::string& path);
void write_histograms_json(const DistributionSummary& summary,
                           std::span<const std::string> names,
                           const RunMetadata& meta, const std::string& path);
void write_quality_json(const QualityReport& quality, const RunMetadata& meta,
                        const std::string& path);
void write_time_histograms_json(const TimeResolvedIndices& result,
                                std::span<const std::string> names,
                                const RunMetadata& meta,
                                const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// Surrogate serialization.
std::string surrogate_to_json(const AdditiveSurrogate& surrogate);
AdditiveSurrogate surrogate_from_json(const std::string& text);
std::string pc_surrogate_to_json(const PcSurrogate& surrogate);
PcSurrogate pc_surrogate_from_json(const std::string& text);

}  // namespace stosa
