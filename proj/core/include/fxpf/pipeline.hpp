#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "fxpf/beamform.hpp"
#include "fxpf/config.hpp"
#include "fxpf/metrics.hpp"

namespace fxpf {

/// Per-stage timing lines go to `log` when it is non-null.
struct RunContext {
    std::ostream* log = nullptr;
};

/// Phantom and aberration seeds derived from the global seed.
std::uint64_t phantom_seed(std::uint64_t seed);
std::uint64_t aberration_seed(std::uint64_t seed);
std::uint64_t noise_seed(std::uint64_t seed);

/// Simulated channel data for the configured phantom and aberration.
ChannelFrame simulate_frame(const PipelineConfig& config, const RunContext& ctx = {});

BeamformedImage beamform_variant(const ChannelFrame& raw, const PipelineConfig& config,
                                 const FxpfVariant& variant, const RunContext& ctx = {});

struct VariantResult {
    FxpfVariant variant;
    MetricsReport metrics;
};

struct ComparisonResult {
    std::uint64_t seed = 0;
    std::uint64_t frame_checksum = 0;
    std::vector<VariantResult> variants;  // off, fixed:1, fixed:4, adaptive
};

/// Runs every comparison variant on the same frame. Throws std::logic_error if
/// the frame is modified between variants.
ComparisonResult compare_variants(const ChannelFrame& raw, const PipelineConfig& config,
                                  const RunContext& ctx = {},
                                  std::vector<BeamformedImage>* images = nullptr);

std::vector<FxpfVariant> comparison_variants(const PipelineConfig& config);

/// FNV-1a over the frame header fields and sample bit patterns.
std::uint64_t frame_checksum(const ChannelFrame& frame);

std::string comparison_to_json(const ComparisonResult& result);
std::string comparison_table(const ComparisonResult& result);

// Subcommands. Each returns the paths it wrote.
std::filesystem::path cmd_simulate(const PipelineConfig& config, const std::filesystem::path& output,
                                   const RunContext& ctx = {});
struct BeamformOutputs {
    std::filesystem::path envelope;
    std::filesystem::path image;
};
BeamformOutputs cmd_beamform(const std::filesystem::path& input, const PipelineConfig& config,
                             const FxpfVariant& variant, const std::filesystem::path& out_dir,
                             const RunContext& ctx = {});
/// Returns the metrics JSON; also writes it to `output` when non-empty.
std::string cmd_evaluate(const std::filesystem::path& envelope_file, const PipelineConfig& config,
                         const std::filesystem::path& output = {});
ComparisonResult cmd_compare(const PipelineConfig& config, const RunContext& ctx = {});

}  // namespace fxpf
