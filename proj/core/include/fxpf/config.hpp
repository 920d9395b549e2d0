#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fxpf/beamform.hpp"
#include "fxpf/geometry.hpp"
#include "fxpf/metrics.hpp"
#include "fxpf/prediction.hpp"
#include "fxpf/sim.hpp"

namespace fxpf {

/// Which correction runs between alignment and summation.
struct FxpfVariant {
    enum class Kind { kOff, kFixed, kAdaptive };
    Kind kind = Kind::kOff;
    std::size_t order = 0;  // kFixed only

    static FxpfVariant off() { return {Kind::kOff, 0}; }
    static FxpfVariant fixed(std::size_t p) { return {Kind::kFixed, p}; }
    static FxpfVariant adaptive() { return {Kind::kAdaptive, 0}; }

    /// "off", "fixed:<p>" or "adaptive"; throws ValidationError otherwise.
    static FxpfVariant parse(std::string_view text);
    std::string to_string() const;
    // Filesystem-friendly name: off, fixed1, fixed4, adaptive.
    std::string slug() const;
    bool operator==(const FxpfVariant&) const = default;
};

struct AberrationSettings {
    bool enabled = true;
    double rms = 30e-9;                 // [s]
    double correlation_length = 5e-3;   // [m]
    bool operator==(const AberrationSettings&) const = default;
};

struct NoiseSettings {
    bool enabled = true;
    double snr_db = 10.0;  // frame RMS over noise RMS
    bool operator==(const NoiseSettings&) const = default;
};

struct GridSettings {
    double z_start = 2e-3;
    double z_end = 42e-3;
    bool operator==(const GridSettings&) const = default;
};

struct BeamformOptions {
    double f_number = 1.75;
    ApodizationWindow window = ApodizationWindow::kRaisedCosine;
    double dynamic_range_db = 60.0;
    bool operator==(const BeamformOptions&) const = default;
};

struct FxpfOptions {
    FxpfVariant variant = FxpfVariant::adaptive();
    std::size_t p_max = 4;
    double beta = 1.0 / 3.0;
    double mu = 0.01;
    std::size_t kernel_length_samples = 0;  // 0: one wavelength, round(2 fs / fc)
    std::size_t iterations = 2;
    bool operator==(const FxpfOptions&) const = default;
};

struct MetricsOptions {
    std::size_t num_bins = 256;
    double target_scale = 0.8;
    double inner_scale = 1.1;
    double outer_scale = 1.5;
    std::vector<RegionSpec> regions;  // empty: derived from scored inclusions
    bool operator==(const MetricsOptions&) const = default;
};

struct PipelineConfig {
    TransducerGeometry geometry;
    PulseModel pulse;
    ReceiveModel receive;
    PhantomSpec phantom;
    AberrationSettings aberration;
    NoiseSettings noise;
    GridSettings grid;
    BeamformOptions beamform;
    FxpfOptions fxpf;
    MetricsOptions metrics;
    std::string output_dir = "out";
    std::uint64_t seed = 1;
    std::size_t threads = 1;  // 0: hardware concurrency

    void validate() const;
    bool operator==(const PipelineConfig&) const;
};

/// Default experiment: 128-element linear array, phantom with a shallow and a
/// deep anechoic cyst (scored) and two mid-depth hypoechoic cysts.
PipelineConfig default_config();
std::vector<Inclusion> default_inclusions();

std::string serialize_config(const PipelineConfig& config);
/// Missing keys keep their default values. Throws ValidationError on malformed
/// input.
PipelineConfig parse_config(std::string_view json_text);
PipelineConfig load_config(const std::filesystem::path& path);

BeamGrid make_grid(const PipelineConfig& config);
/// Empty optional for the "off" variant.
std::optional<FxpfConfig> make_fxpf_config(const PipelineConfig& config, const FxpfVariant& variant);
std::vector<RegionSpec> scored_regions(const PipelineConfig& config);

}  // namespace fxpf
