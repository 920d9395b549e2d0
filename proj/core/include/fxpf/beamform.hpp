#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "fxpf/array2d.hpp"
#include "fxpf/geometry.hpp"
#include "fxpf/prediction.hpp"

namespace fxpf {

/// Reconstruction grid: one beamline per lateral position, uniformly sampled
/// in depth.
struct BeamGrid {
    std::vector<double> lateral;  // [m], strictly increasing
    double z_start = 0.0;         // depth of sample 0 [m]
    double dz = 0.0;              // [m]
    std::size_t num_depths = 0;

    double depth(std::size_t k) const noexcept { return z_start + static_cast<double>(k) * dz; }
    std::size_t num_lines() const noexcept { return lateral.size(); }
    void validate() const;
    bool operator==(const BeamGrid&) const = default;
};

/// One beamline per element position, dz = c / (2 fs), covering [z_start, z_end].
BeamGrid default_grid(const TransducerGeometry& geometry, double z_start, double z_end);

enum class ApodizationWindow { kRectangular, kRaisedCosine };

struct ApodizationProfile {
    std::vector<double> weights;  // one per element, in [0, 1]
    ApodizationWindow window = ApodizationWindow::kRaisedCosine;

    std::size_t active_count() const;
};

struct EnvelopeImage {
    Array2D<double> magnitude;  // [depth x lateral], linear scale
    BeamGrid grid;
};

struct AlignedBeamline {
    ChannelFrame frame;
    std::size_t out_of_range_reads = 0;
};

/// 0-degree plane-wave transmit plus receive path: (z + |pixel - element|) / c.
double receive_delay(double element_x, double pixel_x, double pixel_z, double sound_speed);

/// Delay-aligns every channel onto the grid depths of one beamline by linear
/// interpolation. The output frame is sampled at c / (2 dz) and starts at
/// 2 z_start / c, so sample k corresponds to depth grid.depth(k).
AlignedBeamline align_channels(const ChannelFrame& raw, double beamline_x, const BeamGrid& grid);

/// Receive aperture |x_n - x_b| <= z / (2 f_number). If no element falls
/// inside, the nearest one is used.
ApodizationProfile apodization(double beamline_x, double depth, const TransducerGeometry& geometry,
                               double f_number, ApodizationWindow window);

/// [num_elements x num_depths] weights for one beamline.
Array2D<double> apodization_map(double beamline_x, const BeamGrid& grid,
                                const TransducerGeometry& geometry, double f_number,
                                ApodizationWindow window);

/// Weighted channel sum per depth sample, in ascending element order.
std::vector<double> das_sum(const ChannelFrame& aligned, const Array2D<double>& weights);

std::vector<double> envelope(const std::vector<double>& line);

/// 20 log10(env / max), clipped to [-dynamic_range_db, 0], mapped to [0, 255].
Array2D<std::uint8_t> log_compress(const EnvelopeImage& env, double dynamic_range_db);

void write_pgm(const std::filesystem::path& path, const Array2D<std::uint8_t>& image);

struct BeamformSettings {
    double f_number = 1.75;
    ApodizationWindow window = ApodizationWindow::kRaisedCosine;
    std::optional<FxpfConfig> fxpf;  // empty: plain DAS
    std::size_t threads = 1;         // 0: hardware concurrency
};

struct BeamformedImage {
    Array2D<double> rf;  // [depth x lateral] summed RF before envelope detection
    EnvelopeImage envelope;
    std::size_t out_of_range_reads = 0;
};

/// align -> optional FXPF -> apodize -> sum -> envelope, for every beamline.
/// Output is independent of the thread count.
BeamformedImage beamform_image(const ChannelFrame& raw, const BeamGrid& grid,
                               const BeamformSettings& settings);

/// Converts to/from the channel container (magic "FENV"): one row per
/// beamline, depth along the sample axis. Requires uniformly spaced lateral
/// positions centered on zero.
ChannelFrame envelope_to_frame(const EnvelopeImage& env, const TransducerGeometry& geometry);
EnvelopeImage envelope_from_frame(const ChannelFrame& frame);

}  // namespace fxpf
