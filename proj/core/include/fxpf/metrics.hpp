#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fxpf/array2d.hpp"
#include "fxpf/beamform.hpp"

namespace fxpf {

/// Target disc and concentric background annulus.
struct RegionSpec {
    std::string name;
    double x = 0.0;  // center [m]
    double z = 0.0;
    double target_radius = 0.0;
    double inner_radius = 0.0;
    double outer_radius = 0.0;

    void validate() const;
    bool operator==(const RegionSpec&) const = default;
};

/// Regions for a cyst of the given radius: target 0.8 r, annulus 1.1 r .. 1.5 r
/// unless other scale factors are supplied.
RegionSpec cyst_region(std::string name, double x, double z, double cyst_radius, double target_scale = 0.8,
                       double inner_scale = 1.1, double outer_scale = 1.5);

struct RegionMasks {
    Array2D<unsigned char> target;      // [depth x lateral]
    Array2D<unsigned char> background;
    std::size_t target_count = 0;
    std::size_t background_count = 0;
};

/// Pixel centers with d^2 <= r_t^2 form the target, r_i^2 < d^2 <= r_o^2 the
/// background.
RegionMasks region_mask(const RegionSpec& region, const BeamGrid& grid);

struct ContrastResult {
    double db = 0.0;
    bool unbounded = false;  // target mean is zero: db is +infinity
};

/// -20 log10(mean(target) / mean(background)) on the linear envelope.
/// Throws ValidationError for empty masks or a zero background mean.
ContrastResult contrast(const EnvelopeImage& env, const RegionMasks& masks);

struct GcnrResult {
    double value = 0.0;
    bool degenerate = false;  // every pixel in both regions had the same value
};

/// 1 - sum_k min(h_t[k], h_b[k]) over num_bins shared bins spanning
/// [0, max over both regions], histograms normalized to unit sum.
GcnrResult gcnr(const EnvelopeImage& env, const RegionMasks& masks, std::size_t num_bins = 256);

/// Same estimator on raw samples (used by the image version).
GcnrResult gcnr_samples(const std::vector<double>& target, const std::vector<double>& background,
                        std::size_t num_bins = 256);

struct RegionMetrics {
    std::string name;
    ContrastResult contrast;
    GcnrResult gcnr;
    std::size_t target_pixels = 0;
    std::size_t background_pixels = 0;
};

struct MetricsReport {
    std::vector<RegionMetrics> regions;
    ContrastResult mean_contrast;  // arithmetic mean over regions
    double mean_gcnr = 0.0;
    std::size_t num_bins = 256;
};

MetricsReport evaluate(const EnvelopeImage& env, const std::vector<RegionSpec>& regions,
                       std::size_t num_bins = 256);

/// {"regions":[{"name","contrast_db","gcnr","target_pixels","background_pixels"}],
///  "mean_contrast_db","mean_gcnr"}. An unbounded contrast is written as null
/// with "contrast_unbounded": true.
std::string metrics_to_json(const MetricsReport& report, int indent = 2);

}  // namespace fxpf
