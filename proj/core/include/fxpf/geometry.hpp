#pragma once

#include <cstddef>

#include "fxpf/array2d.hpp"

namespace fxpf {

/// Linear-array transducer description. Element positions are centered on the
/// array midpoint: x_n = (n - (N - 1) / 2) * pitch for 0-based n.
struct TransducerGeometry {
    std::size_t num_elements = 128;
    double pitch = 0.3e-3;                // element width + kerf [m]
    double center_frequency = 5.208e6;    // [Hz]
    double sampling_frequency = 20.832e6; // [Hz]
    double sound_speed = 1540.0;          // [m/s]

    double aperture_length() const noexcept { return static_cast<double>(num_elements) * pitch; }
    double element_x(std::size_t n) const noexcept;
    double wavelength() const noexcept { return sound_speed / center_frequency; }

    // Throws ValidationError when any invariant is violated.
    void validate() const;

    bool operator==(const TransducerGeometry&) const = default;
};

/// Time-sampled RF data, one row per transducer element.
struct ChannelFrame {
    TransducerGeometry geometry;
    Array2D<double> samples;  // [num_elements x num_samples]
    double start_time = 0.0;  // time of sample 0 [s]

    std::size_t num_elements() const noexcept { return samples.rows(); }
    std::size_t num_samples() const noexcept { return samples.cols(); }
    double sample_time(std::size_t k) const noexcept {
        return start_time + static_cast<double>(k) / geometry.sampling_frequency;
    }

    void validate() const;

    bool operator==(const ChannelFrame&) const = default;
};

ChannelFrame make_frame(const TransducerGeometry& geometry, std::size_t num_samples,
                        double start_time = 0.0);

}  // namespace fxpf
