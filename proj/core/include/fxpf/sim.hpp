#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "fxpf/geometry.hpp"

namespace fxpf {

struct Inclusion {
    std::string name;
    double x = 0.0;  // center [m]
    double z = 0.0;
    double radius = 0.0;
    // Scattering strength relative to background; -infinity is anechoic.
    double echogenicity_db = -std::numeric_limits<double>::infinity();
    bool scored = false;  // evaluated by the contrast/gCNR comparison

    bool anechoic() const noexcept { return echogenicity_db == -std::numeric_limits<double>::infinity(); }
    bool operator==(const Inclusion&) const = default;
};

struct PhantomSpec {
    double x_min = -19e-3, x_max = 19e-3;  // [m]
    double z_min = 2e-3, z_max = 45e-3;
    double density_per_mm2 = 10.0;
    std::vector<Inclusion> inclusions;
    std::uint64_t seed = 1;

    void validate() const;
    bool operator==(const PhantomSpec&) const = default;
};

struct Scatterer {
    double x = 0.0;
    double z = 0.0;
    double amplitude = 0.0;
};

struct AberrationProfile {
    std::vector<double> delays;  // per element [s]
    double rms = 0.0;
    double correlation_length = 0.0;
    std::uint64_t seed = 0;
};

/// Gaussian-modulated sinusoid; bandwidth is the -6 dB fractional bandwidth.
struct PulseModel {
    double center_frequency = 5.208e6;
    double fractional_bandwidth = 0.6;

    double operator()(double t) const noexcept;
    // |t| beyond which the envelope is below 1e-6 of its peak.
    double support() const noexcept;
    void validate() const;
};

/// Receive-element obliquity. With pitch close to one wavelength, echoes
/// arriving at grazing incidence alias into grating lobes unless the element
/// response attenuates them.
struct ReceiveModel {
    bool directivity = true;
    double element_width = 0.27e-3;  // [m]

    /// sinc(width * sin(theta) / lambda) * cos(theta), theta from the element normal.
    double gain(double sin_theta, double cos_theta, double wavelength) const noexcept;
    bool operator==(const ReceiveModel&) const = default;
};

/// Uniform scatterers with a Poisson count at the requested density and
/// standard-normal amplitudes, scaled (or removed) inside inclusions.
std::vector<Scatterer> generate_phantom(const PhantomSpec& spec);

/// Smoothed white Gaussian delays with zero mean and exactly the requested RMS.
AberrationProfile generate_aberration(std::size_t num_elements, double rms, double correlation_length,
                                      double pitch, std::uint64_t seed);

AberrationProfile zero_aberration(std::size_t num_elements);

/// Pulse-echo channel data for a 0-degree plane-wave transmit. Each element's
/// receive path is delayed by its aberration value; the transmit path of each
/// scatterer is delayed by the aberration of the element laterally nearest to it.
/// Amplitudes fall off as 1/sqrt(max(r, wavelength)) times the element gain.
ChannelFrame simulate_rx(const std::vector<Scatterer>& phantom, const TransducerGeometry& geometry,
                         const PulseModel& pulse, const AberrationProfile& aberration, double duration,
                         const ReceiveModel& receive = {}, std::size_t threads = 1);

/// Adds receive noise: white Gaussian per element, shaped by the pulse
/// spectrum (transducer passband), scaled so that its RMS over the frame is
/// rms(frame) * 10^(-snr_db / 20). Each element has its own generator, so the
/// result does not depend on the thread count.
void add_channel_noise(ChannelFrame& frame, const PulseModel& pulse, double snr_db, std::uint64_t seed,
                       std::size_t threads = 1);

/// Round trip to the deepest, farthest scatterer plus aberration and pulse margins.
double required_duration(const PhantomSpec& spec, const TransducerGeometry& geometry, const PulseModel& pulse,
                         double max_abs_delay);

}  // namespace fxpf
