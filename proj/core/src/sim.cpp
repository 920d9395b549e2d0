#include "fxpf/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "fxpf/errors.hpp"
#include "fxpf/parallel.hpp"

namespace fxpf {

void PhantomSpec::validate() const {
    if (!(x_max > x_min) || !(z_max > z_min)) throw ValidationError("phantom: empty extent");
    if (!(z_min >= 0.0)) throw ValidationError("phantom: z_min must be >= 0");
    if (!(density_per_mm2 >= 0.0) || !std::isfinite(density_per_mm2))
        throw ValidationError("phantom: density must be >= 0");
    for (const auto& inc : inclusions) {
        if (!(inc.radius > 0.0)) throw ValidationError("phantom: inclusion radius must be > 0");
        if (inc.x - inc.radius < x_min || inc.x + inc.radius > x_max || inc.z - inc.radius < z_min ||
            inc.z + inc.radius > z_max)
            throw ValidationError("phantom: inclusion '" + inc.name + "' extends outside the phantom");
        if (std::isnan(inc.echogenicity_db) || inc.echogenicity_db == INFINITY)
            throw ValidationError("phantom: invalid echogenicity");
    }
}

namespace {

double gauss_pulse_coefficient(const PulseModel& p) {
    // scipy.signal.gausspulse convention with bwr = -6 dB.
    const double ref = std::pow(10.0, -6.0 / 20.0);
    const double bw = p.fractional_bandwidth * p.center_frequency;
    return -(std::numbers::pi * bw) * (std::numbers::pi * bw) / (4.0 * std::log(ref));
}

}  // namespace

void PulseModel::validate() const {
    if (!(center_frequency > 0.0)) throw ValidationError("pulse: center frequency must be > 0");
    if (!(fractional_bandwidth > 0.0 && fractional_bandwidth < 2.0))
        throw ValidationError("pulse: fractional bandwidth must lie in (0, 2)");
}

double PulseModel::operator()(double t) const noexcept {
    const double a = gauss_pulse_coefficient(*this);
    return std::exp(-a * t * t) * std::cos(2.0 * std::numbers::pi * center_frequency * t);
}

double PulseModel::support() const noexcept {
    return std::sqrt(-std::log(1e-6) / gauss_pulse_coefficient(*this));
}

double ReceiveModel::gain(double sin_theta, double cos_theta, double wavelength) const noexcept {
    if (!directivity) return 1.0;
    const double u = std::numbers::pi * element_width * sin_theta / wavelength;
    const double sinc = std::abs(u) < 1e-12 ? 1.0 : std::sin(u) / u;
    return sinc * cos_theta;
}

std::vector<Scatterer> generate_phantom(const PhantomSpec& spec) {
    spec.validate();
    std::mt19937_64 rng(spec.seed);
    const double area_mm2 = (spec.x_max - spec.x_min) * (spec.z_max - spec.z_min) * 1e6;
    const double expected = spec.density_per_mm2 * area_mm2;

    std::vector<Scatterer> out;
    if (!(expected > 0.0)) return out;
    std::poisson_distribution<long long> count_dist(expected);
    const auto count = static_cast<std::size_t>(count_dist(rng));
    std::uniform_real_distribution<double> ux(spec.x_min, spec.x_max);
    std::uniform_real_distribution<double> uz(spec.z_min, spec.z_max);
    std::normal_distribution<double> amp(0.0, 1.0);

    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Scatterer s{ux(rng), uz(rng), amp(rng)};
        bool keep = true;
        for (const auto& inc : spec.inclusions) {
            const double dx = s.x - inc.x;
            const double dz = s.z - inc.z;
            if (dx * dx + dz * dz > inc.radius * inc.radius) continue;
            if (inc.anechoic())
                keep = false;
            else
                s.amplitude *= std::pow(10.0, inc.echogenicity_db / 20.0);
            break;
        }
        if (keep) out.push_back(s);
    }
    return out;
}

AberrationProfile zero_aberration(std::size_t num_elements) {
    AberrationProfile prof;
    prof.delays.assign(num_elements, 0.0);
    return prof;
}

AberrationProfile generate_aberration(std::size_t num_elements, double rms, double correlation_length,
                                      double pitch, std::uint64_t seed) {
    if (num_elements == 0) throw ValidationError("aberration: num_elements must be > 0");
    if (!(rms >= 0.0) || !std::isfinite(rms)) throw ValidationError("aberration: rms must be >= 0");
    if (!(correlation_length >= 0.0)) throw ValidationError("aberration: correlation length must be >= 0");
    if (!(pitch > 0.0)) throw ValidationError("aberration: pitch must be > 0");

    AberrationProfile prof;
    prof.rms = rms;
    prof.correlation_length = correlation_length;
    prof.seed = seed;
    prof.delays.assign(num_elements, 0.0);
    if (rms == 0.0) return prof;

    const double sigma = correlation_length / pitch;  // in elements
    const auto half = static_cast<std::size_t>(std::ceil(4.0 * sigma));
    std::vector<double> kernel(2 * half + 1);
    for (std::size_t i = 0; i < kernel.size(); ++i) {
        const double u = static_cast<double>(i) - static_cast<double>(half);
        kernel[i] = sigma > 0.0 ? std::exp(-0.5 * u * u / (sigma * sigma)) : (u == 0.0 ? 1.0 : 0.0);
    }

    // Extended white sequence so every output sample sees the full kernel.
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> white(0.0, 1.0);
    std::vector<double> noise(num_elements + 2 * half);
    for (double& v : noise) v = white(rng);
    for (std::size_t n = 0; n < num_elements; ++n) {
        double acc = 0.0;
        for (std::size_t i = 0; i < kernel.size(); ++i) acc += kernel[i] * noise[n + i];
        prof.delays[n] = acc;
    }

    double mean = 0.0;
    for (double v : prof.delays) mean += v;
    mean /= static_cast<double>(num_elements);
    double ss = 0.0;
    for (double& v : prof.delays) {
        v -= mean;
        ss += v * v;
    }
    const double current = std::sqrt(ss / static_cast<double>(num_elements));
    if (current > 0.0)
        for (double& v : prof.delays) v *= rms / current;
    return prof;
}

ChannelFrame simulate_rx(const std::vector<Scatterer>& phantom, const TransducerGeometry& geometry,
                         const PulseModel& pulse, const AberrationProfile& aberration, double duration,
                         const ReceiveModel& receive, std::size_t threads) {
    geometry.validate();
    pulse.validate();
    if (aberration.delays.size() != geometry.num_elements)
        throw ValidationError("simulate_rx: aberration profile length does not match the array");
    if (!(duration > 0.0)) throw ValidationError("simulate_rx: duration must be > 0");
    if (receive.directivity && !(receive.element_width > 0.0))
        throw ValidationError("simulate_rx: element width must be > 0");

    const double fs = geometry.sampling_frequency;
    const double c = geometry.sound_speed;
    const auto num_samples = static_cast<std::size_t>(std::ceil(duration * fs));
    ChannelFrame frame = make_frame(geometry, num_samples, 0.0);

    const std::size_t n_el = geometry.num_elements;
    const double r_min = geometry.wavelength();
    const double support = pulse.support();
    const double env_coef = gauss_pulse_coefficient(pulse);
    const double omega = 2.0 * std::numbers::pi * pulse.center_frequency;

    // Transmit-side delay: nearest element to each scatterer.
    std::vector<double> tx_time(phantom.size());
    for (std::size_t s = 0; s < phantom.size(); ++s) {
        const double idx = phantom[s].x / geometry.pitch + 0.5 * static_cast<double>(n_el - 1);
        const auto nearest = static_cast<std::size_t>(std::clamp(std::round(idx), 0.0, static_cast<double>(n_el - 1)));
        tx_time[s] = phantom[s].z / c + aberration.delays[nearest];
    }

    parallel_for(n_el, threads, [&](std::size_t m) {
        const double xm = geometry.element_x(m);
        const double tau_rx = aberration.delays[m];
        auto row = frame.samples.row(m);
        for (std::size_t s = 0; s < phantom.size(); ++s) {
            const auto& sc = phantom[s];
            if (sc.amplitude == 0.0) continue;
            const double dx = sc.x - xm;
            const double r = std::sqrt(dx * dx + sc.z * sc.z);
            const double arrival = tx_time[s] + r / c + tau_rx;
            const double amp = sc.amplitude / std::sqrt(std::max(r, r_min)) *
                               (r > 0.0 ? receive.gain(dx / r, sc.z / r, r_min) : 1.0);
            const double first = std::ceil((arrival - support) * fs);
            const double last = std::floor((arrival + support) * fs);
            const auto k0 = static_cast<std::ptrdiff_t>(std::max(first, 0.0));
            const auto k1 = static_cast<std::ptrdiff_t>(std::min(last, static_cast<double>(num_samples) - 1.0));
            for (std::ptrdiff_t k = k0; k <= k1; ++k) {
                const double t = static_cast<double>(k) / fs - arrival;
                row[static_cast<std::size_t>(k)] += amp * std::exp(-env_coef * t * t) * std::cos(omega * t);
            }
        }
    });
    return frame;
}

void add_channel_noise(ChannelFrame& frame, const PulseModel& pulse, double snr_db, std::uint64_t seed,
                       std::size_t threads) {
    pulse.validate();
    if (std::isnan(snr_db)) throw ValidationError("add_channel_noise: snr must be a number");
    const std::size_t n_el = frame.num_elements();
    const std::size_t n_s = frame.num_samples();
    if (n_el == 0 || n_s == 0 || snr_db == INFINITY) return;

    double ss = 0.0;
    for (double v : frame.samples.values()) ss += v * v;
    const double signal_rms = std::sqrt(ss / static_cast<double>(frame.samples.size()));
    if (signal_rms == 0.0) return;

    const double fs = frame.geometry.sampling_frequency;
    const auto half = static_cast<std::ptrdiff_t>(std::ceil(pulse.support() * fs));
    std::vector<double> taps(static_cast<std::size_t>(2 * half + 1));
    for (std::ptrdiff_t i = -half; i <= half; ++i) taps[static_cast<std::size_t>(i + half)] = pulse(static_cast<double>(i) / fs);

    Array2D<double> noise(n_el, n_s);
    parallel_for(n_el, threads, [&](std::size_t m) {
        std::mt19937_64 rng(seed ^ (0x9E3779B97F4A7C15ull * (m + 1)));
        std::normal_distribution<double> white(0.0, 1.0);
        std::vector<double> w(n_s + taps.size() - 1);
        for (double& v : w) v = white(rng);
        auto row = noise.row(m);
        for (std::size_t k = 0; k < n_s; ++k) {
            double acc = 0.0;
            for (std::size_t i = 0; i < taps.size(); ++i) acc += taps[i] * w[k + i];
            row[k] = acc;
        }
    });
    double nn = 0.0;
    for (double v : noise.values()) nn += v * v;
    const double scale = signal_rms * std::pow(10.0, -snr_db / 20.0) / std::sqrt(nn / static_cast<double>(noise.size()));
    auto dst = frame.samples.values();
    auto src = noise.values();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += scale * src[i];
}

double required_duration(const PhantomSpec& spec, const TransducerGeometry& geometry, const PulseModel& pulse,
                         double max_abs_delay) {
    const double half_ap = 0.5 * geometry.aperture_length();
    const double far_x = std::max(std::abs(spec.x_min), std::abs(spec.x_max)) + half_ap;
    const double path = spec.z_max + std::sqrt(far_x * far_x + spec.z_max * spec.z_max);
    return path / geometry.sound_speed + 2.0 * max_abs_delay + 2.0 * pulse.support();
}

}  // namespace fxpf
