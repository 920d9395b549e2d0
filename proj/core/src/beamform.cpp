#include "fxpf/beamform.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <string>

#include "fxpf/errors.hpp"
#include "fxpf/parallel.hpp"
#include "fxpf/spectrum.hpp"

namespace fxpf {

void BeamGrid::validate() const {
    if (lateral.empty()) throw ValidationError("grid: no beamlines");
    for (std::size_t i = 1; i < lateral.size(); ++i)
        if (!(lateral[i] > lateral[i - 1])) throw ValidationError("grid: lateral positions must increase");
    if (!(dz > 0.0) || !std::isfinite(dz)) throw ValidationError("grid: dz must be > 0");
    if (!(z_start > 0.0) || !std::isfinite(z_start)) throw ValidationError("grid: z_start must be > 0");
    if (num_depths == 0) throw ValidationError("grid: no depth samples");
}

BeamGrid default_grid(const TransducerGeometry& geometry, double z_start, double z_end) {
    geometry.validate();
    if (!(z_end > z_start)) throw ValidationError("grid: z_end must exceed z_start");
    BeamGrid grid;
    grid.lateral.resize(geometry.num_elements);
    for (std::size_t n = 0; n < geometry.num_elements; ++n) grid.lateral[n] = geometry.element_x(n);
    grid.z_start = z_start;
    grid.dz = geometry.sound_speed / (2.0 * geometry.sampling_frequency);
    grid.num_depths = static_cast<std::size_t>(std::floor((z_end - z_start) / grid.dz)) + 1;
    grid.validate();
    return grid;
}

std::size_t ApodizationProfile::active_count() const {
    return static_cast<std::size_t>(std::count_if(weights.begin(), weights.end(), [](double w) { return w > 0.0; }));
}

double receive_delay(double element_x, double pixel_x, double pixel_z, double sound_speed) {
    const double dx = pixel_x - element_x;
    return (pixel_z + std::sqrt(dx * dx + pixel_z * pixel_z)) / sound_speed;
}

AlignedBeamline align_channels(const ChannelFrame& raw, double beamline_x, const BeamGrid& grid) {
    grid.validate();
    const auto& geo = raw.geometry;
    const double c = geo.sound_speed;
    const double fs = geo.sampling_frequency;
    const std::size_t num_raw = raw.num_samples();

    AlignedBeamline result;
    result.frame.geometry = geo;
    result.frame.geometry.sampling_frequency = c / (2.0 * grid.dz);
    result.frame.start_time = 2.0 * grid.z_start / c;
    result.frame.samples = Array2D<double>(raw.num_elements(), grid.num_depths);

    for (std::size_t n = 0; n < raw.num_elements(); ++n) {
        const double ex = geo.element_x(n);
        auto src = raw.samples.row(n);
        auto dst = result.frame.samples.row(n);
        for (std::size_t k = 0; k < grid.num_depths; ++k) {
            const double t = receive_delay(ex, beamline_x, grid.depth(k), c);
            const double pos = (t - raw.start_time) * fs;
            if (!(pos >= 0.0) || pos > static_cast<double>(num_raw - 1) || num_raw == 0) {
                ++result.out_of_range_reads;
                continue;
            }
            const auto i0 = static_cast<std::size_t>(pos);
            const double frac = pos - static_cast<double>(i0);
            dst[k] = i0 + 1 < num_raw ? src[i0] + frac * (src[i0 + 1] - src[i0]) : src[i0];
        }
    }
    return result;
}

ApodizationProfile apodization(double beamline_x, double depth, const TransducerGeometry& geometry,
                               double f_number, ApodizationWindow window) {
    if (!(depth > 0.0)) throw ValidationError("apodization: depth must be > 0");
    if (!(f_number > 0.0)) throw ValidationError("apodization: f_number must be > 0");
    const std::size_t n_el = geometry.num_elements;
    const double half = depth / (2.0 * f_number);
    // Taper support slightly wider than the aperture so edge elements keep a
    // positive weight.
    const double taper = half + geometry.pitch;

    ApodizationProfile prof;
    prof.window = window;
    prof.weights.assign(n_el, 0.0);
    std::size_t nearest = 0;
    double nearest_dist = INFINITY;
    for (std::size_t n = 0; n < n_el; ++n) {
        const double dx = std::abs(geometry.element_x(n) - beamline_x);
        if (dx < nearest_dist) {
            nearest_dist = dx;
            nearest = n;
        }
        if (dx > half) continue;
        prof.weights[n] = window == ApodizationWindow::kRectangular
                              ? 1.0
                              : 0.5 * (1.0 + std::cos(std::numbers::pi * dx / taper));
    }
    if (prof.active_count() == 0) prof.weights[nearest] = 1.0;
    return prof;
}

Array2D<double> apodization_map(double beamline_x, const BeamGrid& grid, const TransducerGeometry& geometry,
                                double f_number, ApodizationWindow window) {
    Array2D<double> map(geometry.num_elements, grid.num_depths);
    for (std::size_t k = 0; k < grid.num_depths; ++k) {
        const ApodizationProfile prof = apodization(beamline_x, grid.depth(k), geometry, f_number, window);
        for (std::size_t n = 0; n < geometry.num_elements; ++n) map(n, k) = prof.weights[n];
    }
    return map;
}

std::vector<double> das_sum(const ChannelFrame& aligned, const Array2D<double>& weights) {
    if (weights.rows() != aligned.num_elements() || weights.cols() != aligned.num_samples())
        throw ValidationError("das_sum: weight map shape does not match frame");
    std::vector<double> line(aligned.num_samples(), 0.0);
    for (std::size_t n = 0; n < aligned.num_elements(); ++n) {
        auto s = aligned.samples.row(n);
        auto w = weights.row(n);
        for (std::size_t k = 0; k < line.size(); ++k) line[k] += w[k] * s[k];
    }
    return line;
}

std::vector<double> envelope(const std::vector<double>& line) { return analytic_envelope(line); }

Array2D<std::uint8_t> log_compress(const EnvelopeImage& env, double dynamic_range_db) {
    if (!(dynamic_range_db > 0.0)) throw ValidationError("log_compress: dynamic range must be > 0");
    const auto& mag = env.magnitude;
    Array2D<std::uint8_t> out(mag.rows(), mag.cols(), 0);
    double peak = 0.0;
    for (double v : mag.values()) peak = std::max(peak, v);
    if (!(peak > 0.0)) return out;

    auto dst = out.values();
    auto src = mag.values();
    for (std::size_t i = 0; i < src.size(); ++i) {
        if (!(src[i] > 0.0)) continue;
        const double db = std::clamp(20.0 * std::log10(src[i] / peak), -dynamic_range_db, 0.0);
        dst[i] = static_cast<std::uint8_t>(std::lround(255.0 * (db + dynamic_range_db) / dynamic_range_db));
    }
    return out;
}

void write_pgm(const std::filesystem::path& path, const Array2D<std::uint8_t>& image) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open for writing: " + path.string());
    os << "P5\n" << image.cols() << ' ' << image.rows() << "\n255\n";
    auto px = image.values();
    os.write(reinterpret_cast<const char*>(px.data()), static_cast<std::streamsize>(px.size()));
    if (!os) throw IoError("write failed: " + path.string());
}

BeamformedImage beamform_image(const ChannelFrame& raw, const BeamGrid& grid, const BeamformSettings& settings) {
    raw.validate();
    grid.validate();
    if (settings.fxpf) settings.fxpf->validate();

    const std::size_t lines = grid.num_lines();
    BeamformedImage img;
    img.rf = Array2D<double>(grid.num_depths, lines);
    img.envelope.magnitude = Array2D<double>(grid.num_depths, lines);
    img.envelope.grid = grid;
    std::vector<std::size_t> misses(lines, 0);

    parallel_for(lines, settings.threads, [&](std::size_t l) {
        AlignedBeamline aligned = align_channels(raw, grid.lateral[l], grid);
        misses[l] = aligned.out_of_range_reads;
        const Array2D<double> weights =
            apodization_map(grid.lateral[l], grid, raw.geometry, settings.f_number, settings.window);
        if (settings.fxpf) aligned.frame = fxpf_filter_frame(aligned.frame, weights, *settings.fxpf);
        const std::vector<double> line = das_sum(aligned.frame, weights);
        const std::vector<double> env = envelope(line);
        for (std::size_t k = 0; k < grid.num_depths; ++k) {
            img.rf(k, l) = line[k];
            img.envelope.magnitude(k, l) = env[k];
        }
    });
    for (std::size_t m : misses) img.out_of_range_reads += m;
    return img;
}

ChannelFrame envelope_to_frame(const EnvelopeImage& env, const TransducerGeometry& geometry) {
    const auto& grid = env.grid;
    grid.validate();
    const std::size_t lines = grid.num_lines();
    if (lines < 2) throw ValidationError("envelope_to_frame: need at least two beamlines");
    const double spacing = grid.lateral[1] - grid.lateral[0];
    const double tol = 1e-9 * spacing;
    for (std::size_t l = 0; l < lines; ++l) {
        const double expected = (static_cast<double>(l) - 0.5 * static_cast<double>(lines - 1)) * spacing;
        if (std::abs(grid.lateral[l] - expected) > tol)
            throw ValidationError("envelope_to_frame: lateral grid must be uniform and centered");
    }

    ChannelFrame frame;
    frame.geometry = geometry;
    frame.geometry.num_elements = lines;
    frame.geometry.pitch = spacing;
    frame.geometry.sampling_frequency = geometry.sound_speed / (2.0 * grid.dz);
    frame.start_time = 2.0 * grid.z_start / geometry.sound_speed;
    frame.samples = Array2D<double>(lines, grid.num_depths);
    for (std::size_t l = 0; l < lines; ++l)
        for (std::size_t k = 0; k < grid.num_depths; ++k) frame.samples(l, k) = env.magnitude(k, l);
    return frame;
}

EnvelopeImage envelope_from_frame(const ChannelFrame& frame) {
    const auto& geo = frame.geometry;
    EnvelopeImage env;
    env.grid.lateral.resize(frame.num_elements());
    for (std::size_t l = 0; l < frame.num_elements(); ++l) env.grid.lateral[l] = geo.element_x(l);
    env.grid.dz = geo.sound_speed / (2.0 * geo.sampling_frequency);
    env.grid.z_start = 0.5 * geo.sound_speed * frame.start_time;
    env.grid.num_depths = frame.num_samples();
    env.magnitude = Array2D<double>(frame.num_samples(), frame.num_elements());
    for (std::size_t l = 0; l < frame.num_elements(); ++l)
        for (std::size_t k = 0; k < frame.num_samples(); ++k) {
            const double v = frame.samples(l, k);
            if (v < 0.0) throw ValidationError("envelope_from_frame: negative magnitude");
            env.magnitude(k, l) = v;
        }
    return env;
}

}  // namespace fxpf
