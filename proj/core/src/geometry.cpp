#include "fxpf/geometry.hpp"

#include <cmath>
#include <string>

#include "fxpf/errors.hpp"

namespace fxpf {

double TransducerGeometry::element_x(std::size_t n) const noexcept {
    return (static_cast<double>(n) - 0.5 * static_cast<double>(num_elements - 1)) * pitch;
}

void TransducerGeometry::validate() const {
    if (num_elements < 2) throw ValidationError("geometry: num_elements must be >= 2");
    if (!(pitch > 0.0) || !std::isfinite(pitch)) throw ValidationError("geometry: pitch must be > 0");
    if (!(sound_speed > 0.0) || !std::isfinite(sound_speed))
        throw ValidationError("geometry: sound_speed must be > 0");
    if (!(sampling_frequency > 0.0) || !std::isfinite(sampling_frequency))
        throw ValidationError("geometry: sampling_frequency must be > 0");
    if (!(center_frequency > 0.0) || !(center_frequency < 0.5 * sampling_frequency))
        throw ValidationError("geometry: center_frequency must lie in (0, fs/2)");
}

void ChannelFrame::validate() const {
    geometry.validate();
    if (samples.rows() != geometry.num_elements)
        throw ValidationError("frame: row count " + std::to_string(samples.rows()) +
                              " does not match num_elements " +
                              std::to_string(geometry.num_elements));
    if (!std::isfinite(start_time)) throw ValidationError("frame: start_time is not finite");
    for (double v : samples.values())
        if (!std::isfinite(v)) throw ValidationError("frame: non-finite sample");
}

ChannelFrame make_frame(const TransducerGeometry& geometry, std::size_t num_samples,
                        double start_time) {
    return ChannelFrame{geometry, Array2D<double>(geometry.num_elements, num_samples), start_time};
}

}  // namespace fxpf
