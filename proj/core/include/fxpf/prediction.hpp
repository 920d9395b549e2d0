#pragma once

// Frequency-space (F-X) prediction filtering across receive channels.
//
// For each temporal frequency bin of a short axial kernel, the channel
// spectra RF_1..RF_N are modelled as an autoregressive sequence of order p
// along the array. The prediction filter is fitted by ridge-regularized least
// squares on the full (transient-padded) convolution system, and the channels
// are replaced by their predictions. Components that do not follow the AR
// model, such as incoherent clutter, are attenuated.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "fxpf/array2d.hpp"
#include "fxpf/geometry.hpp"
#include "fxpf/spectrum.hpp"

namespace fxpf {

struct PredictionFilter {
    std::vector<cplx> coefficients;  // a_1 .. a_p
    std::size_t order = 0;
    std::size_t frequency_bin = 0;
};

/// Toeplitz system d = M a with zero-padded leading and trailing rows.
/// M is (N + p - 1) x p with M(r, c) = RF[r - c] when 0 <= r - c < N, and
/// d[r] = RF[r + 1] when r + 1 < N (all indices 0-based).
struct ConvolutionSystem {
    Array2D<cplx> matrix;
    std::vector<cplx> rhs;

    std::size_t order() const noexcept { return matrix.cols(); }
    std::size_t num_channels() const noexcept { return matrix.rows() + 1 - matrix.cols(); }
};

enum class OrderMode { kFixed, kAdaptive };

/// Depth-dependent AR order p(z) = min(p_max, ceil(p_max * (z / (f_number * L))^beta)),
/// or a constant order in fixed mode.
struct AdaptiveOrderPolicy {
    OrderMode mode = OrderMode::kAdaptive;
    std::size_t fixed_order = 1;
    std::size_t p_max = 4;
    double beta = 1.0 / 3.0;
    double f_number = 1.75;
    double aperture_length = 128 * 0.3e-3;  // L [m]

    static AdaptiveOrderPolicy fixed(std::size_t order);
    static AdaptiveOrderPolicy adaptive(std::size_t p_max, double beta, double f_number,
                                        double aperture_length);

    // Largest order the policy can return.
    std::size_t max_order() const noexcept { return mode == OrderMode::kFixed ? fixed_order : p_max; }
    // Depth at which the adaptive order saturates at p_max.
    double saturation_depth() const noexcept { return f_number * aperture_length; }

    void validate() const;
    bool operator==(const AdaptiveOrderPolicy&) const = default;
};

struct FxpfConfig {
    double mu = 0.01;
    std::size_t kernel_length_samples = 8;
    std::size_t iterations = 2;
    AdaptiveOrderPolicy policy;

    void validate() const;
    bool operator==(const FxpfConfig&) const = default;
};

/// Kernel length of one wavelength in pulse-echo time: round(2 * fs / fc).
std::size_t one_wavelength_kernel(const TransducerGeometry& geometry);

/// Throws ConfigurationError unless 1 <= order < spectra.size().
ConvolutionSystem build_system(std::span<const cplx> spectra, std::size_t order);

/// Solves (M^H M + mu I) a = M^H d by Cholesky factorization.
/// Throws SingularSystemError if the system is (numerically) singular, which
/// can only happen for mu == 0.
PredictionFilter estimate_filter(const ConvolutionSystem& system, double mu,
                                 std::size_t frequency_bin = 0);

/// Returns per-channel estimates: channel 0 passes through, channel j >= 1 is
/// the prediction (M a)[j - 1].
std::vector<cplx> apply_filter(const ConvolutionSystem& system, const PredictionFilter& filter);

/// build_system -> estimate_filter -> apply_filter for a single direction.
std::vector<cplx> filter_bin(std::span<const cplx> spectra, std::size_t order, double mu);

/// Throws ValidationError for depth <= 0.
std::size_t adaptive_order(double depth, const AdaptiveOrderPolicy& policy);

/// Moving-kernel FXPF over one delay-aligned beamline.
///
/// The frame is cut into non-overlapping axial kernels. For each kernel the
/// order is chosen from the depth of its center sample, the elements whose
/// mask weight at that sample is positive are filtered with forward and
/// backward AR models, and the two predictions are averaged (the first/last
/// active channel take the only estimate available). DC and Nyquist bins pass
/// through. Kernels with no more than p + 1 active elements are left as is.
/// The whole pass is repeated config.iterations times.
///
/// active_mask must be [num_elements x num_samples].
ChannelFrame fxpf_filter_frame(const ChannelFrame& aligned, const Array2D<double>& active_mask,
                               const FxpfConfig& config);

}  // namespace fxpf
