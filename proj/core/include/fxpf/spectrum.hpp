#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "fxpf/array2d.hpp"

namespace fxpf {

using cplx = std::complex<double>;

/// Per-element spectrum of one axial kernel. Only the non-negative frequency
/// bins are kept (num_bins == kernel_length / 2 + 1); the real time signal is
/// recovered through conjugate symmetry.
struct SpectralKernel {
    Array2D<cplx> bins;                  // [num_elements x num_bins]
    std::vector<double> bin_frequencies; // [Hz]
    std::size_t kernel_start_sample = 0;
    std::size_t kernel_length = 0;

    std::size_t num_elements() const noexcept { return bins.rows(); }
    std::size_t num_bins() const noexcept { return bins.cols(); }
    // Index of the Nyquist bin, or num_bins() when the kernel length is odd.
    std::size_t nyquist_bin() const noexcept {
        return kernel_length % 2 == 0 ? kernel_length / 2 : num_bins();
    }
};

constexpr std::size_t retained_bins(std::size_t kernel_length) noexcept {
    return kernel_length / 2 + 1;
}

/// DFT of every row along the time axis. bin_frequencies[k] = k * fs / K.
/// Throws ValidationError for K < 2 or non-finite samples.
SpectralKernel forward_spectrum(const Array2D<double>& slice, std::size_t kernel_start,
                                double sampling_frequency = 1.0);

/// Inverse of forward_spectrum; output is [num_elements x kernel_length].
Array2D<double> inverse_spectrum(const SpectralKernel& spec);

/// Magnitude of the analytic signal of a real sequence (FFT Hilbert method).
std::vector<double> analytic_envelope(const std::vector<double>& line);

}  // namespace fxpf
