#include "fxpf/prediction.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fxpf/errors.hpp"

namespace fxpf {

AdaptiveOrderPolicy AdaptiveOrderPolicy::fixed(std::size_t order) {
    AdaptiveOrderPolicy p;
    p.mode = OrderMode::kFixed;
    p.fixed_order = order;
    return p;
}

AdaptiveOrderPolicy AdaptiveOrderPolicy::adaptive(std::size_t p_max, double beta, double f_number,
                                                  double aperture_length) {
    AdaptiveOrderPolicy p;
    p.mode = OrderMode::kAdaptive;
    p.p_max = p_max;
    p.beta = beta;
    p.f_number = f_number;
    p.aperture_length = aperture_length;
    return p;
}

void AdaptiveOrderPolicy::validate() const {
    if (mode == OrderMode::kFixed) {
        if (fixed_order < 1) throw ConfigurationError("order policy: fixed order must be >= 1");
        return;
    }
    if (p_max < 1) throw ConfigurationError("order policy: p_max must be >= 1");
    if (!(beta > 0.0) || !std::isfinite(beta)) throw ConfigurationError("order policy: beta must be > 0");
    if (!(f_number > 0.0) || !std::isfinite(f_number))
        throw ConfigurationError("order policy: f_number must be > 0");
    if (!(aperture_length > 0.0) || !std::isfinite(aperture_length))
        throw ConfigurationError("order policy: aperture_length must be > 0");
}

void FxpfConfig::validate() const {
    policy.validate();
    if (!(mu >= 0.0) || !std::isfinite(mu)) throw ConfigurationError("fxpf: mu must be >= 0");
    if (iterations < 1) throw ConfigurationError("fxpf: iterations must be >= 1");
    if (kernel_length_samples < 2 || kernel_length_samples < 2 * policy.max_order())
        throw ConfigurationError("fxpf: kernel_length_samples must be >= max(2, 2 * p_max)");
}

std::size_t one_wavelength_kernel(const TransducerGeometry& geometry) {
    const double samples = 2.0 * geometry.sampling_frequency / geometry.center_frequency;
    return std::max<std::size_t>(2, static_cast<std::size_t>(std::lround(samples)));
}

ConvolutionSystem build_system(std::span<const cplx> spectra, std::size_t order) {
    const std::size_t n = spectra.size();
    if (order < 1) throw ConfigurationError("build_system: order must be >= 1");
    if (order >= n)
        throw ConfigurationError("build_system: order " + std::to_string(order) +
                                 " needs more than " + std::to_string(n) + " channels");

    ConvolutionSystem sys;
    sys.matrix = Array2D<cplx>(n + order - 1, order);
    sys.rhs.assign(n + order - 1, cplx{});
    for (std::size_t c = 0; c < order; ++c)
        for (std::size_t i = 0; i < n; ++i) sys.matrix(i + c, c) = spectra[i];
    for (std::size_t r = 0; r + 1 < n; ++r) sys.rhs[r] = spectra[r + 1];
    return sys;
}

PredictionFilter estimate_filter(const ConvolutionSystem& system, double mu, std::size_t frequency_bin) {
    const std::size_t p = system.order();
    const std::size_t rows = system.matrix.rows();
    if (p < 1 || system.rhs.size() != rows)
        throw ValidationError("estimate_filter: malformed convolution system");
    if (!(mu >= 0.0) || !std::isfinite(mu)) throw ValidationError("estimate_filter: mu must be >= 0");

    // Normal equations, lower triangle only (the matrix is Hermitian).
    Array2D<cplx> gram(p, p);
    std::vector<cplx> rhs(p);
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            cplx acc{};
            for (std::size_t r = 0; r < rows; ++r) acc += std::conj(system.matrix(r, i)) * system.matrix(r, j);
            gram(i, j) = acc;
        }
        gram(i, i) = cplx(gram(i, i).real() + mu, 0.0);
        cplx acc{};
        for (std::size_t r = 0; r < rows; ++r) acc += std::conj(system.matrix(r, i)) * system.rhs[r];
        rhs[i] = acc;
    }

    double max_diag = 0.0;
    for (std::size_t i = 0; i < p; ++i) max_diag = std::max(max_diag, gram(i, i).real());
    const double pivot_floor = mu > 0.0 ? 0.0 : 1e-12 * max_diag;

    // In-place Cholesky: gram = L L^H.
    for (std::size_t j = 0; j < p; ++j) {
        double d = gram(j, j).real();
        for (std::size_t k = 0; k < j; ++k) d -= std::norm(gram(j, k));
        if (!(d > pivot_floor)) throw SingularSystemError("estimate_filter: normal equations are singular");
        const double ljj = std::sqrt(d);
        gram(j, j) = ljj;
        for (std::size_t i = j + 1; i < p; ++i) {
            cplx s = gram(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= gram(i, k) * std::conj(gram(j, k));
            gram(i, j) = s / ljj;
        }
    }
    // L y = b
    std::vector<cplx> y(p);
    for (std::size_t i = 0; i < p; ++i) {
        cplx s = rhs[i];
        for (std::size_t k = 0; k < i; ++k) s -= gram(i, k) * y[k];
        y[i] = s / gram(i, i).real();
    }
    // L^H x = y
    PredictionFilter filter;
    filter.order = p;
    filter.frequency_bin = frequency_bin;
    filter.coefficients.assign(p, cplx{});
    auto& x = filter.coefficients;
    for (std::size_t ii = p; ii-- > 0;) {
        cplx s = y[ii];
        for (std::size_t k = ii + 1; k < p; ++k) s -= std::conj(gram(k, ii)) * x[k];
        x[ii] = s / gram(ii, ii).real();
    }
    return filter;
}

std::vector<cplx> apply_filter(const ConvolutionSystem& system, const PredictionFilter& filter) {
    const std::size_t p = system.order();
    if (filter.order != p || filter.coefficients.size() != p)
        throw ValidationError("apply_filter: filter order does not match system");
    const std::size_t n = system.num_channels();

    std::vector<cplx> out(n);
    out[0] = system.matrix(0, 0);
    for (std::size_t j = 1; j < n; ++j) {
        cplx acc{};
        for (std::size_t c = 0; c < p; ++c) acc += system.matrix(j - 1, c) * filter.coefficients[c];
        out[j] = acc;
    }
    return out;
}

std::vector<cplx> filter_bin(std::span<const cplx> spectra, std::size_t order, double mu) {
    const ConvolutionSystem sys = build_system(spectra, order);
    return apply_filter(sys, estimate_filter(sys, mu));
}

std::size_t adaptive_order(double depth, const AdaptiveOrderPolicy& policy) {
    if (!(depth > 0.0) || !std::isfinite(depth)) throw ValidationError("adaptive_order: depth must be > 0");
    if (policy.mode == OrderMode::kFixed) return policy.fixed_order;

    const double pmax = static_cast<double>(policy.p_max);
    double v = pmax * std::pow(depth / policy.saturation_depth(), policy.beta);
    // Values that are integers up to rounding (e.g. 4 * (1/8)^(1/3)) must not
    // be pushed to the next order by the ceiling.
    const double nearest = std::round(v);
    if (std::abs(v - nearest) <= 1e-9 * std::max(1.0, nearest)) v = nearest;
    const double p = std::min(pmax, std::ceil(v));
    return std::max<std::size_t>(1, static_cast<std::size_t>(p));
}

namespace {

// Forward and backward predictions averaged; the end channels use whichever
// direction predicts them.
void filter_bin_bidirectional(std::vector<cplx>& column, std::size_t order, double mu) {
    const std::size_t n = column.size();
    const std::vector<cplx> fwd = filter_bin(column, order, mu);
    std::vector<cplx> reversed(column.rbegin(), column.rend());
    std::vector<cplx> bwd = filter_bin(reversed, order, mu);
    std::reverse(bwd.begin(), bwd.end());

    column[0] = bwd[0];
    column[n - 1] = fwd[n - 1];
    for (std::size_t j = 1; j + 1 < n; ++j) column[j] = 0.5 * (fwd[j] + bwd[j]);
}

}  // namespace

ChannelFrame fxpf_filter_frame(const ChannelFrame& aligned, const Array2D<double>& active_mask,
                               const FxpfConfig& config) {
    config.validate();
    aligned.validate();
    const std::size_t num_el = aligned.num_elements();
    const std::size_t num_samp = aligned.num_samples();
    if (active_mask.rows() != num_el || active_mask.cols() != num_samp)
        throw ValidationError("fxpf_filter_frame: active mask shape does not match frame");

    ChannelFrame out = aligned;
    const double fs = aligned.geometry.sampling_frequency;
    const double c = aligned.geometry.sound_speed;
    const std::size_t klen = config.kernel_length_samples;

    std::vector<std::size_t> active;
    std::vector<cplx> column;
    for (std::size_t iter = 0; iter < config.iterations; ++iter) {
        for (std::size_t start = 0; start < num_samp; start += klen) {
            const std::size_t len = std::min(klen, num_samp - start);
            const double center = static_cast<double>(start) + 0.5 * static_cast<double>(len - 1);
            const double depth = 0.5 * c * (aligned.start_time + center / fs);

            std::size_t order = config.policy.fixed_order;
            if (config.policy.mode == OrderMode::kAdaptive) {
                if (!(depth > 0.0)) continue;
                order = adaptive_order(depth, config.policy);
            }
            if (len < klen && len < 2 * (order + 1)) continue;
            if (len < 2) continue;

            const std::size_t center_idx = start + (len - 1) / 2;
            active.clear();
            for (std::size_t n = 0; n < num_el; ++n)
                if (active_mask(n, center_idx) > 0.0) active.push_back(n);
            if (active.size() <= order + 1) continue;

            Array2D<double> slice(active.size(), len);
            for (std::size_t a = 0; a < active.size(); ++a) {
                auto src = out.samples.row(active[a]).subspan(start, len);
                std::copy(src.begin(), src.end(), slice.row(a).begin());
            }

            SpectralKernel spec = forward_spectrum(slice, start, fs);
            const std::size_t nyq = spec.nyquist_bin();
            column.resize(active.size());
            for (std::size_t k = 1; k < spec.num_bins(); ++k) {
                if (k == nyq) continue;
                bool all_zero = true;
                for (std::size_t a = 0; a < active.size(); ++a) {
                    column[a] = spec.bins(a, k);
                    if (column[a] != cplx{}) all_zero = false;
                }
                if (all_zero) continue;
                filter_bin_bidirectional(column, order, config.mu);
                for (std::size_t a = 0; a < active.size(); ++a) spec.bins(a, k) = column[a];
            }

            const Array2D<double> filtered = inverse_spectrum(spec);
            for (std::size_t a = 0; a < active.size(); ++a) {
                auto src = filtered.row(a);
                std::copy(src.begin(), src.end(), out.samples.row(active[a]).begin() + static_cast<std::ptrdiff_t>(start));
            }
        }
    }
    return out;
}

}  // namespace fxpf
