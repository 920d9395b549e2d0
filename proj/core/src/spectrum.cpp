#include "fxpf/spectrum.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <utility>

#include "fxpf/errors.hpp"

namespace fxpf {
namespace {

enum class PlanKind { kR2C, kC2R, kC2CForward, kC2CBackward };

// FFTW planning is not thread-safe, execution through the new-array interface
// is. Plans are created once per (kind, size) under a lock and never freed
// until process exit.
class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    fftw_plan get(PlanKind kind, int n) {
        std::lock_guard lock(mutex_);
        auto key = std::make_pair(kind, n);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;

        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        double* real = fftw_alloc_real(static_cast<std::size_t>(n));
        fftw_complex* a = fftw_alloc_complex(static_cast<std::size_t>(n));
        fftw_complex* b = fftw_alloc_complex(static_cast<std::size_t>(n));
        fftw_plan plan = nullptr;
        switch (kind) {
            case PlanKind::kR2C: plan = fftw_plan_dft_r2c_1d(n, real, a, flags); break;
            case PlanKind::kC2R: plan = fftw_plan_dft_c2r_1d(n, a, real, flags); break;
            case PlanKind::kC2CForward: plan = fftw_plan_dft_1d(n, a, b, FFTW_FORWARD, flags); break;
            case PlanKind::kC2CBackward: plan = fftw_plan_dft_1d(n, a, b, FFTW_BACKWARD, flags); break;
        }
        fftw_free(real);
        fftw_free(a);
        fftw_free(b);
        if (!plan) throw std::runtime_error("fftw: planning failed");
        plans_.emplace(key, plan);
        return plan;
    }

    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

private:
    std::mutex mutex_;
    std::map<std::pair<PlanKind, int>, fftw_plan> plans_;
};

fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

SpectralKernel forward_spectrum(const Array2D<double>& slice, std::size_t kernel_start,
                                double sampling_frequency) {
    const std::size_t len = slice.cols();
    if (len < 2) throw ValidationError("forward_spectrum: kernel length must be >= 2");
    for (double v : slice.values())
        if (!std::isfinite(v)) throw ValidationError("forward_spectrum: non-finite input");

    SpectralKernel spec;
    spec.kernel_length = len;
    spec.kernel_start_sample = kernel_start;
    const std::size_t nb = retained_bins(len);
    spec.bins = Array2D<cplx>(slice.rows(), nb);
    spec.bin_frequencies.resize(nb);
    for (std::size_t k = 0; k < nb; ++k)
        spec.bin_frequencies[k] = static_cast<double>(k) * sampling_frequency / static_cast<double>(len);

    fftw_plan plan = PlanCache::instance().get(PlanKind::kR2C, static_cast<int>(len));
    std::vector<double> in(len);
    for (std::size_t r = 0; r < slice.rows(); ++r) {
        auto src = slice.row(r);
        std::copy(src.begin(), src.end(), in.begin());
        fftw_execute_dft_r2c(plan, in.data(), as_fftw(spec.bins.row(r).data()));
    }
    return spec;
}

Array2D<double> inverse_spectrum(const SpectralKernel& spec) {
    const std::size_t len = spec.kernel_length;
    if (len < 2 || spec.num_bins() != retained_bins(len))
        throw ValidationError("inverse_spectrum: malformed spectral kernel");

    Array2D<double> out(spec.num_elements(), len);
    fftw_plan plan = PlanCache::instance().get(PlanKind::kC2R, static_cast<int>(len));
    std::vector<cplx> scratch(spec.num_bins());
    std::vector<double> time(len);
    const double scale = 1.0 / static_cast<double>(len);
    for (std::size_t r = 0; r < spec.num_elements(); ++r) {
        auto src = spec.bins.row(r);
        std::copy(src.begin(), src.end(), scratch.begin());  // c2r clobbers its input
        fftw_execute_dft_c2r(plan, as_fftw(scratch.data()), time.data());
        auto dst = out.row(r);
        for (std::size_t k = 0; k < len; ++k) dst[k] = time[k] * scale;
    }
    return out;
}

std::vector<double> analytic_envelope(const std::vector<double>& line) {
    const std::size_t n = line.size();
    if (n == 0) return {};
    if (n == 1) return {std::abs(line[0])};

    auto& cache = PlanCache::instance();
    fftw_plan fwd = cache.get(PlanKind::kC2CForward, static_cast<int>(n));
    fftw_plan bwd = cache.get(PlanKind::kC2CBackward, static_cast<int>(n));

    std::vector<cplx> a(line.begin(), line.end());
    std::vector<cplx> spec(n);
    fftw_execute_dft(fwd, as_fftw(a.data()), as_fftw(spec.data()));

    // Keep DC (and Nyquist for even n), double positive bins, zero negative bins.
    const std::size_t half = n / 2;
    for (std::size_t k = 1; k < n; ++k) {
        if (k < (n + 1) / 2)
            spec[k] *= 2.0;
        else if (!(n % 2 == 0 && k == half))
            spec[k] = 0.0;
    }
    fftw_execute_dft(bwd, as_fftw(spec.data()), as_fftw(a.data()));

    std::vector<double> env(n);
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) env[k] = std::abs(a[k]) * scale;
    return env;
}

}  // namespace fxpf
