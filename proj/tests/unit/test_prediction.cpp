#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "fxpf/errors.hpp"
#include "fxpf/prediction.hpp"
#include "ls_oracle.hpp"

namespace fxpf {
namespace {

using testing::oracle_filter;

std::vector<cplx> random_spectra(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    std::vector<cplx> s(n);
    for (auto& v : s) v = {g(rng), g(rng)};
    return s;
}

double norm2(const std::vector<cplx>& v) {
    double e = 0.0;
    for (const auto& x : v) e += std::norm(x);
    return e;
}

// ---- build_system -----------------------------------------------------------

TEST(BuildSystem, SmallestCase) {
    const std::vector<cplx> s{{1, 1}, {2, 0}, {0, 3}};
    const ConvolutionSystem sys = build_system(s, 1);
    ASSERT_EQ(sys.matrix.rows(), 3u);
    ASSERT_EQ(sys.matrix.cols(), 1u);
    for (std::size_t r = 0; r < 3; ++r) EXPECT_EQ(sys.matrix(r, 0), s[r]);
    EXPECT_EQ(sys.rhs, (std::vector<cplx>{s[1], s[2], 0.0}));
    EXPECT_EQ(sys.order(), 1u);
    EXPECT_EQ(sys.num_channels(), 3u);
}

TEST(BuildSystem, TransientRowsOrderFour) {
    const std::vector<cplx> s{1.0, 2.0, 3.0, 4.0, 5.0};
    const ConvolutionSystem sys = build_system(s, 4);
    ASSERT_EQ(sys.matrix.rows(), 8u);
    EXPECT_EQ(sys.matrix(0, 0), s[0]);
    for (std::size_t c = 1; c < 4; ++c) EXPECT_EQ(sys.matrix(0, c), 0.0);
    for (std::size_t c = 0; c < 3; ++c) EXPECT_EQ(sys.matrix(7, c), 0.0);
    EXPECT_EQ(sys.matrix(7, 3), s[4]);
    for (std::size_t r = 5; r < 8; ++r) EXPECT_EQ(sys.rhs[r], 0.0);
    // Every column is the sequence shifted down by its index.
    for (std::size_t c = 0; c < 4; ++c)
        for (std::size_t r = 0; r < 8; ++r)
            EXPECT_EQ(sys.matrix(r, c), (r >= c && r - c < 5) ? s[r - c] : cplx{});
}

TEST(BuildSystem, ZeroSpectra) {
    const ConvolutionSystem sys = build_system(std::vector<cplx>(6), 3);
    for (const auto& v : sys.matrix.values()) EXPECT_EQ(v, 0.0);
    for (const auto& v : sys.rhs) EXPECT_EQ(v, 0.0);
}

TEST(BuildSystem, RejectsOrderNotBelowChannelCount) {
    const std::vector<cplx> s(4, 1.0);
    EXPECT_THROW(build_system(s, 4), ConfigurationError);
    EXPECT_THROW(build_system(s, 9), ConfigurationError);
    EXPECT_THROW(build_system(s, 0), ConfigurationError);
    EXPECT_NO_THROW(build_system(s, 3));
}

// ---- estimate_filter --------------------------------------------------------

// Brute-force grid search over real a for the scalar problem, used to confirm
// the hand-derived values below.
double grid_minimizer(const std::vector<cplx>& s, double mu) {
    double best_a = 0.0, best = INFINITY;
    for (int i = -20000; i <= 20000; ++i) {
        const double a = i * 1e-4;
        double cost = mu * a * a;
        for (std::size_t r = 0; r < s.size(); ++r) {
            const cplx d = r + 1 < s.size() ? s[r + 1] : cplx{};
            cost += std::norm(s[r] * a - d);
        }
        if (cost < best) best = cost, best_a = a;
    }
    return best_a;
}

TEST(EstimateFilter, HandNormalEquations) {
    const std::vector<cplx> s{1.0, 1.0, 1.0};
    const auto f0 = estimate_filter(build_system(s, 1), 0.0);
    ASSERT_EQ(f0.coefficients.size(), 1u);
    EXPECT_NEAR(std::abs(f0.coefficients[0] - 2.0 / 3.0), 0.0, 1e-15);
    EXPECT_NEAR(f0.coefficients[0].real(), grid_minimizer(s, 0.0), 1e-4);

    const auto f1 = estimate_filter(build_system(s, 1), 0.01);
    EXPECT_NEAR(std::abs(f1.coefficients[0] - 2.0 / 3.01), 0.0, 1e-15);
    EXPECT_NEAR(f1.coefficients[0].real(), 0.66445, 1e-5);
    EXPECT_NEAR(f1.coefficients[0].real(), grid_minimizer(s, 0.01), 1e-4);
}

TEST(EstimateFilter, ZeroData) {
    const auto f = estimate_filter(build_system(std::vector<cplx>(5), 2), 0.01, 3);
    EXPECT_EQ(f.order, 2u);
    EXPECT_EQ(f.frequency_bin, 3u);
    for (const auto& a : f.coefficients) EXPECT_EQ(a, 0.0);
}

TEST(EstimateFilter, SingularWithoutRidge) {
    EXPECT_THROW(estimate_filter(build_system(std::vector<cplx>(5), 2), 0.0), SingularSystemError);
}

TEST(EstimateFilter, RejectsNegativeMuAndMalformedSystem) {
    const auto sys = build_system(std::vector<cplx>{1.0, 2.0, 3.0}, 1);
    EXPECT_THROW(estimate_filter(sys, -1.0), ValidationError);
    EXPECT_THROW(estimate_filter(sys, std::nan("")), ValidationError);
    ConvolutionSystem bad = sys;
    bad.rhs.pop_back();
    EXPECT_THROW(estimate_filter(bad, 0.01), ValidationError);
}

TEST(EstimateFilter, MatchesOracleOnRandomSystems) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 2 + trial % 7;
        const std::size_t p = 1 + trial % std::min<std::size_t>(3, n - 1);
        const double mu = std::array{0.0, 0.01, 1.0}[trial % 3];
        const auto s = random_spectra(n, rng);
        const auto got = estimate_filter(build_system(s, p), mu).coefficients;
        const auto want = oracle_filter(s, static_cast<int>(p), mu);
        double err = 0.0, ref = 0.0;
        for (std::size_t i = 0; i < p; ++i) err += std::norm(got[i] - want[i]), ref += std::norm(want[i]);
        EXPECT_LE(std::sqrt(err), 1e-9 * std::max(1.0, std::sqrt(ref))) << "n=" << n << " p=" << p << " mu=" << mu;
    }
}

TEST(EstimateFilter, SolvedSystemResidualIsSmall) {
    std::mt19937_64 rng(5);
    const auto s = random_spectra(8, rng);
    const auto sys = build_system(s, 3);
    const double mu = 0.01;
    const auto a = estimate_filter(sys, mu).coefficients;
    // r = (M^H M + mu I) a - M^H d
    double res = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        cplx lhs = mu * a[i], rhs{};
        for (std::size_t r = 0; r < sys.matrix.rows(); ++r) {
            cplx ma{};
            for (std::size_t j = 0; j < 3; ++j) ma += sys.matrix(r, j) * a[j];
            lhs += std::conj(sys.matrix(r, i)) * ma;
            rhs += std::conj(sys.matrix(r, i)) * sys.rhs[r];
        }
        res += std::norm(lhs - rhs);
        scale += std::norm(rhs);
    }
    EXPECT_LT(std::sqrt(res / scale), 1e-10);
}

TEST(EstimateFilter, RidgeShrinksCoefficientNorm) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const auto s = random_spectra(8, rng);
        const auto sys = build_system(s, 3);
        double prev = INFINITY;
        for (double mu : {0.0, 1e-3, 0.01, 0.1, 1.0, 10.0, 100.0}) {
            const double nrm = norm2(estimate_filter(sys, mu).coefficients);
            EXPECT_LE(nrm, prev * (1.0 + 1e-12)) << "mu=" << mu;
            prev = nrm;
        }
    }
}

// ---- apply_filter / filter_bin ------------------------------------------------

TEST(ApplyFilter, HandProduct) {
    const std::vector<cplx> s{1.0, 1.0, 1.0};
    const auto sys = build_system(s, 1);
    PredictionFilter f{{2.0 / 3.0}, 1, 0};
    const auto out = apply_filter(sys, f);
    ASSERT_EQ(out.size(), 3u);
    EXPECT_EQ(out[0], 1.0);
    EXPECT_NEAR(std::abs(out[1] - 2.0 / 3.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(out[2] - 2.0 / 3.0), 0.0, 1e-15);
}

TEST(ApplyFilter, ZeroFilterKeepsOnlyFirstChannel) {
    const std::vector<cplx> s{{1, 2}, 3.0, 4.0, 5.0};
    const auto out = apply_filter(build_system(s, 2), PredictionFilter{{0.0, 0.0}, 2, 0});
    EXPECT_EQ(out, (std::vector<cplx>{s[0], 0.0, 0.0, 0.0}));
}

TEST(ApplyFilter, ExactModelReproducesInput) {
    const cplx alpha = std::polar(0.9, 0.7);
    std::vector<cplx> s(10);
    for (std::size_t n = 0; n < s.size(); ++n) s[n] = std::pow(alpha, static_cast<double>(n));
    const auto out = apply_filter(build_system(s, 1), PredictionFilter{{alpha}, 1, 0});
    for (std::size_t n = 0; n < s.size(); ++n) EXPECT_NEAR(std::abs(out[n] - s[n]), 0.0, 1e-12);
}

TEST(ApplyFilter, RejectsOrderMismatch) {
    const auto sys = build_system(std::vector<cplx>{1.0, 2.0, 3.0, 4.0}, 2);
    EXPECT_THROW(apply_filter(sys, PredictionFilter{{1.0}, 1, 0}), ValidationError);
    EXPECT_THROW(apply_filter(sys, PredictionFilter{{1.0}, 2, 0}), ValidationError);
}

// For s_n = alpha^n the unregularized fit is alpha * S_{N-1} / S_N with
// S_k = sum_{n<k} |alpha|^{2n}: the trailing transient row has target 0.
cplx ar1_fit(cplx alpha, std::size_t n) {
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double w = std::pow(std::norm(alpha), static_cast<double>(k));
        den += w;
        if (k + 1 < n) num += w;
    }
    return alpha * num / den;
}

TEST(FilterBin, PlaneWaveClosedForm) {
    for (std::size_t n : {4u, 16u, 128u}) {
        const cplx alpha = std::polar(1.0, 0.37);
        std::vector<cplx> s(n);
        for (std::size_t k = 0; k < n; ++k) s[k] = std::pow(alpha, static_cast<double>(k));
        const auto out = filter_bin(s, 1, 0.0);
        const cplx a = ar1_fit(alpha, n);
        EXPECT_NEAR(std::abs(a - alpha * (n - 1.0) / static_cast<double>(n)), 0.0, 1e-12);
        EXPECT_EQ(out[0], s[0]);
        for (std::size_t k = 1; k < n; ++k) EXPECT_NEAR(std::abs(out[k] - a * s[k - 1]), 0.0, 1e-12);
        // The plane wave is kept up to the transient-row shrinkage (N-1)/N.
        double err = 0.0;
        for (std::size_t k = 0; k < n; ++k) err += std::norm(out[k] - s[k]);
        EXPECT_LE(std::sqrt(err / norm2(s)), 1.0 / static_cast<double>(n));
    }
}

TEST(FilterBin, DecayingArIsReproduced) {
    const cplx alpha = std::polar(0.6, -1.1);
    std::vector<cplx> s(32);
    for (std::size_t k = 0; k < s.size(); ++k) s[k] = std::pow(alpha, static_cast<double>(k));
    const auto out = filter_bin(s, 1, 0.0);
    for (std::size_t k = 0; k < s.size(); ++k) EXPECT_NEAR(std::abs(out[k] - s[k]), 0.0, 1e-6);
}

TEST(FilterBin, SecondApplicationChangesLittle) {
    const cplx alpha = std::polar(0.6, 0.4);
    std::vector<cplx> s(32);
    for (std::size_t k = 0; k < s.size(); ++k) s[k] = std::pow(alpha, static_cast<double>(k));
    const auto once = filter_bin(s, 1, 0.0);
    const auto twice = filter_bin(once, 1, 0.0);
    double diff = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k) diff += std::norm(twice[k] - once[k]);
    EXPECT_LT(std::sqrt(diff / norm2(once)), 1e-6);
}

TEST(FilterBin, WhiteNoiseLosesEnergy) {
    std::mt19937_64 rng(21);
    for (std::size_t p : {1u, 2u, 4u}) {
        double ratio = 0.0;
        const int trials = 100;
        for (int t = 0; t < trials; ++t) {
            const auto s = random_spectra(32, rng);
            ratio += norm2(filter_bin(s, p, 0.01)) / norm2(s);
        }
        EXPECT_LT(ratio / trials, 1.0) << "p=" << p;
    }
}

TEST(FilterBin, ZerosStayZero) {
    for (const auto& v : filter_bin(std::vector<cplx>(5), 2, 0.01)) EXPECT_EQ(v, 0.0);
}

// ---- adaptive_order -----------------------------------------------------------

AdaptiveOrderPolicy default_policy() { return AdaptiveOrderPolicy::adaptive(4, 1.0 / 3.0, 1.75, 128 * 0.3e-3); }

TEST(AdaptiveOrder, HandTable) {
    const auto pol = default_policy();
    const double fl = pol.saturation_depth();
    EXPECT_DOUBLE_EQ(fl, 1.75 * 38.4e-3);
    EXPECT_EQ(adaptive_order(fl / 1000.0, pol), 1u);
    EXPECT_EQ(adaptive_order(fl / 8.0, pol), 2u);
    EXPECT_EQ(adaptive_order(fl, pol), 4u);
    EXPECT_EQ(adaptive_order(2.0 * fl, pol), 4u);
}

TEST(AdaptiveOrder, SaturatesForAnyBeta) {
    for (double beta : {0.1, 0.5, 1.0, 3.0}) {
        auto pol = default_policy();
        pol.beta = beta;
        EXPECT_EQ(adaptive_order(pol.saturation_depth(), pol), 4u);
        EXPECT_EQ(adaptive_order(10.0 * pol.saturation_depth(), pol), 4u);
    }
}

TEST(AdaptiveOrder, MonotoneWithFullRange) {
    const auto pol = default_policy();
    const double fl = pol.saturation_depth();
    std::size_t prev = 1;
    std::vector<bool> seen(5, false);
    for (int i = 1; i <= 100000; ++i) {
        const std::size_t p = adaptive_order(fl * i / 100000.0, pol);
        EXPECT_GE(p, prev);
        ASSERT_GE(p, 1u);
        ASSERT_LE(p, 4u);
        seen[p] = true;
        prev = p;
    }
    for (std::size_t p = 1; p <= 4; ++p) EXPECT_TRUE(seen[p]) << p;
}

TEST(AdaptiveOrder, FixedModeAndErrors) {
    EXPECT_EQ(adaptive_order(1e-3, AdaptiveOrderPolicy::fixed(3)), 3u);
    EXPECT_EQ(adaptive_order(1.0, AdaptiveOrderPolicy::fixed(3)), 3u);
    EXPECT_THROW(adaptive_order(0.0, default_policy()), ValidationError);
    EXPECT_THROW(adaptive_order(-1e-3, default_policy()), ValidationError);
    EXPECT_THROW(adaptive_order(0.0, AdaptiveOrderPolicy::fixed(1)), ValidationError);
}

TEST(AdaptiveOrder, PolicyValidation) {
    EXPECT_THROW(AdaptiveOrderPolicy::fixed(0).validate(), ConfigurationError);
    auto pol = default_policy();
    pol.beta = 0.0;
    EXPECT_THROW(pol.validate(), ConfigurationError);
    pol = default_policy();
    pol.p_max = 0;
    EXPECT_THROW(pol.validate(), ConfigurationError);
    pol = default_policy();
    pol.aperture_length = -1.0;
    EXPECT_THROW(pol.validate(), ConfigurationError);
}

// ---- fxpf_filter_frame ---------------------------------------------------------

TransducerGeometry small_geometry(std::size_t n) {
    TransducerGeometry g;
    g.num_elements = n;
    return g;
}

ChannelFrame random_frame(std::size_t n, std::size_t samples, unsigned seed) {
    ChannelFrame f = make_frame(small_geometry(n), samples, 20e-6);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    for (double& v : f.samples.values()) v = g(rng);
    return f;
}

FxpfConfig fixed_config(std::size_t p, double mu = 0.01, std::size_t iterations = 1) {
    FxpfConfig c;
    c.mu = mu;
    c.kernel_length_samples = 8;
    c.iterations = iterations;
    c.policy = AdaptiveOrderPolicy::fixed(p);
    return c;
}

double frame_energy(const ChannelFrame& f) {
    double e = 0.0;
    for (double v : f.samples.values()) e += v * v;
    return e;
}

TEST(FilterFrame, ZeroFrame) {
    const ChannelFrame f = make_frame(small_geometry(16), 64, 10e-6);
    const Array2D<double> mask(16, 64, 1.0);
    FxpfConfig cfg;
    cfg.iterations = 2;
    cfg.policy = default_policy();
    EXPECT_EQ(fxpf_filter_frame(f, mask, cfg).samples, f.samples);
}

TEST(FilterFrame, KernelPeriodicArInputIsPreserved) {
    // Each retained bin has its own lateral phase step, so every bin is
    // exactly AR(1) across channels. With |alpha| = 1 the only loss is the
    // transient-row shrinkage, about 1/N per direction.
    const std::size_t n = 256, samples = 64;
    ChannelFrame f = make_frame(small_geometry(n), samples, 10e-6);
    for (std::size_t e = 0; e < n; ++e)
        for (std::size_t t = 0; t < samples; ++t) {
            const double tt = static_cast<double>(t % 8) / 8.0;
            f.samples(e, t) = std::cos(2.0 * std::numbers::pi * (tt + 0.11 * static_cast<double>(e))) +
                              0.5 * std::sin(2.0 * std::numbers::pi * (2.0 * tt - 0.07 * static_cast<double>(e)));
        }
    const ChannelFrame out = fxpf_filter_frame(f, Array2D<double>(n, samples, 1.0), fixed_config(1, 1e-6));
    double err = 0.0;
    for (std::size_t i = 0; i < f.samples.size(); ++i)
        err += std::pow(out.samples.values()[i] - f.samples.values()[i], 2);
    EXPECT_LT(std::sqrt(err / frame_energy(f)), 2.0 / static_cast<double>(n));
}

TEST(FilterFrame, MirrorSymmetricInputGivesSymmetricOutput) {
    ChannelFrame f = random_frame(20, 48, 9);
    for (std::size_t e = 0; e < 10; ++e)
        for (std::size_t t = 0; t < 48; ++t) f.samples(19 - e, t) = f.samples(e, t);
    for (std::size_t p : {1u, 2u, 4u}) {
        const ChannelFrame out = fxpf_filter_frame(f, Array2D<double>(20, 48, 1.0), fixed_config(p, 0.01, 2));
        for (std::size_t e = 0; e < 10; ++e)
            for (std::size_t t = 0; t < 48; ++t) EXPECT_NEAR(out.samples(e, t), out.samples(19 - e, t), 1e-9);
    }
}

TEST(FilterFrame, WhiteNoiseEnergyDoesNotGrow) {
    double in = 0.0, out = 0.0;
    for (unsigned seed = 0; seed < 20; ++seed) {
        const ChannelFrame f = random_frame(32, 64, seed);
        in += frame_energy(f);
        out += frame_energy(fxpf_filter_frame(f, Array2D<double>(32, 64, 1.0), fixed_config(2)));
    }
    EXPECT_LT(out, in);
}

TEST(FilterFrame, InactiveElementsUntouched) {
    const ChannelFrame f = random_frame(16, 32, 4);
    Array2D<double> mask(16, 32, 0.0);
    for (std::size_t e = 4; e < 12; ++e)
        for (std::size_t t = 0; t < 32; ++t) mask(e, t) = 0.5;
    const ChannelFrame out = fxpf_filter_frame(f, mask, fixed_config(1));
    for (std::size_t e : {0u, 3u, 12u, 15u})
        for (std::size_t t = 0; t < 32; ++t) EXPECT_EQ(out.samples(e, t), f.samples(e, t));
    bool changed = false;
    for (std::size_t t = 0; t < 32; ++t) changed |= out.samples(7, t) != f.samples(7, t);
    EXPECT_TRUE(changed);
}

TEST(FilterFrame, TooFewActiveElementsPassThrough) {
    const ChannelFrame f = random_frame(16, 32, 5);
    Array2D<double> mask(16, 32, 0.0);
    for (std::size_t e = 0; e < 3; ++e)
        for (std::size_t t = 0; t < 32; ++t) mask(e, t) = 1.0;
    EXPECT_EQ(fxpf_filter_frame(f, mask, fixed_config(2)).samples, f.samples);  // 3 <= p + 1
    EXPECT_NE(fxpf_filter_frame(f, mask, fixed_config(1)).samples, f.samples);  // 3 > p + 1
}

TEST(FilterFrame, ActiveSetTakenAtKernelCenter) {
    const ChannelFrame f = random_frame(8, 8, 6);
    Array2D<double> mask(8, 8, 1.0);
    for (std::size_t e = 0; e < 8; ++e) mask(e, 3) = 0.0;  // center sample of the only kernel
    EXPECT_EQ(fxpf_filter_frame(f, mask, fixed_config(1)).samples, f.samples);
}

TEST(FilterFrame, ShortTailKernelIsSkipped) {
    // 8-sample kernels over 19 samples leave a 3-sample tail; 3 < 2 (p + 1).
    const ChannelFrame f = random_frame(12, 19, 7);
    const ChannelFrame out = fxpf_filter_frame(f, Array2D<double>(12, 19, 1.0), fixed_config(1));
    for (std::size_t e = 0; e < 12; ++e)
        for (std::size_t t = 16; t < 19; ++t) EXPECT_EQ(out.samples(e, t), f.samples(e, t));
    // A 5-sample tail (>= 4) is filtered.
    const ChannelFrame g = random_frame(12, 21, 7);
    const ChannelFrame out2 = fxpf_filter_frame(g, Array2D<double>(12, 21, 1.0), fixed_config(1));
    bool changed = false;
    for (std::size_t t = 16; t < 21; ++t) changed |= out2.samples(5, t) != g.samples(5, t);
    EXPECT_TRUE(changed);
}

TEST(FilterFrame, DcAndNyquistPassThrough) {
    // Content only in bins 0 and K/2: random per channel, so clearly not AR.
    ChannelFrame f = make_frame(small_geometry(12), 16, 10e-6);
    std::mt19937_64 rng(8);
    std::normal_distribution<double> g;
    for (std::size_t e = 0; e < 12; ++e) {
        const double dc = g(rng), ny = g(rng);
        for (std::size_t t = 0; t < 16; ++t) f.samples(e, t) = dc + (t % 2 == 0 ? ny : -ny);
    }
    const ChannelFrame out = fxpf_filter_frame(f, Array2D<double>(12, 16, 1.0), fixed_config(1));
    for (std::size_t i = 0; i < f.samples.size(); ++i)
        EXPECT_NEAR(out.samples.values()[i], f.samples.values()[i], 1e-12);
}

TEST(FilterFrame, AdaptiveWithUnitMaxEqualsFixedOne) {
    const ChannelFrame f = random_frame(24, 80, 12);
    FxpfConfig adaptive = fixed_config(1, 0.01, 2);
    adaptive.policy = AdaptiveOrderPolicy::adaptive(1, 1.0 / 3.0, 1.75, 24 * 0.3e-3);
    const Array2D<double> mask(24, 80, 1.0);
    EXPECT_EQ(fxpf_filter_frame(f, mask, adaptive).samples, fxpf_filter_frame(f, mask, fixed_config(1, 0.01, 2)).samples);
}

TEST(FilterFrame, MoreIterationsRemoveMoreNoise) {
    const ChannelFrame f = random_frame(32, 64, 13);
    const Array2D<double> mask(32, 64, 1.0);
    const double e1 = frame_energy(fxpf_filter_frame(f, mask, fixed_config(2, 0.01, 1)));
    const double e2 = frame_energy(fxpf_filter_frame(f, mask, fixed_config(2, 0.01, 2)));
    EXPECT_LT(e2, e1);
}

TEST(FilterFrame, Errors) {
    const ChannelFrame f = random_frame(8, 16, 1);
    EXPECT_THROW(fxpf_filter_frame(f, Array2D<double>(8, 15, 1.0), fixed_config(1)), ValidationError);
    FxpfConfig bad = fixed_config(1);
    bad.iterations = 0;
    EXPECT_THROW(fxpf_filter_frame(f, Array2D<double>(8, 16, 1.0), bad), ConfigurationError);
    bad = fixed_config(4);
    bad.kernel_length_samples = 6;
    EXPECT_THROW(bad.validate(), ConfigurationError);
    bad = fixed_config(1);
    bad.mu = -0.1;
    EXPECT_THROW(bad.validate(), ConfigurationError);
}

TEST(OneWavelengthKernel, DefaultArray) {
    EXPECT_EQ(one_wavelength_kernel(TransducerGeometry{}), 8u);
}

}  // namespace
}  // namespace fxpf
