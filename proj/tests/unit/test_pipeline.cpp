#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <random>
#include <sstream>

#include "fxpf/channel_io.hpp"
#include "fxpf/config.hpp"
#include "fxpf/errors.hpp"
#include "fxpf/pipeline.hpp"
#include "small_config.hpp"

namespace fxpf {
namespace {

namespace fs = std::filesystem;
using testing::small_config;

fs::path scratch_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("fxpf_unit_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(is), {}};
}

// ---- channel_io ----------------------------------------------------------------

ChannelFrame random_frame() {
    TransducerGeometry g;
    g.num_elements = 5;
    g.pitch = 0.2e-3;
    ChannelFrame f = make_frame(g, 17, 3.5e-6);
    std::mt19937_64 rng(1);
    std::normal_distribution<float> nd;
    for (double& v : f.samples.values()) v = nd(rng);  // float-representable
    return f;
}

TEST(ChannelIo, RoundTrip) {
    const ChannelFrame f = random_frame();
    std::stringstream ss;
    write_frame(ss, f);
    EXPECT_EQ(ss.str().size(), kHeaderBytes + 5 * 17 * 4);
    EXPECT_EQ(ss.str().substr(0, 4), "FXPF");
    EXPECT_EQ(read_frame(ss), f);
}

TEST(ChannelIo, LittleEndianHeader) {
    std::stringstream ss;
    write_frame(ss, random_frame(), kEnvelopeMagic);
    const std::string s = ss.str();
    EXPECT_EQ(s.substr(0, 4), "FENV");
    EXPECT_EQ(static_cast<unsigned char>(s[4]), 1);   // version
    EXPECT_EQ(static_cast<unsigned char>(s[8]), 5);   // elements
    EXPECT_EQ(static_cast<unsigned char>(s[12]), 17); // samples
}

TEST(ChannelIo, RejectsWrongMagicAndTruncation) {
    std::stringstream ss;
    write_frame(ss, random_frame());
    const std::string bytes = ss.str();
    std::stringstream wrong(bytes);
    EXPECT_THROW(read_frame(wrong, kEnvelopeMagic), IoError);
    std::stringstream cut(bytes.substr(0, bytes.size() - 3));
    EXPECT_THROW(read_frame(cut), IoError);
    std::stringstream header_only(bytes.substr(0, 20));
    EXPECT_THROW(read_frame(header_only), IoError);
    std::string bad_version = bytes;
    bad_version[4] = 9;
    std::stringstream bv(bad_version);
    EXPECT_THROW(read_frame(bv), IoError);
}

TEST(ChannelIo, FileHelpers) {
    const fs::path dir = scratch_dir("io");
    save_frame(dir / "a.fxpf", random_frame());
    EXPECT_EQ(load_frame(dir / "a.fxpf"), random_frame());
    EXPECT_THROW(load_frame(dir / "missing.fxpf"), IoError);
    EXPECT_THROW(save_frame(dir / "no" / "such" / "dir" / "x.fxpf", random_frame()), IoError);
}

// ---- config --------------------------------------------------------------------

TEST(FxpfVariant, ParseAndPrint) {
    EXPECT_EQ(FxpfVariant::parse("off"), FxpfVariant::off());
    EXPECT_EQ(FxpfVariant::parse("adaptive"), FxpfVariant::adaptive());
    EXPECT_EQ(FxpfVariant::parse("fixed:3"), FxpfVariant::fixed(3));
    EXPECT_EQ(FxpfVariant::fixed(4).to_string(), "fixed:4");
    EXPECT_EQ(FxpfVariant::fixed(4).slug(), "fixed4");
    EXPECT_EQ(FxpfVariant::adaptive().slug(), "adaptive");
    for (const char* bad : {"", "fixed", "fixed:", "fixed:0", "fixed:2x", "Adaptive", "on"})
        EXPECT_THROW(FxpfVariant::parse(bad), ValidationError) << bad;
}

TEST(Config, DefaultsEchoArrayParameters) {
    const PipelineConfig c = default_config();
    EXPECT_EQ(c.geometry.num_elements, 128u);
    EXPECT_DOUBLE_EQ(c.geometry.sampling_frequency, 20.832e6);
    EXPECT_DOUBLE_EQ(c.geometry.center_frequency, 5.208e6);
    EXPECT_DOUBLE_EQ(c.beamform.f_number, 1.75);
    EXPECT_EQ(c.fxpf.p_max, 4u);
    EXPECT_DOUBLE_EQ(c.fxpf.beta, 1.0 / 3.0);
    EXPECT_EQ(scored_regions(c).size(), 2u);
    EXPECT_NO_THROW(c.validate());
}

TEST(Config, RoundTrip) {
    PipelineConfig c = default_config();
    EXPECT_EQ(parse_config(serialize_config(c)), c);
    c = small_config(77);
    c.fxpf.variant = FxpfVariant::fixed(2);
    c.fxpf.kernel_length_samples = 12;
    c.beamform.window = ApodizationWindow::kRectangular;
    c.noise.enabled = false;
    c.metrics.regions = {cyst_region("manual", 1e-3, 10e-3, 2e-3)};
    c.threads = 3;
    c.output_dir = "elsewhere";
    EXPECT_EQ(parse_config(serialize_config(c)), c);
}

TEST(Config, MissingKeysKeepDefaults) {
    const PipelineConfig c = parse_config(R"({"seed": 9, "fxpf": {"mode": "fixed:2"}})");
    EXPECT_EQ(c.seed, 9u);
    EXPECT_EQ(c.fxpf.variant, FxpfVariant::fixed(2));
    EXPECT_EQ(c.geometry, TransducerGeometry{});
    EXPECT_EQ(c.phantom.inclusions, default_inclusions());
}

TEST(Config, RejectsMalformedInput) {
    EXPECT_THROW(parse_config("{"), ValidationError);
    EXPECT_THROW(parse_config("[]"), ValidationError);
    EXPECT_THROW(parse_config(R"({"seed": "one"})"), ValidationError);
    EXPECT_THROW(parse_config(R"({"fxpf": {"mode": "sometimes"}})"), ValidationError);
    EXPECT_THROW(parse_config(R"({"beamform": {"window": "hann"}})"), ValidationError);
    EXPECT_THROW(parse_config(R"({"geometry": {"num_elements": 0}})"), ValidationError);
    EXPECT_THROW(parse_config(R"({"grid": {"z_start": 0.01, "z_end": 0.005}})"), ValidationError);
    EXPECT_THROW(parse_config(R"({"fxpf": {"kernel_length_samples": 4}})"), ConfigurationError);
    EXPECT_THROW(load_config("/nonexistent/config.json"), IoError);
}

TEST(Config, FxpfConfigFromOptions) {
    const PipelineConfig c = default_config();
    EXPECT_FALSE(make_fxpf_config(c, FxpfVariant::off()).has_value());
    const auto fixed = *make_fxpf_config(c, FxpfVariant::fixed(2));
    EXPECT_EQ(fixed.policy.mode, OrderMode::kFixed);
    EXPECT_EQ(fixed.policy.fixed_order, 2u);
    EXPECT_EQ(fixed.kernel_length_samples, 8u);
    const auto adaptive = *make_fxpf_config(c, FxpfVariant::adaptive());
    EXPECT_DOUBLE_EQ(adaptive.policy.saturation_depth(), 1.75 * 128 * 0.3e-3);
    EXPECT_EQ(adaptive.iterations, 2u);
    EXPECT_DOUBLE_EQ(adaptive.mu, 0.01);
}

// ---- pipeline --------------------------------------------------------------------

TEST(Pipeline, SimulateZeroDensityGivesZeroFile) {
    PipelineConfig c = small_config();
    c.phantom.density_per_mm2 = 0.0;
    const fs::path dir = scratch_dir("zero");
    cmd_simulate(c, dir / "frame.fxpf");
    const ChannelFrame f = load_frame(dir / "frame.fxpf");
    for (double v : f.samples.values()) EXPECT_EQ(v, 0.0);
}

TEST(Pipeline, SimulateIsReproducibleAndEchoesGeometry) {
    PipelineConfig c = default_config();
    c.phantom.density_per_mm2 = 0.2;
    const fs::path dir = scratch_dir("sim");
    cmd_simulate(c, dir / "a.fxpf");
    cmd_simulate(c, dir / "b.fxpf");
    EXPECT_EQ(slurp(dir / "a.fxpf"), slurp(dir / "b.fxpf"));
    const ChannelFrame f = load_frame(dir / "a.fxpf");
    EXPECT_EQ(f.num_elements(), 128u);
    EXPECT_DOUBLE_EQ(f.geometry.sampling_frequency, 20.832e6);
}

TEST(Pipeline, BeamformOffOnZeroInputIsZero) {
    PipelineConfig c = small_config();
    c.phantom.density_per_mm2 = 0.0;
    const fs::path dir = scratch_dir("bf_zero");
    cmd_simulate(c, dir / "frame.fxpf");
    const auto out = cmd_beamform(dir / "frame.fxpf", c, FxpfVariant::off(), dir / "off");
    const EnvelopeImage env = envelope_from_frame(load_frame(out.envelope, kEnvelopeMagic));
    for (double v : env.magnitude.values()) EXPECT_EQ(v, 0.0);
    EXPECT_TRUE(fs::exists(out.image));
}

TEST(Pipeline, FixedOneEqualsAdaptiveWithUnitMax) {
    PipelineConfig c = small_config();
    const ChannelFrame raw = simulate_frame(c);
    const auto fixed = beamform_variant(raw, c, FxpfVariant::fixed(1));
    c.fxpf.p_max = 1;
    const auto adaptive = beamform_variant(raw, c, FxpfVariant::adaptive());
    EXPECT_EQ(fixed.rf, adaptive.rf);
}

TEST(Pipeline, AdaptiveMatchesMaxOrderBeyondSaturation) {
    const PipelineConfig c = small_config();
    const ChannelFrame raw = simulate_frame(c);
    const auto adaptive = beamform_variant(raw, c, FxpfVariant::adaptive());
    const auto fixed = beamform_variant(raw, c, FxpfVariant::fixed(4));
    const BeamGrid grid = make_grid(c);
    const double fl = c.beamform.f_number * c.geometry.aperture_length();
    // Kernels start at grid sample 0 and are 8 samples long.
    std::size_t checked = 0;
    for (std::size_t k0 = 0; k0 + 8 <= grid.num_depths; k0 += 8) {
        if (grid.depth(k0) + 3.5 * grid.dz < fl) continue;
        for (std::size_t k = k0; k < k0 + 8; ++k)
            for (std::size_t l = 0; l < grid.num_lines(); ++l, ++checked)
                EXPECT_NEAR(adaptive.rf(k, l), fixed.rf(k, l), 1e-9);
    }
    EXPECT_GT(checked, 0u);
}

TEST(Pipeline, CompareWritesOutputsAndIsDeterministic) {
    PipelineConfig c = small_config(5);
    const fs::path dir = scratch_dir("compare");
    c.output_dir = (dir / "run1").string();
    std::ostringstream log;
    const ComparisonResult r = cmd_compare(c, RunContext{&log});
    ASSERT_EQ(r.variants.size(), 4u);
    EXPECT_EQ(r.variants[0].variant, FxpfVariant::off());
    EXPECT_EQ(r.variants[3].variant, FxpfVariant::adaptive());
    for (const char* sub : {"off", "fixed1", "fixed4", "adaptive"})
        for (const char* file : {"image.pgm", "envelope.fenv", "metrics.json"})
            EXPECT_TRUE(fs::exists(dir / "run1" / sub / file)) << sub << "/" << file;
    EXPECT_NE(log.str().find("[fxpf] beamform adaptive:"), std::string::npos);

    c.output_dir = (dir / "run2").string();
    c.threads = 3;
    cmd_compare(c);
    EXPECT_EQ(slurp(dir / "run1" / "compare.json"), slurp(dir / "run2" / "compare.json"));

    const auto j = nlohmann::json::parse(slurp(dir / "run1" / "compare.json"));
    EXPECT_EQ(j["seed"].get<std::uint64_t>(), 5u);
    EXPECT_EQ(j["variants"].size(), 4u);
    EXPECT_EQ(j["variants"][2]["variant"], "fixed:4");

    // Evaluating a stored (float32) envelope reproduces the in-memory metrics.
    const std::string metrics = cmd_evaluate(dir / "run1" / "adaptive" / "envelope.fenv", c);
    const auto m = nlohmann::json::parse(metrics);
    EXPECT_NEAR(m["mean_contrast_db"].get<double>(), r.variants[3].metrics.mean_contrast.db, 1e-5);
}

TEST(Pipeline, CompareNeedsScoredRegions) {
    PipelineConfig c = small_config();
    c.phantom.inclusions[0].scored = false;
    const ChannelFrame raw = simulate_frame(c);
    EXPECT_THROW(compare_variants(raw, c), ValidationError);
}

TEST(Pipeline, ChecksumSeesEveryBit) {
    ChannelFrame f = random_frame();
    const auto h = frame_checksum(f);
    f.samples(2, 3) = std::nextafter(f.samples(2, 3), 1e9);
    EXPECT_NE(frame_checksum(f), h);
}

TEST(Pipeline, SeedsAreDistinct) {
    EXPECT_NE(phantom_seed(1), phantom_seed(2));
    EXPECT_NE(phantom_seed(1), aberration_seed(1));
    EXPECT_NE(aberration_seed(1), noise_seed(1));
}

}  // namespace
}  // namespace fxpf
