#include "fxpf/pipeline.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "fxpf/channel_io.hpp"
#include "fxpf/errors.hpp"
#include "fxpf/sim.hpp"

namespace fxpf {
namespace {

class StageTimer {
public:
    StageTimer(const RunContext& ctx, std::string stage)
        : ctx_(ctx), stage_(std::move(stage)), start_(std::chrono::steady_clock::now()) {}
    ~StageTimer() {
        if (!ctx_.log) return;
        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start_;
        *ctx_.log << "[fxpf] " << stage_ << ": " << std::fixed << std::setprecision(3) << dt.count() << " s\n";
    }

private:
    const RunContext& ctx_;
    std::string stage_;
    std::chrono::steady_clock::time_point start_;
};

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw IoError("cannot open for writing: " + path.string());
    os << text << '\n';
    if (!os) throw IoError("write failed: " + path.string());
}

void ensure_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

}  // namespace

std::uint64_t phantom_seed(std::uint64_t seed) { return splitmix64(seed); }
std::uint64_t aberration_seed(std::uint64_t seed) { return splitmix64(seed ^ 0xABE88A7105ull); }
std::uint64_t noise_seed(std::uint64_t seed) { return splitmix64(seed ^ 0x0153EED5ull); }

ChannelFrame simulate_frame(const PipelineConfig& config, const RunContext& ctx) {
    config.validate();
    PhantomSpec spec = config.phantom;
    spec.seed = phantom_seed(config.seed);

    std::vector<Scatterer> scatterers;
    {
        StageTimer t(ctx, "phantom");
        scatterers = generate_phantom(spec);
    }
    const AberrationProfile ab = config.aberration.enabled
                                     ? generate_aberration(config.geometry.num_elements, config.aberration.rms,
                                                           config.aberration.correlation_length,
                                                           config.geometry.pitch, aberration_seed(config.seed))
                                     : zero_aberration(config.geometry.num_elements);
    double max_delay = 0.0;
    for (double d : ab.delays) max_delay = std::max(max_delay, std::abs(d));

    const double duration = required_duration(spec, config.geometry, config.pulse, max_delay);
    ChannelFrame frame;
    {
        StageTimer t(ctx, "simulate_rx (" + std::to_string(scatterers.size()) + " scatterers)");
        frame = simulate_rx(scatterers, config.geometry, config.pulse, ab, duration, config.receive, config.threads);
    }
    if (config.noise.enabled) {
        StageTimer t(ctx, "channel noise");
        add_channel_noise(frame, config.pulse, config.noise.snr_db, noise_seed(config.seed), config.threads);
    }
    return frame;
}

BeamformedImage beamform_variant(const ChannelFrame& raw, const PipelineConfig& config, const FxpfVariant& variant,
                                 const RunContext& ctx) {
    StageTimer t(ctx, "beamform " + variant.to_string());
    BeamformSettings settings;
    settings.f_number = config.beamform.f_number;
    settings.window = config.beamform.window;
    settings.threads = config.threads;
    settings.fxpf = make_fxpf_config(config, variant);
    return beamform_image(raw, make_grid(config), settings);
}

std::vector<FxpfVariant> comparison_variants(const PipelineConfig& config) {
    return {FxpfVariant::off(), FxpfVariant::fixed(1), FxpfVariant::fixed(config.fxpf.p_max),
            FxpfVariant::adaptive()};
}

std::uint64_t frame_checksum(const ChannelFrame& frame) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    auto mix = [&h](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xffu;
            h *= 0x100000001b3ull;
        }
    };
    mix(frame.num_elements());
    mix(frame.num_samples());
    mix(std::bit_cast<std::uint64_t>(frame.start_time));
    for (double v : frame.samples.values()) mix(std::bit_cast<std::uint64_t>(v));
    return h;
}

ComparisonResult compare_variants(const ChannelFrame& raw, const PipelineConfig& config, const RunContext& ctx,
                                  std::vector<BeamformedImage>* images) {
    ComparisonResult result;
    result.seed = config.seed;
    result.frame_checksum = frame_checksum(raw);
    const auto regions = scored_regions(config);
    if (regions.empty()) throw ValidationError("compare: no scored regions configured");

    for (const auto& variant : comparison_variants(config)) {
        BeamformedImage img = beamform_variant(raw, config, variant, ctx);
        if (frame_checksum(raw) != result.frame_checksum)
            throw std::logic_error("compare: input frame changed during " + variant.to_string());
        result.variants.push_back({variant, evaluate(img.envelope, regions, config.metrics.num_bins)});
        if (images) images->push_back(std::move(img));
    }
    return result;
}

std::string comparison_to_json(const ComparisonResult& result) {
    using nlohmann::ordered_json;
    ordered_json j;
    j["seed"] = result.seed;
    std::ostringstream ck;
    ck << std::hex << std::setw(16) << std::setfill('0') << result.frame_checksum;
    j["frame_checksum"] = ck.str();
    j["variants"] = ordered_json::array();
    for (const auto& v : result.variants) {
        ordered_json e;
        e["variant"] = v.variant.to_string();
        ordered_json m = ordered_json::parse(metrics_to_json(v.metrics));
        for (auto it = m.begin(); it != m.end(); ++it) e[it.key()] = it.value();
        j["variants"].push_back(std::move(e));
    }
    return j.dump(2);
}

std::string comparison_table(const ComparisonResult& result) {
    std::ostringstream os;
    os << std::left << std::setw(10) << "variant";
    if (!result.variants.empty())
        for (const auto& r : result.variants.front().metrics.regions)
            os << std::right << std::setw(28) << (r.name + " C[dB]/gCNR");
    os << std::right << std::setw(16) << "mean C [dB]" << std::setw(12) << "mean gCNR" << '\n';
    os << std::fixed;
    for (const auto& v : result.variants) {
        os << std::left << std::setw(10) << v.variant.to_string() << std::right;
        for (const auto& r : v.metrics.regions) {
            std::ostringstream cell;
            cell << std::fixed << std::setprecision(2) << r.contrast.db << " / " << std::setprecision(3)
                 << r.gcnr.value;
            os << std::setw(28) << cell.str();
        }
        os << std::setw(16) << std::setprecision(2) << v.metrics.mean_contrast.db << std::setw(12)
           << std::setprecision(3) << v.metrics.mean_gcnr << '\n';
    }
    return os.str();
}

std::filesystem::path cmd_simulate(const PipelineConfig& config, const std::filesystem::path& output,
                                   const RunContext& ctx) {
    const ChannelFrame frame = simulate_frame(config, ctx);
    if (output.has_parent_path()) ensure_dir(output.parent_path());
    {
        StageTimer t(ctx, "write " + output.string());
        save_frame(output, frame);
    }
    if (ctx.log) {
        double ss = 0.0;
        for (double v : frame.samples.values()) ss += v * v;
        const double rms = frame.samples.empty() ? 0.0 : std::sqrt(ss / static_cast<double>(frame.samples.size()));
        *ctx.log << "[fxpf] frame " << frame.num_elements() << " x " << frame.num_samples() << ", rms "
                 << std::scientific << std::setprecision(4) << rms << ", duration " << std::fixed
                 << std::setprecision(2) << 1e6 * static_cast<double>(frame.num_samples()) /
                                                frame.geometry.sampling_frequency
                 << " us\n";
    }
    return output;
}

BeamformOutputs cmd_beamform(const std::filesystem::path& input, const PipelineConfig& config,
                             const FxpfVariant& variant, const std::filesystem::path& out_dir,
                             const RunContext& ctx) {
    ChannelFrame raw;
    {
        StageTimer t(ctx, "read " + input.string());
        raw = load_frame(input);
    }
    PipelineConfig cfg = config;
    cfg.geometry = raw.geometry;  // the file is authoritative for acquisition parameters
    const BeamformedImage img = beamform_variant(raw, cfg, variant, ctx);

    ensure_dir(out_dir);
    BeamformOutputs out{out_dir / "envelope.fenv", out_dir / "image.pgm"};
    StageTimer t(ctx, "write outputs");
    save_frame(out.envelope, envelope_to_frame(img.envelope, cfg.geometry), kEnvelopeMagic);
    write_pgm(out.image, log_compress(img.envelope, cfg.beamform.dynamic_range_db));
    return out;
}

std::string cmd_evaluate(const std::filesystem::path& envelope_file, const PipelineConfig& config,
                         const std::filesystem::path& output) {
    const EnvelopeImage env = envelope_from_frame(load_frame(envelope_file, kEnvelopeMagic));
    const auto regions = scored_regions(config);
    if (regions.empty()) throw ValidationError("evaluate: no regions configured");
    const std::string json = metrics_to_json(evaluate(env, regions, config.metrics.num_bins));
    if (!output.empty()) {
        if (output.has_parent_path()) ensure_dir(output.parent_path());
        write_text(output, json);
    }
    return json;
}

ComparisonResult cmd_compare(const PipelineConfig& config, const RunContext& ctx) {
    const ChannelFrame raw = simulate_frame(config, ctx);
    std::vector<BeamformedImage> images;
    ComparisonResult result = compare_variants(raw, config, ctx, &images);

    const std::filesystem::path root = config.output_dir;
    ensure_dir(root);
    StageTimer t(ctx, "write outputs");
    for (std::size_t i = 0; i < result.variants.size(); ++i) {
        const auto dir = root / result.variants[i].variant.slug();
        ensure_dir(dir);
        save_frame(dir / "envelope.fenv", envelope_to_frame(images[i].envelope, config.geometry), kEnvelopeMagic);
        write_pgm(dir / "image.pgm", log_compress(images[i].envelope, config.beamform.dynamic_range_db));
        write_text(dir / "metrics.json", metrics_to_json(result.variants[i].metrics));
    }
    write_text(root / "compare.json", comparison_to_json(result));
    return result;
}

}  // namespace fxpf
