#include "fxpf/config.hpp"

#include <cmath>
#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "fxpf/errors.hpp"

namespace fxpf {

using nlohmann::ordered_json;

FxpfVariant FxpfVariant::parse(std::string_view text) {
    if (text == "off") return off();
    if (text == "adaptive") return adaptive();
    if (text.starts_with("fixed:")) {
        const auto digits = text.substr(6);
        std::size_t p = 0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), p);
        if (ec == std::errc{} && ptr == digits.data() + digits.size() && p >= 1) return fixed(p);
    }
    throw ValidationError("invalid fxpf mode '" + std::string(text) + "' (expected off, fixed:<p>, adaptive)");
}

std::string FxpfVariant::to_string() const {
    switch (kind) {
        case Kind::kOff: return "off";
        case Kind::kFixed: return "fixed:" + std::to_string(order);
        case Kind::kAdaptive: return "adaptive";
    }
    return "off";
}

std::string FxpfVariant::slug() const {
    return kind == Kind::kFixed ? "fixed" + std::to_string(order) : to_string();
}

bool PipelineConfig::operator==(const PipelineConfig& o) const {
    return geometry == o.geometry && pulse.center_frequency == o.pulse.center_frequency &&
           pulse.fractional_bandwidth == o.pulse.fractional_bandwidth && receive == o.receive && phantom == o.phantom &&
           aberration == o.aberration && noise == o.noise && grid == o.grid && beamform == o.beamform && fxpf == o.fxpf &&
           metrics == o.metrics && output_dir == o.output_dir && seed == o.seed && threads == o.threads;
}

std::vector<Inclusion> default_inclusions() {
    const double neg_inf = -std::numeric_limits<double>::infinity();
    return {
        {"shallow_anechoic", -2e-3, 7e-3, 2.5e-3, neg_inf, true},
        {"hypoechoic_6db", -9e-3, 20e-3, 3e-3, -6.0, false},
        {"hypoechoic_3db", 9e-3, 20e-3, 3e-3, -3.0, false},
        {"deep_anechoic", 2e-3, 34e-3, 4e-3, neg_inf, true},
    };
}

PipelineConfig default_config() {
    PipelineConfig c;
    c.phantom.inclusions = default_inclusions();
    return c;
}

void PipelineConfig::validate() const {
    geometry.validate();
    pulse.validate();
    phantom.validate();
    if (!(aberration.rms >= 0.0)) throw ValidationError("config: aberration rms must be >= 0");
    if (!(aberration.correlation_length >= 0.0))
        throw ValidationError("config: aberration correlation length must be >= 0");
    if (std::isnan(noise.snr_db)) throw ValidationError("config: noise snr_db must be a number");
    if (!(grid.z_start > 0.0) || !(grid.z_end > grid.z_start)) throw ValidationError("config: invalid depth range");
    if (!(beamform.f_number > 0.0)) throw ValidationError("config: f_number must be > 0");
    if (!(beamform.dynamic_range_db > 0.0)) throw ValidationError("config: dynamic range must be > 0");
    if (metrics.num_bins < 16) throw ValidationError("config: metrics num_bins must be >= 16");
    for (const auto& r : metrics.regions) r.validate();
    for (auto v : {FxpfVariant::fixed(1), FxpfVariant::adaptive()}) {
        if (auto f = make_fxpf_config(*this, v)) f->validate();
    }
    if (auto f = make_fxpf_config(*this, fxpf.variant)) f->validate();
}

namespace {

ordered_json number_or_null(double v) {
    return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr);
}

const char* window_name(ApodizationWindow w) {
    return w == ApodizationWindow::kRectangular ? "rectangular" : "raised-cosine";
}

ApodizationWindow parse_window(const std::string& s) {
    if (s == "rectangular") return ApodizationWindow::kRectangular;
    if (s == "raised-cosine") return ApodizationWindow::kRaisedCosine;
    throw ValidationError("config: unknown apodization window '" + s + "'");
}

template <class T>
void read(const ordered_json& j, const char* key, T& out) {
    if (auto it = j.find(key); it != j.end()) out = it->get<T>();
}

ordered_json region_json(const RegionSpec& r) {
    return {{"name", r.name},
            {"x", r.x},
            {"z", r.z},
            {"target_radius", r.target_radius},
            {"inner_radius", r.inner_radius},
            {"outer_radius", r.outer_radius}};
}

}  // namespace

std::string serialize_config(const PipelineConfig& c) {
    ordered_json j;
    j["seed"] = c.seed;
    j["threads"] = c.threads;
    j["output_dir"] = c.output_dir;
    j["geometry"] = {{"num_elements", c.geometry.num_elements},
                     {"pitch", c.geometry.pitch},
                     {"center_frequency", c.geometry.center_frequency},
                     {"sampling_frequency", c.geometry.sampling_frequency},
                     {"sound_speed", c.geometry.sound_speed}};
    j["pulse"] = {{"center_frequency", c.pulse.center_frequency},
                  {"fractional_bandwidth", c.pulse.fractional_bandwidth}};

    j["receive"] = {{"directivity", c.receive.directivity}, {"element_width", c.receive.element_width}};

    ordered_json inclusions = ordered_json::array();
    for (const auto& inc : c.phantom.inclusions)
        inclusions.push_back({{"name", inc.name},
                              {"x", inc.x},
                              {"z", inc.z},
                              {"radius", inc.radius},
                              {"echogenicity_db", number_or_null(inc.echogenicity_db)},
                              {"scored", inc.scored}});
    j["phantom"] = {{"x_min", c.phantom.x_min},
                    {"x_max", c.phantom.x_max},
                    {"z_min", c.phantom.z_min},
                    {"z_max", c.phantom.z_max},
                    {"density_per_mm2", c.phantom.density_per_mm2},
                    {"inclusions", inclusions}};
    j["aberration"] = {{"enabled", c.aberration.enabled},
                       {"rms", c.aberration.rms},
                       {"correlation_length", c.aberration.correlation_length}};
    j["noise"] = {{"enabled", c.noise.enabled}, {"snr_db", c.noise.snr_db}};
    j["grid"] = {{"z_start", c.grid.z_start}, {"z_end", c.grid.z_end}};
    j["beamform"] = {{"f_number", c.beamform.f_number},
                     {"window", window_name(c.beamform.window)},
                     {"dynamic_range_db", c.beamform.dynamic_range_db}};
    j["fxpf"] = {{"mode", c.fxpf.variant.to_string()},
                 {"p_max", c.fxpf.p_max},
                 {"beta", c.fxpf.beta},
                 {"mu", c.fxpf.mu},
                 {"kernel_length_samples", c.fxpf.kernel_length_samples},
                 {"iterations", c.fxpf.iterations}};
    ordered_json regions = ordered_json::array();
    for (const auto& r : c.metrics.regions) regions.push_back(region_json(r));
    j["metrics"] = {{"num_bins", c.metrics.num_bins},
                    {"target_scale", c.metrics.target_scale},
                    {"inner_scale", c.metrics.inner_scale},
                    {"outer_scale", c.metrics.outer_scale},
                    {"regions", regions}};
    return j.dump(2);
}

PipelineConfig parse_config(std::string_view text) {
    PipelineConfig c = default_config();
    try {
        const ordered_json j = ordered_json::parse(text);
        if (!j.is_object()) throw ValidationError("config: top level must be an object");
        read(j, "seed", c.seed);
        read(j, "threads", c.threads);
        read(j, "output_dir", c.output_dir);
        if (auto g = j.find("geometry"); g != j.end()) {
            read(*g, "num_elements", c.geometry.num_elements);
            read(*g, "pitch", c.geometry.pitch);
            read(*g, "center_frequency", c.geometry.center_frequency);
            read(*g, "sampling_frequency", c.geometry.sampling_frequency);
            read(*g, "sound_speed", c.geometry.sound_speed);
        }
        if (auto p = j.find("pulse"); p != j.end()) {
            read(*p, "center_frequency", c.pulse.center_frequency);
            read(*p, "fractional_bandwidth", c.pulse.fractional_bandwidth);
        }
        if (auto r = j.find("receive"); r != j.end()) {
            read(*r, "directivity", c.receive.directivity);
            read(*r, "element_width", c.receive.element_width);
        }
        if (auto p = j.find("phantom"); p != j.end()) {
            read(*p, "x_min", c.phantom.x_min);
            read(*p, "x_max", c.phantom.x_max);
            read(*p, "z_min", c.phantom.z_min);
            read(*p, "z_max", c.phantom.z_max);
            read(*p, "density_per_mm2", c.phantom.density_per_mm2);
            if (auto incs = p->find("inclusions"); incs != p->end()) {
                c.phantom.inclusions.clear();
                for (const auto& e : *incs) {
                    Inclusion inc;
                    read(e, "name", inc.name);
                    read(e, "x", inc.x);
                    read(e, "z", inc.z);
                    read(e, "radius", inc.radius);
                    if (auto db = e.find("echogenicity_db"); db != e.end() && !db->is_null())
                        inc.echogenicity_db = db->get<double>();
                    read(e, "scored", inc.scored);
                    c.phantom.inclusions.push_back(std::move(inc));
                }
            }
        }
        if (auto a = j.find("aberration"); a != j.end()) {
            read(*a, "enabled", c.aberration.enabled);
            read(*a, "rms", c.aberration.rms);
            read(*a, "correlation_length", c.aberration.correlation_length);
        }
        if (auto n = j.find("noise"); n != j.end()) {
            read(*n, "enabled", c.noise.enabled);
            read(*n, "snr_db", c.noise.snr_db);
        }
        if (auto g = j.find("grid"); g != j.end()) {
            read(*g, "z_start", c.grid.z_start);
            read(*g, "z_end", c.grid.z_end);
        }
        if (auto b = j.find("beamform"); b != j.end()) {
            read(*b, "f_number", c.beamform.f_number);
            if (auto w = b->find("window"); w != b->end()) c.beamform.window = parse_window(w->get<std::string>());
            read(*b, "dynamic_range_db", c.beamform.dynamic_range_db);
        }
        if (auto f = j.find("fxpf"); f != j.end()) {
            if (auto m = f->find("mode"); m != f->end()) c.fxpf.variant = FxpfVariant::parse(m->get<std::string>());
            read(*f, "p_max", c.fxpf.p_max);
            read(*f, "beta", c.fxpf.beta);
            read(*f, "mu", c.fxpf.mu);
            read(*f, "kernel_length_samples", c.fxpf.kernel_length_samples);
            read(*f, "iterations", c.fxpf.iterations);
        }
        if (auto m = j.find("metrics"); m != j.end()) {
            read(*m, "num_bins", c.metrics.num_bins);
            read(*m, "target_scale", c.metrics.target_scale);
            read(*m, "inner_scale", c.metrics.inner_scale);
            read(*m, "outer_scale", c.metrics.outer_scale);
            if (auto rs = m->find("regions"); rs != m->end()) {
                c.metrics.regions.clear();
                for (const auto& e : *rs) {
                    RegionSpec r;
                    read(e, "name", r.name);
                    read(e, "x", r.x);
                    read(e, "z", r.z);
                    read(e, "target_radius", r.target_radius);
                    read(e, "inner_radius", r.inner_radius);
                    read(e, "outer_radius", r.outer_radius);
                    c.metrics.regions.push_back(std::move(r));
                }
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("config: ") + e.what());
    }
    c.validate();
    return c;
}

PipelineConfig load_config(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open config: " + path.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str());
}

BeamGrid make_grid(const PipelineConfig& config) {
    return default_grid(config.geometry, config.grid.z_start, config.grid.z_end);
}

std::optional<FxpfConfig> make_fxpf_config(const PipelineConfig& config, const FxpfVariant& variant) {
    if (variant.kind == FxpfVariant::Kind::kOff) return std::nullopt;
    FxpfConfig f;
    f.mu = config.fxpf.mu;
    f.iterations = config.fxpf.iterations;
    f.kernel_length_samples = config.fxpf.kernel_length_samples > 0 ? config.fxpf.kernel_length_samples
                                                                      : one_wavelength_kernel(config.geometry);
    if (variant.kind == FxpfVariant::Kind::kFixed)
        f.policy = AdaptiveOrderPolicy::fixed(variant.order);
    else
        f.policy = AdaptiveOrderPolicy::adaptive(config.fxpf.p_max, config.fxpf.beta, config.beamform.f_number,
                                                 config.geometry.aperture_length());
    return f;
}

std::vector<RegionSpec> scored_regions(const PipelineConfig& config) {
    if (!config.metrics.regions.empty()) return config.metrics.regions;
    std::vector<RegionSpec> out;
    for (const auto& inc : config.phantom.inclusions)
        if (inc.scored)
            out.push_back(cyst_region(inc.name, inc.x, inc.z, inc.radius, config.metrics.target_scale,
                                      config.metrics.inner_scale, config.metrics.outer_scale));
    return out;
}

}  // namespace fxpf
