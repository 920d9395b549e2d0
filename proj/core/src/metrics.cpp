#include "fxpf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "fxpf/errors.hpp"

namespace fxpf {

void RegionSpec::validate() const {
    if (!(target_radius > 0.0)) throw ValidationError("region '" + name + "': target radius must be > 0");
    if (!(inner_radius >= target_radius))
        throw ValidationError("region '" + name + "': inner radius must be >= target radius");
    if (!(outer_radius > inner_radius))
        throw ValidationError("region '" + name + "': outer radius must exceed inner radius");
}

RegionSpec cyst_region(std::string name, double x, double z, double cyst_radius, double target_scale,
                       double inner_scale, double outer_scale) {
    return RegionSpec{std::move(name), x, z, target_scale * cyst_radius, inner_scale * cyst_radius,
                      outer_scale * cyst_radius};
}

RegionMasks region_mask(const RegionSpec& region, const BeamGrid& grid) {
    RegionMasks m;
    m.target = Array2D<unsigned char>(grid.num_depths, grid.num_lines(), 0);
    m.background = Array2D<unsigned char>(grid.num_depths, grid.num_lines(), 0);
    const double rt2 = region.target_radius * region.target_radius;
    const double ri2 = region.inner_radius * region.inner_radius;
    const double ro2 = region.outer_radius * region.outer_radius;
    for (std::size_t k = 0; k < grid.num_depths; ++k) {
        const double dz = grid.depth(k) - region.z;
        for (std::size_t l = 0; l < grid.num_lines(); ++l) {
            const double dx = grid.lateral[l] - region.x;
            const double d2 = dx * dx + dz * dz;
            if (d2 <= rt2) {
                m.target(k, l) = 1;
                ++m.target_count;
            }
            if (d2 > ri2 && d2 <= ro2) {
                m.background(k, l) = 1;
                ++m.background_count;
            }
        }
    }
    return m;
}

namespace {

std::vector<double> masked(const EnvelopeImage& env, const Array2D<unsigned char>& mask) {
    if (mask.rows() != env.magnitude.rows() || mask.cols() != env.magnitude.cols())
        throw ValidationError("metrics: mask shape does not match image");
    std::vector<double> out;
    auto m = mask.values();
    auto v = env.magnitude.values();
    for (std::size_t i = 0; i < m.size(); ++i)
        if (m[i]) out.push_back(v[i]);
    return out;
}

double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

}  // namespace

ContrastResult contrast(const EnvelopeImage& env, const RegionMasks& masks) {
    const auto t = masked(env, masks.target);
    const auto b = masked(env, masks.background);
    if (t.empty() || b.empty()) throw ValidationError("contrast: empty region");
    const double mt = mean(t);
    const double mb = mean(b);
    if (!(mb > 0.0)) throw ValidationError("contrast: background mean is zero");
    if (mt == 0.0) return {std::numeric_limits<double>::infinity(), true};
    return {-20.0 * std::log10(mt / mb), false};
}

GcnrResult gcnr_samples(const std::vector<double>& target, const std::vector<double>& background,
                        std::size_t num_bins) {
    if (target.empty() || background.empty()) throw ValidationError("gcnr: empty region");
    if (num_bins < 16) throw ValidationError("gcnr: num_bins must be >= 16");

    double lo = target.front(), hi = target.front();
    for (const auto* set : {&target, &background})
        for (double v : *set) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    if (lo == hi) return {0.0, true};
    const double top = std::max(hi, 0.0);
    const double bottom = std::min(lo, 0.0);
    const double width = (top - bottom) / static_cast<double>(num_bins);

    auto histogram = [&](const std::vector<double>& values) {
        std::vector<double> h(num_bins, 0.0);
        for (double v : values) {
            auto bin = static_cast<std::size_t>((v - bottom) / width);
            h[std::min(bin, num_bins - 1)] += 1.0;
        }
        const double n = static_cast<double>(values.size());
        for (double& x : h) x /= n;
        return h;
    };
    const auto ht = histogram(target);
    const auto hb = histogram(background);
    double overlap = 0.0;
    for (std::size_t k = 0; k < num_bins; ++k) overlap += std::min(ht[k], hb[k]);
    return {std::clamp(1.0 - overlap, 0.0, 1.0), false};
}

GcnrResult gcnr(const EnvelopeImage& env, const RegionMasks& masks, std::size_t num_bins) {
    return gcnr_samples(masked(env, masks.target), masked(env, masks.background), num_bins);
}

MetricsReport evaluate(const EnvelopeImage& env, const std::vector<RegionSpec>& regions, std::size_t num_bins) {
    if (regions.empty()) throw ValidationError("evaluate: no regions");
    MetricsReport report;
    report.num_bins = num_bins;
    double contrast_sum = 0.0;
    bool unbounded = false;
    double gcnr_sum = 0.0;
    for (const auto& region : regions) {
        region.validate();
        const RegionMasks masks = region_mask(region, env.grid);
        RegionMetrics rm;
        rm.name = region.name;
        rm.contrast = contrast(env, masks);
        rm.gcnr = gcnr(env, masks, num_bins);
        rm.target_pixels = masks.target_count;
        rm.background_pixels = masks.background_count;
        unbounded = unbounded || rm.contrast.unbounded;
        contrast_sum += rm.contrast.db;
        gcnr_sum += rm.gcnr.value;
        report.regions.push_back(std::move(rm));
    }
    const auto n = static_cast<double>(regions.size());
    report.mean_contrast = unbounded ? ContrastResult{std::numeric_limits<double>::infinity(), true}
                                     : ContrastResult{contrast_sum / n, false};
    report.mean_gcnr = gcnr_sum / n;
    return report;
}

std::string metrics_to_json(const MetricsReport& report, int indent) {
    using nlohmann::ordered_json;
    auto contrast_value = [](const ContrastResult& c) -> ordered_json {
        return c.unbounded ? ordered_json(nullptr) : ordered_json(c.db);
    };
    ordered_json j;
    j["regions"] = ordered_json::array();
    for (const auto& r : report.regions) {
        ordered_json e;
        e["name"] = r.name;
        e["contrast_db"] = contrast_value(r.contrast);
        if (r.contrast.unbounded) e["contrast_unbounded"] = true;
        e["gcnr"] = r.gcnr.value;
        if (r.gcnr.degenerate) e["gcnr_degenerate"] = true;
        e["target_pixels"] = r.target_pixels;
        e["background_pixels"] = r.background_pixels;
        j["regions"].push_back(std::move(e));
    }
    j["mean_contrast_db"] = contrast_value(report.mean_contrast);
    if (report.mean_contrast.unbounded) j["contrast_unbounded"] = true;
    j["mean_gcnr"] = report.mean_gcnr;
    return j.dump(indent);
}

}  // namespace fxpf
