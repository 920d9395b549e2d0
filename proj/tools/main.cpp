// fxpf: simulate, beamform, FXPF-correct and score plane-wave ultrasound data.
//
//   fxpf simulate --config cfg.json --out run/channels.fxpf
//   fxpf beamform run/channels.fxpf --fxpf adaptive --out run/adaptive
//   fxpf evaluate run/adaptive/envelope.fenv --out run/adaptive/metrics.json
//   fxpf compare --seed 7 --out run
//   fxpf config > cfg.json
//
// Exit codes: 0 success, 1 validation error, 2 I/O error.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fxpf/config.hpp"
#include "fxpf/errors.hpp"
#include "fxpf/pipeline.hpp"

namespace {

struct CommonOptions {
    std::string config_path;
    std::uint64_t seed = 0;
    std::string threads;
    std::string out;
    bool quiet = false;
};

std::size_t parse_threads(const std::string& text) {
    if (text == "auto") return 0;
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
        v = std::stoul(text, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != text.size() || v == 0) throw fxpf::ValidationError("--threads expects a positive integer or 'auto'");
    return v;
}

void add_common(CLI::App* cmd, CommonOptions& opts, bool with_seed) {
    cmd->add_option("--config", opts.config_path, "Pipeline config (JSON); defaults reproduce the experiment");
    if (with_seed) cmd->add_option("--seed", opts.seed, "Global seed (overrides the config)");
    cmd->add_option("--threads", opts.threads, "Worker threads: <n> or auto");
    cmd->add_flag("-q,--quiet", opts.quiet, "Suppress per-stage timing lines");
}

fxpf::PipelineConfig resolve_config(const CommonOptions& opts, const CLI::App* cmd) {
    fxpf::PipelineConfig cfg = opts.config_path.empty() ? fxpf::default_config() : fxpf::load_config(opts.config_path);
    if (cmd->get_option_no_throw("--seed") && cmd->count("--seed") > 0) cfg.seed = opts.seed;
    if (!opts.threads.empty()) cfg.threads = parse_threads(opts.threads);
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive-order frequency-space prediction filtering for plane-wave ultrasound"};
    app.require_subcommand(1);

    CommonOptions sim_opts, bf_opts, eval_opts, cmp_opts, cfg_opts;

    auto* sim = app.add_subcommand("simulate", "Simulate aberrated channel data and write an .fxpf file");
    add_common(sim, sim_opts, true);
    sim->add_option("--out", sim_opts.out, "Output channel file")->default_val("out/channels.fxpf");

    std::string bf_input, bf_mode;
    auto* bf = app.add_subcommand("beamform", "Beamform channel data, optionally with FXPF");
    add_common(bf, bf_opts, false);
    bf->add_option("input", bf_input, "Channel-data file (.fxpf)")->required();
    bf->add_option("--fxpf", bf_mode, "off | fixed:<p> | adaptive (default: config value)");
    bf->add_option("--out", bf_opts.out, "Output directory")->default_val("out/beamformed");

    std::string eval_input;
    auto* ev = app.add_subcommand("evaluate", "Contrast and gCNR of an envelope image");
    add_common(ev, eval_opts, false);
    ev->add_option("input", eval_input, "Envelope file (.fenv)")->required();
    ev->add_option("--out", eval_opts.out, "Also write the metrics JSON here");

    auto* cmp = app.add_subcommand("compare", "Run off / fixed:1 / fixed:p_max / adaptive on one simulated frame");
    add_common(cmp, cmp_opts, true);
    cmp->add_option("--out", cmp_opts.out, "Output directory (default: config output_dir)");

    auto* cfg = app.add_subcommand("config", "Print the effective configuration as JSON");
    add_common(cfg, cfg_opts, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // --help exits 0; malformed command lines are validation errors.
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        fxpf::RunContext ctx;
        if (*sim) {
            const auto config = resolve_config(sim_opts, sim);
            if (!sim_opts.quiet) ctx.log = &std::cerr;
            std::cout << fxpf::cmd_simulate(config, sim_opts.out, ctx).string() << '\n';
        } else if (*bf) {
            auto config = resolve_config(bf_opts, bf);
            if (!bf_opts.quiet) ctx.log = &std::cerr;
            const auto variant = bf_mode.empty() ? config.fxpf.variant : fxpf::FxpfVariant::parse(bf_mode);
            const auto out = fxpf::cmd_beamform(bf_input, config, variant, bf_opts.out, ctx);
            std::cout << out.envelope.string() << '\n' << out.image.string() << '\n';
        } else if (*ev) {
            const auto config = resolve_config(eval_opts, ev);
            std::cout << fxpf::cmd_evaluate(eval_input, config, eval_opts.out) << '\n';
        } else if (*cmp) {
            auto config = resolve_config(cmp_opts, cmp);
            if (!cmp_opts.out.empty()) config.output_dir = cmp_opts.out;
            if (!cmp_opts.quiet) ctx.log = &std::cerr;
            const auto result = fxpf::cmd_compare(config, ctx);
            std::cout << fxpf::comparison_table(result);
            std::cout << (std::filesystem::path(config.output_dir) / "compare.json").string() << '\n';
        } else if (*cfg) {
            std::cout << fxpf::serialize_config(resolve_config(cfg_opts, cfg)) << '\n';
        }
    } catch (const fxpf::IoError& e) {
        std::cerr << "fxpf: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "fxpf: " << e.what() << '\n';
        return 1;
    } catch (const fxpf::SingularSystemError& e) {
        std::cerr << "fxpf: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "fxpf: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
