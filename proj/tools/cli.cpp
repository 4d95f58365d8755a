#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>

#include "mct/bench.hpp"
#include "mct/compose.hpp"
#include "mct/costmodel.hpp"
#include "mct/error.hpp"
#include "mct/image.hpp"
#include "mct/lattice.hpp"

namespace mct::cli {

namespace {

struct ApplyArgs
{
    std::string image, grid, out;
    bool no_clamp = false;
};

struct SynthArgs
{
    std::string kind = "identity";
    double gamma = 1.0, gamma0 = 1.0, gamma1 = 1.0;
    int grid_h = 0, grid_w = 0, m = 0;
    float c_max = 1.0f;
    std::string out;
};

struct ComposeArgs
{
    std::string delta, base, out;
};

struct MisalignArgs
{
    std::string grid, out;
    int pad = 1;
    std::uint64_t seed = 0;
};

struct DownsampleArgs
{
    std::string image, out;
    int h = 0, w = 0;
};

struct GrayArgs
{
    std::string in, out;
};

struct BrightnessArgs
{
    std::string content, style, out;
};

struct CostArgs
{
    std::string arch;
    std::uint64_t h = 256, w = 256;
    bool mct = false;
    std::uint64_t m = 8, grid_h = 256, grid_w = 256;
};

struct BenchArgs
{
    std::string grid, sizes = "1080x1920,2160x3840", csv_out;
    int repeats = 5, warmup = 1;
};

const std::map<std::string, SynthKind> kSynthKinds = {
    {"identity", SynthKind::identity},
    {"gamma", SynthKind::gamma},
    {"sepia", SynthKind::sepia},
    {"spatial_gamma", SynthKind::spatial_gamma},
};

std::string giga(std::uint64_t macs)
{
    char buf[64];
    if (macs >= 1'000'000'000'000ull)
        std::snprintf(buf, sizeof buf, "%.3fT", macs / 1e12);
    else
        std::snprintf(buf, sizeof buf, "%.3fG", macs / 1e9);
    return buf;
}

void print_cost(const CostArgs& a, std::ostream& out)
{
    const auto arch = cost::load_arch(a.arch);
    const auto fcn = cost::macs_fcn(arch, a.h, a.w);
    out << "arch: " << arch.name << "\n";
    out << "input: " << a.h << "x" << a.w << "\n";
    if (!a.mct)
    {
        out << "total_macs: " << fcn << " (" << giga(fcn) << ")\n";
        return;
    }
    const auto mct = cost::macs_mct(arch, a.m, a.grid_h, a.grid_w, a.h, a.w);
    char ratio[64];
    std::snprintf(ratio, sizeof ratio, "%.4f%%", 100.0 * mct.total() / static_cast<double>(fcn));
    out << "grid: " << a.grid_h << "x" << a.grid_w << " m=" << a.m << "\n";
    out << "backbone_macs: " << mct.backbone << " (" << giga(mct.backbone) << ")\n";
    out << "head_delta_macs: " << mct.head_delta << " (" << giga(mct.head_delta) << ")\n";
    out << "slicing_macs: " << mct.slicing << " (" << giga(mct.slicing) << ")\n";
    out << "total_macs: " << mct.total() << " (" << giga(mct.total()) << ")\n";
    out << "fcn_macs: " << fcn << " (" << giga(fcn) << ")\n";
    out << "mct_over_fcn: " << ratio << "\n";
}

void run_bench(const BenchArgs& a, std::ostream& out)
{
    const auto sizes = parse_sizes(a.sizes);
    const auto grid = read_grid(a.grid);
    auto report = bench_translate(grid, sizes, a.repeats, a.warmup);
    const auto build = bench_grid_build(grid.grid_h(), grid.grid_w(), grid.m(), sizes, a.repeats,
                                        a.warmup);
    report.entries.insert(report.entries.end(), build.entries.begin(), build.entries.end());
    for (const auto& e : report.entries)
        if (!e.error.empty())
            out << "warning: " << e.label << " " << e.height << "x" << e.width << ": " << e.error
                << "\n";
    const auto csv = report.to_csv();
    if (a.csv_out.empty())
    {
        out << csv;
        return;
    }
    std::ofstream file(a.csv_out, std::ios::binary);
    if (!file || !(file << csv))
        throw Error("cannot write " + a.csv_out);
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Multi-curve translation engine: slice per-channel curve grids onto images"};
    app.name(args.empty() ? "mct" : args.front());
    app.require_subcommand(1);
    // --h/--w are image dimensions, so help is long-form only
    app.set_help_flag("--help", "Print this help message and exit");

    ApplyArgs apply;
    auto* apply_cmd = app.add_subcommand("apply", "Translate an image with a curve grid");
    apply_cmd->add_option("--image", apply.image, "Input image (.png/.ppm)")->required();
    apply_cmd->add_option("--grid", apply.grid, "MCPM grid")->required();
    apply_cmd->add_option("--out", apply.out, "Output image")->required();
    apply_cmd->add_flag("--no-clamp", apply.no_clamp, "Skip output clamping");

    SynthArgs synth;
    auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic grid");
    synth_cmd->add_option("--kind", synth.kind, "identity|gamma|sepia|spatial_gamma")
        ->check(CLI::IsMember({"identity", "gamma", "sepia", "spatial_gamma"}));
    synth_cmd->add_option("--gamma", synth.gamma)->check(CLI::PositiveNumber);
    synth_cmd->add_option("--gamma0", synth.gamma0)->check(CLI::PositiveNumber);
    synth_cmd->add_option("--gamma1", synth.gamma1)->check(CLI::PositiveNumber);
    synth_cmd->add_option("--grid-h", synth.grid_h)->required()->check(CLI::PositiveNumber);
    synth_cmd->add_option("--grid-w", synth.grid_w)->required()->check(CLI::PositiveNumber);
    synth_cmd->add_option("--m", synth.m, "Knots per curve")->required()->check(CLI::Range(2, 1 << 20));
    synth_cmd->add_option("--c-max", synth.c_max)->check(CLI::PositiveNumber);
    synth_cmd->add_option("--out", synth.out)->required();

    ComposeArgs compose;
    auto* compose_cmd = app.add_subcommand("compose", "Add a base image as diagonal biases");
    compose_cmd->add_option("--delta", compose.delta)->required();
    compose_cmd->add_option("--base", compose.base, "Base image at grid resolution")->required();
    compose_cmd->add_option("--out", compose.out)->required();

    MisalignArgs misalign_args;
    auto* misalign_cmd = app.add_subcommand("misalign", "Pad and randomly crop a grid");
    misalign_cmd->add_option("--grid", misalign_args.grid)->required();
    misalign_cmd->add_option("--pad", misalign_args.pad)->check(CLI::NonNegativeNumber);
    misalign_cmd->add_option("--seed", misalign_args.seed);
    misalign_cmd->add_option("--out", misalign_args.out)->required();

    DownsampleArgs down;
    auto* down_cmd = app.add_subcommand("downsample", "Bilinear resample");
    down_cmd->add_option("--image", down.image)->required();
    down_cmd->add_option("--h", down.h)->required()->check(CLI::PositiveNumber);
    down_cmd->add_option("--w", down.w)->required()->check(CLI::PositiveNumber);
    down_cmd->add_option("--out", down.out)->required();

    GrayArgs gray;
    auto* gray_cmd = app.add_subcommand("gray", "Rec. 601 grayscale");
    gray_cmd->add_option("--in", gray.in)->required();
    gray_cmd->add_option("--out", gray.out)->required();

    BrightnessArgs bright;
    auto* bright_cmd = app.add_subcommand("brightness", "Match per-channel mean to a style image");
    bright_cmd->add_option("--content", bright.content)->required();
    bright_cmd->add_option("--style", bright.style)->required();
    bright_cmd->add_option("--out", bright.out)->required();

    CostArgs cost_args;
    auto* cost_cmd = app.add_subcommand("cost", "MAC count of an architecture");
    cost_cmd->add_option("--arch", cost_args.arch)->required();
    cost_cmd->add_option("--h", cost_args.h)->check(CLI::PositiveNumber);
    cost_cmd->add_option("--w", cost_args.w)->check(CLI::PositiveNumber);
    cost_cmd->add_flag("--mct", cost_args.mct, "Report the multi-curve variant");
    cost_cmd->add_option("--m", cost_args.m)->check(CLI::PositiveNumber);
    cost_cmd->add_option("--grid-h", cost_args.grid_h)->check(CLI::PositiveNumber);
    cost_cmd->add_option("--grid-w", cost_args.grid_w)->check(CLI::PositiveNumber);

    BenchArgs bench;
    auto* bench_cmd = app.add_subcommand("bench", "Time translate and grid construction");
    bench_cmd->add_option("--grid", bench.grid)->required();
    bench_cmd->add_option("--sizes", bench.sizes, "Comma-separated HxW list")
        ->check([](const std::string& text) {
            try
            {
                parse_sizes(text);
            }
            catch (const std::exception& e)
            {
                return std::string(e.what());
            }
            return std::string();
        });
    bench_cmd->add_option("--repeats", bench.repeats)->check(CLI::Range(3, 1 << 20));
    bench_cmd->add_option("--warmup", bench.warmup)->check(CLI::NonNegativeNumber);
    bench_cmd->add_option("--csv-out", bench.csv_out);

    std::vector<std::string> rest(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
    std::reverse(rest.begin(), rest.end());
    try
    {
        app.parse(rest);
    }
    catch (const CLI::CallForHelp&)
    {
        out << app.help();
        return kExitOk;
    }
    catch (const CLI::CallForAllHelp&)
    {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    }
    catch (const CLI::ParseError& e)
    {
        err << "error: " << e.what() << "\n" << app.help();
        return kExitUsage;
    }

    try
    {
        if (*apply_cmd)
        {
            const Image img = read_image(apply.image);
            const CurveGrid grid = read_grid(apply.grid);
            TranslatorConfig cfg;
            cfg.c_max = img.c_max();
            cfg.clamp_output = !apply.no_clamp;
            write_image(translate(grid, img, cfg), apply.out);
        }
        else if (*synth_cmd)
        {
            SynthSpec spec{kSynthKinds.at(synth.kind), synth.gamma, synth.gamma0, synth.gamma1};
            write_grid(synth_grid(spec, synth.grid_h, synth.grid_w, synth.m, synth.c_max),
                       synth.out);
        }
        else if (*compose_cmd)
        {
            const CurveGrid delta = read_grid(compose.delta);
            const Image base = read_image(compose.base);
            write_grid(compose_base(delta, base), compose.out);
        }
        else if (*misalign_cmd)
        {
            write_grid(misalign(read_grid(misalign_args.grid), misalign_args.pad,
                                misalign_args.seed),
                       misalign_args.out);
        }
        else if (*down_cmd)
        {
            write_image(downsample(read_image(down.image), down.h, down.w), down.out);
        }
        else if (*gray_cmd)
        {
            write_image(to_grayscale(read_image(gray.in)), gray.out);
        }
        else if (*bright_cmd)
        {
            write_image(match_brightness(read_image(bright.content), read_image(bright.style)),
                        bright.out);
        }
        else if (*cost_cmd)
        {
            print_cost(cost_args, out);
        }
        else if (*bench_cmd)
        {
            run_bench(bench, out);
        }
    }
    catch (const std::exception& e)
    {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}

} // namespace mct::cli
