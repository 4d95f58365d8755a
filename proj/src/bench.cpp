#include "mct/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <limits>
#include <new>
#include <optional>
#include <sstream>

#include "mct/compose.hpp"
#include "mct/error.hpp"
#include "mct/random.hpp"

namespace mct {

namespace {

using Clock = std::chrono::steady_clock;

template <typename Fn>
double time_once(Fn&& fn)
{
    const auto start = Clock::now();
    fn();
    return std::chrono::duration<double>(Clock::now() - start).count();
}

double median(std::vector<double> values)
{
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

void check_bench_args(std::span<const ImageSize> sizes, int repeats, int warmup)
{
    if (repeats < 3)
        throw ConfigError("repeats must be at least 3");
    if (warmup < 0)
        throw ConfigError("warmup must be >= 0");
    if (sizes.empty())
        throw ConfigError("no sizes to benchmark");
}

BenchEntry failed_entry(std::string label, const ImageSize& size, int repeats)
{
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {std::move(label), size.height, size.width, repeats, nan, nan, "allocation failed"};
}

// Times `body` for one size; failures are recorded on the entry.
template <typename Body>
BenchEntry run_entry(std::string label, const ImageSize& size, int repeats, int warmup,
                     Body&& body)
{
    BenchEntry entry{std::move(label), size.height, size.width, repeats, 0.0, 0.0, {}};
    try
    {
        for (int r = 0; r < warmup; ++r)
            body();
        std::vector<double> times;
        times.reserve(repeats);
        for (int r = 0; r < repeats; ++r)
            times.push_back(time_once(body));
        entry.median_seconds = median(std::move(times));
        const double mpix = static_cast<double>(size.height) * size.width / 1e6;
        entry.mpix_per_s = entry.median_seconds > 0.0 ? mpix / entry.median_seconds
                                                      : std::numeric_limits<double>::infinity();
    }
    catch (const std::bad_alloc&)
    {
        entry.error = "allocation failed";
    }
    catch (const std::exception& e)
    {
        entry.error = e.what();
    }
    if (!entry.error.empty())
    {
        entry.median_seconds = std::numeric_limits<double>::quiet_NaN();
        entry.mpix_per_s = std::numeric_limits<double>::quiet_NaN();
    }
    return entry;
}

} // namespace

std::string BenchReport::to_csv() const
{
    std::string out = "label,height,width,repeats,median_seconds,mpix_per_s\n";
    char buf[128];
    for (const auto& e : entries)
    {
        // %.9g is locale independent for the "C" locale the process starts in
        std::snprintf(buf, sizeof buf, ",%d,%d,%d,%.9g,%.9g\n", e.height, e.width, e.repeats,
                      e.median_seconds, e.mpix_per_s);
        out += e.label;
        out += buf;
    }
    return out;
}

Image random_image(int height, int width, int channels, std::uint64_t seed, float c_max)
{
    SplitMix64 rng(seed);
    std::vector<float> data(static_cast<std::size_t>(height) * width * channels);
    for (auto& v : data)
        v = static_cast<float>(rng.uniform() * c_max);
    return Image(height, width, channels, std::move(data), c_max);
}

BenchReport bench_translate(const CurveGrid& g, std::span<const ImageSize> sizes, int repeats,
                            int warmup, std::uint64_t seed, TranslatePath path)
{
    check_bench_args(sizes, repeats, warmup);
    const std::string label = path == TranslatePath::parallel
                                  ? "translate/omp" + std::to_string(worker_count())
                                  : std::string("translate/serial");
    const int channels = g.n_curves() == 9 ? 3 : 1;
    BenchReport report;
    for (const auto& size : sizes)
    {
        std::optional<Image> img;
        try
        {
            img.emplace(random_image(size.height, size.width, channels, seed, g.c_max()));
        }
        catch (const std::bad_alloc&)
        {
            report.entries.push_back(failed_entry(label, size, repeats));
            continue;
        }
        report.entries.push_back(run_entry(label, size, repeats, warmup, [&] {
            const Image out = path == TranslatePath::parallel ? translate(g, *img)
                                                              : translate_reference(g, *img);
            (void)out;
        }));
    }
    return report;
}

BenchReport bench_grid_build(int grid_h, int grid_w, int m, std::span<const ImageSize> sizes,
                             int repeats, int warmup, std::uint64_t seed)
{
    check_bench_args(sizes, repeats, warmup);
    const SynthSpec spec{SynthKind::spatial_gamma, 1.0, 0.5, 2.0};
    BenchReport report;
    for (const auto& size : sizes)
    {
        std::optional<Image> img;
        try
        {
            img.emplace(random_image(size.height, size.width, 3, seed));
        }
        catch (const std::bad_alloc&)
        {
            report.entries.push_back(failed_entry("grid_build", size, repeats));
            continue;
        }
        report.entries.push_back(run_entry("grid_build", size, repeats, warmup, [&] {
            const Image small = downsample(*img, grid_h, grid_w);
            const CurveGrid grid = compose_base(synth_grid(spec, grid_h, grid_w, m), small);
            (void)grid;
        }));
    }
    return report;
}

std::vector<ImageSize> parse_sizes(const std::string& text)
{
    std::vector<ImageSize> sizes;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ','))
    {
        const auto x = item.find_first_of("xX");
        int h = 0;
        int w = 0;
        std::size_t used_h = 0;
        std::size_t used_w = 0;
        try
        {
            if (x == std::string::npos)
                throw ConfigError("");
            h = std::stoi(item.substr(0, x), &used_h);
            w = std::stoi(item.substr(x + 1), &used_w);
        }
        catch (const std::exception&)
        {
            throw ConfigError("size '" + item + "' is not HxW");
        }
        if (used_h != x || used_w != item.size() - x - 1 || h < 1 || w < 1)
            throw ConfigError("size '" + item + "' is not HxW with positive integers");
        sizes.push_back({h, w});
    }
    if (sizes.empty())
        throw ConfigError("empty size list");
    return sizes;
}

} // namespace mct
