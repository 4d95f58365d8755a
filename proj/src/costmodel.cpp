#include "mct/costmodel.hpp"

#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

#include "mct/error.hpp"

namespace mct::cost {

namespace {

using u128 = unsigned __int128;

// Exact non-negative rational accumulator.
class Rational
{
public:
    void add(u128 num, u128 den)
    {
        const u128 g = gcd(num, den);
        num /= g;
        den /= g;
        const u128 l = den_ / gcd(den_, den) * den;
        num_ = num_ * (l / den_) + num * (l / den);
        den_ = l;
        const u128 r = gcd(num_, den_);
        if (r > 1)
        {
            num_ /= r;
            den_ /= r;
        }
    }

    std::uint64_t floor() const { return static_cast<std::uint64_t>(num_ / den_); }

private:
    static u128 gcd(u128 a, u128 b)
    {
        while (b != 0)
        {
            const u128 t = a % b;
            a = b;
            b = t;
        }
        return a == 0 ? 1 : a;
    }

    u128 num_ = 0;
    u128 den_ = 1;
};

void add_layer(Rational& total, const LayerSpec& layer, std::uint64_t h, std::uint64_t w)
{
    const u128 per_position = u128{layer.in_ch} * layer.out_ch * layer.kernel * layer.kernel;
    const u128 convs = layer.kind == LayerKind::resblock ? 2 : 1;
    const u128 num = per_position * convs * h * w * layer.at_scale.num * layer.at_scale.num;
    const u128 den = u128{layer.at_scale.den} * layer.at_scale.den;
    total.add(num, den);
}

std::uint64_t parse_positive(const std::string& token, const char* field, int line_no)
{
    std::size_t used = 0;
    unsigned long long value = 0;
    try
    {
        value = std::stoull(token, &used);
    }
    catch (const std::exception&)
    {
        used = 0;
    }
    if (used != token.size() || value == 0 || token.front() == '-')
        throw FormatError("arch line " + std::to_string(line_no) + ": " + field +
                          " must be a positive integer, got '" + token + "'");
    return value;
}

} // namespace

ArchSpec parse_arch(std::string_view text, std::string name)
{
    ArchSpec arch;
    arch.name = std::move(name);
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream fields(line);
        std::string kind;
        if (!(fields >> kind))
            continue;

        LayerSpec layer;
        if (kind == "conv")
            layer.kind = LayerKind::conv;
        else if (kind == "conv_transpose")
            layer.kind = LayerKind::conv_transpose;
        else if (kind == "resblock")
            layer.kind = LayerKind::resblock;
        else
            throw FormatError("arch line " + std::to_string(line_no) + ": unknown layer kind '" +
                              kind + "'");

        std::string in_ch, out_ch, kernel, stride, scale, extra;
        if (!(fields >> in_ch >> out_ch >> kernel >> stride >> scale))
            throw FormatError("arch line " + std::to_string(line_no) +
                              ": expected <kind> <in> <out> <k> <stride> <num>/<den>");
        if (fields >> extra)
            throw FormatError("arch line " + std::to_string(line_no) + ": trailing field '" +
                              extra + "'");
        layer.in_ch = parse_positive(in_ch, "in", line_no);
        layer.out_ch = parse_positive(out_ch, "out", line_no);
        layer.kernel = parse_positive(kernel, "kernel", line_no);
        layer.stride = parse_positive(stride, "stride", line_no);
        const auto slash = scale.find('/');
        if (slash == std::string::npos)
            throw FormatError("arch line " + std::to_string(line_no) +
                              ": scale must be <num>/<den>, got '" + scale + "'");
        layer.at_scale.num = parse_positive(scale.substr(0, slash), "scale numerator", line_no);
        layer.at_scale.den = parse_positive(scale.substr(slash + 1), "scale denominator", line_no);
        arch.layers.push_back(layer);
    }
    if (arch.layers.empty())
        throw FormatError("arch '" + arch.name + "' has no layers");
    arch.head_out_ch = arch.layers.back().out_ch;
    return arch;
}

ArchSpec load_arch(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_arch(buffer.str(), path.stem().string());
}

std::uint64_t macs_fcn(const ArchSpec& arch, std::uint64_t h, std::uint64_t w)
{
    Rational total;
    for (const auto& layer : arch.layers)
        add_layer(total, layer, h, w);
    return total.floor();
}

MctCost macs_mct(const ArchSpec& arch, std::uint64_t m, std::uint64_t grid_h,
                 std::uint64_t grid_w, std::uint64_t h, std::uint64_t w)
{
    if (arch.layers.empty())
        throw ConfigError("arch has no layers");
    MctCost cost;
    cost.backbone = macs_fcn(arch, grid_h, grid_w);

    // Extra output channels on the last layer, evaluated at grid resolution.
    const std::uint64_t widened = 9 * m;
    LayerSpec head = arch.layers.back();
    if (widened > head.out_ch)
    {
        head.out_ch = widened - head.out_ch;
        Rational delta;
        add_layer(delta, head, grid_h, grid_w);
        cost.head_delta = delta.floor();
    }
    cost.slicing = kSlicingMacsPerPixel * h * w;
    return cost;
}

} // namespace mct::cost
