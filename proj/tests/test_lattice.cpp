#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <string>

#include "mct/bench.hpp"
#include "mct/compose.hpp"
#include "mct/curve.hpp"
#include "mct/error.hpp"
#include "mct/lattice.hpp"
#include "mct/random.hpp"
#include "oracle.hpp"

using namespace mct;

TEST_CASE("lattice_coords")
{
    CHECK(lattice_coords(0, 0, 10, 20, 4, 5) == std::pair{0.0, 0.0});
    CHECK(lattice_coords(9, 19, 10, 20, 4, 5) == std::pair{3.0, 4.0});
    CHECK(lattice_coords(2, 0, 5, 7, 3, 3).first == 1.0);
    // unit axes map to the first lattice row/column
    CHECK(lattice_coords(0, 3, 1, 7, 4, 4) == std::pair{0.0, 1.5});
    CHECK(lattice_coords(3, 0, 7, 1, 4, 4) == std::pair{1.5, 0.0});
    // grid larger than the image is allowed
    CHECK(lattice_coords(1, 1, 3, 3, 9, 9) == std::pair{4.0, 4.0});
}

TEST_CASE("slice_scalar examples")
{
    const CurveGrid g = random_grid(3, 4, 9, 5, 1);
    CHECK(slice_scalar(g, 4, 0, 0, 0.0f, 10, 10) == g.knots()[g.offset(0, 0, 4, 0)]);
    CHECK(slice_scalar(g, 2, 9, 9, 1.0f, 10, 10) == g.knots()[g.offset(2, 3, 2, 4)]);

    const CurveGrid uniform(3, 3, 9, 4, std::vector<float>(3 * 3 * 9 * 4, 0.42f));
    SplitMix64 rng(2);
    for (int n = 0; n < 100; ++n)
        CHECK(slice_scalar(uniform, int(rng.below(9)), int(rng.below(11)), int(rng.below(13)),
                           float(rng.uniform()), 11, 13) == doctest::Approx(0.42).epsilon(1e-7));

    SUBCASE("eight-term oracle, 2x2 grid, m = 2, 7x5 image")
    {
        for (std::uint64_t seed = 0; seed < 50; ++seed)
        {
            const CurveGrid small = random_grid(2, 2, 9, 2, seed, -1.0f, 2.0f);
            SplitMix64 r(seed + 100);
            for (int n = 0; n < 20; ++n)
            {
                const int c = int(r.below(9)), i = int(r.below(7)), j = int(r.below(5));
                const float v = float(r.uniform());
                CHECK(std::abs(slice_scalar(small, c, i, j, v, 7, 5) -
                               oracle::slice(small, c, i, j, v, 7, 5)) <= 1e-6);
            }
        }
    }

    CHECK_THROWS_AS(slice_scalar(g, 9, 0, 0, 0.5f, 4, 4), ContractError);
    CHECK_THROWS_AS(slice_scalar(g, 0, 4, 0, 0.5f, 4, 4), ContractError);
    CHECK_THROWS_AS(slice_scalar(g, 0, 0, 0, NAN, 4, 4), InvalidValueError);
}

TEST_CASE("slice_scalar returns stored knots at lattice points")
{
    // h-1 divisible by grid_h-1 puts pixel rows on lattice rows
    const CurveGrid g = random_grid(3, 5, 3, 6, 9, -0.5f, 1.5f);
    const int h = 9, w = 13;
    for (int i = 0; i < h; i += 4)
        for (int j = 0; j < w; j += 3)
            for (int k = 0; k < 6; ++k)
                for (int c = 0; c < 3; ++c)
                    CHECK(slice_scalar(g, c, i, j, k / 5.0f, h, w) ==
                          g.knots()[g.offset(i / 4, j / 3, c, k)]);
}

TEST_CASE("1x1 grid slice equals eval_curve")
{
    SplitMix64 rng(4);
    for (int trial = 0; trial < 50; ++trial)
    {
        const int m = 1 + int(rng.below(20));
        const CurveGrid g = random_grid(1, 1, 9, m, trial);
        const int c = int(rng.below(9));
        const Curve1D curve(std::vector<float>(g.curve(0, 0, c).begin(), g.curve(0, 0, c).end()));
        for (int n = 0; n < 50; ++n)
        {
            const float v = float(rng.uniform());
            CHECK(slice_scalar(g, c, int(rng.below(5)), int(rng.below(5)), v, 5, 5) ==
                  eval_curve(curve, v, 1.0f));
        }
    }
}

TEST_CASE("translate examples")
{
    SUBCASE("identity grid")
    {
        const Image img = random_image(19, 23, 3, 3);
        const Image out = translate(synth_grid({}, 5, 6, 8), img);
        CHECK(oracle::max_abs_diff(out.data(), img.data()) <= 1e-6);
    }
    SUBCASE("1x1 grid applies one global curve")
    {
        const SynthSpec spec{SynthKind::gamma, 2.2};
        const CurveGrid g = synth_grid(spec, 1, 1, 16);
        const Curve1D f(std::vector<float>(g.curve(0, 0, 0).begin(), g.curve(0, 0, 0).end()));
        const Image img = random_image(10, 12, 3, 8);
        const Image out = translate(g, img);
        for (int i = 0; i < 10; ++i)
            for (int j = 0; j < 12; ++j)
                for (int q = 0; q < 3; ++q)
                    CHECK(out.at(i, j, q) ==
                          doctest::Approx(eval_curve(f, img.at(i, j, q), 1.0f)).epsilon(1e-6));
    }
    SUBCASE("random 4x4 grid, m = 8, 32x48 image against dense oracle")
    {
        const CurveGrid g = random_grid(4, 4, 9, 8, 77, -0.2f, 0.6f);
        const Image img = random_image(32, 48, 3, 78);
        TranslatorConfig raw;
        raw.clamp_output = false;
        CHECK(oracle::max_abs_diff(translate_values(g, img, raw), oracle::translate(g, img, false)) <=
              1e-5);
        CHECK(oracle::max_abs_diff(translate(g, img).data(), oracle::translate(g, img, true)) <=
              1e-5);
    }
    SUBCASE("m = 1 diagonal grid upsamples the base image")
    {
        const Image base = random_image(4, 5, 3, 21);
        const CurveGrid g = compose_base(CurveGrid(4, 5, 9, 1), base);
        const Image img = random_image(37, 41, 3, 22);
        const Image out = translate(g, img);
        CHECK(oracle::max_abs_diff(out.data(), oracle::resize(base, 37, 41)) <= 1e-5);
    }
    SUBCASE("3-curve grayscale mode")
    {
        const CurveGrid g = random_grid(3, 3, 3, 8, 5);
        const Image gray = random_image(15, 9, 1, 6);
        const Image out = translate(g, gray);
        CHECK(out.channels() == 3);
        CHECK(oracle::max_abs_diff(out.data(), oracle::translate(g, gray, true)) <= 1e-5);
    }
    SUBCASE("degenerate image and oversize grid")
    {
        const CurveGrid g = random_grid(8, 8, 9, 4, 12);
        for (auto [h, w] : {std::pair{1, 1}, std::pair{1, 9}, std::pair{6, 1}, std::pair{3, 2}})
        {
            const Image img = random_image(h, w, 3, h * 10 + w);
            CHECK(oracle::max_abs_diff(translate(g, img).data(), oracle::translate(g, img, true)) <=
                  1e-5);
        }
    }
}

TEST_CASE("translate argument errors")
{
    const Image rgb = random_image(4, 4, 3, 1);
    const Image gray = random_image(4, 4, 1, 1);
    CHECK_THROWS_AS(translate(CurveGrid(2, 2, 9, 4), gray), InvalidChannelError);
    CHECK_THROWS_AS(translate(CurveGrid(2, 2, 3, 4), rgb), InvalidChannelError);
    CHECK_THROWS_AS(translate(CurveGrid(2, 2, 9, 4, 255.0f), rgb), ConfigError);
    TranslatorConfig cfg;
    cfg.c_max = 255.0f;
    CHECK_THROWS_AS(translate(CurveGrid(2, 2, 9, 4), rgb, cfg), ConfigError);
    cfg = {};
    cfg.pad = -1;
    CHECK_THROWS_AS(translate(CurveGrid(2, 2, 9, 4), rgb, cfg), ConfigError);
}

TEST_CASE("integer intensity domain")
{
    const CurveGrid g = synth_grid({}, 3, 3, 9, 255.0f);
    std::vector<float> px(6 * 7 * 3);
    SplitMix64 rng(3);
    for (auto& v : px)
        v = float(rng.below(256));
    const Image img(6, 7, 3, px, 255.0f);
    TranslatorConfig cfg;
    cfg.c_max = 255.0f;
    CHECK(oracle::max_abs_diff(translate(g, img, cfg).data(), img.data()) <= 1e-4);
}

TEST_CASE("constant knots sum to three times the constant")
{
    SplitMix64 rng(10);
    for (int trial = 0; trial < 30; ++trial)
    {
        const float k = float(rng.uniform(-1, 1));
        const int gh = 1 + int(rng.below(6)), gw = 1 + int(rng.below(6)), m = 1 + int(rng.below(9));
        const CurveGrid g(gh, gw, 9, m,
                          std::vector<float>(std::size_t(gh) * gw * 9 * m, k));
        TranslatorConfig raw;
        raw.clamp_output = false;
        for (float v : translate_values(g, random_image(9, 11, 3, trial), raw))
            CHECK(v == doctest::Approx(3.0 * k).epsilon(1e-6));
    }
}

TEST_CASE("spatial continuity along a row")
{
    SplitMix64 rng(14);
    for (int trial = 0; trial < 20; ++trial)
    {
        const int gh = 2 + int(rng.below(5)), gw = 2 + int(rng.below(8)), m = 2 + int(rng.below(8));
        const CurveGrid g = random_grid(gh, gw, 9, m, 500 + trial);
        const int h = 17, w = 1501;
        const int c = int(rng.below(9));
        const float v = float(rng.uniform());
        double lipschitz = 0;
        for (int i = 0; i < gh; ++i)
            for (int j = 0; j + 1 < gw; ++j)
                for (int k = 0; k < m; ++k)
                    lipschitz = std::max(lipschitz, std::abs(double(g.curve(i, j + 1, c)[k]) -
                                                             g.curve(i, j, c)[k]));
        const double step = (gw - 1.0) / (w - 1.0);
        const int i = int(rng.below(h));
        float prev = slice_scalar(g, c, i, 0, v, h, w);
        for (int j = 1; j < w; ++j)
        {
            const float cur = slice_scalar(g, c, i, j, v, h, w);
            CHECK(std::abs(double(cur) - prev) <= lipschitz * step + 1e-6);
            prev = cur;
        }
    }
}

TEST_CASE("parallel translate equals the serial reference")
{
    const CurveGrid g = random_grid(6, 9, 9, 8, 3, -0.3f, 0.8f);
    const Image img = random_image(61, 47, 3, 4);
    TranslatorConfig raw;
    raw.clamp_output = false;
    CHECK(oracle::max_abs_diff(translate_values(g, img, raw),
                               translate_reference_values(g, img, raw)) <= 1e-6);

    // worker count does not change the bits
    ::setenv("MCT_THREADS", "1", 1);
    CHECK(worker_count() == 1);
    const auto one = translate_values(g, img, raw);
    ::setenv("MCT_THREADS", "5", 1);
    CHECK(worker_count() == 5);
    const auto five = translate_values(g, img, raw);
    ::setenv("MCT_THREADS", "bogus", 1);
    CHECK(worker_count() >= 1);
    ::unsetenv("MCT_THREADS");
    CHECK(std::memcmp(one.data(), five.data(), one.size() * sizeof(float)) == 0);
}

TEST_CASE("MCPM")
{
    SUBCASE("minimal grid size")
    {
        const auto bytes = save_grid(CurveGrid(1, 1, 9, 1));
        CHECK(bytes.size() == 24 + 36);
        CHECK(std::memcmp(bytes.data(), "MCPM", 4) == 0);
        CHECK(bytes[4] == 1);
        CHECK(bytes[5] == 0);
    }
    SUBCASE("header layout")
    {
        const auto bytes = save_grid(CurveGrid(2, 3, 3, 4, 255.0f));
        CHECK(bytes[6] == 1);  // three-curve flag
        CHECK(bytes[8] == 2);
        CHECK(bytes[12] == 3);
        CHECK(bytes[16] == 4);
        float c_max;
        std::memcpy(&c_max, bytes.data() + 20, 4);
        CHECK(c_max == 255.0f);
        CHECK(bytes.size() == 24 + 2 * 3 * 3 * 4 * 4);
    }
    SUBCASE("round trips are bit-exact")
    {
        for (std::uint64_t seed = 0; seed < 20; ++seed)
        {
            SplitMix64 rng(seed);
            const CurveGrid g = random_grid(1 + int(rng.below(9)), 1 + int(rng.below(9)),
                                            seed % 2 ? 3 : 9, 1 + int(rng.below(17)), seed, -5, 5);
            const auto bytes = save_grid(g);
            const CurveGrid back = load_grid(bytes);
            CHECK(back == g);
            CHECK(save_grid(back) == bytes);
        }
    }
    SUBCASE("errors name the field")
    {
        auto bytes = save_grid(random_grid(2, 2, 9, 3, 1));
        auto expect_error = [](const std::vector<std::uint8_t>& b, const std::string& field) {
            try
            {
                load_grid(b);
                FAIL("expected FormatError for " << field);
            }
            catch (const FormatError& e)
            {
                CHECK_MESSAGE(std::string(e.what()).find(field) != std::string::npos, e.what());
            }
        };
        auto truncated = bytes;
        truncated.pop_back();
        expect_error(truncated, "expected 432 bytes, got 431");
        expect_error({bytes.begin(), bytes.begin() + 10}, "header");
        auto bad = bytes;
        bad[0] = 'X';
        expect_error(bad, "magic");
        bad = bytes;
        bad[4] = 2;
        expect_error(bad, "version");
        bad = bytes;
        bad[6] = 4;
        expect_error(bad, "flags");
        bad = bytes;
        std::memset(bad.data() + 8, 0, 4);
        expect_error(bad, "grid_h");
        bad = bytes;
        std::memset(bad.data() + 16, 0, 4);
        expect_error(bad, "m:");
        bad = bytes;
        const float nan = NAN;
        std::memcpy(bad.data() + 20, &nan, 4);
        expect_error(bad, "c_max");
        bad = bytes;
        std::memcpy(bad.data() + 24 + 4 * 5, &nan, 4);
        expect_error(bad, "knot[5]");
    }
}
