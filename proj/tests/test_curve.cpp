#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "mct/curve.hpp"
#include "mct/error.hpp"
#include "mct/random.hpp"
#include "oracle.hpp"

using namespace mct;

TEST_CASE("lookup_coord")
{
    CHECK(lookup_coord(0.0f, 8, 1.0f) == 0.0);
    CHECK(lookup_coord(1.0f, 8, 1.0f) == 7.0);
    CHECK(lookup_coord(0.5f, 8, 1.0f) == 3.5);
    CHECK(lookup_coord(255.0f, 16, 255.0f) == 15.0);
    CHECK(lookup_coord(0.7f, 1, 1.0f) == 0.0);
    // out-of-range input is clamped first
    CHECK(lookup_coord(-0.3f, 8, 1.0f) == 0.0);
    CHECK(lookup_coord(1.7f, 8, 1.0f) == 7.0);
    CHECK_THROWS_AS(lookup_coord(NAN, 8, 1.0f), InvalidValueError);
    CHECK_THROWS_AS(lookup_coord(INFINITY, 8, 1.0f), InvalidValueError);
}

TEST_CASE("eval_curve examples")
{
    SUBCASE("identity curve")
    {
        for (int m : {2, 3, 8, 33})
        {
            std::vector<float> knots(m);
            for (int k = 0; k < m; ++k)
                knots[k] = float(k) / (m - 1);
            const Curve1D id(knots);
            for (int s = 0; s <= 100; ++s)
            {
                const float v = s / 100.0f;
                CHECK(eval_curve(id, v, 1.0f) == doctest::Approx(v).epsilon(1e-6));
            }
        }
    }
    SUBCASE("midpoint between knots 3 and 4")
    {
        std::vector<float> knots(8, 0.0f);
        knots[3] = 0.3f;
        knots[4] = 0.5f;
        CHECK(eval_curve(Curve1D(knots), 0.5f, 1.0f) == doctest::Approx(0.4).epsilon(1e-7));
    }
    SUBCASE("matches naive re-evaluation")
    {
        SplitMix64 rng(17);
        for (int trial = 0; trial < 10; ++trial)
        {
            const int m = 2 + int(rng.below(30));
            std::vector<float> knots(m);
            // values kept in [0, 1] where half a float ulp is below 1e-7
            float acc = 0;
            for (auto& k : knots)
                k = acc += float(rng.uniform(0, 1.0 / m));
            const Curve1D curve(knots);
            for (int n = 0; n < 100; ++n)
            {
                const float v = float(rng.uniform());
                CHECK(std::abs(eval_curve(curve, v, 1.0f) -
                               oracle::eval_curve(curve.knots(), v, 1.0)) <= 1e-7);
            }
        }
    }
    CHECK_THROWS_AS(Curve1D({}), ShapeError);
    CHECK_THROWS_AS(Curve1D({1.0f, NAN}), InvalidValueError);
}

TEST_CASE("eval_curve properties")
{
    SplitMix64 rng(23);
    for (int trial = 0; trial < 200; ++trial)
    {
        const int m = 1 + int(rng.below(40));
        const float c_max = trial % 2 ? 1.0f : 255.0f;
        std::vector<float> knots(m);
        for (auto& k : knots)
            k = float(rng.uniform(-2, 3));
        const Curve1D curve(knots);

        // exact at knot abscissae
        if (m > 1)
            for (int k = 0; k < m; ++k)
                CHECK(eval_curve(curve, k * c_max / (m - 1), c_max) == knots[k]);

        // bounded by the two neighbouring knots
        for (int n = 0; n < 20; ++n)
        {
            const float v = float(rng.uniform() * c_max);
            const double z = lookup_coord(v, m, c_max);
            const float a = knots[int(std::floor(z))];
            const float b = knots[int(std::ceil(z))];
            const float out = eval_curve(curve, v, c_max);
            CHECK(out >= std::min(a, b));
            CHECK(out <= std::max(a, b));
        }

        if (m == 1)
            CHECK(eval_curve(curve, float(rng.uniform() * c_max), c_max) == knots[0]);
    }
}

TEST_CASE("nondecreasing knots give a nondecreasing curve")
{
    SplitMix64 rng(31);
    for (int trial = 0; trial < 100; ++trial)
    {
        const int m = 2 + int(rng.below(20));
        std::vector<float> knots(m);
        float acc = float(rng.uniform(-1, 1));
        for (auto& k : knots)
            k = acc += float(rng.uniform(0, 0.3));
        const Curve1D curve(knots);
        float prev = eval_curve(curve, 0.0f, 1.0f);
        for (int s = 1; s <= 2000; ++s)
        {
            const float cur = eval_curve(curve, s / 2000.0f, 1.0f);
            CHECK(cur >= prev);
            prev = cur;
        }
    }
}
