#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "sightglow/color_core.hpp"
#include "sightglow/random.hpp"

using namespace sightglow;

namespace {

ColorMatrix random_matrix(SeededRng& rng) {
    ColorMatrix::Coefficients c{};
    for (double& v : c) {
        v = rng.uniform(-1.5, 1.5);
    }
    return ColorMatrix(c);
}

}  // namespace

TEST(SrgbTransfer, FixedPoints) {
    EXPECT_EQ(srgb_to_linear(0.0), 0.0);
    EXPECT_EQ(srgb_to_linear(1.0), 1.0);
    EXPECT_EQ(linear_to_srgb(0.0), 0.0);
    EXPECT_EQ(linear_to_srgb(1.0), 1.0);
}

TEST(SrgbTransfer, MidpointMatchesHighPrecisionValue) {
    // ((0.5 + 0.055) / 1.055)^2.4 evaluated at 50 digits.
    constexpr double kExpected = 0.21404114048223244;
    EXPECT_NEAR(srgb_to_linear(0.5), kExpected, 1e-15);
    EXPECT_NEAR(linear_to_srgb(kExpected), 0.5, 1e-12);
}

TEST(SrgbTransfer, ClampsOutOfRangeAndRejectsNan) {
    EXPECT_EQ(srgb_to_linear(-0.3), 0.0);
    EXPECT_EQ(srgb_to_linear(1.7), 1.0);
    EXPECT_EQ(linear_to_srgb(2.0), 1.0);
    EXPECT_THROW(srgb_to_linear(std::numeric_limits<double>::quiet_NaN()), ValidationError);
    EXPECT_THROW(linear_to_srgb(std::numeric_limits<double>::infinity()), ValidationError);
}

TEST(SrgbTransfer, RoundTripAndMonotone) {
    double previous = -1.0;
    for (int i = 0; i <= 100000; ++i) {
        const double c = i / 100000.0;
        const double lin = srgb_to_linear(c);
        ASSERT_GT(lin, previous);
        previous = lin;
        ASSERT_NEAR(linear_to_srgb(lin), c, 1e-6) << c;
    }
}

TEST(Lms, ZeroAndLinearity) {
    EXPECT_EQ(rgb_to_lms({0, 0, 0}), (LmsColor{0, 0, 0}));
    const LmsColor red = rgb_to_lms({1, 0, 0});
    const LmsColor half = rgb_to_lms({0.5, 0, 0});
    EXPECT_DOUBLE_EQ(half.l, 0.5 * red.l);
    EXPECT_DOUBLE_EQ(half.m, 0.5 * red.m);
    EXPECT_DOUBLE_EQ(half.s, 0.5 * red.s);
}

TEST(Lms, WhiteMapsToBasisRowSums) {
    // Row sums of HPE(D65) x sRGB->XYZ, multiplied out at 50 digits.
    const LmsColor white = rgb_to_lms({1, 1, 1});
    EXPECT_NEAR(white.l, 0.9999989, 1e-12);
    EXPECT_NEAR(white.m, 0.99996915, 1e-12);
    EXPECT_NEAR(white.s, 0.9999198, 1e-12);
}

TEST(Lms, RoundTrips) {
    const LinearRgb white = lms_to_rgb(rgb_to_lms({1, 1, 1}));
    EXPECT_NEAR(white.r, 1.0, 1e-6);
    EXPECT_NEAR(white.g, 1.0, 1e-6);
    EXPECT_NEAR(white.b, 1.0, 1e-6);
    const LinearRgb sample = lms_to_rgb(rgb_to_lms({0.2, 0.7, 0.1}));
    EXPECT_NEAR(sample.r, 0.2, 1e-6);
    EXPECT_NEAR(sample.g, 0.7, 1e-6);
    EXPECT_NEAR(sample.b, 0.1, 1e-6);
    for (double r : oracle::grid(16)) {
        for (double g : oracle::grid(16)) {
            for (double b : oracle::grid(16)) {
                const LinearRgb back = lms_to_rgb(rgb_to_lms({r, g, b}));
                ASSERT_NEAR(back.r, r, 1e-6);
                ASSERT_NEAR(back.g, g, 1e-6);
                ASSERT_NEAR(back.b, b, 1e-6);
            }
        }
    }
}

TEST(Lms, NonNegativeInsideGamut) {
    for (double r : oracle::grid(9)) {
        for (double g : oracle::grid(9)) {
            for (double b : oracle::grid(9)) {
                const LmsColor lms = rgb_to_lms({r, g, b});
                ASSERT_GE(lms.l, 0.0);
                ASSERT_GE(lms.m, 0.0);
                ASSERT_GE(lms.s, 0.0);
            }
        }
    }
}

TEST(ApplyMatrix, PaperMatrixExamples) {
    const ColorMatrix m = matrices::paper_equations();
    EXPECT_EQ(apply_matrix(m, {1, 0, 0, 1}), (ColorRgba{0.5, 0.0, 0.2, 1.0}));
    EXPECT_EQ(apply_matrix(m, {0, 1, 0, 1}), (ColorRgba{0.2, 1.0, 0.3, 1.0}));
    const ColorRgba white = apply_matrix(m, {1, 1, 1, 1});
    EXPECT_NEAR(white.r, 1.0, 1e-15);
    EXPECT_NEAR(white.g, 1.0, 1e-15);
    EXPECT_NEAR(white.b, 1.0, 1e-15);
    EXPECT_EQ(white.a, 1.0);
}

TEST(ApplyMatrix, IdentityIsExact) {
    SeededRng rng(3);
    for (int i = 0; i < 1000; ++i) {
        const ColorRgba c{rng.unit(), rng.unit(), rng.unit(), rng.unit()};
        ASSERT_EQ(apply_matrix(ColorMatrix::identity(), c), c);
    }
}

TEST(ApplyMatrix, PrintedAndEquationConstantsDifferOnlyInA1) {
    const ColorMatrix printed = matrices::paper_printed();
    const ColorMatrix equations = matrices::paper_equations();
    for (std::size_t i = 0; i < ColorMatrix::kSize; ++i) {
        if (i == 15) {
            EXPECT_EQ(printed.coefficients()[i], 0.2);
            EXPECT_EQ(equations.coefficients()[i], 0.0);
        } else {
            EXPECT_EQ(printed.coefficients()[i], equations.coefficients()[i]);
        }
    }
}

TEST(ApplyMatrix, GrayPreservationAndAlphaInertness) {
    const ColorMatrix m = matrices::paper_equations();
    for (int i = 0; i <= 255; ++i) {
        const double g = i / 255.0;
        const ColorRgba out = apply_matrix(m, {g, g, g, 1});
        ASSERT_NEAR(out.r, g, 1e-9);
        ASSERT_NEAR(out.g, g, 1e-9);
        ASSERT_NEAR(out.b, g, 1e-9);
    }
    SeededRng rng(11);
    for (int i = 0; i < 1000; ++i) {
        const ColorRgba c{rng.unit(), rng.unit(), rng.unit(), rng.unit()};
        ASSERT_EQ(apply_matrix(m, c).a, c.a);
    }
}

TEST(ApplyMatrix, ClampsAndRejectsNan) {
    const ColorMatrix boost = ColorMatrix::from_rgb({{{3, 0, 0}, {0, 3, 0}, {0, 0, -3}}});
    const ColorRgba out = apply_matrix(boost, {0.5, 0.1, 0.5, 1});
    EXPECT_EQ(out.r, 1.0);
    EXPECT_NEAR(out.g, 0.3, 1e-15);
    EXPECT_EQ(out.b, 0.0);
    EXPECT_THROW(apply_matrix(boost, {std::nan(""), 0, 0, 1}), ValidationError);
    ColorMatrix::Coefficients bad{};
    bad[3] = std::numeric_limits<double>::infinity();
    EXPECT_THROW(ColorMatrix{bad}, ValidationError);
}

TEST(ApplyMatrix, ClampedPathStaysInRange) {
    SeededRng rng(5);
    for (int i = 0; i < 500; ++i) {
        const ColorMatrix m = random_matrix(rng);
        const ColorRgba c{rng.unit(), rng.unit(), rng.unit(), rng.unit()};
        const ColorRgba twice = apply_matrix(m, apply_matrix(m, c));
        for (double v : {twice.r, twice.g, twice.b, twice.a}) {
            ASSERT_GE(v, 0.0);
            ASSERT_LE(v, 1.0);
        }
    }
}

TEST(Compose, IdentityIsNeutralExactly) {
    SeededRng rng(9);
    for (int i = 0; i < 100; ++i) {
        const ColorMatrix m = random_matrix(rng);
        ASSERT_EQ(compose(ColorMatrix::identity(), m), m);
        ASSERT_EQ(compose(m, ColorMatrix::identity()), m);
    }
}

TEST(Compose, PaperSquaredMatchesSequentialOracle) {
    const ColorMatrix m = matrices::paper_equations();
    const oracle::Rgba once = oracle::apply_affine(m.coefficients(), {1, 0, 0, 1});
    const oracle::Rgba twice = oracle::apply_affine(m.coefficients(), once);
    const ColorRgba fused = apply_matrix(compose(m, m), {1, 0, 0, 1});
    EXPECT_NEAR(fused.r, twice[0], 1e-12);
    EXPECT_NEAR(fused.g, twice[1], 1e-12);
    EXPECT_NEAR(fused.b, twice[2], 1e-12);
    EXPECT_NEAR(fused.a, twice[3], 1e-12);
    // 0.5*0.5 + 0.3*0.2 = 0.31, 0, 0.2*0.5 + 0.5*0.2 = 0.2
    EXPECT_NEAR(fused.r, 0.31, 1e-12);
    EXPECT_NEAR(fused.g, 0.0, 1e-12);
    EXPECT_NEAR(fused.b, 0.2, 1e-12);
}

TEST(Compose, MatchesSequentialUnclampedApplication) {
    SeededRng rng(13);
    for (int i = 0; i < 500; ++i) {
        const ColorMatrix outer = random_matrix(rng);
        const ColorMatrix inner = random_matrix(rng);
        const ColorRgba c{rng.unit(), rng.unit(), rng.unit(), rng.unit()};
        const oracle::Rgba seq = oracle::apply_affine(
            outer.coefficients(), oracle::apply_affine(inner.coefficients(), oracle::to_array(c)));
        const ColorRgba fused = apply_matrix_unclamped(compose(outer, inner), c);
        ASSERT_NEAR(fused.r, seq[0], 1e-12);
        ASSERT_NEAR(fused.g, seq[1], 1e-12);
        ASSERT_NEAR(fused.b, seq[2], 1e-12);
        ASSERT_NEAR(fused.a, seq[3], 1e-12);
    }
}

TEST(Compose, Associative) {
    SeededRng rng(17);
    for (int i = 0; i < 200; ++i) {
        const ColorMatrix a = random_matrix(rng);
        const ColorMatrix b = random_matrix(rng);
        const ColorMatrix c = random_matrix(rng);
        const ColorMatrix left = compose(a, compose(b, c));
        const ColorMatrix right = compose(compose(a, b), c);
        for (std::size_t k = 0; k < ColorMatrix::kSize; ++k) {
            ASSERT_NEAR(left.coefficients()[k], right.coefficients()[k], 1e-9);
        }
    }
}
