#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "sightglow/cvd_engine.hpp"
#include "sightglow/random.hpp"

using namespace sightglow;

namespace {

constexpr CvdType kAllTypes[] = {CvdType::Protanopia, CvdType::Deuteranopia, CvdType::Tritanopia};

double max_abs_diff(const ColorRgba& a, const ColorRgba& b) {
    return std::max({std::abs(a.r - b.r), std::abs(a.g - b.g), std::abs(a.b - b.b), std::abs(a.a - b.a)});
}

}  // namespace

TEST(Severity, RejectsOutOfRange) {
    EXPECT_NO_THROW(Severity(0.0));
    EXPECT_NO_THROW(Severity(1.0));
    EXPECT_THROW(Severity(-0.01), ValidationError);
    EXPECT_THROW(Severity(1.5), ValidationError);
    EXPECT_THROW(Severity(std::nan("")), ValidationError);
}

TEST(Parsing, TypesAndModes) {
    EXPECT_EQ(parse_cvd_type("deutan"), CvdType::Deuteranopia);
    EXPECT_EQ(parse_cvd_type("protanopia"), CvdType::Protanopia);
    EXPECT_EQ(parse_cvd_type("tritan"), CvdType::Tritanopia);
    EXPECT_FALSE(parse_cvd_type("normal").has_value());
    EXPECT_EQ(parse_daltonize_mode("paper-equations"), DaltonizeMode::PaperEquations);
    EXPECT_EQ(parse_daltonize_mode("paper_printed"), DaltonizeMode::PaperPrinted);
    EXPECT_EQ(parse_daltonize_mode("redistribute"), DaltonizeMode::Redistribute);
    EXPECT_FALSE(parse_daltonize_mode("magic").has_value());
    for (CvdType t : kAllTypes) {
        EXPECT_EQ(parse_cvd_type(to_string(t)), t);
    }
}

TEST(SimulationMatrix, ZeroSeverityIsIdentityExactly) {
    for (CvdType t : kAllTypes) {
        EXPECT_EQ(simulation_matrix(t, Severity(0.0)), identity3());
    }
}

TEST(SimulationMatrix, FullSeverityIsProjection) {
    for (CvdType t : kAllTypes) {
        const Matrix3 p = simulation_matrix(t, Severity::full());
        const Matrix3 pp = multiply(p, p);
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                EXPECT_NEAR(pp[i][j], p[i][j], 1e-6) << to_string(t);
            }
        }
    }
}

TEST(SimulationMatrix, MidpointInterpolates) {
    const Matrix3 full = simulation_matrix(CvdType::Protanopia, Severity::full());
    const Matrix3 half = simulation_matrix(CvdType::Protanopia, Severity(0.5));
    const Matrix3 id = identity3();
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            EXPECT_NEAR(half[i][j], 0.5 * (id[i][j] + full[i][j]), 1e-15);
        }
    }
}

TEST(SimulationMatrix, LosesOneConeDimension) {
    // A dichromat projection has rank 2: the missing cone's LMS axis maps to a
    // colour the plane already contains, so the determinant vanishes.
    for (CvdType t : kAllTypes) {
        const Matrix3 p = simulation_matrix(t, Severity::full());
        const double det = p[0][0] * (p[1][1] * p[2][2] - p[1][2] * p[2][1]) -
                           p[0][1] * (p[1][0] * p[2][2] - p[1][2] * p[2][0]) +
                           p[0][2] * (p[1][0] * p[2][1] - p[1][1] * p[2][0]);
        EXPECT_NEAR(det, 0.0, 1e-9);
    }
}

TEST(Simulate, GraysPreserved) {
    for (CvdType t : kAllTypes) {
        for (double g : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            const ColorRgba out = simulate(t, Severity::full(), {g, g, g, 0.4});
            EXPECT_NEAR(out.r, g, 0.01);
            EXPECT_NEAR(out.g, g, 0.01);
            EXPECT_NEAR(out.b, g, 0.01);
            EXPECT_EQ(out.a, 0.4);
        }
    }
}

TEST(Simulate, ZeroSeverityUnchanged) {
    SeededRng rng(21);
    for (int i = 0; i < 500; ++i) {
        const ColorRgba c{rng.unit(), rng.unit(), rng.unit(), rng.unit()};
        for (CvdType t : kAllTypes) {
            ASSERT_LE(max_abs_diff(simulate(t, Severity(0.0), c), c), 1e-6);
        }
    }
}

TEST(Simulate, IdempotentOnGrid) {
    for (CvdType t : kAllTypes) {
        double worst = 0.0;
        for (double r : oracle::grid(9)) {
            for (double g : oracle::grid(9)) {
                for (double b : oracle::grid(9)) {
                    const ColorRgba once = simulate(t, Severity::full(), {r, g, b, 1});
                    const ColorRgba twice = simulate(t, Severity::full(), once);
                    worst = std::max(worst, max_abs_diff(once, twice));
                }
            }
        }
        EXPECT_LE(worst, 0.01) << to_string(t);
    }
}

TEST(Simulate, RedAndGreenConvergeForDeutan) {
    const ColorRgba red{1, 0, 0, 1};
    const ColorRgba green{0, 1, 0, 1};
    const double normal = oracle::delta_e76({1, 0, 0, 1}, {0, 1, 0, 1});
    const double deutan = oracle::delta_e76(
        oracle::to_array(simulate(CvdType::Deuteranopia, Severity::full(), red)),
        oracle::to_array(simulate(CvdType::Deuteranopia, Severity::full(), green)));
    EXPECT_LT(deutan, 0.5 * normal);
}

TEST(DaltonizePaper, EquationExamples) {
    EXPECT_EQ(daltonize_paper({0, 1, 0, 1}), (ColorRgba{0.2, 1.0, 0.3, 1.0}));
    const ColorRgba white = daltonize_paper({1, 1, 1, 1});
    EXPECT_NEAR(white.r, 1.0, 1e-15);
    EXPECT_NEAR(white.g, 1.0, 1e-15);
    EXPECT_NEAR(white.b, 1.0, 1e-15);
    EXPECT_EQ(white.a, 1.0);
    EXPECT_EQ(daltonize_paper({0.3, 0.6, 0.9, 0.25}).a, 0.25);
}

TEST(DaltonizePaper, PrintedAlphaRow) {
    EXPECT_EQ(daltonize_paper({1, 0, 0, 1}, PaperVariant::Printed).a, 1.0);
    EXPECT_NEAR(daltonize_paper({1, 0, 0, 0.5}, PaperVariant::Printed).a, 0.7, 1e-15);
}

TEST(DaltonizePaper, MatchesSequentialAffineOracle) {
    SeededRng rng(31);
    for (int i = 0; i < 500; ++i) {
        const ColorRgba c{rng.unit(), rng.unit(), rng.unit(), rng.unit()};
        const oracle::Rgba want =
            oracle::apply_affine(matrices::paper_equations().coefficients(), oracle::to_array(c));
        const ColorRgba got = daltonize_paper(c);
        ASSERT_NEAR(got.r, std::clamp(want[0], 0.0, 1.0), 1e-15);
        ASSERT_NEAR(got.g, std::clamp(want[1], 0.0, 1.0), 1e-15);
        ASSERT_NEAR(got.b, std::clamp(want[2], 0.0, 1.0), 1e-15);
        ASSERT_EQ(got.a, c.a);
    }
}

TEST(DaltonizeRedistribute, ZeroStrengthIsIdentity) {
    SeededRng rng(41);
    for (int i = 0; i < 500; ++i) {
        const ColorRgba c{rng.unit(), rng.unit(), rng.unit(), rng.unit()};
        for (CvdType t : kAllTypes) {
            ASSERT_LE(max_abs_diff(daltonize_redistribute(t, 0.0, c), c), 1e-6);
        }
    }
}

TEST(DaltonizeRedistribute, GraysFixedAtAnyStrength) {
    for (CvdType t : kAllTypes) {
        for (double strength : {0.0, 0.3, 0.7, 1.0}) {
            for (double g : oracle::grid(11)) {
                const ColorRgba out = daltonize_redistribute(t, strength, {g, g, g, 1});
                EXPECT_NEAR(out.r, g, 0.02);
                EXPECT_NEAR(out.g, g, 0.02);
                EXPECT_NEAR(out.b, g, 0.02);
            }
        }
    }
}

TEST(DaltonizeRedistribute, AlphaUntouchedAndStrengthValidated) {
    EXPECT_EQ(daltonize_redistribute(CvdType::Deuteranopia, 1.0, {0.9, 0.2, 0.1, 0.35}).a, 0.35);
    EXPECT_THROW(daltonize_redistribute(CvdType::Deuteranopia, 1.2, {0, 0, 0, 1}), ValidationError);
    EXPECT_THROW(daltonize_redistribute(CvdType::Deuteranopia, -0.1, {0, 0, 0, 1}), ValidationError);
}

TEST(DaltonizeRedistribute, MatchesLinearErrorShiftOracle) {
    // Reimplements err = lin - P*lin, out = lin + D*err with the library's
    // matrices but the oracle's long-double decode.
    const Matrix3 p = simulation_matrix(CvdType::Deuteranopia, Severity::full());
    const Matrix3& d = redistribution_matrix(CvdType::Deuteranopia);
    const ColorRgba c{0.8, 0.35, 0.25, 1};
    const double lin[3] = {static_cast<double>(oracle::srgb_decode(c.r)),
                           static_cast<double>(oracle::srgb_decode(c.g)),
                           static_cast<double>(oracle::srgb_decode(c.b))};
    double err[3];
    for (int i = 0; i < 3; ++i) {
        err[i] = lin[i] - (p[i][0] * lin[0] + p[i][1] * lin[1] + p[i][2] * lin[2]);
    }
    const ColorRgba got = daltonize_redistribute(CvdType::Deuteranopia, 1.0, c);
    const double got_lin[3] = {static_cast<double>(oracle::srgb_decode(got.r)),
                               static_cast<double>(oracle::srgb_decode(got.g)),
                               static_cast<double>(oracle::srgb_decode(got.b))};
    for (int i = 0; i < 3; ++i) {
        const double want = std::clamp(lin[i] + d[i][0] * err[0] + d[i][1] * err[1] + d[i][2] * err[2], 0.0, 1.0);
        EXPECT_NEAR(got_lin[i], want, 1e-9);
    }
}

TEST(DeltaE, Pseudometric) {
    SeededRng rng(51);
    for (int i = 0; i < 200; ++i) {
        const ColorRgba a{rng.unit(), rng.unit(), rng.unit(), rng.unit()};
        const ColorRgba b{rng.unit(), rng.unit(), rng.unit(), rng.unit()};
        ASSERT_EQ(delta_e(a, a), 0.0);
        ASSERT_EQ(delta_e(a, b), delta_e(b, a));
        ASSERT_GE(delta_e(a, b), 0.0);
        ASSERT_NEAR(delta_e(a, b), oracle::delta_e76(oracle::to_array(a), oracle::to_array(b), oracle::kMatrixWhite),
                    1e-9);
    }
    EXPECT_EQ(delta_e({0.2, 0.4, 0.6, 1.0}, {0.2, 0.4, 0.6, 0.0}), 0.0);
}

TEST(DeltaE, BlackToWhite) {
    const double oracle_value = oracle::delta_e76({0, 0, 0, 1}, {1, 1, 1, 1});
    EXPECT_NEAR(oracle_value, 100.0, 1e-3);
    EXPECT_NEAR(delta_e({0, 0, 0, 1}, {1, 1, 1, 1}), oracle_value, 1e-3);
}

TEST(ConfusionPairs, SatisfyDefinition) {
    for (CvdType t : kAllTypes) {
        const auto pairs = confusion_pairs(t, 100, kConfusionSuiteSeed);
        ASSERT_EQ(pairs.size(), 100u);
        for (const auto& [a, b] : pairs) {
            EXPECT_GE(delta_e(a, b), kMinRawDeltaE);
            EXPECT_LT(delta_e(simulate(t, Severity::full(), a), simulate(t, Severity::full(), b)),
                      kMaxSimulatedDeltaE);
        }
    }
}

TEST(ConfusionPairs, DeterministicPerSeed) {
    const auto a = confusion_pairs(CvdType::Deuteranopia, 20, 7);
    const auto b = confusion_pairs(CvdType::Deuteranopia, 20, 7);
    const auto c = confusion_pairs(CvdType::Deuteranopia, 20, 8);
    EXPECT_EQ(a, b);
    EXPECT_NE(a, c);
}

TEST(Separability, RejectsEmptyInput) {
    EXPECT_THROW(separability_report(CvdType::Deuteranopia, {}, {}), ValidationError);
}

TEST(Separability, IdenticalPairIsZero) {
    const ColorRgba c{0.3, 0.6, 0.2, 1};
    const auto report =
        separability_report(CvdType::Deuteranopia, {{c, c}}, {DaltonizeMode::Redistribute, CvdType::Deuteranopia, 1});
    EXPECT_EQ(report.pair_count, 1u);
    EXPECT_EQ(report.mean_before, 0.0);
    EXPECT_EQ(report.mean_after, 0.0);
}

TEST(Separability, OffModeChangesNothing) {
    const auto pairs = confusion_pairs(CvdType::Protanopia, 30, 3);
    const auto report = separability_report(CvdType::Protanopia, pairs, {});
    EXPECT_EQ(report.mean_before, report.mean_after);
}

TEST(Separability, RedistributeSeparatesDeutanSuite) {
    for (CvdType t : kAllTypes) {
        const auto pairs = confusion_pairs(t, 100, kConfusionSuiteSeed);
        const auto report = separability_report(t, pairs, {DaltonizeMode::Redistribute, t, 1.0});
        EXPECT_EQ(report.pair_count, 100u);
        EXPECT_GE(report.mean_after, 1.05 * report.mean_before) << to_string(t);
        std::size_t improved = 0;
        for (const PairRecord& r : report.pairs) {
            improved += r.after > r.before ? 1 : 0;
        }
        EXPECT_GT(improved, 50u) << to_string(t);
    }
}

TEST(Separability, RedGreenPaperEquationsHandOracle) {
    // Step 1: substitute into the equations by hand.
    //   red   (1,0,0) -> (0.5, 0, 0.2)
    //   green (0,1,0) -> (0.2, 1, 0.3)
    // Step 2: simulate each and take Lab distance with the independent oracle.
    auto sim = [](const oracle::Rgba& c) {
        return oracle::to_array(simulate(CvdType::Deuteranopia, Severity::full(), {c[0], c[1], c[2], c[3]}));
    };
    const double before = oracle::delta_e76(sim({1, 0, 0, 1}), sim({0, 1, 0, 1}), oracle::kMatrixWhite);
    const double after = oracle::delta_e76(sim({0.5, 0, 0.2, 1}), sim({0.2, 1, 0.3, 1}), oracle::kMatrixWhite);

    const auto report = separability_report(CvdType::Deuteranopia, {{{1, 0, 0, 1}, {0, 1, 0, 1}}},
                                            {DaltonizeMode::PaperEquations, CvdType::Deuteranopia, 1});
    EXPECT_NEAR(report.mean_before, before, 1e-9);
    EXPECT_NEAR(report.mean_after, after, 1e-9);
    EXPECT_NEAR(report.mean_after / report.mean_before, after / before, 1e-9);
    EXPECT_GT(after, before);
}
