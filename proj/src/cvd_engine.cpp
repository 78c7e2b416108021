#include "sightglow/cvd_engine.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "sightglow/random.hpp"

namespace sightglow {

namespace {

using Vec3 = std::array<double, 3>;

Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

std::size_t missing_cone(CvdType t) {
    switch (t) {
        case CvdType::Protanopia:
            return 0;
        case CvdType::Deuteranopia:
            return 1;
        case CvdType::Tritanopia:
            return 2;
    }
    throw std::logic_error("unknown CvdType");
}

// Dichromat projection in linear RGB.
//
// The missing cone response is replaced by the value that puts the colour on
// a plane through black, white and one anchor primary. For protan and deutan
// the anchor is the sRGB blue primary, so blue and its complement yellow stay
// fixed (the ~475 nm / ~575 nm hues a red-green dichromat still sees). For
// tritan the anchor is red, which keeps red and cyan fixed.
Matrix3 dichromat_matrix(CvdType t) {
    const Matrix3& to_lms = rgb_to_lms_matrix();
    const Vec3 white = multiply(to_lms, Vec3{1.0, 1.0, 1.0});
    const Vec3 anchor = t == CvdType::Tritanopia ? multiply(to_lms, Vec3{1.0, 0.0, 0.0})
                                                 : multiply(to_lms, Vec3{0.0, 0.0, 1.0});
    const Vec3 normal = cross(white, anchor);
    const std::size_t k = missing_cone(t);

    Matrix3 projection = identity3();
    for (std::size_t j = 0; j < 3; ++j) {
        projection[k][j] = j == k ? 0.0 : -normal[j] / normal[k];
    }
    return multiply(lms_to_rgb_matrix(), multiply(projection, to_lms));
}

const Matrix3& full_simulation(CvdType t) {
    static const std::array<Matrix3, 3> cache = {
        dichromat_matrix(CvdType::Protanopia),
        dichromat_matrix(CvdType::Deuteranopia),
        dichromat_matrix(CvdType::Tritanopia),
    };
    return cache[missing_cone(t)];
}

LinearRgb apply3(const Matrix3& m, const LinearRgb& c) {
    const auto v = multiply(m, Vec3{c.r, c.g, c.b});
    return {v[0], v[1], v[2]};
}

struct Lab {
    double l, a, b;
};

Lab to_lab(const ColorRgba& c) {
    const LinearRgb lin = decode(c);
    const Matrix3& m = srgb_to_xyz_matrix();
    const Vec3 xyz = multiply(m, Vec3{lin.r, lin.g, lin.b});
    // Reference white is the XYZ of sRGB white under the same matrix, so
    // neutral inputs land exactly on a* = b* = 0.
    const Vec3 white = multiply(m, Vec3{1.0, 1.0, 1.0});
    constexpr double delta = 6.0 / 29.0;
    auto f = [](double t) {
        return t > delta * delta * delta ? std::cbrt(t) : t / (3.0 * delta * delta) + 4.0 / 29.0;
    };
    const double fx = f(xyz[0] / white[0]);
    const double fy = f(xyz[1] / white[1]);
    const double fz = f(xyz[2] / white[2]);
    return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

void require_unit(double v, const char* what) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw ValidationError(std::string(what) + " must lie in [0, 1]");
    }
}

}  // namespace

std::string_view to_string(CvdType t) {
    switch (t) {
        case CvdType::Protanopia:
            return "protanopia";
        case CvdType::Deuteranopia:
            return "deuteranopia";
        case CvdType::Tritanopia:
            return "tritanopia";
    }
    return "unknown";
}

std::optional<CvdType> parse_cvd_type(std::string_view text) {
    if (text == "protanopia" || text == "protan") return CvdType::Protanopia;
    if (text == "deuteranopia" || text == "deutan") return CvdType::Deuteranopia;
    if (text == "tritanopia" || text == "tritan") return CvdType::Tritanopia;
    return std::nullopt;
}

Severity::Severity(double value) : value_(value) { require_unit(value, "severity"); }

std::string_view to_string(DaltonizeMode m) {
    switch (m) {
        case DaltonizeMode::Off:
            return "off";
        case DaltonizeMode::PaperEquations:
            return "paper_equations";
        case DaltonizeMode::PaperPrinted:
            return "paper_printed";
        case DaltonizeMode::Redistribute:
            return "redistribute";
    }
    return "unknown";
}

std::optional<DaltonizeMode> parse_daltonize_mode(std::string_view text) {
    if (text == "off") return DaltonizeMode::Off;
    if (text == "paper_equations" || text == "paper-equations") return DaltonizeMode::PaperEquations;
    if (text == "paper_printed" || text == "paper-printed") return DaltonizeMode::PaperPrinted;
    if (text == "redistribute") return DaltonizeMode::Redistribute;
    return std::nullopt;
}

Matrix3 simulation_matrix(CvdType t, Severity s) {
    const Matrix3& full = full_simulation(t);
    const Matrix3 id = identity3();
    const double w = s.value();
    if (w == 0.0) {
        return id;
    }
    Matrix3 out{};
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            out[i][j] = id[i][j] + w * (full[i][j] - id[i][j]);
        }
    }
    return out;
}

const Matrix3& redistribution_matrix(CvdType t) {
    // Classic error-shift weights: red-green error moves into G and B, blue
    // error moves into R and G. Tuning constants, not physiology.
    static const Matrix3 red_green = {{{0.0, 0.0, 0.0}, {0.7, 1.0, 0.0}, {0.7, 0.0, 1.0}}};
    static const Matrix3 blue_yellow = {{{1.0, 0.0, 0.7}, {0.0, 1.0, 0.7}, {0.0, 0.0, 0.0}}};
    return t == CvdType::Tritanopia ? blue_yellow : red_green;
}

ColorRgba simulate(CvdType t, Severity s, const ColorRgba& c) {
    require_finite(c);
    if (s.value() == 0.0) {
        return clamp(c);
    }
    return apply_linear(simulation_matrix(t, s), c);
}

ColorRgba daltonize_paper(const ColorRgba& c, PaperVariant variant) {
    return apply_matrix(variant == PaperVariant::Printed ? matrices::paper_printed()
                                                         : matrices::paper_equations(),
                        c);
}

ColorRgba daltonize_redistribute(CvdType t, double strength, const ColorRgba& c) {
    require_unit(strength, "strength");
    require_finite(c);
    if (strength == 0.0) {
        return clamp(c);
    }
    const LinearRgb original = decode(c);
    const LinearRgb seen = apply3(full_simulation(t), original);
    const LinearRgb error{original.r - seen.r, original.g - seen.g, original.b - seen.b};
    const LinearRgb shift = apply3(redistribution_matrix(t), error);
    return encode({original.r + strength * shift.r, original.g + strength * shift.g,
                   original.b + strength * shift.b},
                  c.a);
}

ColorRgba daltonize(const Daltonizer& d, const ColorRgba& c) {
    switch (d.mode) {
        case DaltonizeMode::Off:
            require_finite(c);
            return clamp(c);
        case DaltonizeMode::PaperEquations:
            return daltonize_paper(c, PaperVariant::Equations);
        case DaltonizeMode::PaperPrinted:
            return daltonize_paper(c, PaperVariant::Printed);
        case DaltonizeMode::Redistribute:
            return daltonize_redistribute(d.type, d.strength, c);
    }
    throw std::logic_error("unknown DaltonizeMode");
}

double delta_e(const ColorRgba& a, const ColorRgba& b) {
    const Lab la = to_lab(a);
    const Lab lb = to_lab(b);
    const double dl = la.l - lb.l;
    const double da = la.a - lb.a;
    const double db = la.b - lb.b;
    return std::sqrt(dl * dl + da * da + db * db);
}

SeparabilityReport separability_report(CvdType t, const std::vector<ColorPair>& pairs,
                                       const Daltonizer& daltonizer) {
    if (pairs.empty()) {
        throw ValidationError("separability report needs at least one colour pair");
    }
    SeparabilityReport report;
    report.pair_count = pairs.size();
    report.pairs.reserve(pairs.size());
    const Severity full = Severity::full();
    double sum_before = 0.0;
    double sum_after = 0.0;
    for (const auto& [first, second] : pairs) {
        PairRecord rec{first, second, 0.0, 0.0};
        rec.before = delta_e(simulate(t, full, first), simulate(t, full, second));
        rec.after = daltonizer.mode == DaltonizeMode::Off
                        ? rec.before
                        : delta_e(simulate(t, full, daltonize(daltonizer, first)),
                                  simulate(t, full, daltonize(daltonizer, second)));
        sum_before += rec.before;
        sum_after += rec.after;
        report.pairs.push_back(rec);
    }
    const auto n = static_cast<double>(pairs.size());
    report.mean_before = sum_before / n;
    report.mean_after = sum_after / n;
    return report;
}

std::vector<ColorPair> confusion_pairs(CvdType t, std::size_t count, std::uint64_t seed) {
    SeededRng rng(seed);
    Vec3 unit{};
    unit[missing_cone(t)] = 1.0;
    Vec3 axis = multiply(lms_to_rgb_matrix(), unit);
    const double scale =
        std::max({std::abs(axis[0]), std::abs(axis[1]), std::abs(axis[2])});
    for (double& v : axis) {
        v /= scale;
    }

    constexpr double kJitter = 0.01;
    constexpr std::size_t kMaxAttempts = 1'000'000;
    const Severity full = Severity::full();

    std::vector<ColorPair> out;
    out.reserve(count);
    for (std::size_t attempt = 0; out.size() < count; ++attempt) {
        if (attempt == kMaxAttempts) {
            throw std::runtime_error("could not generate enough confusion pairs");
        }
        const ColorRgba first{rng.unit(), rng.unit(), rng.unit(), 1.0};
        const LinearRgb lin = decode(first);
        const double step = rng.uniform(-1.0, 1.0);
        const LinearRgb moved{lin.r + step * axis[0] + rng.uniform(-kJitter, kJitter),
                              lin.g + step * axis[1] + rng.uniform(-kJitter, kJitter),
                              lin.b + step * axis[2] + rng.uniform(-kJitter, kJitter)};
        if (moved.r < 0.0 || moved.r > 1.0 || moved.g < 0.0 || moved.g > 1.0 || moved.b < 0.0 ||
            moved.b > 1.0) {
            continue;
        }
        const ColorRgba second = encode(moved, 1.0);
        if (delta_e(first, second) < kMinRawDeltaE) {
            continue;
        }
        if (delta_e(simulate(t, full, first), simulate(t, full, second)) >= kMaxSimulatedDeltaE) {
            continue;
        }
        out.emplace_back(first, second);
    }
    return out;
}

}  // namespace sightglow
