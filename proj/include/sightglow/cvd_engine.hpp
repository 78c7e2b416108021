#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sightglow/color_core.hpp"

namespace sightglow {

enum class CvdType { Protanopia, Deuteranopia, Tritanopia };

std::string_view to_string(CvdType t);
/// Accepts full names and the short forms protan/deutan/tritan.
std::optional<CvdType> parse_cvd_type(std::string_view text);

/// Blend between normal vision (0) and full dichromacy (1).
class Severity {
public:
    constexpr Severity() = default;
    explicit Severity(double value);

    static Severity full() { return Severity(1.0); }

    double value() const { return value_; }

    friend bool operator==(const Severity&, const Severity&) = default;

private:
    double value_ = 0.0;
};

/// Which fixed recolouring to apply. Redistribute is input-dependent and
/// only exists as a per-pixel operation.
enum class DaltonizeMode { Off, PaperEquations, PaperPrinted, Redistribute };

std::string_view to_string(DaltonizeMode m);
/// Accepts "paper_equations" and "paper-equations" spellings.
std::optional<DaltonizeMode> parse_daltonize_mode(std::string_view text);

enum class PaperVariant { Printed, Equations };

/// Full daltonizer selection used by reports and the raster pipeline.
struct Daltonizer {
    DaltonizeMode mode = DaltonizeMode::Off;
    CvdType type = CvdType::Deuteranopia;  // consulted only by Redistribute
    double strength = 1.0;                 // consulted only by Redistribute
};

/// Linear-RGB simulation transform: identity at severity 0, the LMS plane
/// projection at severity 1, and coefficientwise interpolation in between.
Matrix3 simulation_matrix(CvdType t, Severity s);

/// Error-shift matrix used by redistribute daltonization.
const Matrix3& redistribution_matrix(CvdType t);

ColorRgba simulate(CvdType t, Severity s, const ColorRgba& c);

ColorRgba daltonize_paper(const ColorRgba& c, PaperVariant variant = PaperVariant::Equations);

/// strength must lie in [0,1].
ColorRgba daltonize_redistribute(CvdType t, double strength, const ColorRgba& c);

ColorRgba daltonize(const Daltonizer& d, const ColorRgba& c);

/// CIE76 colour difference in CIELAB (D65). Alpha is ignored.
double delta_e(const ColorRgba& a, const ColorRgba& b);

struct PairRecord {
    ColorRgba first;
    ColorRgba second;
    double before = 0.0;
    double after = 0.0;
};

struct SeparabilityReport {
    std::size_t pair_count = 0;
    double mean_before = 0.0;
    double mean_after = 0.0;
    std::vector<PairRecord> pairs;
};

using ColorPair = std::pair<ColorRgba, ColorRgba>;

/// Mean simulated delta E of each pair before and after daltonization.
/// Simulation always runs at full severity.
SeparabilityReport separability_report(CvdType t, const std::vector<ColorPair>& pairs,
                                       const Daltonizer& daltonizer);

/// Seeded confusion pairs for `t`: colours at least `kMinRawDeltaE` apart for
/// normal vision that differ by less than `kMaxSimulatedDeltaE` once simulated.
/// Each pair is built by stepping along the missing cone's axis in LMS and
/// adding a small off-axis jitter.
std::vector<ColorPair> confusion_pairs(CvdType t, std::size_t count, std::uint64_t seed);

inline constexpr double kMinRawDeltaE = 10.0;
inline constexpr double kMaxSimulatedDeltaE = 5.0;

/// Seed used by the reference separability suite.
inline constexpr std::uint64_t kConfusionSuiteSeed = 20241014;

}  // namespace sightglow
