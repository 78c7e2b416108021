#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sightglow/color_core.hpp"
#include "sightglow/cvd_engine.hpp"

namespace sightglow {

/// Redistribute daltonization depends on the input pixel and has no single
/// matrix form. Use the raster pipeline for it.
class UnfusableModeError : public std::runtime_error {
public:
    UnfusableModeError();
};

/// Malformed or schema-violating FilterPack/profile JSON. `path` is a JSON
/// pointer to the offending value ("" for the document itself).
class PackParseError : public std::runtime_error {
public:
    PackParseError(std::string path, const std::string& message);

    const std::string& path() const { return path_; }

private:
    std::string path_;
};

class UnsupportedVersionError : public std::runtime_error {
public:
    explicit UnsupportedVersionError(long long version);

    long long version() const { return version_; }

private:
    long long version_;
};

/// A user's personalization state. Every field is range-checked on
/// construction and on each setter.
class VisionProfile {
public:
    static constexpr double kMinContrast = 0.2;
    static constexpr double kMaxContrast = 3.0;
    static constexpr double kMinSaturation = 0.0;
    static constexpr double kMaxSaturation = 3.0;
    static constexpr std::string_view kDefaultFilterId = "sightglow";

    /// Neutral profile: no daltonization, contrast and saturation 1.
    VisionProfile() = default;

    CvdType cvd_type() const { return cvd_type_; }
    Severity severity() const { return severity_; }
    double contrast() const { return contrast_; }
    double saturation() const { return saturation_; }
    DaltonizeMode daltonize_mode() const { return mode_; }
    double redistribute_strength() const { return strength_; }
    const std::string& filter_id() const { return filter_id_; }

    VisionProfile& set_cvd_type(CvdType t);
    VisionProfile& set_severity(Severity s);
    VisionProfile& set_contrast(double c);
    VisionProfile& set_saturation(double s);
    VisionProfile& set_daltonize_mode(DaltonizeMode m);
    VisionProfile& set_redistribute_strength(double s);
    VisionProfile& set_filter_id(std::string id);

    bool fusable() const { return mode_ != DaltonizeMode::Redistribute; }

    Daltonizer daltonizer() const { return {mode_, cvd_type_, strength_}; }

    friend bool operator==(const VisionProfile&, const VisionProfile&) = default;

private:
    CvdType cvd_type_ = CvdType::Deuteranopia;
    Severity severity_ = Severity::full();
    double contrast_ = 1.0;
    double saturation_ = 1.0;
    DaltonizeMode mode_ = DaltonizeMode::Off;
    double strength_ = 1.0;
    std::string filter_id_{kDefaultFilterId};
};

bool is_valid_filter_id(std::string_view id);

// W3C Filter Effects luminance weights for the saturate matrix.
inline constexpr double kSaturateRed = 0.213;
inline constexpr double kSaturateGreen = 0.715;
inline constexpr double kSaturateBlue = 0.072;

/// feColorMatrix type="saturate". s in [0, 3].
ColorMatrix saturation_matrix(double s);
/// Linear contrast about mid-gray 0.5. c in [0.2, 3].
ColorMatrix contrast_matrix(double c);

/// Matrix for the daltonize step alone (identity when mode is off).
ColorMatrix daltonize_matrix(DaltonizeMode mode);

/// contrast * saturation * daltonize, i.e. daltonize applied first.
/// Throws UnfusableModeError for redistribute.
ColorMatrix build_pipeline_matrix(const VisionProfile& p);

/// Shortest decimal that round-trips to the same double, never in exponent form.
std::string format_coefficient(double v);
/// 20 coefficients, space separated, row-major.
std::string format_values(const ColorMatrix& m);
ColorMatrix parse_values(std::string_view values);

std::string emit_svg_filter(const ColorMatrix& m, std::string_view id);

struct SvgFilter {
    std::string id;
    ColorMatrix matrix;
};

/// Reads back a document produced by emit_svg_filter.
SvgFilter parse_svg_filter(std::string_view svg);

inline constexpr std::string_view kDefaultSelector = "body";

std::string emit_css(std::string_view id, std::string_view selector = kDefaultSelector);

struct FilterPack {
    static constexpr int kFormatVersion = 1;
    static constexpr int kMinFormatVersion = 1;

    int format_version = kFormatVersion;
    VisionProfile profile;
    ColorMatrix matrix = ColorMatrix::identity();
    std::string svg;
    std::string css;

    friend bool operator==(const FilterPack&, const FilterPack&) = default;
};

FilterPack emit_filter_pack(const VisionProfile& p, std::string_view selector = kDefaultSelector);

/// Canonical JSON text of a pack (sorted keys, two-space indent, trailing LF).
std::string serialize_filter_pack(const FilterPack& pack);

struct ParsedPack {
    FilterPack pack;
    std::vector<std::string> warnings;
};

/// Packs newer than kFormatVersion parse with unknown keys ignored and a
/// warning per ignored key.
ParsedPack parse_filter_pack(std::string_view text);

// Stored profile documents: {"format_version": 1, "profile": {...}}.
std::string serialize_profile(const VisionProfile& p);
/// Accepts either a stored profile or a full FilterPack and returns its profile.
VisionProfile parse_profile(std::string_view text, std::vector<std::string>* warnings = nullptr);

}  // namespace sightglow
