#include "sightglow/filter_forge.hpp"

#include <charconv>
#include <cmath>
#include <regex>
#include <set>
#include <string>

#include "json.hpp"

namespace sightglow {

using nlohmann::json;

namespace {

constexpr std::string_view kSvgNamespace = "http://www.w3.org/2000/svg";

void require_range(double v, double lo, double hi, const char* what) {
    if (!(v >= lo && v <= hi)) {
        throw ValidationError(std::string(what) + " must lie in [" + format_coefficient(lo) + ", " +
                              format_coefficient(hi) + "]");
    }
}

void require_valid_id(std::string_view id) {
    if (!is_valid_filter_id(id)) {
        throw ValidationError("filter id '" + std::string(id) +
                              "' must match [A-Za-z][A-Za-z0-9_-]*");
    }
}

// --- JSON schema helpers ---------------------------------------------------

const json& require_key(const json& obj, const std::string& key, const std::string& base) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
        throw PackParseError(base + "/" + key, "missing required key");
    }
    return *it;
}

double require_number(const json& obj, const std::string& key, const std::string& base) {
    const json& v = require_key(obj, key, base);
    if (!v.is_number()) {
        throw PackParseError(base + "/" + key, "expected a number");
    }
    return v.get<double>();
}

std::string require_string(const json& obj, const std::string& key, const std::string& base) {
    const json& v = require_key(obj, key, base);
    if (!v.is_string()) {
        throw PackParseError(base + "/" + key, "expected a string");
    }
    return v.get<std::string>();
}

void check_keys(const json& obj, const std::set<std::string>& known, const std::string& base,
                bool lenient, std::vector<std::string>* warnings) {
    for (const auto& [key, value] : obj.items()) {
        if (known.count(key) != 0) {
            continue;
        }
        if (!lenient) {
            throw PackParseError(base + "/" + key, "unknown key");
        }
        if (warnings != nullptr) {
            warnings->push_back("ignoring unknown key " + base + "/" + key);
        }
    }
}

json profile_to_json(const VisionProfile& p) {
    return json{
        {"cvd_type", std::string(to_string(p.cvd_type()))},
        {"severity", p.severity().value()},
        {"contrast", p.contrast()},
        {"saturation", p.saturation()},
        {"daltonize_mode", std::string(to_string(p.daltonize_mode()))},
        {"redistribute_strength", p.redistribute_strength()},
        {"filter_id", p.filter_id()},
    };
}

VisionProfile profile_from_json(const json& obj, const std::string& base, bool lenient,
                                std::vector<std::string>* warnings) {
    if (!obj.is_object()) {
        throw PackParseError(base, "expected an object");
    }
    check_keys(obj,
               {"cvd_type", "severity", "contrast", "saturation", "daltonize_mode",
                "redistribute_strength", "filter_id"},
               base, lenient, warnings);

    VisionProfile p;
    // Each setter validates; map its failure onto the field's path.
    auto guarded = [&](const char* key, auto&& apply) {
        try {
            apply();
        } catch (const ValidationError& e) {
            throw PackParseError(base + "/" + key, e.what());
        }
    };

    const std::string type_text = require_string(obj, "cvd_type", base);
    const auto type = parse_cvd_type(type_text);
    if (!type) {
        throw PackParseError(base + "/cvd_type", "unknown cvd_type '" + type_text + "'");
    }
    p.set_cvd_type(*type);

    const std::string mode_text = require_string(obj, "daltonize_mode", base);
    const auto mode = parse_daltonize_mode(mode_text);
    if (!mode) {
        throw PackParseError(base + "/daltonize_mode", "unknown daltonize_mode '" + mode_text + "'");
    }
    p.set_daltonize_mode(*mode);

    const double severity = require_number(obj, "severity", base);
    guarded("severity", [&] { p.set_severity(Severity(severity)); });
    const double contrast = require_number(obj, "contrast", base);
    guarded("contrast", [&] { p.set_contrast(contrast); });
    const double saturation = require_number(obj, "saturation", base);
    guarded("saturation", [&] { p.set_saturation(saturation); });
    const double strength = require_number(obj, "redistribute_strength", base);
    guarded("redistribute_strength", [&] { p.set_redistribute_strength(strength); });
    std::string id = require_string(obj, "filter_id", base);
    guarded("filter_id", [&] { p.set_filter_id(std::move(id)); });
    return p;
}

json parse_document(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw PackParseError("", std::string("malformed JSON: ") + e.what());
    }
}

// Returns true when unknown keys should be tolerated.
bool check_version(const json& doc) {
    if (!doc.is_object()) {
        throw PackParseError("", "expected a JSON object");
    }
    const json& v = require_key(doc, "format_version", "");
    if (!v.is_number_integer()) {
        throw PackParseError("/format_version", "expected an integer");
    }
    const auto version = v.get<long long>();
    if (version < FilterPack::kMinFormatVersion) {
        throw UnsupportedVersionError(version);
    }
    return version > FilterPack::kFormatVersion;
}

std::string_view attribute_after(std::string_view text, std::string_view marker,
                                 std::size_t from, std::size_t* end) {
    const std::size_t start = text.find(marker, from);
    if (start == std::string_view::npos) {
        throw ValidationError("SVG filter has no " + std::string(marker) + " attribute");
    }
    const std::size_t value_begin = start + marker.size();
    const std::size_t value_end = text.find('"', value_begin);
    if (value_end == std::string_view::npos) {
        throw ValidationError("unterminated attribute in SVG filter");
    }
    *end = value_end;
    return text.substr(value_begin, value_end - value_begin);
}

}  // namespace

UnfusableModeError::UnfusableModeError()
    : std::runtime_error(
          "redistribute daltonization depends on each pixel and cannot be fused into one color "
          "matrix; apply it through the raster pipeline (the daltonize command) instead") {}

PackParseError::PackParseError(std::string path, const std::string& message)
    : std::runtime_error((path.empty() ? std::string("(document)") : path) + ": " + message),
      path_(std::move(path)) {}

UnsupportedVersionError::UnsupportedVersionError(long long version)
    : std::runtime_error("unsupported format_version " + std::to_string(version) +
                         " (minimum is " + std::to_string(FilterPack::kMinFormatVersion) + ")"),
      version_(version) {}

bool is_valid_filter_id(std::string_view id) {
    static const std::regex pattern("[A-Za-z][A-Za-z0-9_-]*");
    return std::regex_match(id.begin(), id.end(), pattern);
}

VisionProfile& VisionProfile::set_cvd_type(CvdType t) {
    cvd_type_ = t;
    return *this;
}

VisionProfile& VisionProfile::set_severity(Severity s) {
    severity_ = s;
    return *this;
}

VisionProfile& VisionProfile::set_contrast(double c) {
    require_range(c, kMinContrast, kMaxContrast, "contrast");
    contrast_ = c;
    return *this;
}

VisionProfile& VisionProfile::set_saturation(double s) {
    require_range(s, kMinSaturation, kMaxSaturation, "saturation");
    saturation_ = s;
    return *this;
}

VisionProfile& VisionProfile::set_daltonize_mode(DaltonizeMode m) {
    mode_ = m;
    return *this;
}

VisionProfile& VisionProfile::set_redistribute_strength(double s) {
    require_range(s, 0.0, 1.0, "redistribute strength");
    strength_ = s;
    return *this;
}

VisionProfile& VisionProfile::set_filter_id(std::string id) {
    require_valid_id(id);
    filter_id_ = std::move(id);
    return *this;
}

ColorMatrix saturation_matrix(double s) {
    require_range(s, VisionProfile::kMinSaturation, VisionProfile::kMaxSaturation, "saturation");
    // diag = s + (1 - s) w, off-diagonal = (1 - s) w; exact identity at s = 1.
    const double k = 1.0 - s;
    const std::array<double, 3> w = {kSaturateRed, kSaturateGreen, kSaturateBlue};
    ColorMatrix m = ColorMatrix::identity();
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            m(i, j) = i == j ? s + k * w[j] : k * w[j];
        }
    }
    return m;
}

ColorMatrix contrast_matrix(double c) {
    require_range(c, VisionProfile::kMinContrast, VisionProfile::kMaxContrast, "contrast");
    ColorMatrix m = ColorMatrix::identity();
    for (std::size_t i = 0; i < 3; ++i) {
        m(i, i) = c;
        m(i, 4) = 0.5 * (1.0 - c);
    }
    return m;
}

ColorMatrix daltonize_matrix(DaltonizeMode mode) {
    switch (mode) {
        case DaltonizeMode::Off:
            return ColorMatrix::identity();
        case DaltonizeMode::PaperEquations:
            return matrices::paper_equations();
        case DaltonizeMode::PaperPrinted:
            return matrices::paper_printed();
        case DaltonizeMode::Redistribute:
            throw UnfusableModeError();
    }
    throw std::logic_error("unknown DaltonizeMode");
}

ColorMatrix build_pipeline_matrix(const VisionProfile& p) {
    const ColorMatrix base = daltonize_matrix(p.daltonize_mode());
    return compose(contrast_matrix(p.contrast()),
                   compose(saturation_matrix(p.saturation()), base));
}

std::string format_coefficient(double v) {
    if (!std::isfinite(v)) {
        throw ValidationError("cannot format a non-finite coefficient");
    }
    if (v == 0.0) {
        return "0";  // folds -0
    }
    // Fixed notation with no precision argument yields the shortest
    // round-tripping digits. 400 chars covers the smallest subnormal.
    char buf[400];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed);
    if (res.ec != std::errc{}) {
        throw std::runtime_error("coefficient formatting failed");
    }
    return std::string(buf, res.ptr);
}

std::string format_values(const ColorMatrix& m) {
    std::string out;
    for (std::size_t i = 0; i < ColorMatrix::kSize; ++i) {
        if (i != 0) {
            out += ' ';
        }
        out += format_coefficient(m.coefficients()[i]);
    }
    return out;
}

ColorMatrix parse_values(std::string_view values) {
    ColorMatrix::Coefficients coeffs{};
    std::size_t count = 0;
    std::size_t pos = 0;
    auto is_space = [](char ch) { return ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r' || ch == ','; };
    while (pos < values.size()) {
        while (pos < values.size() && is_space(values[pos])) ++pos;
        if (pos == values.size()) break;
        std::size_t end = pos;
        while (end < values.size() && !is_space(values[end])) ++end;
        if (count == ColorMatrix::kSize) {
            throw ValidationError("values list has more than 20 numbers");
        }
        double v = 0.0;
        const auto* first = values.data() + pos;
        const auto* last = values.data() + end;
        const auto res = std::from_chars(first, last, v);
        if (res.ec != std::errc{} || res.ptr != last) {
            throw ValidationError("bad number '" + std::string(first, last) + "' in values list");
        }
        coeffs[count++] = v;
        pos = end;
    }
    if (count != ColorMatrix::kSize) {
        throw ValidationError("values list has " + std::to_string(count) + " numbers, expected 20");
    }
    return ColorMatrix(coeffs);
}

std::string emit_svg_filter(const ColorMatrix& m, std::string_view id) {
    require_valid_id(id);
    std::string out;
    out += "<svg xmlns=\"";
    out += kSvgNamespace;
    out += "\" width=\"0\" height=\"0\" style=\"position:absolute\" aria-hidden=\"true\">\n";
    out += "  <filter id=\"";
    out += id;
    out += "\" color-interpolation-filters=\"sRGB\">\n";
    out += "    <feColorMatrix type=\"matrix\" values=\"";
    out += format_values(m);
    out += "\"/>\n";
    out += "  </filter>\n";
    out += "</svg>\n";
    return out;
}

SvgFilter parse_svg_filter(std::string_view svg) {
    if (svg.find(std::string("xmlns=\"") + std::string(kSvgNamespace) + "\"") ==
        std::string_view::npos) {
        throw ValidationError("SVG filter is missing the SVG namespace");
    }
    std::size_t end = 0;
    const std::size_t filter_at = svg.find("<filter");
    if (filter_at == std::string_view::npos) {
        throw ValidationError("SVG document has no filter element");
    }
    std::string id(attribute_after(svg, "id=\"", filter_at, &end));
    const std::size_t primitive_at = svg.find("<feColorMatrix", end);
    if (primitive_at == std::string_view::npos) {
        throw ValidationError("SVG filter has no feColorMatrix element");
    }
    const std::string_view type = attribute_after(svg, "type=\"", primitive_at, &end);
    if (type != "matrix") {
        throw ValidationError("feColorMatrix type must be 'matrix'");
    }
    const std::string_view values = attribute_after(svg, "values=\"", end, &end);
    return {std::move(id), parse_values(values)};
}

std::string emit_css(std::string_view id, std::string_view selector) {
    require_valid_id(id);
    if (selector.empty() || selector.find_first_of("{};") != std::string_view::npos) {
        throw ValidationError("CSS selector must be non-empty and free of braces and semicolons");
    }
    std::string out;
    out += selector;
    out += " {\n  filter: url(#";
    out += id;
    out += ");\n}\n";
    return out;
}

FilterPack emit_filter_pack(const VisionProfile& p, std::string_view selector) {
    FilterPack pack;
    pack.profile = p;
    pack.matrix = build_pipeline_matrix(p);
    pack.svg = emit_svg_filter(pack.matrix, p.filter_id());
    pack.css = emit_css(p.filter_id(), selector);
    return pack;
}

std::string serialize_filter_pack(const FilterPack& pack) {
    json matrix = json::array();
    for (double v : pack.matrix.coefficients()) {
        matrix.push_back(v);
    }
    const json doc{
        {"format_version", pack.format_version},
        {"profile", profile_to_json(pack.profile)},
        {"matrix", matrix},
        {"svg", pack.svg},
        {"css", pack.css},
    };
    return doc.dump(2) + "\n";
}

ParsedPack parse_filter_pack(std::string_view text) {
    const json doc = parse_document(text);
    const bool lenient = check_version(doc);

    ParsedPack out;
    check_keys(doc, {"format_version", "profile", "matrix", "svg", "css"}, "", lenient,
               &out.warnings);
    FilterPack& pack = out.pack;
    pack.format_version = doc.at("format_version").get<int>();
    pack.profile = profile_from_json(require_key(doc, "profile", ""), "/profile", lenient,
                                     &out.warnings);
    if (!pack.profile.fusable()) {
        throw PackParseError("/profile/daltonize_mode",
                             "redistribute profiles cannot be carried in a filter pack");
    }

    const json& matrix = require_key(doc, "matrix", "");
    if (!matrix.is_array()) {
        throw PackParseError("/matrix", "expected an array of 20 numbers");
    }
    if (matrix.size() != ColorMatrix::kSize) {
        throw PackParseError("/matrix", "expected 20 numbers, found " + std::to_string(matrix.size()));
    }
    ColorMatrix::Coefficients coeffs{};
    for (std::size_t i = 0; i < ColorMatrix::kSize; ++i) {
        if (!matrix[i].is_number()) {
            throw PackParseError("/matrix/" + std::to_string(i), "expected a number");
        }
        coeffs[i] = matrix[i].get<double>();
    }
    pack.matrix = ColorMatrix(coeffs);

    pack.svg = require_string(doc, "svg", "");
    pack.css = require_string(doc, "css", "");

    SvgFilter embedded;
    try {
        embedded = parse_svg_filter(pack.svg);
    } catch (const ValidationError& e) {
        throw PackParseError("/svg", e.what());
    }
    if (embedded.matrix != pack.matrix) {
        throw PackParseError("/svg", "feColorMatrix values differ from the matrix field");
    }
    if (embedded.id != pack.profile.filter_id()) {
        throw PackParseError("/svg", "filter id differs from /profile/filter_id");
    }
    if (pack.css.find("url(#" + pack.profile.filter_id() + ")") == std::string::npos) {
        throw PackParseError("/css", "rule does not reference the filter id");
    }
    return out;
}

std::string serialize_profile(const VisionProfile& p) {
    const json doc{
        {"format_version", FilterPack::kFormatVersion},
        {"profile", profile_to_json(p)},
    };
    return doc.dump(2) + "\n";
}

VisionProfile parse_profile(std::string_view text, std::vector<std::string>* warnings) {
    const json doc = parse_document(text);
    const bool lenient = check_version(doc);
    // Full packs are accepted too; their extra keys are not checked here.
    const bool is_pack = doc.contains("matrix");
    if (!is_pack) {
        check_keys(doc, {"format_version", "profile"}, "", lenient, warnings);
    }
    return profile_from_json(require_key(doc, "profile", ""), "/profile", lenient, warnings);
}

}  // namespace sightglow
