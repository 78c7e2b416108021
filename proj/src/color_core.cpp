#include "sightglow/color_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sightglow {

namespace {

// IEC 61966-2-1 linear sRGB -> CIE XYZ (D65).
constexpr Matrix3 kSrgbToXyz = {{
    {0.4124, 0.3576, 0.1805},
    {0.2126, 0.7152, 0.0722},
    {0.0193, 0.1192, 0.9505},
}};

// Hunt-Pointer-Estevez XYZ -> LMS, normalized to D65.
constexpr Matrix3 kXyzToLmsHpe = {{
    {0.4002, 0.7076, -0.0808},
    {-0.2263, 1.1653, 0.0457},
    {0.0, 0.0, 0.9182},
}};

double clamp_unit(double v) { return std::clamp(v, 0.0, 1.0); }

void require_finite_scalar(double v, const char* what) {
    if (!std::isfinite(v)) {
        throw ValidationError(std::string(what) + " must be finite");
    }
}

ColorRgba apply_raw(const ColorMatrix& m, const ColorRgba& c) {
    const std::array<double, 4> in = {c.r, c.g, c.b, c.a};
    std::array<double, 4> out{};
    for (std::size_t row = 0; row < ColorMatrix::kRows; ++row) {
        double acc = m(row, 0) * in[0];
        acc += m(row, 1) * in[1];
        acc += m(row, 2) * in[2];
        acc += m(row, 3) * in[3];
        acc += m(row, 4);
        out[row] = acc;
    }
    return {out[0], out[1], out[2], out[3]};
}

}  // namespace

Matrix3 multiply(const Matrix3& lhs, const Matrix3& rhs) {
    Matrix3 out{};
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < 3; ++k) {
                acc += lhs[i][k] * rhs[k][j];
            }
            out[i][j] = acc;
        }
    }
    return out;
}

std::array<double, 3> multiply(const Matrix3& m, const std::array<double, 3>& v) {
    return {
        m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
        m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
        m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
    };
}

Matrix3 identity3() { return {{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}}; }

Matrix3 inverse(const Matrix3& m) {
    const double c00 = m[1][1] * m[2][2] - m[1][2] * m[2][1];
    const double c01 = m[1][2] * m[2][0] - m[1][0] * m[2][2];
    const double c02 = m[1][0] * m[2][1] - m[1][1] * m[2][0];
    const double det = m[0][0] * c00 + m[0][1] * c01 + m[0][2] * c02;
    if (det == 0.0 || !std::isfinite(det)) {
        throw ValidationError("matrix is singular");
    }
    const double inv = 1.0 / det;
    Matrix3 out{};
    out[0][0] = c00 * inv;
    out[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) * inv;
    out[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) * inv;
    out[1][0] = c01 * inv;
    out[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) * inv;
    out[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) * inv;
    out[2][0] = c02 * inv;
    out[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) * inv;
    out[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) * inv;
    return out;
}

ColorMatrix::ColorMatrix(const Coefficients& coefficients) : c_(coefficients) {
    for (double v : c_) {
        require_finite_scalar(v, "matrix coefficient");
    }
}

ColorMatrix ColorMatrix::identity() {
    ColorMatrix m;
    for (std::size_t i = 0; i < kRows; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

ColorMatrix ColorMatrix::from_rgb(const Matrix3& rgb) {
    ColorMatrix m = identity();
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            m(i, j) = rgb[i][j];
        }
    }
    return m;
}

namespace matrices {

ColorMatrix paper_printed() {
    // clang-format off
    return ColorMatrix({
        0.5, 0.2, 0.3, 0.0, 0.0,
        0.0, 1.0, 0.0, 0.0, 0.0,
        0.2, 0.3, 0.5, 0.0, 0.0,
        0.2, 0.0, 0.0, 1.0, 0.0,
    });
    // clang-format on
}

ColorMatrix paper_equations() {
    // clang-format off
    return ColorMatrix({
        0.5, 0.2, 0.3, 0.0, 0.0,
        0.0, 1.0, 0.0, 0.0, 0.0,
        0.2, 0.3, 0.5, 0.0, 0.0,
        0.0, 0.0, 0.0, 1.0, 0.0,
    });
    // clang-format on
}

}  // namespace matrices

double srgb_to_linear(double encoded) {
    require_finite_scalar(encoded, "sRGB channel");
    const double c = clamp_unit(encoded);
    if (c <= 0.04045) {
        return c / 12.92;
    }
    return std::pow((c + 0.055) / 1.055, 2.4);
}

double linear_to_srgb(double linear) {
    require_finite_scalar(linear, "linear channel");
    const double c = clamp_unit(linear);
    if (c >= 1.0) {
        return 1.0;
    }
    if (c <= 0.0031308) {
        return c * 12.92;
    }
    return 1.055 * std::pow(c, 1.0 / 2.4) - 0.055;
}

LinearRgb decode(const ColorRgba& c) {
    return {srgb_to_linear(c.r), srgb_to_linear(c.g), srgb_to_linear(c.b)};
}

ColorRgba encode(const LinearRgb& c, double alpha) {
    require_finite_scalar(alpha, "alpha");
    return {linear_to_srgb(c.r), linear_to_srgb(c.g), linear_to_srgb(c.b), clamp_unit(alpha)};
}

const Matrix3& srgb_to_xyz_matrix() { return kSrgbToXyz; }

const Matrix3& rgb_to_lms_matrix() {
    static const Matrix3 m = multiply(kXyzToLmsHpe, kSrgbToXyz);
    return m;
}

const Matrix3& lms_to_rgb_matrix() {
    static const Matrix3 m = inverse(rgb_to_lms_matrix());
    return m;
}

LmsColor rgb_to_lms(const LinearRgb& c) {
    const auto v = multiply(rgb_to_lms_matrix(), std::array<double, 3>{c.r, c.g, c.b});
    return {v[0], v[1], v[2]};
}

LinearRgb lms_to_rgb(const LmsColor& c) {
    const auto v = multiply(lms_to_rgb_matrix(), std::array<double, 3>{c.l, c.m, c.s});
    return {v[0], v[1], v[2]};
}

ColorRgba apply_linear(const Matrix3& m, const ColorRgba& c) {
    const LinearRgb lin = decode(c);
    const auto v = multiply(m, std::array<double, 3>{lin.r, lin.g, lin.b});
    return encode({v[0], v[1], v[2]}, c.a);
}

void require_finite(const ColorRgba& c, const char* what) {
    if (!std::isfinite(c.r) || !std::isfinite(c.g) || !std::isfinite(c.b) || !std::isfinite(c.a)) {
        throw ValidationError(std::string(what) + " has a non-finite channel");
    }
}

ColorRgba clamp(const ColorRgba& c) {
    return {clamp_unit(c.r), clamp_unit(c.g), clamp_unit(c.b), clamp_unit(c.a)};
}

ColorRgba apply_matrix(const ColorMatrix& m, const ColorRgba& c) {
    return clamp(apply_matrix_unclamped(m, c));
}

ColorRgba apply_matrix_unclamped(const ColorMatrix& m, const ColorRgba& c) {
    require_finite(c);
    return apply_raw(m, c);
}

ColorMatrix compose(const ColorMatrix& outer, const ColorMatrix& inner) {
    // Treat both as 5x5 affine matrices with an implicit (0,0,0,0,1) last row.
    ColorMatrix out;
    for (std::size_t i = 0; i < ColorMatrix::kRows; ++i) {
        for (std::size_t j = 0; j < ColorMatrix::kCols; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < ColorMatrix::kRows; ++k) {
                acc += outer(i, k) * inner(k, j);
            }
            if (j == ColorMatrix::kCols - 1) {
                acc += outer(i, j);
            }
            out(i, j) = acc;
        }
    }
    return out;
}

}  // namespace sightglow
