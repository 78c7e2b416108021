#pragma once

#include <array>
#include <stdexcept>
#include <string>

namespace sightglow {

/// Raised when a value fails a range or finiteness check at a public boundary.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Encoded sRGB pixel with straight alpha. Channels are unit-range.
struct ColorRgba {
    double r = 0.0;
    double g = 0.0;
    double b = 0.0;
    double a = 1.0;

    friend bool operator==(const ColorRgba&, const ColorRgba&) = default;
};

/// Linear-light RGB. Not clamped by lms_to_rgb; callers clamp at encode.
struct LinearRgb {
    double r = 0.0;
    double g = 0.0;
    double b = 0.0;

    friend bool operator==(const LinearRgb&, const LinearRgb&) = default;
};

/// Cone activations for the long, medium and short wavelength receptors.
struct LmsColor {
    double l = 0.0;
    double m = 0.0;
    double s = 0.0;

    friend bool operator==(const LmsColor&, const LmsColor&) = default;
};

using Matrix3 = std::array<std::array<double, 3>, 3>;

Matrix3 multiply(const Matrix3& lhs, const Matrix3& rhs);
Matrix3 inverse(const Matrix3& m);
Matrix3 identity3();
std::array<double, 3> multiply(const Matrix3& m, const std::array<double, 3>& v);

/// 4x5 affine colour transform in feColorMatrix layout.
///
/// Rows produce R', G', B', A'; columns weight R, G, B, A and a constant
/// bias. Coefficients are stored row-major, which is also the order of the
/// SVG `values` attribute.
class ColorMatrix {
public:
    static constexpr std::size_t kRows = 4;
    static constexpr std::size_t kCols = 5;
    static constexpr std::size_t kSize = kRows * kCols;

    using Coefficients = std::array<double, kSize>;

    /// Zero matrix. Use identity() for the neutral transform.
    constexpr ColorMatrix() : c_{} {}
    explicit ColorMatrix(const Coefficients& coefficients);

    static ColorMatrix identity();

    /// Embeds a linear 3x3 RGB transform, alpha row identity, zero bias.
    static ColorMatrix from_rgb(const Matrix3& m);

    double operator()(std::size_t row, std::size_t col) const { return c_[row * kCols + col]; }
    double& operator()(std::size_t row, std::size_t col) { return c_[row * kCols + col]; }

    const Coefficients& coefficients() const { return c_; }

    friend bool operator==(const ColorMatrix&, const ColorMatrix&) = default;

private:
    Coefficients c_;
};

namespace matrices {

/// Daltonization matrix exactly as printed, including a1 = 0.2 in the alpha row.
ColorMatrix paper_printed();

/// The same matrix with the alpha row taken from the channel equations (A' = A).
/// This is the default daltonization constant.
ColorMatrix paper_equations();

}  // namespace matrices

// sRGB transfer (IEC 61966-2-1). Out-of-range input is clamped first; NaN throws.
double srgb_to_linear(double encoded);
double linear_to_srgb(double linear);

LinearRgb decode(const ColorRgba& c);
/// Clamps to [0,1] before encoding; alpha is supplied by the caller.
ColorRgba encode(const LinearRgb& c, double alpha);

/// IEC 61966-2-1 linear sRGB -> CIE XYZ (D65).
const Matrix3& srgb_to_xyz_matrix();

/// Linear sRGB -> LMS through Hunt-Pointer-Estevez cone fundamentals
/// normalized so that D65 white maps to (nearly) unit response.
const Matrix3& rgb_to_lms_matrix();
const Matrix3& lms_to_rgb_matrix();

LmsColor rgb_to_lms(const LinearRgb& c);
/// May return channels outside [0,1] for LMS values outside the sRGB gamut.
LinearRgb lms_to_rgb(const LmsColor& c);

/// decode -> 3x3 linear transform -> encode. Alpha passes through.
ColorRgba apply_linear(const Matrix3& m, const ColorRgba& c);

/// Applies the matrix and clamps every output channel to [0,1].
ColorRgba apply_matrix(const ColorMatrix& m, const ColorRgba& c);
/// Same arithmetic without the final clamp; used to check composition.
ColorRgba apply_matrix_unclamped(const ColorMatrix& m, const ColorRgba& c);

/// Matrix whose application equals applying `inner` then `outer` (unclamped).
ColorMatrix compose(const ColorMatrix& outer, const ColorMatrix& inner);

ColorRgba clamp(const ColorRgba& c);

/// Throws ValidationError if any channel is NaN or infinite.
void require_finite(const ColorRgba& c, const char* what = "color");

}  // namespace sightglow
