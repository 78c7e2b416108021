#include "sightglow/pipeline.hpp"

#include <type_traits>

namespace sightglow {

PixelPipeline PixelPipeline::matrix(const ColorMatrix& m) {
    PixelPipeline p;
    p.then(m);
    return p;
}

PixelPipeline PixelPipeline::simulation(CvdType t, Severity s) {
    PixelPipeline p;
    p.then(Linear{simulation_matrix(t, s)});
    return p;
}

PixelPipeline PixelPipeline::daltonizer(const Daltonizer& d) {
    if (d.mode == DaltonizeMode::Redistribute) {
        // Validates strength up front rather than per pixel.
        daltonize_redistribute(d.type, d.strength, ColorRgba{});
        PixelPipeline p;
        p.then(Redistribute{d.type, d.strength});
        return p;
    }
    return matrix(daltonize_matrix(d.mode));
}

PixelPipeline PixelPipeline::profile(const VisionProfile& profile) {
    if (profile.fusable()) {
        return matrix(build_pipeline_matrix(profile));
    }
    PixelPipeline p = daltonizer(profile.daltonizer());
    p.then(compose(contrast_matrix(profile.contrast()), saturation_matrix(profile.saturation())));
    return p;
}

PixelPipeline& PixelPipeline::then(Stage stage) {
    stages_.push_back(std::move(stage));
    return *this;
}

ColorRgba PixelPipeline::operator()(const ColorRgba& c) const {
    ColorRgba out = clamp(c);
    for (const Stage& stage : stages_) {
        out = std::visit(
            [&](const auto& s) -> ColorRgba {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, ColorMatrix>) {
                    return apply_matrix(s, out);
                } else if constexpr (std::is_same_v<T, Linear>) {
                    return apply_linear(s.matrix, out);
                } else {
                    return daltonize_redistribute(s.type, s.strength, out);
                }
            },
            stage);
    }
    return out;
}

}  // namespace sightglow
