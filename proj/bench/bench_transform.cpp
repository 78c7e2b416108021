// Serial reference kernel vs the OpenMP kernel on a seeded noise image.

#include <benchmark/benchmark.h>

#include "sightglow/pipeline.hpp"
#include "sightglow/random.hpp"
#include "sightglow/raster.hpp"

namespace {

using namespace sightglow;

RasterImage noise_image(std::size_t side) {
    RasterImage img(side, side);
    SeededRng rng(99);
    for (ColorRgba& px : img.pixels()) {
        px = quantize({rng.unit(), rng.unit(), rng.unit(), 1.0}, 8);
    }
    return img;
}

PixelPipeline pipeline_for(int which) {
    switch (which) {
        case 0:
            return PixelPipeline::matrix(matrices::paper_equations());
        case 1:
            return PixelPipeline::simulation(CvdType::Deuteranopia, Severity::full());
        default:
            return PixelPipeline::daltonizer({DaltonizeMode::Redistribute, CvdType::Deuteranopia, 1.0});
    }
}

void BM_Serial(benchmark::State& state) {
    const RasterImage img = noise_image(static_cast<std::size_t>(state.range(0)));
    RasterImage out = img;
    const PixelPipeline pipeline = pipeline_for(static_cast<int>(state.range(1)));
    for (auto _ : state) {
        kernels::transform_serial(pipeline, img.pixels(), out.pixels(), 8);
        benchmark::DoNotOptimize(out.pixels().data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(img.pixel_count()));
}

void BM_Parallel(benchmark::State& state) {
    const RasterImage img = noise_image(static_cast<std::size_t>(state.range(0)));
    RasterImage out = img;
    const PixelPipeline pipeline = pipeline_for(static_cast<int>(state.range(1)));
    const int workers = static_cast<int>(state.range(2));
    for (auto _ : state) {
        kernels::transform_parallel(pipeline, img.pixels(), out.pixels(), 8, workers);
        benchmark::DoNotOptimize(out.pixels().data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(img.pixel_count()));
}

// Args: image side, pipeline (0 matrix, 1 simulate, 2 redistribute), workers.
BENCHMARK(BM_Serial)->ArgsProduct({{512}, {0, 1, 2}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Parallel)->ArgsProduct({{512}, {0, 1, 2}, {1, 2, 4, 8}})->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
