// Serial reference vs OpenMP version of each data-parallel kernel.

#include <benchmark/benchmark.h>

#include <random>

#include "uavtrack/kernels.hpp"

namespace {

using namespace uavtrack;
using namespace uavtrack::kernels;

Patch noise_patch(int w, int h, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 255.0);
  Patch p(w, h);
  for (auto& v : p.values) v = u(rng);
  return p;
}

Scene make_scene(int frames) {
  Scene s;
  s.width = 640;
  s.height = 360;
  s.noise_sigma = 2.0;
  s.seed = 11;
  s.background.resize(static_cast<std::size_t>(s.width) * s.height);
  for (int y = 0; y < s.height; ++y)
    for (int x = 0; x < s.width; ++x)
      s.background[static_cast<std::size_t>(y) * s.width + x] =
          static_cast<std::uint8_t>((x * 3 + y * 5) % 256);
  s.textures.push_back(noise_patch(40, 40, 3));
  for (int f = 0; f < frames; ++f) {
    Sprite sp;
    sp.offsets = {{100 + 2 * f, 80 + f}, {101 + 2 * f, 80 + f}, {102 + 2 * f, 81 + f}};
    s.frames.push_back({sp});
  }
  return s;
}

template <Patch (*Fn)(const Patch&, const Patch&, int)>
void BM_ncc(benchmark::State& st) {
  const Patch img = noise_patch(static_cast<int>(st.range(0)), static_cast<int>(st.range(0)) * 9 / 16, 1);
  const Patch tpl = noise_patch(40, 40, 2);
  for (auto _ : st) benchmark::DoNotOptimize(Fn(img, tpl, 2));
}
BENCHMARK(BM_ncc<ncc_map_serial>)->Name("ncc_map/serial")->Arg(320)->Arg(640);
BENCHMARK(BM_ncc<ncc_map>)->Name("ncc_map/omp")->Arg(320)->Arg(640);

template <Patch (*Fn)(const Patch&)>
void BM_pyr(benchmark::State& st) {
  const Patch img = noise_patch(1280, 720, 4);
  for (auto _ : st) benchmark::DoNotOptimize(Fn(img));
}
BENCHMARK(BM_pyr<pyr_down_serial>)->Name("pyr_down/serial");
BENCHMARK(BM_pyr<pyr_down>)->Name("pyr_down/omp");

template <void (*Fn)(const Patch&, Patch&, Patch&)>
void BM_grad(benchmark::State& st) {
  const Patch img = noise_patch(1280, 720, 5);
  Patch gx, gy;
  for (auto _ : st) {
    Fn(img, gx, gy);
    benchmark::DoNotOptimize(gx.values.data());
  }
}
BENCHMARK(BM_grad<gradients_serial>)->Name("gradients/serial");
BENCHMARK(BM_grad<gradients>)->Name("gradients/omp");

template <std::vector<Frame> (*Fn)(const Scene&)>
void BM_render(benchmark::State& st) {
  const Scene s = make_scene(32);
  for (auto _ : st) benchmark::DoNotOptimize(Fn(s));
}
BENCHMARK(BM_render<render_frames_serial>)->Name("render_frames/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_render<render_frames>)->Name("render_frames/omp")->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
