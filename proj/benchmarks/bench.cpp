#include <benchmark/benchmark.h>

#include "switchstab/exponents.hpp"
#include "switchstab/lie.hpp"

using namespace swst;

namespace {

Mat random_matrix(int n, Rng& rng) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = rng.normal();
    return m;
}

void bm_expm(benchmark::State& state) {
    Rng rng(1);
    const int n = static_cast<int>(state.range(0));
    Mat m = random_matrix(n, rng);
    for (auto _ : state) benchmark::DoNotOptimize(expm(m));
}
BENCHMARK(bm_expm)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

void bm_qr(benchmark::State& state) {
    Rng rng(2);
    const int n = static_cast<int>(state.range(0));
    Mat m = random_matrix(n, rng);
    for (auto _ : state) benchmark::DoNotOptimize(qr(m));
}
BENCHMARK(bm_qr)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

void bm_frame_step(benchmark::State& state) {
    Rng rng(3);
    const int n = static_cast<int>(state.range(0));
    Mat m = expm(Mat(0.5 * random_matrix(n, rng)));
    FrameState fs = FrameState::identity(n);
    for (auto _ : state) {
        auto [next, log] = frame_step(fs, m, 1.0);
        fs = std::move(next);
        benchmark::DoNotOptimize(log);
    }
}
BENCHMARK(bm_frame_step)->Arg(2)->Arg(4)->Arg(8);

void bm_lyapunov_qr(benchmark::State& state) {
    Rng rng(4);
    MatrixFamily fam =
        MatrixFamily::from({random_matrix(3, rng), random_matrix(3, rng)});
    SwitchPoint p =
        sample_switch_point(ProbabilityVector::from({0.5, 0.5}), 1000, 5);
    Propagator prop(fam, p);
    for (auto _ : state) benchmark::DoNotOptimize(lyapunov_qr(prop, 1000.0));
}
BENCHMARK(bm_lyapunov_qr);

void bm_triangularize(benchmark::State& state) {
    Rng rng(6);
    const int n = static_cast<int>(state.range(0));
    Mat t0 = Mat::Identity(n, n) + 0.3 * random_matrix(n, rng) / n;
    Mat t0_inv = t0.inverse();
    std::vector<Mat> mats;
    for (int i = 0; i < 2; ++i) {
        Mat u = Mat::Zero(n, n);
        for (int r = 0; r < n; ++r)
            for (int c = r; c < n; ++c) u(r, c) = rng.normal();
        mats.push_back(t0_inv * u * t0);
    }
    MatrixFamily fam = MatrixFamily::from(std::move(mats));
    for (auto _ : state)
        benchmark::DoNotOptimize(simultaneous_triangularize(fam));
}
BENCHMARK(bm_triangularize)->Arg(2)->Arg(4)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
