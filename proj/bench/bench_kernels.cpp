// Optimized kernels against the serial reference implementations.

#include "pemn/kernels.hpp"
#include "pemn/rng.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <vector>

using namespace pemn;

namespace {

std::vector<float> random_values(std::size_t n, std::uint64_t seed) {
    RngStream rng(seed, 0);
    std::vector<float> v(n);
    for (auto& x : v) x = static_cast<float>(rng.normal());
    return v;
}

template <typename F>
double best_ms(int reps, F&& f) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        best = std::min(best, ms);
    }
    return best;
}

void report(const char* name, double ref_ms, double opt_ms, double flops, bool identical) {
    std::printf("%-28s ref %9.3f ms  opt %9.3f ms  speedup %6.2fx  %7.2f GFLOP/s  %s\n", name, ref_ms, opt_ms,
                ref_ms / opt_ms, flops / (opt_ms * 1e6), identical ? "bit-identical" : "MISMATCH");
}

void bench_gemm(std::size_t m, std::size_t n, std::size_t k, int reps) {
    const auto a = random_values(m * k, 1);
    const auto b = random_values(k * n, 2);
    std::vector<float> c_ref(m * n), c_opt(m * n);
    const double ref = best_ms(reps, [&] { kernels::reference::gemm(m, n, k, a.data(), k, b.data(), n, c_ref.data(), n); });
    const double opt = best_ms(reps, [&] { kernels::gemm(m, n, k, a.data(), k, b.data(), n, c_opt.data(), n); });
    char name[64];
    std::snprintf(name, sizeof name, "gemm %zux%zux%zu", m, n, k);
    report(name, ref, opt, 2.0 * static_cast<double>(m * n * k), c_ref == c_opt);
}

void bench_conv(std::size_t batch, std::size_t in_c, std::size_t out_c, std::size_t hw, int reps) {
    kernels::ConvGeometry g{};
    g.in_channels = in_c;
    g.in_h = hw;
    g.in_w = hw;
    g.kernel_h = 3;
    g.kernel_w = 3;
    g.stride = 1;
    g.padding = 1;
    const auto x = random_values(batch * in_c * hw * hw, 3);
    const auto w = random_values(out_c * g.patch_size(), 4);
    const std::size_t positions = g.out_h() * g.out_w();
    std::vector<float> y_ref(batch * out_c * positions), y_opt(y_ref.size());
    std::vector<float> patches(positions * g.patch_size()), rows(positions * out_c);
    const double ref = best_ms(reps, [&] { kernels::reference::conv2d(batch, out_c, g, x.data(), w.data(), y_ref.data()); });
    // Lowered path: im2row then gemm against the transposed kernel, then back to channel-planar.
    std::vector<float> wt(g.patch_size() * out_c);
    kernels::transpose(out_c, g.patch_size(), w.data(), wt.data());
    const double opt = best_ms(reps, [&] {
        for (std::size_t n = 0; n < batch; ++n) {
            kernels::im2row(g, x.data() + n * in_c * hw * hw, patches.data());
            kernels::gemm(positions, out_c, g.patch_size(), patches.data(), g.patch_size(), wt.data(), out_c,
                          rows.data(), out_c);
            kernels::transpose(positions, out_c, rows.data(), y_opt.data() + n * out_c * positions);
        }
    });
    char name[64];
    std::snprintf(name, sizeof name, "conv3x3 %zux%zux%zu->%zu", batch, in_c, hw, out_c);
    report(name, ref, opt, 2.0 * static_cast<double>(batch * out_c * positions * g.patch_size()), y_ref == y_opt);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"kernel benchmark: optimized vs reference"};
    int reps = 5;
    app.add_option("--reps", reps, "Repetitions per measurement (best is reported)");
    CLI11_PARSE(app, argc, argv);

    bench_gemm(256, 256, 784, reps);
    bench_gemm(256, 256, 256, reps);
    bench_gemm(256, 10, 256, reps);
    bench_gemm(512, 512, 512, reps);
    bench_conv(32, 1, 16, 28, reps);
    bench_conv(32, 16, 32, 14, reps);
    return 0;
}
