// Parallel kernels against their serial references.
//
//   bench_kernels [--reps N]
//
// Prints one line per kernel: best-of-N milliseconds for the parallel kernel
// at full and single thread count, the serial reference (a direct loop nest,
// so the ratio also reflects blocking), and the max abs difference.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include <omp.h>

#include "jcl/kernels.hpp"
#include "jcl/ops.hpp"
#include "jcl/rng.hpp"

using namespace jcl;
using kernels::Trans;

namespace {

double best_ms_once(int reps, const std::function<void()>& fn) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

struct Timing {
    double threads, single;
};

Timing best_ms_par(int reps, const std::function<void()>& fn) {
    const int max = omp_get_max_threads();
    Timing t{best_ms_once(reps, fn), 0};
    omp_set_num_threads(1);
    t.single = best_ms_once(reps, fn);
    omp_set_num_threads(max);
    return t;
}

std::vector<float> randv(size_t n, Rng& rng) {
    std::vector<float> v(n);
    for (auto& x : v) x = static_cast<float>(rng.normal());
    return v;
}

double max_diff(const std::vector<float>& a, const std::vector<float>& b) {
    double m = 0;
    for (size_t i = 0; i < a.size(); ++i) m = std::max(m, static_cast<double>(std::abs(a[i] - b[i])));
    return m;
}

void report(const char* name, const std::string& shape, Timing par, double ref, double diff) {
    std::printf("%-12s %-24s parallel %8.3f ms (1 thread %8.3f)  reference %9.3f ms  x%7.2f  max|diff| %.2e\n",
                name, shape.c_str(), par.threads, par.single, ref, ref / par.threads, diff);
}

}  // namespace

int main(int argc, char** argv) {
    int reps = 5;
    for (int i = 1; i + 1 < argc; ++i)
        if (std::strcmp(argv[i], "--reps") == 0) reps = std::max(1, std::atoi(argv[i + 1]));
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
    Rng rng(1);

    for (auto [m, n, k] : {std::tuple{256, 64, 288}, {512, 512, 512}, {1024, 128, 1024}}) {
        const auto a = randv(static_cast<size_t>(m * k), rng), b = randv(static_cast<size_t>(k * n), rng);
        std::vector<float> c1(static_cast<size_t>(m * n)), c2(c1.size());
        const Timing par = best_ms_par(reps, [&] {
            kernels::gemm<float>(Trans::No, Trans::No, m, n, k, 1.0f, a.data(), k, b.data(), n, 0.0f, c1.data(), n);
        });
        const double ref = best_ms_once(reps, [&] {
            kernels::reference::gemm<float>(Trans::No, Trans::No, m, n, k, 1.0f, a.data(), k, b.data(), n, 0.0f,
                                            c2.data(), n);
        });
        report("gemm", std::to_string(m) + "x" + std::to_string(n) + "x" + std::to_string(k), par, ref,
               max_diff(c1, c2));
    }

    {
        // Encoder-sized convolution: 128 images, 16 -> 32 channels at 14x14.
        kernels::ConvGeometry g{128, 16, 14, 14, 32, 3, 2, 1};
        const auto x = randv(static_cast<size_t>(g.batch * g.in_channels * g.in_h * g.in_w), rng);
        const auto w = randv(static_cast<size_t>(g.out_channels * g.patch()), rng);
        std::vector<float> ref_out(static_cast<size_t>(g.batch * g.out_channels * g.out_h() * g.out_w()));
        std::vector<float> par_out;
        GradientTape<float> tape;
        const Tensor<float> xt({g.batch, g.in_channels, g.in_h, g.in_w}, x);
        const Tensor<float> wt({g.out_channels, g.in_channels, 3, 3}, w);
        const Timing par = best_ms_par(reps, [&] {
            GradientTape<float> t;
            par_out = conv2d(t.constant(xt), t.constant(wt), g.stride, g.padding).value().storage();
        });
        const double ref = best_ms_once(reps, [&] { kernels::reference::conv2d(g, x.data(), w.data(), ref_out.data()); });
        report("conv2d", "128x16x14x14 -> 32, s2", par, ref, max_diff(par_out, ref_out));
    }

    {
        const int64_t batch = 512, ch = 1, h = 28, w = 28;
        const auto x = randv(static_cast<size_t>(batch * ch * h * w), rng);
        std::vector<kernels::CropBox> boxes;
        for (int64_t i = 0; i < batch; ++i) {
            const double side = rng.uniform(14, 28);
            boxes.push_back({rng.uniform(0, 28 - side), rng.uniform(0, 28 - side), side, side, rng.bernoulli(0.5)});
        }
        std::vector<float> o1(x.size()), o2(x.size());
        const Timing par = best_ms_par(reps, [&] {
            kernels::crop_resize<float>(batch, ch, h, w, boxes.data(), h, w, x.data(), o1.data());
        });
        const double ref = best_ms_once(reps, [&] {
            kernels::reference::crop_resize<float>(batch, ch, h, w, boxes.data(), h, w, x.data(), o2.data());
        });
        report("crop_resize", "512x1x28x28", par, ref, max_diff(o1, o2));
    }
    return 0;
}
