// Times the elimination sweep and the dense kernels on both backends and
// checks that the parallel results match the serial ones bitwise. Not a
// registered test; run it by hand when touching kernels.cpp.

#include <chrono>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gthkit/families.hpp"
#include "gthkit/gth.hpp"
#include "gthkit/kernels.hpp"
#include "gthkit/matrix.hpp"

namespace {

using namespace gthkit;

double now_ms() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

template <typename F>
double best_of(int reps, F&& f) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const double t0 = now_ms();
        f();
        best = std::min(best, now_ms() - t0);
    }
    return best;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gthkit kernel benchmark: serial vs OpenMP backends"};
    std::string sizes_text = "128,256,512";
    int reps = 3;
    std::uint64_t seed = 7;
    app.add_option("--N", sizes_text, "matrix sizes")->capture_default_str();
    app.add_option("--reps", reps, "repetitions, best time kept")->capture_default_str();
    app.add_option("--seed", seed, "chain seed")->capture_default_str();
    CLI11_PARSE(app, argc, argv);

    std::vector<int> sizes;
    for (const auto& piece : [&] {
             std::vector<std::string> out;
             std::string cur;
             for (char c : sizes_text + ",") {
                 if (c == ',') {
                     if (!cur.empty()) out.push_back(cur);
                     cur.clear();
                 } else {
                     cur += c;
                 }
             }
             return out;
         }())
        sizes.push_back(std::stoi(piece));

    std::printf("%-18s %6s %12s %12s %9s %s\n", "kernel", "N", "serial_ms", "parallel_ms",
                "speedup", "bitwise");
    for (int n : sizes) {
        const StochasticMatrix chain = random_dense_chain(n, seed);

        std::optional<EliminationTrace> serial_trace, parallel_trace;
        const double ts = best_of(
            reps, [&] { serial_trace = gth_forward(chain, {Backend::Serial, false}); });
        const double tp = best_of(
            reps, [&] { parallel_trace = gth_forward(chain, {Backend::Parallel, false}); });
        const bool same =
            max_abs_diff(serial_trace->workspace(), parallel_trace->workspace()) == 0.0;
        std::printf("%-18s %6d %12.3f %12.3f %8.2fx %s\n", "elimination", n, ts, tp,
                    ts / tp, same ? "yes" : "NO");

        const DenseMatrix& a = chain.dense();
        DenseMatrix cs(n, n), cp(n, n);
        const double ms = best_of(reps, [&] { cs = matmul(a, a, Backend::Serial); });
        const double mp = best_of(reps, [&] { cp = matmul(a, a, Backend::Parallel); });
        std::printf("%-18s %6d %12.3f %12.3f %8.2fx %s\n", "matmul", n, ms, mp, ms / mp,
                    max_abs_diff(cs, cp) == 0.0 ? "yes" : "NO");

        std::vector<double> x(static_cast<std::size_t>(n), 1.0 / n), ys, yp;
        const double vs = best_of(reps, [&] { vecmat(x, a, ys, Backend::Serial); });
        const double vp = best_of(reps, [&] { vecmat(x, a, yp, Backend::Parallel); });
        bool vsame = ys.size() == yp.size();
        for (std::size_t k = 0; vsame && k < ys.size(); ++k) vsame = ys[k] == yp[k];
        std::printf("%-18s %6d %12.3f %12.3f %8.2fx %s\n", "vecmat", n, vs, vp, vs / vp,
                    vsame ? "yes" : "NO");
    }
    return 0;
}
