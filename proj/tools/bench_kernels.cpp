// Benchmark of the OpenMP kernels against the serial reference
// implementations, plus the N-scaling of the O(N^2) solve/projection paths.

#include "zeitlin/basis.hpp"
#include "zeitlin/kernels.hpp"

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>

using namespace zeitlin;

namespace {

CMatrix random_skew(int n, unsigned seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    CMatrix w(n);
    for (int r = 0; r < n; ++r) {
        w(r, r) = cplx(0.0, dist(gen));
        for (int c = r + 1; c < n; ++c) {
            const cplx z(dist(gen), dist(gen));
            w(r, c) = z;
            w(c, r) = -std::conj(z);
        }
    }
    cplx shift = w.trace() / static_cast<double>(n);
    for (int j = 0; j < n; ++j) w(j, j) -= shift;
    return w;
}

double time_best_of(int reps, const std::function<void()>& fn) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
    }
    return best;
}

} // namespace

int main() {
    std::printf("threads: %d\n\n", omp_get_max_threads());
    std::printf("%-22s %6s %12s %12s %8s\n", "kernel", "N", "serial [s]",
                "openmp [s]", "speedup");

    for (const int n : {64, 128, 256}) {
        const CMatrix a = random_skew(n, 1);
        const CMatrix b = random_skew(n, 2);
        CMatrix out;
        const int reps = n <= 128 ? 20 : 8;

        const double ts = time_best_of(reps, [&] { ref::commutator_skew(a, b, out); });
        const double tp = time_best_of(reps, [&] { kernels::commutator_skew(a, b, out); });
        std::printf("%-22s %6d %12.6f %12.6f %7.2fx\n", "commutator_skew", n, ts,
                    tp, ts / tp);
    }

    std::printf("\n");
    for (const int n : {64, 128, 256}) {
        const BasisCache basis(n);
        const CMatrix w = random_skew(n, 3);
        CMatrix out;
        CoeffField c;
        const int reps = 40;

        const double ts_an =
            time_best_of(reps, [&] { ref::analyze_into(basis, w, n - 1, c); });
        const double tp_an =
            time_best_of(reps, [&] { analyze_into(basis, w, n - 1, c); });
        std::printf("%-22s %6d %12.6f %12.6f %7.2fx\n", "analyze (full)", n, ts_an,
                    tp_an, ts_an / tp_an);

        const double ts_sy =
            time_best_of(reps, [&] { ref::synthesize_into(basis, c, out); });
        const double tp_sy =
            time_best_of(reps, [&] { synthesize_into(basis, c, out); });
        std::printf("%-22s %6d %12.6f %12.6f %7.2fx\n", "synthesize (full)", n,
                    ts_sy, tp_sy, ts_sy / tp_sy);

        const double ts_po =
            time_best_of(reps, [&] { ref::solve_poisson_into(basis, w, out); });
        const double tp_po =
            time_best_of(reps, [&] { solve_poisson_into(basis, w, out); });
        std::printf("%-22s %6d %12.6f %12.6f %7.2fx\n", "solve_poisson", n, ts_po,
                    tp_po, ts_po / tp_po);

        const double ts_la =
            time_best_of(reps, [&] { ref::laplacian_apply_into(basis, w, out); });
        const double tp_la =
            time_best_of(reps, [&] { laplacian_apply_into(basis, w, out); });
        std::printf("%-22s %6d %12.6f %12.6f %7.2fx\n", "laplacian_apply", n, ts_la,
                    tp_la, ts_la / tp_la);
    }

    // O(N^2) scaling of the solve and the projection at l_bar ~ sqrt(N)
    std::printf("\nscaling (doubling N, expected ratio ~4):\n");
    double prev_solve = 0.0, prev_proj = 0.0;
    for (const int n : {64, 128, 256}) {
        const BasisCache basis(n);
        const CMatrix w = random_skew(n, 4);
        CMatrix out;
        const int l_bar = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
        const int reps = 200;
        const double t_solve =
            time_best_of(reps, [&] { solve_poisson_into(basis, w, out); });
        const double t_proj =
            time_best_of(reps, [&] { project_large_into(basis, w, l_bar, out); });
        std::printf("  N=%3d  solve %10.3e s (x%.2f)   project(l_bar=%2d) %10.3e s (x%.2f)\n",
                    n, t_solve, prev_solve > 0.0 ? t_solve / prev_solve : 0.0,
                    l_bar, t_proj, prev_proj > 0.0 ? t_proj / prev_proj : 0.0);
        prev_solve = t_solve;
        prev_proj = t_proj;
    }
    return 0;
}
