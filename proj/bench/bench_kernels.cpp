// Timing comparison of the parallel kernels against their serial
// references. Workloads mirror the two hot paths: frame transport along
// independent polylines (holonomy loop sampling) and pointwise curvature
// residuals (verification suites).
#include "cprojlab/batch.hpp"
#include "cprojlab/catalog.hpp"
#include "cprojlab/chart.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>

using namespace cpl;

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

void report(const char* name, double serial_ms, double parallel_ms) {
    std::printf("%-22s serial %8.1f ms   parallel %8.1f ms   speedup %.2fx\n", name, serial_ms,
                parallel_ms, serial_ms / parallel_ms);
}

} // namespace

int main() {
    std::printf("jobs: %d\n", batch_jobs());

    {
        example fs = make_fubini_study(2);
        int m = fs.K.g.dim;
        std::vector<point> pts = halton_points(fs.domain.shrunk(0.8), 64);
        std::vector<polyline> paths;
        for (int i = 0; i < 32; i++) {
            polyline pl;
            pl.verts = {pts[2 * i], pts[2 * i + 1], pts[(2 * i + 5) % 64]};
            paths.push_back(pl);
        }
        std::vector<double> frame(m * m, 0.0);
        for (int i = 0; i < m; i++) frame[i * m + i] = 1.0;

        auto t0 = std::chrono::steady_clock::now();
        auto ser = transport_batch_serial(fs.K.g, paths, frame, m, 800);
        double serial_ms = ms_since(t0);
        t0 = std::chrono::steady_clock::now();
        auto par = transport_batch(fs.K.g, paths, frame, m, 800);
        double parallel_ms = ms_since(t0);
        double diff = 0.0;
        for (size_t i = 0; i < ser.size(); i++)
            for (size_t k = 0; k < ser[i].size(); k++)
                diff = std::max(diff, std::abs(ser[i][k] - par[i][k]));
        report("frame transport", serial_ms, parallel_ms);
        std::printf("%-22s max deviation %g\n", "", diff);
    }

    {
        example fs = make_fubini_study(3);
        int m = fs.K.g.dim;
        std::vector<point> pts = halton_points(fs.domain, 256);
        auto f = [&](const point& p) {
            std::vector<double> R = riemann_vals(fs.K.g.at(p, 2), m);
            double s = 0.0;
            for (double x : R) s += x * x;
            return std::sqrt(s);
        };
        auto t0 = std::chrono::steady_clock::now();
        auto ser = map_points_serial(pts, f);
        double serial_ms = ms_since(t0);
        t0 = std::chrono::steady_clock::now();
        auto par = map_points(pts, f);
        double parallel_ms = ms_since(t0);
        double diff = 0.0;
        for (size_t i = 0; i < ser.size(); i++) diff = std::max(diff, std::abs(ser[i] - par[i]));
        report("curvature residuals", serial_ms, parallel_ms);
        std::printf("%-22s max deviation %g\n", "", diff);
    }

    return 0;
}
