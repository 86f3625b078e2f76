#include "cprojlab/batch.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cpl {

namespace {

int g_jobs_override = 0;

int env_cap() {
    static int cap = [] {
        const char* s = std::getenv("CPROJ_LAB_JOBS");
        if (!s) return 0;
        int v = std::atoi(s);
        return v > 0 ? v : 0;
    }();
    return cap;
}

} // namespace

int batch_jobs() {
#ifdef _OPENMP
    int j = g_jobs_override > 0 ? g_jobs_override : omp_get_max_threads();
#else
    int j = 1;
#endif
    int cap = env_cap();
    if (cap > 0 && cap < j) j = cap;
    return std::max(1, j);
}

void set_batch_jobs(int jobs) { g_jobs_override = jobs > 0 ? jobs : 0; }

void serial_for(int n, const std::function<void(int)>& body) {
    for (int i = 0; i < n; i++) body(i);
}

void parallel_for(int n, const std::function<void(int)>& body) {
    if (n <= 0) return;
    int jobs = batch_jobs();
    if (jobs <= 1 || n == 1) {
        serial_for(n, body);
        return;
    }
    std::exception_ptr first;
    std::atomic<bool> failed{false};
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
#endif
    for (int i = 0; i < n; i++) {
        if (failed.load(std::memory_order_relaxed)) continue;
        try {
            body(i);
        } catch (...) {
            bool expect = false;
            if (failed.compare_exchange_strong(expect, true)) first = std::current_exception();
        }
    }
    if (first) std::rethrow_exception(first);
}

std::vector<double> map_points(const std::vector<point>& pts,
                               const std::function<double(const point&)>& f) {
    std::vector<double> out(pts.size());
    parallel_for((int)pts.size(), [&](int i) { out[i] = f(pts[i]); });
    return out;
}

std::vector<double> map_points_serial(const std::vector<point>& pts,
                                      const std::function<double(const point&)>& f) {
    std::vector<double> out(pts.size());
    serial_for((int)pts.size(), [&](int i) { out[i] = f(pts[i]); });
    return out;
}

double max_over_points(const std::vector<point>& pts,
                       const std::function<double(const point&)>& f) {
    double worst = 0.0;
    for (double v : map_points(pts, f)) worst = std::max(worst, v);
    return worst;
}

std::vector<std::vector<double>> transport_batch(const tensor_field& g,
                                                 const std::vector<polyline>& paths,
                                                 const std::vector<double>& frame, int ncols,
                                                 int steps_per_unit) {
    std::vector<std::vector<double>> out(paths.size());
    parallel_for((int)paths.size(), [&](int i) {
        out[i] = frame;
        transport_frame(g, paths[i], out[i], ncols, steps_per_unit);
    });
    return out;
}

std::vector<std::vector<double>> transport_batch_serial(const tensor_field& g,
                                                        const std::vector<polyline>& paths,
                                                        const std::vector<double>& frame, int ncols,
                                                        int steps_per_unit) {
    std::vector<std::vector<double>> out(paths.size());
    serial_for((int)paths.size(), [&](int i) {
        out[i] = frame;
        transport_frame(g, paths[i], out[i], ncols, steps_per_unit);
    });
    return out;
}

} // namespace cpl
