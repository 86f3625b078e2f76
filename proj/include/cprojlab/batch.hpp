#pragma once
#include "cprojlab/chart.hpp"

#include <functional>
#include <vector>

namespace cpl {

// Worker count for the parallel kernels: an explicit set_batch_jobs value
// if present, otherwise the OpenMP default, both capped by the
// CPROJ_LAB_JOBS environment variable when it is set to a positive number.
int batch_jobs();
void set_batch_jobs(int jobs); // 0 restores the default

// run body(i) for i in [0, n). The parallel kernel writes must go to
// per-index slots so that scheduling cannot change the result; the first
// exception thrown by any iteration is rethrown after the join. serial_for
// is the reference implementation used to pin down parallel results.
void parallel_for(int n, const std::function<void(int)>& body);
void serial_for(int n, const std::function<void(int)>& body);

// pointwise map over sample points, bitwise equal between the two versions
std::vector<double> map_points(const std::vector<point>& pts,
                               const std::function<double(const point&)>& f);
std::vector<double> map_points_serial(const std::vector<point>& pts,
                                      const std::function<double(const point&)>& f);

// worst value of f over pts
double max_over_points(const std::vector<point>& pts,
                       const std::function<double(const point&)>& f);

// transport one frame along many independent polylines; out[i] is the
// frame carried along paths[i]
std::vector<std::vector<double>> transport_batch(const tensor_field& g,
                                                 const std::vector<polyline>& paths,
                                                 const std::vector<double>& frame, int ncols,
                                                 int steps_per_unit = 1000);
std::vector<std::vector<double>> transport_batch_serial(const tensor_field& g,
                                                        const std::vector<polyline>& paths,
                                                        const std::vector<double>& frame, int ncols,
                                                        int steps_per_unit = 1000);

} // namespace cpl
