// Times the threaded kernels against their serial reference paths.
// Not a test: run it by hand to size delta/budget choices for a machine.

#include <cstdio>

#include <omp.h>

#include "surflink/eigenmodes.hpp"
#include "surflink/linkbudget.hpp"

using namespace surflink;

namespace {

double time_assembly(const LinkGeometry& link, double delta, bool parallel) {
    const double t0 = omp_get_wtime();
    const KernelMatrix kernel = assemble_kernel(link, delta, KernelMode::x_to_vector, parallel);
    const double t1 = omp_get_wtime();
    std::printf("  assemble %5zu x %4zu  %s  %7.3f s\n",
                static_cast<std::size_t>(kernel.matrix.rows()),
                static_cast<std::size_t>(kernel.matrix.cols()),
                parallel ? "threads" : "serial ", t1 - t0);
    return t1 - t0;
}

double time_coupling(const LinkGeometry& link, bool parallel) {
    QuadratureSpec spec;
    spec.parallel = parallel;
    const double t0 = omp_get_wtime();
    const double value = coupling_intensity(link, spec);
    const double t1 = omp_get_wtime();
    std::printf("  coupling integral %s  %7.3f s  (value %.6g)\n",
                parallel ? "threads" : "serial ", t1 - t0, value);
    return t1 - t0;
}

}  // namespace

int main() {
    std::printf("surflink bench, %d thread(s) available\n", omp_get_max_threads());

    const Medium medium = Medium::free_space(1.0);
    const LinkGeometry link = make_parallel_link(2.0, {2.0, 2.0}, {8.0, 8.0}, {0, 0}, medium);

    std::printf("kernel assembly (pitch lambda/8):\n");
    const double a_serial = time_assembly(link, 0.125, false);
    const double a_threads = time_assembly(link, 0.125, true);
    std::printf("  speedup %.2fx\n", a_serial / a_threads);

    std::printf("adaptive double-surface quadrature:\n");
    const double q_serial = time_coupling(link, false);
    const double q_threads = time_coupling(link, true);
    std::printf("  speedup %.2fx\n", q_serial / q_threads);
    return 0;
}
