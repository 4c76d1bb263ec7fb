#include "bclab/minima.hpp"

#include <cmath>
#include <cstdint>

#include <boost/math/tools/roots.hpp>

#include "bclab/errors.hpp"

namespace bclab {

namespace {

double refine_root(const ModelParams& params, double lo, double hi) {
    auto dg = [&](double x) { return free_energy_deriv(params, x, 1); };
    double flo = dg(lo);
    double fhi = dg(hi);
    if (flo >= 0.0) return lo;
    if (fhi <= 0.0) return hi;
    std::uintmax_t iters = 200;
    const auto [a, b] = boost::math::tools::toms748_solve(
        dg, lo, hi, flo, fhi, boost::math::tools::eps_tolerance<double>(52), iters);
    // toms748 returns a bracket; the endpoint with the smaller |G'| is the better root
    return std::fabs(dg(a)) <= std::fabs(dg(b)) ? a : b;
}

} // namespace

std::vector<LocalMinimum> local_minima(const ModelParams& params, double lo, double hi,
                                       int grid_points) {
    if (!(lo >= 0.0) || !(hi > lo))
        throw UsageError("local_minima: need 0 <= lo < hi");
    if (grid_points < 3) throw UsageError("local_minima: grid_points must be >= 3");

    const int last = grid_points - 1;
    const double step = (hi - lo) / last;
    std::vector<double> xs(grid_points);
    std::vector<double> dg(grid_points);
    for (int i = 0; i <= last; ++i) {
        xs[i] = i == last ? hi : lo + step * i;
        dg[i] = free_energy_deriv(params, xs[i], 1);
    }

    // At x = 0, G' vanishes identically; the curvature decides which side it behaves like.
    double left_start = xs[0];
    if (dg[0] == 0.0) {
        const double curv = free_energy_deriv(params, xs[0], 2);
        dg[0] = curv;
        if (curv < 0.0) {
            // find a strictly positive point with G' < 0 for the bracket
            double probe = step;
            for (int k = 0; k < 200 && free_energy_deriv(params, probe, 1) >= 0.0; ++k) probe *= 0.5;
            left_start = probe;
        }
    }

    std::vector<LocalMinimum> out;
    if (dg[0] > 0.0) out.push_back({xs[0], free_energy(params, xs[0])});
    for (int i = 0; i < last; ++i) {
        if (dg[i] < 0.0 && dg[i + 1] >= 0.0) {
            const double a = i == 0 ? left_start : xs[i];
            const double root = refine_root(params, a, xs[i + 1]);
            out.push_back({root, free_energy(params, root)});
        }
    }
    if (dg[last] < 0.0) out.push_back({xs[last], free_energy(params, xs[last])});
    return out;
}

} // namespace bclab
