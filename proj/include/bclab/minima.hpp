#pragma once

#include <vector>

#include "bclab/model.hpp"

namespace bclab {

struct LocalMinimum {
    double x;
    double value; // G_{beta,K}(x)
};

// Local minimizers of G_{beta,K} restricted to [lo, hi], 0 <= lo < hi.
// A uniform grid on G' brackets every sign change from - to +; each bracket is
// refined to machine precision. Endpoints are reported when the restriction is
// minimal there. Result is sorted by x.
std::vector<LocalMinimum> local_minima(const ModelParams& params, double lo, double hi,
                                       int grid_points = 4001);

} // namespace bclab
