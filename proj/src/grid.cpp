#include "replearn/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace replearn {

double Grid::lambda_of(int k) const {
    return 1.0 / (1.0 + std::exp(-nodes[static_cast<std::size_t>(k)]));
}

int Grid::nearest_interior_node(double ell) const {
    const int k = static_cast<int>(std::lround((ell - ell_under) / h));
    return std::clamp(k, 1, 2 * m - 1);
}

Grid build_grid(const Statics& statics, int m) {
    if (m < 1) throw std::invalid_argument("grid: m must be >= 1");
    Grid g;
    g.m = m;
    g.h = statics.log_z / m;
    g.ell_under = statics.ell_under;
    g.ell_over = statics.ell_over;
    g.nodes.resize(static_cast<std::size_t>(2 * m + 1));
    for (int k = 0; k <= 2 * m; ++k)
        g.nodes[static_cast<std::size_t>(k)] = statics.ell_under + k * g.h;
    // Pin the endpoints so the boundaries are exact regardless of rounding.
    g.nodes.front() = statics.ell_under;
    g.nodes.back() = statics.ell_over;
    return g;
}

}  // namespace replearn
