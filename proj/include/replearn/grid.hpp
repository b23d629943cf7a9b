#pragma once

#include <vector>

#include "replearn/model.hpp"

namespace replearn {

/// Log-odds grid over the experimentation region [ell_under, ell_over],
/// aligned so that one Bayes step of log z equals exactly m grid intervals.
/// The region spans exactly 2*log z, so there are 2m+1 nodes; nodes 0 and 2m
/// sit on the cascade boundaries and the interior indices are 1..2m-1.
struct Grid {
    int m = 1;
    double h = 0.0;
    double ell_under = 0.0;
    double ell_over = 0.0;
    std::vector<double> nodes;

    int size() const { return static_cast<int>(nodes.size()); }
    int first_interior() const { return 1; }
    int last_interior() const { return 2 * m - 1; }
    bool is_interior(int k) const { return k >= 1 && k <= 2 * m - 1; }

    double lambda_of(int k) const;

    /// Index of the interior node nearest to ell (clamped to 1..2m-1).
    int nearest_interior_node(double ell) const;
};

/// Builds the aligned grid with spacing h = log(z)/m.  Throws for m < 1.
Grid build_grid(const Statics& statics, int m);

}  // namespace replearn
