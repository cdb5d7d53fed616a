#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace patnet {

struct BinnedPoint {
    int bin = 0;
    double x_mean = 0.0;
    double y_mean = 0.0;
    std::size_t count = 0;
};

/// Quantile-binned scatter: rank-based x-quantile intervals with per-bin
/// counts differing by at most one, then per-bin means of x and y. Ties in x
/// are broken by original index, so the output is deterministic. Throws when
/// there are fewer observations than bins.
std::vector<BinnedPoint> binned_scatter(std::span<const double> x, std::span<const double> y,
                                        int n_bins = 85);

struct QuantileGrid {
    int q = 0;
    // row-major [x1 bin][x2 bin]; empty cells are nullopt
    std::vector<std::optional<double>> y_mean;
    std::vector<std::size_t> count;

    std::optional<double> cell(int i, int j) const { return y_mean[i * q + j]; }
    std::size_t cell_count(int i, int j) const { return count[i * q + j]; }
};

/// q x q table of y means over marginal rank-quantile cuts of x1 and x2.
/// Throws when n < q*q.
QuantileGrid quantile_grid(std::span<const double> x1, std::span<const double> x2,
                           std::span<const double> y, int q = 10);

/// Pearson correlation between the vectorized non-empty cells two grids share.
double grid_correlation(const QuantileGrid& a, const QuantileGrid& b);

void write_binned_scatter(std::ostream& out, std::span<const BinnedPoint> points);
void write_quantile_grid(std::ostream& out, const QuantileGrid& grid);

}  // namespace patnet
