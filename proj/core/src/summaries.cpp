#include "patnet/summaries.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "patnet/csv.hpp"

namespace patnet {

namespace {

// Rank-based quantile bin per observation: sort indices by (value, index),
// then bin i covers positions [i*n/q, (i+1)*n/q).
std::vector<int> quantile_bins(std::span<const double> x, int q) {
    const std::size_t n = x.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return x[a] != x[b] ? x[a] < x[b] : a < b;
    });
    std::vector<int> bin(n);
    for (int b = 0; b < q; ++b) {
        const std::size_t begin = n * static_cast<std::size_t>(b) / q;
        const std::size_t end = n * (static_cast<std::size_t>(b) + 1) / q;
        for (std::size_t p = begin; p < end; ++p) bin[idx[p]] = b;
    }
    return bin;
}

}  // namespace

std::vector<BinnedPoint> binned_scatter(std::span<const double> x, std::span<const double> y,
                                        int n_bins) {
    if (x.size() != y.size()) throw std::invalid_argument("binned_scatter: size mismatch");
    if (n_bins < 1) throw std::invalid_argument("binned_scatter: n_bins must be >= 1");
    if (x.size() < static_cast<std::size_t>(n_bins))
        throw std::invalid_argument("binned_scatter: fewer observations than bins");

    const auto bin = quantile_bins(x, n_bins);
    std::vector<BinnedPoint> out(static_cast<std::size_t>(n_bins));
    for (int b = 0; b < n_bins; ++b) out[static_cast<std::size_t>(b)].bin = b;
    for (std::size_t i = 0; i < x.size(); ++i) {
        auto& p = out[static_cast<std::size_t>(bin[i])];
        p.x_mean += x[i];
        p.y_mean += y[i];
        ++p.count;
    }
    for (auto& p : out) {
        p.x_mean /= static_cast<double>(p.count);
        p.y_mean /= static_cast<double>(p.count);
    }
    return out;
}

QuantileGrid quantile_grid(std::span<const double> x1, std::span<const double> x2,
                           std::span<const double> y, int q) {
    if (x1.size() != x2.size() || x1.size() != y.size())
        throw std::invalid_argument("quantile_grid: size mismatch");
    if (q < 1) throw std::invalid_argument("quantile_grid: q must be >= 1");
    if (x1.size() < static_cast<std::size_t>(q) * static_cast<std::size_t>(q))
        throw std::invalid_argument("quantile_grid: fewer observations than q*q");

    const auto b1 = quantile_bins(x1, q);
    const auto b2 = quantile_bins(x2, q);

    QuantileGrid grid;
    grid.q = q;
    const std::size_t cells = static_cast<std::size_t>(q) * static_cast<std::size_t>(q);
    grid.count.assign(cells, 0);
    std::vector<double> sums(cells, 0.0);
    for (std::size_t i = 0; i < y.size(); ++i) {
        const std::size_t c =
            static_cast<std::size_t>(b1[i]) * static_cast<std::size_t>(q) +
            static_cast<std::size_t>(b2[i]);
        sums[c] += y[i];
        ++grid.count[c];
    }
    grid.y_mean.resize(cells);
    for (std::size_t c = 0; c < cells; ++c)
        grid.y_mean[c] = grid.count[c] > 0
                             ? std::optional<double>(sums[c] / static_cast<double>(grid.count[c]))
                             : std::nullopt;
    return grid;
}

double grid_correlation(const QuantileGrid& a, const QuantileGrid& b) {
    if (a.q != b.q) throw std::invalid_argument("grid_correlation: shape mismatch");
    std::vector<double> va, vb;
    for (std::size_t c = 0; c < a.y_mean.size(); ++c) {
        if (a.y_mean[c] && b.y_mean[c]) {
            va.push_back(*a.y_mean[c]);
            vb.push_back(*b.y_mean[c]);
        }
    }
    if (va.size() < 2) throw std::invalid_argument("grid_correlation: fewer than 2 shared cells");
    const double n = static_cast<double>(va.size());
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < va.size(); ++i) {
        ma += va[i];
        mb += vb[i];
    }
    ma /= n;
    mb /= n;
    double saa = 0.0, sbb = 0.0, sab = 0.0;
    for (std::size_t i = 0; i < va.size(); ++i) {
        saa += (va[i] - ma) * (va[i] - ma);
        sbb += (vb[i] - mb) * (vb[i] - mb);
        sab += (va[i] - ma) * (vb[i] - mb);
    }
    if (saa == 0.0 || sbb == 0.0)
        throw std::invalid_argument("grid_correlation: zero variance cells");
    return sab / std::sqrt(saa * sbb);
}

void write_binned_scatter(std::ostream& out, std::span<const BinnedPoint> points) {
    out << "bin,x_mean,y_mean,count\n";
    for (const auto& p : points)
        out << p.bin << ',' << format_double(p.x_mean) << ',' << format_double(p.y_mean) << ','
            << p.count << '\n';
}

void write_quantile_grid(std::ostream& out, const QuantileGrid& grid) {
    out << "x1_bin,x2_bin,y_mean,count\n";
    for (int i = 0; i < grid.q; ++i)
        for (int j = 0; j < grid.q; ++j) {
            out << i << ',' << j << ',';
            if (auto v = grid.cell(i, j)) out << format_double(*v);
            out << ',' << grid.cell_count(i, j) << '\n';
        }
}

}  // namespace patnet
