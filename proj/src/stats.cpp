#include "scelab/stats.hpp"

#include "scelab/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace scelab {

Summary summarize(std::span<const double> values)
{
    Summary s;
    s.n = values.size();
    if (s.n == 0) return s;
    double total = 0.0;
    for (double v : values) total += v;
    s.mean = total / static_cast<double>(s.n);
    if (s.n > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.sd = std::sqrt(ss / static_cast<double>(s.n - 1));
        s.stderr_mean = s.sd / std::sqrt(static_cast<double>(s.n));
    }
    return s;
}

double pearson(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size()) throw DomainError("pearson: vectors differ in length");
    if (x.size() < 2) throw DomainError("pearson: need at least two observations");
    auto constant = [](std::span<const double> v) {
        return std::all_of(v.begin(), v.end(), [&](double e) { return e == v.front(); });
    };
    if (constant(x) || constant(y)) throw UndefinedCorrelation("pearson: constant vector");
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw UndefinedCorrelation("pearson: constant vector");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> average_ranks(std::span<const double> x)
{
    const std::size_t n = x.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> ranks(n);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && x[order[j]] == x[order[i]]) ++j;
        const double r = 0.5 * static_cast<double>(i + j - 1) + 1.0;
        for (std::size_t k = i; k < j; ++k) ranks[order[k]] = r;
        i = j;
    }
    return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y)
{
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    return pearson(rx, ry);
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size() || x.size() < 2) throw DomainError("linear_fit: need matching vectors of length >= 2");
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw DomainError("linear_fit: constant regressor");
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    if (x.size() > 2) {
        double rss = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double r = y[i] - fit.intercept - fit.slope * x[i];
            rss += r * r;
        }
        fit.slope_stderr = std::sqrt(rss / (n - 2.0) / sxx);
    }
    return fit;
}

std::vector<double> isotonic_fit(std::span<const double> y)
{
    struct Block {
        double sum;
        std::size_t count;
    };
    std::vector<Block> blocks;
    for (double v : y) {
        blocks.push_back({v, 1});
        while (blocks.size() > 1) {
            const auto& last = blocks.back();
            const auto& prev = blocks[blocks.size() - 2];
            if (prev.sum / static_cast<double>(prev.count) <= last.sum / static_cast<double>(last.count)) break;
            Block merged{prev.sum + last.sum, prev.count + last.count};
            blocks.pop_back();
            blocks.back() = merged;
        }
    }
    std::vector<double> out;
    out.reserve(y.size());
    for (const auto& b : blocks) out.insert(out.end(), b.count, b.sum / static_cast<double>(b.count));
    return out;
}

std::size_t count_inversions(std::span<const double> y)
{
    std::size_t n = 0;
    for (std::size_t i = 0; i + 1 < y.size(); ++i) n += y[i + 1] < y[i];
    return n;
}

}  // namespace scelab
