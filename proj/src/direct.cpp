#include "modal/direct.hpp"

#include "modal/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace modal {

bool DirectEstimate::has_flag(const std::string& f) const
{
    return std::find(flags.begin(), flags.end(), f) != flags.end();
}

namespace {

// Shortest index window of `size` points inside sorted[lo, hi]; returns its
// first index.
std::size_t shortest_window(const std::vector<double>& sorted, std::size_t lo, std::size_t hi, std::size_t size,
                            TieBreak tie)
{
    std::size_t best = lo;
    double best_span = std::numeric_limits<double>::infinity();
    for (std::size_t i = lo; i + size - 1 <= hi; ++i) {
        const double span = sorted[i + size - 1] - sorted[i];
        if (span < best_span || (tie == TieBreak::rightmost && span == best_span)) {
            best_span = span;
            best = i;
        }
    }
    return best;
}

} // namespace

DirectEstimate chernoff_mode(const Sample& s, double half_width)
{
    if (!(half_width > 0.0))
        throw InvalidArgument("chernoff half-width a must be positive");
    const auto x = order_statistics(s);
    const std::size_t n = x.size();
    const double length = 2.0 * half_width;

    // Maximal count of a length-2a window; some maximal window starts at a datum.
    std::size_t m = 1;
    for (std::size_t i = 0, j = 0; i < n; ++i) {
        j = std::max(j, i);
        while (j + 1 < n && x[j + 1] - x[i] <= length)
            ++j;
        m = std::max(m, j - i + 1);
    }
    std::size_t best = 0;
    double best_span = std::numeric_limits<double>::infinity();
    std::size_t candidates = 0;
    for (std::size_t i = 0; i + m - 1 < n; ++i) {
        const double span = x[i + m - 1] - x[i];
        if (span > length)
            continue;
        ++candidates;
        if (span < best_span) {
            best_span = span;
            best = i;
        }
    }
    DirectEstimate e;
    e.method = "chernoff";
    e.window = {x[best], x[best + m - 1]};
    e.location = e.window.midpoint();
    e.diagnostics["count"] = static_cast<double>(m);
    e.diagnostics["span"] = e.window.span();
    e.diagnostics["half_width"] = half_width;
    e.diagnostics["candidate_windows"] = static_cast<double>(candidates);
    return e;
}

DirectEstimate dalenius_venter_mode(const Sample& s, std::size_t k, TieBreak tie)
{
    const auto x = order_statistics(s);
    const std::size_t n = x.size();
    if (k < 2 || k > n)
        throw InvalidArgument("dalenius-venter k must satisfy 2 <= k <= n");
    const std::size_t i = shortest_window(x, 0, n - 1, k, tie);
    DirectEstimate e;
    e.method = "dalenius-venter";
    e.window = {x[i], x[i + k - 1]};
    e.location = e.window.midpoint();
    e.diagnostics["count"] = static_cast<double>(k);
    e.diagnostics["span"] = e.window.span();
    return e;
}

std::vector<Interval> robertson_cryer_windows(const Sample& s, double proportion, TieBreak tie)
{
    if (!(proportion > 0.0 && proportion < 1.0))
        throw InvalidArgument("robertson-cryer proportion p must lie in (0, 1)");
    const auto x = order_statistics(s);
    std::size_t lo = 0;
    std::size_t hi = x.size() - 1;
    std::vector<Interval> windows{{x[lo], x[hi]}};
    while (hi - lo + 1 > 2) {
        const std::size_t m = hi - lo + 1;
        auto size = static_cast<std::size_t>(std::ceil(static_cast<double>(m) * proportion));
        size = std::clamp<std::size_t>(size, 1, m - 1);
        const std::size_t i = shortest_window(x, lo, hi, size, tie);
        lo = i;
        hi = i + size - 1;
        windows.push_back({x[lo], x[hi]});
    }
    return windows;
}

DirectEstimate robertson_cryer_mode(const Sample& s, double proportion, TieBreak tie)
{
    const auto windows = robertson_cryer_windows(s, proportion, tie);
    DirectEstimate e;
    e.method = proportion == 0.5 ? "half-sample" : "robertson-cryer";
    e.window = windows.back();
    e.location = e.window.midpoint();
    e.diagnostics["iterations"] = static_cast<double>(windows.size() - 1);
    e.diagnostics["span"] = e.window.span();
    e.diagnostics["proportion"] = proportion;
    return e;
}

DirectEstimate grenander_mode(const Sample& s, std::size_t k, double power)
{
    const auto x = order_statistics(s);
    const std::size_t n = x.size();
    if (k < 1 || k >= n)
        throw InvalidArgument("grenander spacing order k must satisfy 1 <= k < n");
    if (!(power > 0.0))
        throw InvalidArgument("grenander power p must be positive");

    DirectEstimate e;
    e.method = "grenander";
    e.window = {x.front(), x.back()};
    e.diagnostics["k"] = static_cast<double>(k);
    e.diagnostics["p"] = power;
    if (!(power > 1.0 && power < static_cast<double>(k)))
        e.flags.emplace_back("power-outside-(1,k)");

    double min_spacing = std::numeric_limits<double>::infinity();
    double max_spacing = 0.0;
    std::size_t zero_spacings = 0;
    for (std::size_t i = 0; i + k < n; ++i) {
        const double dik = x[i + k] - x[i];
        if (dik == 0.0) {
            ++zero_spacings;
            continue;
        }
        min_spacing = std::min(min_spacing, dik);
        max_spacing = std::max(max_spacing, dik);
    }
    e.diagnostics["spacings"] = static_cast<double>(n - k);
    e.diagnostics["zero_spacings"] = static_cast<double>(zero_spacings);
    if (zero_spacings == n - k) {
        // Every spacing vanishes: all k-windows are single values.
        e.location = x[0];
        e.window = {x[0], x[0]};
        e.flags.emplace_back("degenerate");
        return e;
    }
    if (zero_spacings > 0)
        e.flags.emplace_back("ties-dropped");

    // Weights are taken relative to the smallest spacing so D^{-p} cannot
    // overflow; the common factor cancels in B / A.
    double sum_w = 0.0;
    double sum_wm = 0.0;
    for (std::size_t i = 0; i + k < n; ++i) {
        const double dik = x[i + k] - x[i];
        if (dik == 0.0)
            continue;
        const double w = std::pow(dik / min_spacing, -power);
        sum_w += w;
        sum_wm += w * 0.5 * (x[i + k] + x[i]);
    }
    const double log_scale = -(power + 1.0) * std::log(static_cast<double>(n)) - power * std::log(min_spacing);
    const double factor = std::exp(log_scale);
    e.location = sum_wm / sum_w;
    e.diagnostics["A"] = factor * sum_w;
    e.diagnostics["B"] = factor * sum_wm;
    e.diagnostics["min_spacing"] = min_spacing;
    e.diagnostics["max_spacing"] = max_spacing;
    return e;
}

nlohmann::json to_json(const DirectEstimate& e)
{
    nlohmann::json j;
    j["method"] = e.method;
    j["location"] = e.location;
    j["window"] = {e.window.lo, e.window.hi};
    j["diagnostics"] = e.diagnostics;
    j["flags"] = e.flags;
    return j;
}

} // namespace modal
