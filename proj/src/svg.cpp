#include "modal/svg.hpp"

#include "modal/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace modal::svg {

namespace {

constexpr double width = 800.0;
constexpr double height = 600.0;
constexpr double left = 80.0;
constexpr double right = 30.0;
constexpr double top = 40.0;
constexpr double bottom = 60.0;

constexpr const char* blue = "#1f4e9c";
constexpr const char* red = "#c0392b";
constexpr const char* purple = "#8e44ad";
constexpr const char* gray = "#9e9e9e";
constexpr std::array<const char*, 8> series = {"#1f4e9c", "#c0392b", "#27ae60", "#e67e22",
                                               "#8e44ad", "#16a085", "#7f8c8d", "#d35400"};

struct Range {
    double lo = 0.0;
    double hi = 1.0;

    static Range of(double lo, double hi)
    {
        if (!(hi > lo)) {
            const double pad = std::max(1.0, std::abs(lo)) * 0.5;
            return {lo - pad, hi + pad};
        }
        const double pad = 0.04 * (hi - lo);
        return {lo - pad, hi + pad};
    }
};

class Canvas {
public:
    Canvas(std::string title, Range xr, Range yr) : xr_(xr), yr_(yr)
    {
        body_ += fmt::format("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\" "
                             "viewBox=\"0 0 {:.0f} {:.0f}\">\n",
                             width, height, width, height);
        body_ += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"#ffffff\"/>\n";
        body_ += fmt::format("<text x=\"{:.1f}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" "
                             "text-anchor=\"middle\">{}</text>\n",
                             width / 2.0, title);
    }

    double px(double x) const { return left + (x - xr_.lo) / (xr_.hi - xr_.lo) * (width - left - right); }
    double py(double y) const { return height - bottom - (y - yr_.lo) / (yr_.hi - yr_.lo) * (height - top - bottom); }

    void axes(const std::string& xlabel, const std::string& ylabel)
    {
        const double x0 = left;
        const double x1 = width - right;
        const double y0 = height - bottom;
        const double y1 = top;
        body_ += fmt::format("<path d=\"M{:.2f},{:.2f} L{:.2f},{:.2f} L{:.2f},{:.2f}\" fill=\"none\" "
                             "stroke=\"#000000\"/>\n",
                             x0, y1, x0, y0, x1, y0);
        for (int t = 0; t <= 4; ++t) {
            const double fx = xr_.lo + (xr_.hi - xr_.lo) * t / 4.0;
            const double fy = yr_.lo + (yr_.hi - yr_.lo) * t / 4.0;
            text(px(fx), y0 + 18.0, fmt::format("{:.3g}", fx), "middle");
            text(x0 - 8.0, py(fy) + 4.0, fmt::format("{:.3g}", fy), "end");
        }
        text((x0 + x1) / 2.0, height - 16.0, xlabel, "middle");
        body_ += fmt::format("<text x=\"18\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"12\" "
                             "text-anchor=\"middle\" transform=\"rotate(-90 18 {:.2f})\">{}</text>\n",
                             (y0 + y1) / 2.0, (y0 + y1) / 2.0, ylabel);
    }

    void text(double x, double y, const std::string& s, const char* anchor)
    {
        body_ += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"12\" "
                             "text-anchor=\"{}\">{}</text>\n",
                             x, y, anchor, s);
    }

    void rect(double x, double y, double w, double h, const char* fill)
    {
        body_ += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"{}\"/>\n", x,
                             y, w, h, fill);
    }

    void circle(double x, double y, double r, const char* fill)
    {
        body_ += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"{:.1f}\" fill=\"{}\"/>\n", px(x), py(y), r,
                             fill);
    }

    void line(double x0, double y0, double x1, double y1, const char* stroke, const char* dash = nullptr)
    {
        body_ += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"{}\"{}/>\n",
                             px(x0), py(y0), px(x1), py(y1), stroke,
                             dash ? fmt::format(" stroke-dasharray=\"{}\"", dash) : "");
    }

    void polyline(const std::vector<std::pair<double, double>>& pts, const char* stroke, const char* dash = nullptr)
    {
        if (pts.empty())
            return;
        std::string d;
        for (const auto& [x, y] : pts)
            d += fmt::format("{}{:.2f},{:.2f}", d.empty() ? "" : " ", px(x), py(y));
        body_ += fmt::format("<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"2\"{}/>\n", d,
                             stroke, dash ? fmt::format(" stroke-dasharray=\"{}\"", dash) : "");
    }

    std::string finish() { return body_ + "</svg>\n"; }

private:
    Range xr_;
    Range yr_;
    std::string body_;
};

const char* state_color(SlopeState s)
{
    switch (s) {
    case SlopeState::increasing:
        return blue;
    case SlopeState::decreasing:
        return red;
    case SlopeState::inconclusive:
        return purple;
    case SlopeState::sparse:
        return gray;
    }
    return gray;
}

} // namespace

std::string render(const SizerMap& map)
{
    const std::size_t nx = map.x_grid.size();
    const std::size_t nh = map.h_grid.size();
    if (nx == 0 || nh == 0)
        throw InvalidArgument("empty SiZer map");
    // Cells are laid out by index; the axes are labelled in x and log10 h.
    const Range xr{map.x_grid.front(), map.x_grid.back() > map.x_grid.front() ? map.x_grid.back()
                                                                              : map.x_grid.front() + 1.0};
    const double lh0 = std::log10(*std::min_element(map.h_grid.begin(), map.h_grid.end()));
    const double lh1 = std::log10(*std::max_element(map.h_grid.begin(), map.h_grid.end()));
    const Range yr{lh0, lh1 > lh0 ? lh1 : lh0 + 1.0};
    Canvas c("SiZer map", xr, yr);
    const double cw = (width - left - right) / static_cast<double>(nx);
    const double ch = (height - top - bottom) / static_cast<double>(nh);
    std::vector<std::size_t> h_order(nh);
    for (std::size_t j = 0; j < nh; ++j)
        h_order[j] = j;
    std::stable_sort(h_order.begin(), h_order.end(),
                     [&](std::size_t a, std::size_t b) { return map.h_grid[a] < map.h_grid[b]; });
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t row = 0; row < nh; ++row) {
            const std::size_t j = h_order[row];
            c.rect(left + cw * static_cast<double>(i), height - bottom - ch * static_cast<double>(row + 1), cw, ch,
                   state_color(map.state(i, j)));
        }
    }
    c.axes("x", "log10 h");
    return c.finish();
}

std::string render(const std::vector<PersistencePair>& diagram)
{
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& p : diagram) {
        lo = std::min(lo, p.death);
        hi = std::max(hi, p.birth);
    }
    if (diagram.empty()) {
        lo = 0.0;
        hi = 1.0;
    }
    const Range r = Range::of(lo, hi);
    Canvas c("Persistence diagram", r, r);
    c.axes("death", "birth");
    c.line(r.lo, r.lo, r.hi, r.hi, gray, "4,4");
    for (const auto& p : diagram)
        c.circle(p.death, p.birth, 4.0, blue);
    return c.finish();
}

std::string render(const ModeTree& tree)
{
    if (tree.bandwidths.empty())
        throw InvalidArgument("empty mode tree");
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& level : tree.modes) {
        for (double m : level) {
            lo = std::min(lo, m);
            hi = std::max(hi, m);
        }
    }
    if (!(hi >= lo)) {
        lo = 0.0;
        hi = 1.0;
    }
    const double lh0 = std::log10(tree.bandwidths.back());
    const double lh1 = std::log10(tree.bandwidths.front());
    Canvas c("Mode tree", Range::of(lo, hi), Range::of(lh0, lh1));
    c.axes("mode location", "log10 h");
    for (std::size_t j = 0; j < tree.modes.size(); ++j) {
        const double lh = std::log10(tree.bandwidths[j]);
        for (std::size_t k = 0; k < tree.modes[j].size(); ++k) {
            const int parent = tree.links[j][k];
            if (j > 0 && parent >= 0) {
                c.line(tree.modes[j - 1][static_cast<std::size_t>(parent)], std::log10(tree.bandwidths[j - 1]),
                       tree.modes[j][k], lh, blue);
            }
            c.circle(tree.modes[j][k], lh, 2.0, blue);
        }
    }
    return c.finish();
}

std::string render(const ModalCurveSet& curves, const Sample& joint)
{
    if (joint.dim() != 2)
        throw InvalidArgument("modal regression plots need a bivariate sample");
    double xlo = std::numeric_limits<double>::infinity();
    double xhi = -xlo;
    double ylo = xlo;
    double yhi = -xlo;
    for (std::size_t i = 0; i < joint.size(); ++i) {
        xlo = std::min(xlo, joint.at(i, 0));
        xhi = std::max(xhi, joint.at(i, 0));
        ylo = std::min(ylo, joint.at(i, 1));
        yhi = std::max(yhi, joint.at(i, 1));
    }
    Canvas c("Modal regression", Range::of(xlo, xhi), Range::of(ylo, yhi));
    c.axes("x", "y");
    const std::size_t stride = std::max<std::size_t>(1, joint.size() / 2000);
    for (std::size_t i = 0; i < joint.size(); i += stride)
        c.circle(joint.at(i, 0), joint.at(i, 1), 1.2, gray);
    std::vector<std::pair<double, double>> mean;
    for (std::size_t g = 0; g < curves.x_grid.size(); ++g) {
        if (curves.mean_curve[g])
            mean.emplace_back(curves.x_grid[g], *curves.mean_curve[g]);
    }
    c.polyline(mean, "#000000", "6,4");
    for (std::size_t b = 0; b < curves.branches.size(); ++b) {
        std::vector<std::pair<double, double>> pts;
        for (const auto& p : curves.branches[b])
            pts.emplace_back(p.x, p.y);
        c.polyline(pts, series[b % series.size()]);
    }
    return c.finish();
}

std::string render(const Partition& partition, const Sample& points)
{
    if (partition.labels.size() != points.size())
        throw InvalidArgument("partition and points differ in size");
    const bool planar = points.dim() >= 2;
    auto yof = [&](std::size_t i) { return planar ? points.at(i, 1) : 0.0; };
    double xlo = std::numeric_limits<double>::infinity();
    double xhi = -xlo;
    double ylo = xlo;
    double yhi = -xlo;
    for (std::size_t i = 0; i < points.size(); ++i) {
        xlo = std::min(xlo, points.at(i, 0));
        xhi = std::max(xhi, points.at(i, 0));
        ylo = std::min(ylo, yof(i));
        yhi = std::max(yhi, yof(i));
    }
    Canvas c("Modal clustering", Range::of(xlo, xhi), Range::of(ylo, yhi));
    c.axes("x1", planar ? "x2" : "");
    for (std::size_t i = 0; i < points.size(); ++i) {
        const int label = partition.labels[i];
        const char* color =
            label == Partition::unassigned ? gray : series[static_cast<std::size_t>(label - 1) % series.size()];
        c.circle(points.at(i, 0), yof(i), 2.0, color);
    }
    for (const auto& rep : partition.representatives) {
        const double y = planar ? rep(1) : 0.0;
        c.circle(rep(0), y, 5.0, "#000000");
    }
    return c.finish();
}

} // namespace modal::svg
