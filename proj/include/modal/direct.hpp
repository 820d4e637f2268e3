#pragma once

#include "modal/sample.hpp"

#include <nlohmann/json.hpp>

#include <map>
#include <string>
#include <vector>

namespace modal {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool contains(double x) const { return lo <= x && x <= hi; }
    double midpoint() const { return 0.5 * (lo + hi); }
    double span() const { return hi - lo; }
};

//! Result of a direct (window/spacing based) univariate mode estimator.
struct DirectEstimate {
    std::string method;
    double location = 0.0;
    Interval window;
    std::map<std::string, double> diagnostics;
    std::vector<std::string> flags;

    bool has_flag(const std::string& f) const;
};

enum class TieBreak { leftmost, rightmost };

//! Interval of length 2a holding the most observations. Reports the midpoint
//! of the tightest data sub-range [X_(i), X_(i+m-1)] among those with the
//! maximal count m, leftmost on ties.
DirectEstimate chernoff_mode(const Sample& s, double half_width);

//! Midpoint of the shortest window [X_(i), X_(i+k-1)], 2 <= k <= n.
DirectEstimate dalenius_venter_mode(const Sample& s, std::size_t k, TieBreak tie = TieBreak::leftmost);

//! Iterated shortest window holding ceil(m p) of the current m points, down
//! to at most two points; p = 1/2 gives the half-sample mode.
DirectEstimate robertson_cryer_mode(const Sample& s, double proportion = 0.5,
                                    TieBreak tie = TieBreak::leftmost);

//! Same as robertson_cryer_mode but also returns every intermediate window.
std::vector<Interval> robertson_cryer_windows(const Sample& s, double proportion = 0.5,
                                              TieBreak tie = TieBreak::leftmost);

//! Spacing-weighted average of k-spacing midpoints with weights D_{i,k}^{-p}.
DirectEstimate grenander_mode(const Sample& s, std::size_t k, double power);

nlohmann::json to_json(const DirectEstimate& e);

} // namespace modal
