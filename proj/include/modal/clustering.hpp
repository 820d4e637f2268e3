#pragma once

#include "modal/ascent.hpp"
#include "modal/density_model.hpp"
#include "modal/gmm.hpp"
#include "modal/sample.hpp"

#include <nlohmann/json.hpp>

#include <vector>

namespace modal {

//! Cluster assignment of a set of points. Labels run from 1 to r; points
//! whose ascent did not converge to a mode carry `unassigned`.
struct Partition {
    static constexpr int unassigned = 0;

    std::vector<int> labels;
    std::vector<Point> representatives; //!< representatives[c - 1] for label c
    std::size_t r = 0;
    //! Parametric partitions: point lies on a tie between components.
    std::vector<bool> boundary;
    //! Component (parametric) or terminal (modal) density per representative.
    std::vector<double> representative_density;

    std::size_t unassigned_count() const;
};

struct ModalOptions {
    AscentConfig ascent{};
    //! Terminals closer than merge_tolerance * model.scale() are one mode.
    double merge_tolerance = 1e-3;
};

//! Domains of attraction of the density modes: every point is moved by
//! ascent_path and labelled by the mode it reaches. Representatives are
//! ordered lexicographically by coordinates.
Partition modal_partition(const DensityModel& model, const Sample& points, const ModalOptions& opts = {});

//! argmax_l w_l f_l(x), smallest index on ties (flagged as boundary). Empty
//! components are dropped and the remaining labels renumbered in order.
Partition parametric_partition(const GaussianMixtureModel& gmm, const Sample& points);

//! modal_partition applied to the fitted mixture density itself.
Partition gmm_modal_partition(const GaussianMixtureModel& gmm, const Sample& points,
                              const ModalOptions& opts = {});

//! Fraction of points whose labels agree with `truth` under the best
//! one-to-one relabelling (exhaustive over permutations, r <= 8).
double label_agreement(const std::vector<int>& labels, const std::vector<int>& truth);

nlohmann::json to_json(const Partition& p);

} // namespace modal
