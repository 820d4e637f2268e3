#pragma once

#include "modal/grid.hpp"

#include <nlohmann/json.hpp>

#include <vector>

namespace modal {

//! Birth and death heights of one mode's superlevel-set component.
struct PersistencePair {
    double death = 0.0;
    double birth = 0.0;
    Point mode;
    std::size_t peak_node = 0;

    double persistence() const { return birth - death; }
};

//! Merge tree of the superlevel sets {f >= c} on a grid. Leaves are modes;
//! an internal node is created at every merge level. For every node,
//! birth >= merge, and a child's merge level equals its parent's birth.
struct ClusterTree {
    struct Node {
        double birth = 0.0; //!< highest level at which the node exists
        double merge = 0.0; //!< level at which it joins its parent (root: min level)
        int parent = -1;
        std::vector<int> children;
        bool leaf = false;
        std::size_t peak_node = 0; //!< highest grid node of the component
        Point mode;                //!< leaf: plateau center of the peak
    };
    std::vector<Node> nodes;
    int root = -1;
    //! Elder-rule pairs, one per leaf, in order of death (then birth).
    std::vector<PersistencePair> pairs;

    std::size_t leaf_count() const;
};

//! Sweeps the node levels from max to min with union-find. Nodes of equal
//! level enter together; a component appearing at level c is born there,
//! and when components merge the elder one (higher birth, then lower peak
//! node index) survives while the others die at c. The last survivor dies
//! at the minimum grid level.
ClusterTree level_set_tree(const EvalGrid& grid);

std::vector<PersistencePair> persistence_diagram(const EvalGrid& grid);

nlohmann::json to_json(const ClusterTree& tree);
nlohmann::json to_json(const std::vector<PersistencePair>& diagram);

} // namespace modal
