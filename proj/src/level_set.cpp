#include "modal/level_set.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace modal {

std::size_t ClusterTree::leaf_count() const
{
    return static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(), [](const Node& n) { return n.leaf; }));
}

namespace {

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x)
    {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b)
    {
        a = find(a);
        b = find(b);
        if (a != b)
            parent[std::max(a, b)] = std::min(a, b);
    }
};

struct Branch {
    double birth = 0.0;
    std::size_t peak = 0;
    int tree_node = -1;
    Point mode;
};

bool elder(const Branch& a, const Branch& b)
{
    return a.birth > b.birth || (a.birth == b.birth && a.peak < b.peak);
}

} // namespace

ClusterTree level_set_tree(const EvalGrid& grid)
{
    const std::size_t n = grid.size();
    const auto& level = grid.levels();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return level[a] > level[b]; });
    const double min_level = level[order.back()];

    ClusterTree tree;
    std::vector<Branch> branches;
    UnionFind uf(n);
    std::vector<bool> active(n, false);
    std::vector<int> branch_of_root(n, -1);

    for (std::size_t g = 0; g < n;) {
        std::size_t end = g;
        while (end < n && level[order[end]] == level[order[g]])
            ++end;
        const double c = level[order[g]];
        std::vector<std::size_t> group(order.begin() + static_cast<std::ptrdiff_t>(g),
                                       order.begin() + static_cast<std::ptrdiff_t>(end));
        std::sort(group.begin(), group.end());

        // Components that existed before this level and touch the group.
        std::vector<std::pair<std::size_t, int>> touches;
        for (const auto v : group) {
            grid.for_each_neighbor(v, [&](std::size_t u) {
                if (active[u])
                    touches.emplace_back(v, branch_of_root[uf.find(u)]);
            });
        }
        for (const auto v : group)
            active[v] = true;
        for (const auto v : group) {
            grid.for_each_neighbor(v, [&](std::size_t u) {
                if (active[u])
                    uf.unite(u, v);
            });
        }

        std::map<std::size_t, std::vector<int>> old_by_root;
        std::map<std::size_t, std::vector<std::size_t>> members_by_root;
        std::vector<std::size_t> roots_in_order;
        for (const auto v : group) {
            const auto r = uf.find(v);
            if (!members_by_root.count(r))
                roots_in_order.push_back(r);
            members_by_root[r].push_back(v);
        }
        for (const auto& [v, b] : touches)
            old_by_root[uf.find(v)].push_back(b);

        for (const auto r : roots_in_order) {
            auto& olds = old_by_root[r];
            std::sort(olds.begin(), olds.end());
            olds.erase(std::unique(olds.begin(), olds.end()), olds.end());
            if (olds.empty()) {
                const auto& members = members_by_root[r];
                Point center = Point::Zero(static_cast<Eigen::Index>(grid.dim()));
                for (const auto v : members)
                    center += grid.coordinate(v);
                center /= static_cast<double>(members.size());
                ClusterTree::Node leaf;
                leaf.birth = c;
                leaf.leaf = true;
                leaf.peak_node = members.front();
                leaf.mode = center;
                tree.nodes.push_back(leaf);
                branches.push_back({c, members.front(), static_cast<int>(tree.nodes.size() - 1), center});
                branch_of_root[r] = static_cast<int>(branches.size() - 1);
            } else if (olds.size() == 1) {
                branch_of_root[r] = olds.front();
            } else {
                int eldest = olds.front();
                for (const int b : olds) {
                    if (elder(branches[static_cast<std::size_t>(b)], branches[static_cast<std::size_t>(eldest)]))
                        eldest = b;
                }
                ClusterTree::Node merged;
                merged.birth = c;
                merged.peak_node = branches[static_cast<std::size_t>(eldest)].peak;
                const int merged_id = static_cast<int>(tree.nodes.size());
                for (const int b : olds) {
                    auto& br = branches[static_cast<std::size_t>(b)];
                    auto& child = tree.nodes[static_cast<std::size_t>(br.tree_node)];
                    child.merge = c;
                    child.parent = merged_id;
                    merged.children.push_back(br.tree_node);
                    if (b != eldest)
                        tree.pairs.push_back({c, br.birth, br.mode, br.peak});
                }
                tree.nodes.push_back(std::move(merged));
                branches[static_cast<std::size_t>(eldest)].tree_node = merged_id;
                branch_of_root[r] = eldest;
            }
        }
        g = end;
    }

    // Survivors (one per connected component of the grid) die at the minimum level.
    std::vector<int> survivors;
    for (std::size_t v = 0; v < n; ++v) {
        if (uf.find(v) == v)
            survivors.push_back(branch_of_root[v]);
    }
    std::sort(survivors.begin(), survivors.end(), [&](int a, int b) {
        return elder(branches[static_cast<std::size_t>(b)], branches[static_cast<std::size_t>(a)]);
    });
    for (const int b : survivors) {
        const auto& br = branches[static_cast<std::size_t>(b)];
        tree.nodes[static_cast<std::size_t>(br.tree_node)].merge = min_level;
        tree.pairs.push_back({min_level, br.birth, br.mode, br.peak});
        tree.root = br.tree_node;
    }
    return tree;
}

std::vector<PersistencePair> persistence_diagram(const EvalGrid& grid)
{
    return level_set_tree(grid).pairs;
}

nlohmann::json to_json(const ClusterTree& tree)
{
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& n : tree.nodes) {
        nlohmann::json j;
        j["birth"] = n.birth;
        j["merge"] = n.merge;
        j["parent"] = n.parent;
        j["children"] = n.children;
        j["leaf"] = n.leaf;
        if (n.leaf)
            j["mode"] = std::vector<double>(n.mode.data(), n.mode.data() + n.mode.size());
        nodes.push_back(j);
    }
    return {{"root", tree.root}, {"nodes", nodes}, {"pairs", to_json(tree.pairs)}};
}

nlohmann::json to_json(const std::vector<PersistencePair>& diagram)
{
    nlohmann::json out = nlohmann::json::array();
    for (const auto& p : diagram) {
        out.push_back({{"death", p.death},
                       {"birth", p.birth},
                       {"persistence", p.persistence()},
                       {"mode", std::vector<double>(p.mode.data(), p.mode.data() + p.mode.size())}});
    }
    return out;
}

} // namespace modal
