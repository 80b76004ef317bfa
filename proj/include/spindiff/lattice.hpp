#pragma once

#include <vector>

#include "spindiff/linalg.hpp"

namespace spindiff::lattice {

/// Finite box in Z^d. Sites carry integer coordinates; `origin` is the
/// coordinate of site index 0 and indexing is lexicographic in the
/// coordinates, last axis fastest.
struct Box {
    int dim = 0;
    std::vector<int> extents;
    std::vector<int> origin;

    /// Hypercubic box of side `side`. Centered boxes put coordinate 0 in
    /// the middle (side must then be odd so a true center exists).
    static Box cube(int d, int side, bool centered = true);

    int size() const;
    int index(const std::vector<int>& coord) const;
    std::vector<int> coord(int idx) const;
    bool contains(const std::vector<int>& coord) const;

    /// Nearest neighbors inside the box, between d and 2d of them.
    std::vector<int> neighbors(int idx) const;

    /// Site with coordinate 0 on every axis; throws if not in the box.
    int center_index() const;
};

/// Hard cap so a typo cannot request an absurd allocation.
inline constexpr long kMaxSites = 1L << 22;

/// 1-norm distance between two sites.
int l1_distance(const Box& box, int a, int b);

/// Symmetric 0/1 nearest-neighbor matrix over the box.
Mat adjacency(const Box& box);

/// Dirichlet lattice Laplacian: adjacency off-diagonal, -2d on the
/// diagonal everywhere (exterior rows/columns simply absent).
Mat dirichlet_laplacian(const Box& box);

/// Index map from sub-box sites into ambient indices. Coordinates are
/// shared, so this requires sub to be geometrically contained in ambient.
std::vector<int> embed_indices(const Box& sub, const Box& ambient);

/// Rectangular bond matrix: entry (x, y) = 1 iff x in sub, y in
/// ambient \ sub, and x, y nearest neighbors. Rows run over sub sites,
/// columns over ambient sites.
Mat boundary_operator(const Box& sub, const Box& ambient);

/// Sites of ambient that belong to the embedded sub-box.
std::vector<bool> membership_mask(const Box& sub, const Box& ambient);

} // namespace spindiff::lattice
