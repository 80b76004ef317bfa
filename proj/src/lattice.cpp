#include "spindiff/lattice.hpp"

#include <stdexcept>
#include <string>

namespace spindiff::lattice {

Box Box::cube(int d, int side, bool centered) {
    if (d < 1) throw std::invalid_argument("box dimension must be >= 1");
    if (side < 1) throw std::invalid_argument("box side must be >= 1");
    long n = 1;
    for (int k = 0; k < d; ++k) {
        n *= side;
        if (n > kMaxSites) throw std::invalid_argument("volume too large");
    }
    Box box;
    box.dim = d;
    box.extents.assign(d, side);
    if (centered) {
        if (side % 2 == 0)
            throw std::invalid_argument("centered box needs an odd side");
        box.origin.assign(d, -(side - 1) / 2);
    } else {
        box.origin.assign(d, 0);
    }
    return box;
}

int Box::size() const {
    long n = 1;
    for (int e : extents) n *= e;
    return static_cast<int>(n);
}

int Box::index(const std::vector<int>& c) const {
    int idx = 0;
    for (int k = 0; k < dim; ++k) {
        int off = c[k] - origin[k];
        if (off < 0 || off >= extents[k])
            throw std::out_of_range("coordinate outside box");
        idx = idx * extents[k] + off;
    }
    return idx;
}

std::vector<int> Box::coord(int idx) const {
    std::vector<int> c(dim);
    for (int k = dim - 1; k >= 0; --k) {
        c[k] = origin[k] + idx % extents[k];
        idx /= extents[k];
    }
    return c;
}

bool Box::contains(const std::vector<int>& c) const {
    for (int k = 0; k < dim; ++k) {
        int off = c[k] - origin[k];
        if (off < 0 || off >= extents[k]) return false;
    }
    return true;
}

std::vector<int> Box::neighbors(int idx) const {
    std::vector<int> out;
    out.reserve(2 * dim);
    std::vector<int> c = coord(idx);
    for (int k = 0; k < dim; ++k) {
        for (int step : {-1, +1}) {
            c[k] += step;
            if (contains(c)) out.push_back(index(c));
            c[k] -= step;
        }
    }
    return out;
}

int Box::center_index() const {
    return index(std::vector<int>(dim, 0));
}

int l1_distance(const Box& box, int a, int b) {
    std::vector<int> ca = box.coord(a), cb = box.coord(b);
    int d = 0;
    for (int k = 0; k < box.dim; ++k) d += std::abs(ca[k] - cb[k]);
    return d;
}

Mat adjacency(const Box& box) {
    const int n = box.size();
    Mat a = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j : box.neighbors(i)) a(i, j) = 1.0;
    return a;
}

Mat dirichlet_laplacian(const Box& box) {
    Mat lap = adjacency(box);
    lap.diagonal().array() -= 2.0 * box.dim;
    return lap;
}

std::vector<int> embed_indices(const Box& sub, const Box& ambient) {
    if (sub.dim != ambient.dim)
        throw std::invalid_argument("dimension mismatch between boxes");
    std::vector<int> map(sub.size());
    for (int i = 0; i < sub.size(); ++i) {
        std::vector<int> c = sub.coord(i);
        if (!ambient.contains(c))
            throw std::invalid_argument("sub-box not contained in ambient box");
        map[i] = ambient.index(c);
    }
    return map;
}

Mat boundary_operator(const Box& sub, const Box& ambient) {
    std::vector<int> emb = embed_indices(sub, ambient);
    std::vector<bool> inside = membership_mask(sub, ambient);
    Mat b = Mat::Zero(sub.size(), ambient.size());
    for (int i = 0; i < sub.size(); ++i)
        for (int j : ambient.neighbors(emb[i]))
            if (!inside[j]) b(i, j) = 1.0;
    return b;
}

std::vector<bool> membership_mask(const Box& sub, const Box& ambient) {
    std::vector<bool> mask(ambient.size(), false);
    for (int j : embed_indices(sub, ambient)) mask[j] = true;
    return mask;
}

} // namespace spindiff::lattice
