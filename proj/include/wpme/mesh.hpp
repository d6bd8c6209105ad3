#pragma once

// Mirror-symmetric 1D meshes on [-L, L] with the end nodes on the Dirichlet
// boundary. The graded variant keeps a uniform core and shrinks the outer half
// of the cells on each side geometrically toward the boundary.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "wpme/error.hpp"

namespace wpme {

enum class MeshKind { Graded, Uniform };

inline std::string to_string(MeshKind k) { return k == MeshKind::Graded ? "graded" : "uniform"; }

struct Mesh {
    std::vector<double> x;  // strictly increasing, x.front() = -L, x.back() = L
    MeshKind kind = MeshKind::Uniform;

    std::size_t size() const { return x.size(); }
    double half_width() const { return x.back(); }
    double h(std::size_t i) const { return x[i + 1] - x[i]; }

    double h_max() const {
        double out = 0.0;
        for (std::size_t i = 0; i + 1 < x.size(); ++i) out = std::max(out, h(i));
        return out;
    }

    double h_min() const {
        double out = x.back() - x.front();
        for (std::size_t i = 0; i + 1 < x.size(); ++i) out = std::min(out, h(i));
        return out;
    }

    /// Dual-cell width (h_{i-1} + h_i) / 2 for interior nodes, 0 at the ends.
    double dual(std::size_t i) const {
        if (i == 0 || i + 1 == x.size()) return 0.0;
        return 0.5 * (x[i + 1] - x[i - 1]);
    }
};

/// `nodes` counts both boundary nodes and must be odd so that x = 0 is a node.
inline Mesh make_mesh(double L, std::size_t nodes, MeshKind kind, double stretch = 1.05, double floor_ratio = 0.05) {
    require(L > 0.0, ErrorCode::InvalidArgument, "mesh half-width must be positive");
    require(nodes >= 17 && nodes % 2 == 1, ErrorCode::InvalidArgument, "mesh needs an odd node count >= 17");
    require(stretch >= 1.0 && floor_ratio > 0.0 && floor_ratio <= 1.0, ErrorCode::InvalidArgument,
            "invalid grading parameters");
    const std::size_t half = (nodes - 1) / 2;  // cells per side
    std::vector<double> rel(half, 1.0);         // cell widths from the centre outward, in core units
    if (kind == MeshKind::Graded) {
        const std::size_t n_out = half / 2;
        const std::size_t n_core = half - n_out;
        double r = 1.0;
        for (std::size_t k = 0; k < n_out; ++k) {
            r /= stretch;
            rel[n_core + k] = std::max(r, floor_ratio);
        }
    }
    double total = 0.0;
    for (double v : rel) total += v;
    const double hc = L / total;
    std::vector<double> right(half + 1, 0.0);
    for (std::size_t k = 0; k < half; ++k) right[k + 1] = right[k] + rel[k] * hc;
    right[half] = L;
    Mesh mesh;
    mesh.kind = kind;
    mesh.x.resize(nodes);
    for (std::size_t k = 0; k <= half; ++k) {
        mesh.x[half + k] = right[k];
        mesh.x[half - k] = -right[k];
    }
    return mesh;
}

}  // namespace wpme
