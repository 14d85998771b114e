#ifndef TABLETOP_GEOMETRY_HPP
#define TABLETOP_GEOMETRY_HPP

#include <cmath>

namespace tabletop {

/// Planar position in workspace units.
struct Pose {
    double x = 0.0;
    double y = 0.0;

    Pose() = default;
    Pose(double x_, double y_) : x(x_), y(y_) {}

    bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

inline bool operator==(const Pose& a, const Pose& b) { return a.x == b.x && a.y == b.y; }
inline bool operator!=(const Pose& a, const Pose& b) { return !(a == b); }

inline double dist(const Pose& a, const Pose& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

/// Axis-aligned rectangle, used for the workspace bounds.
struct Rect {
    double xmin = 0.0, ymin = 0.0, xmax = 0.0, ymax = 0.0;

    bool contains(const Pose& p) const {
        return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
    }
    double width() const { return xmax - xmin; }
    double height() const { return ymax - ymin; }
};

/// Tolerance below which disc contact does not count as overlap. Tangent
/// discs are considered disjoint.
inline constexpr double kOverlapTol = 1e-9;

/// Strict disc overlap test: true iff the discs interpenetrate by more than
/// the tolerance.
inline bool discs_overlap(const Pose& a, double ra, const Pose& b, double rb) {
    return dist(a, b) < ra + rb - kOverlapTol;
}

}  // namespace tabletop

#endif
