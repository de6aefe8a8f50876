#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "symlab/errors.hpp"
#include "symlab/geometry.hpp"
#include "symlab/image.hpp"
#include "symlab/objects.hpp"

namespace symlab {

// Pinhole camera and shading constants. The light is a headlight (aligned
// with the viewing ray), so renders are exactly invariant under the object's
// symmetry group acting on the viewpoint.
struct RenderConfig {
    double vertical_fov = 60.0 * kPi / 180.0;
    Color background{0.12f, 0.12f, 0.14f};
    double ambient = 0.35;
};

namespace renderdetail {

struct Hit {
    double t = 0.0;
    Vec3 point = Vec3::Zero();
    Vec3 normal = Vec3::Zero();
    int tag = 0;  // cylinder: 0 side, 1 top, 2 bottom; box: face index
};

constexpr double kRayEps = 1e-9;

inline std::optional<Hit> intersect_round(const ObjectSpec& obj, const Vec3& o, const Vec3& d) {
    const double r = obj.radius, hh = 0.5 * obj.height;
    std::optional<Hit> best;
    const auto consider = [&](double t, const Vec3& n, int tag) {
        if (t <= kRayEps) return;
        if (!best || t < best->t) best = Hit{t, o + t * d, n, tag};
    };
    // Side surface: quadratic in the xy plane.
    const double a = d.x() * d.x() + d.y() * d.y();
    if (a > 0.0) {
        const double b = 2.0 * (o.x() * d.x() + o.y() * d.y());
        const double c = o.x() * o.x() + o.y() * o.y() - r * r;
        const double disc = b * b - 4.0 * a * c;
        if (disc >= 0.0) {
            const double sq = std::sqrt(disc);
            for (const double t : {(-b - sq) / (2 * a), (-b + sq) / (2 * a)}) {
                const Vec3 p = o + t * d;
                if (std::abs(p.z()) <= hh)
                    consider(t, Vec3(p.x() / r, p.y() / r, 0.0), 0);
            }
        }
    }
    // Caps.
    if (std::abs(d.z()) > 0.0) {
        for (const int s : {+1, -1}) {
            const double t = (s * hh - o.z()) / d.z();
            const Vec3 p = o + t * d;
            if (p.x() * p.x() + p.y() * p.y() <= r * r)
                consider(t, Vec3(0, 0, s), s > 0 ? 1 : 2);
        }
    }
    return best;
}

inline std::optional<Hit> intersect_box(const ObjectSpec& obj, const Vec3& o, const Vec3& d) {
    double tmin = -1e30, tmax = 1e30;
    int axis_min = -1, sign_min = 0;
    for (int k = 0; k < 3; ++k) {
        const double h = obj.half_extents[k];
        if (d[k] == 0.0) {
            if (std::abs(o[k]) > h) return std::nullopt;
            continue;
        }
        double t1 = (-h - o[k]) / d[k];
        double t2 = (h - o[k]) / d[k];
        int entry_sign = d[k] > 0 ? -1 : +1;
        if (t1 > t2) std::swap(t1, t2);
        if (t1 > tmin) {
            tmin = t1;
            axis_min = k;
            sign_min = entry_sign;
        }
        tmax = std::min(tmax, t2);
    }
    if (tmax < tmin || tmax <= kRayEps || tmin <= kRayEps || axis_min < 0) return std::nullopt;
    Hit h;
    h.t = tmin;
    h.point = o + tmin * d;
    h.normal = Vec3::Zero();
    h.normal[axis_min] = sign_min;
    h.tag = axis_min * 2 + (sign_min > 0 ? 0 : 1);  // +x,-x,+y,-y,+z,-z
    return h;
}

inline Color surface_color(const ObjectSpec& obj, const Hit& hit) {
    if (obj.is_round()) {
        const double hh = 0.5 * obj.height;
        if (hit.tag == 1 && obj.primitive == ObjectSpec::Primitive::Plate) {
            // Plate top: concentric rings.
            const double rr = std::hypot(hit.point.x(), hit.point.y()) / obj.radius;
            const int n = static_cast<int>(obj.bands.size());
            const int idx = std::min(n - 1, static_cast<int>(rr * n));
            return obj.bands[static_cast<size_t>(idx)];
        }
        if (hit.tag == 1) return obj.cap_top;
        if (hit.tag == 2) return obj.cap_bottom;
        if (obj.primitive == ObjectSpec::Primitive::Plate) return obj.side;
        // Cylinder side: horizontal bands, plus the optional decal.
        if (obj.decal.enabled) {
            double phi = std::atan2(hit.point.y(), hit.point.x());
            double delta = std::remainder(phi - obj.decal.azimuth_center, kTwoPi);
            if (std::abs(delta) <= obj.decal.azimuth_halfwidth && hit.point.z() >= obj.decal.z_lo &&
                hit.point.z() <= obj.decal.z_hi)
                return obj.decal.color;
        }
        const double u = std::clamp((hit.point.z() + hh) / obj.height, 0.0, 1.0);
        const int n = static_cast<int>(obj.bands.size());
        const int idx = std::min(n - 1, static_cast<int>(u * n));
        return obj.bands[static_cast<size_t>(idx)];
    }
    Color c = obj.face_colors[static_cast<size_t>(hit.tag)];
    if (obj.face_border_width > 0.0) {
        // Distance from the hit point to the nearest sticker separator line
        // on this face, measured along the two in-face axes.
        const int ax = hit.tag / 2;
        const auto line_dist = [&](int k) {
            const double h = obj.half_extents[k];
            const double s = (hit.point[k] + h) / (2.0 * h) * obj.face_border_grid;
            return std::abs(s - std::round(s)) * (2.0 * h / obj.face_border_grid);
        };
        const double dist = std::min(line_dist((ax + 1) % 3), line_dist((ax + 2) % 3));
        const float t =
            static_cast<float>(std::clamp(dist / obj.face_border_width, 0.0, 1.0));
        const Color& b = obj.face_border_color;
        c = {b.r + (c.r - b.r) * t, b.g + (c.g - b.g) * t, b.b + (c.b - b.b) * t};
    }
    return c;
}

inline bool contains(const ObjectSpec& obj, const Vec3& p) {
    if (obj.is_round())
        return p.x() * p.x() + p.y() * p.y() < obj.radius * obj.radius &&
               std::abs(p.z()) < 0.5 * obj.height;
    return std::abs(p.x()) < obj.half_extents.x() && std::abs(p.y()) < obj.half_extents.y() &&
           std::abs(p.z()) < obj.half_extents.z();
}

}  // namespace renderdetail

// Ray-cast the object from a camera pose. Deterministic; the object sits at
// the origin and the camera is expected to look at it (look-at poses from
// viewpoint_from_spherical do).
inline Image render(const ObjectSpec& obj, const Pose& view, int width, int height,
                    const RenderConfig& cfg = {}) {
    if (width < 8 || height < 8) throw Error("render: resolution must be at least 8x8");
    if (renderdetail::contains(obj, view.translation))
        throw InvalidViewpointError("render: camera is inside the object volume");

    const Vec3 right = view.rotation.col(0);
    const Vec3 up = view.rotation.col(1);
    const Vec3 forward = view.rotation.col(2);
    const double tan_half = std::tan(0.5 * cfg.vertical_fov);
    const double aspect = static_cast<double>(width) / height;

    Image img(width, height);
    for (int y = 0; y < height; ++y) {
        const double ndc_y = (1.0 - 2.0 * (y + 0.5) / height) * tan_half;
        for (int x = 0; x < width; ++x) {
            const double ndc_x = (2.0 * (x + 0.5) / width - 1.0) * tan_half * aspect;
            const Vec3 dir = (forward + ndc_x * right + ndc_y * up).normalized();
            const auto hit = obj.is_round()
                                 ? renderdetail::intersect_round(obj, view.translation, dir)
                                 : renderdetail::intersect_box(obj, view.translation, dir);
            Color c = cfg.background;
            if (hit) {
                c = renderdetail::surface_color(obj, *hit);
                const double lambert = std::max(0.0, -hit->normal.dot(dir));
                const double shade = cfg.ambient + (1.0 - cfg.ambient) * lambert;
                c = {static_cast<float>(c.r * shade), static_cast<float>(c.g * shade),
                     static_cast<float>(c.b * shade)};
            }
            img.at(y, x, 0) = std::clamp(c.r, 0.0f, 1.0f);
            img.at(y, x, 1) = std::clamp(c.g, 0.0f, 1.0f);
            img.at(y, x, 2) = std::clamp(c.b, 0.0f, 1.0f);
        }
    }
    return img;
}

// Viewpoints related to `view` by the object's symmetry group: n uniform
// samples of the axial group for continuous symmetry, the generator powers
// for cyclic groups, and just {view} for trivial symmetry.
inline std::vector<Pose> symmetry_orbit(const ObjectSpec& obj, const Pose& view, int n) {
    if (n < 1) throw Error("symmetry_orbit: n must be >= 1");
    std::vector<Pose> orbit;
    switch (obj.symmetry.kind) {
        case SymmetryDescriptor::Kind::ContinuousAxial:
            for (int k = 0; k < n; ++k)
                orbit.push_back(compose(axial_rotation(obj.symmetry.axis, kTwoPi * k / n), view));
            break;
        case SymmetryDescriptor::Kind::DiscreteCyclic: {
            const auto gens = obj.symmetry.generators();
            const int m = std::min<int>(n, static_cast<int>(gens.size()));
            for (int k = 0; k < m; ++k) orbit.push_back(compose(gens[static_cast<size_t>(k)], view));
            break;
        }
        case SymmetryDescriptor::Kind::Trivial:
            orbit.push_back(view);
            break;
    }
    return orbit;
}

}  // namespace symlab
