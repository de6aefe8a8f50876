#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "symlab/errors.hpp"
#include "symlab/geometry.hpp"

namespace symlab {

struct Color {
    float r = 0, g = 0, b = 0;
};

// Ground-truth symmetry of an object's shape+texture, as a transformation
// group acting on viewpoints. Axis is always through the object center.
struct SymmetryDescriptor {
    enum class Kind { ContinuousAxial, DiscreteCyclic, Trivial };

    Kind kind = Kind::Trivial;
    Vec3 axis = Vec3::UnitZ();
    int order = 1;  // group order for DiscreteCyclic

    // Group elements for the discrete kinds: all powers of the generating
    // rotation, identity included.
    std::vector<Pose> generators() const {
        std::vector<Pose> g;
        if (kind == Kind::DiscreteCyclic) {
            for (int k = 0; k < order; ++k)
                g.push_back(axial_rotation(axis, kTwoPi * k / order));
        } else {
            g.push_back(Pose::identity());
        }
        return g;
    }

    bool trivial() const { return kind == Kind::Trivial; }
};

// Azimuthal patch painted on a cylinder side, used to break axial symmetry.
struct Decal {
    bool enabled = false;
    double azimuth_center = 0.0;
    double azimuth_halfwidth = 0.5;
    double z_lo = -0.25, z_hi = 0.25;
    Color color{1.0f, 1.0f, 1.0f};
};

// Parametric textured object. The symmetry descriptor is part of the spec and
// must be consistent with the shape/texture (validate() enforces the rules,
// the renderer tests verify the render-invariance it promises).
struct ObjectSpec {
    enum class Primitive { Cylinder, Plate, Box, Cube };

    std::string name;
    Primitive primitive = Primitive::Cylinder;

    // Cylinder/plate dimensions.
    double radius = 0.4;
    double height = 1.0;
    // Box/cube half extents.
    Vec3 half_extents = Vec3(0.45, 0.45, 0.45);

    // Cylinder: horizontal color bands along the axis. Plate: concentric
    // rings on the top face.
    std::vector<Color> bands;
    Color cap_top{0.9f, 0.9f, 0.9f};
    Color cap_bottom{0.2f, 0.2f, 0.2f};
    Color side{0.5f, 0.5f, 0.5f};  // plate rim

    // Box/cube face colors: +x, -x, +y, -y, +z, -z.
    std::array<Color, 6> face_colors{};
    // Dark separator lines dividing each box/cube face into a grid of
    // stickers, blended linearly over the border width (0 disables).
    double face_border_width = 0.0;
    int face_border_grid = 1;
    Color face_border_color{0.05f, 0.05f, 0.05f};

    Decal decal;
    SymmetryDescriptor symmetry;

    bool is_round() const {
        return primitive == Primitive::Cylinder || primitive == Primitive::Plate;
    }

    double bounding_radius() const {
        if (is_round()) return std::sqrt(radius * radius + 0.25 * height * height);
        return half_extents.norm();
    }

    void validate() const {
        if (is_round()) {
            if (radius <= 0 || height <= 0)
                throw Error("ObjectSpec: cylinder/plate dimensions must be positive");
            if (bands.empty()) throw Error("ObjectSpec: banded texture needs at least one color");
        } else {
            if (half_extents.minCoeff() <= 0)
                throw Error("ObjectSpec: box half extents must be positive");
            if (face_border_width < 0 || face_border_grid < 1)
                throw Error("ObjectSpec: face border needs non-negative width and grid >= 1");
        }
        // Symmetry/texture consistency.
        switch (symmetry.kind) {
            case SymmetryDescriptor::Kind::ContinuousAxial:
                if (!is_round())
                    throw Error("ObjectSpec: continuous axial symmetry requires a round shape");
                if (decal.enabled)
                    throw Error("ObjectSpec: a decal breaks axial symmetry; declare trivial");
                break;
            case SymmetryDescriptor::Kind::DiscreteCyclic: {
                if (is_round())
                    throw Error("ObjectSpec: round shapes declare continuous, not cyclic");
                if (symmetry.order != 4)
                    throw Error("ObjectSpec: only 4-fold cyclic boxes are supported");
                if (std::abs(half_extents.x() - half_extents.y()) > 1e-12)
                    throw Error("ObjectSpec: 4-fold symmetry needs a square cross-section");
                const auto same = [](const Color& a, const Color& b) {
                    return a.r == b.r && a.g == b.g && a.b == b.b;
                };
                if (!(same(face_colors[0], face_colors[1]) && same(face_colors[0], face_colors[2]) &&
                      same(face_colors[0], face_colors[3])))
                    throw Error("ObjectSpec: 4-fold symmetry needs identical side-face colors");
                if (decal.enabled) throw Error("ObjectSpec: a decal breaks cyclic symmetry");
                break;
            }
            case SymmetryDescriptor::Kind::Trivial:
                break;
        }
        if (symmetry.kind != SymmetryDescriptor::Kind::Trivial &&
            (symmetry.axis - Vec3::UnitZ()).norm() > 1e-12)
            throw Error("ObjectSpec: catalog symmetries are about the world z axis");
    }
};

namespace catalogdetail {

inline ObjectSpec make_cylinder() {
    ObjectSpec o;
    o.name = "cylinder";
    o.primitive = ObjectSpec::Primitive::Cylinder;
    o.radius = 0.42;
    o.height = 1.2;
    o.bands = {{0.82f, 0.18f, 0.16f},
               {0.95f, 0.83f, 0.25f},
               {0.16f, 0.42f, 0.78f},
               {0.92f, 0.92f, 0.90f},
               {0.18f, 0.62f, 0.30f}};
    o.cap_top = {0.75f, 0.75f, 0.78f};
    o.cap_bottom = {0.25f, 0.25f, 0.27f};
    o.symmetry = {SymmetryDescriptor::Kind::ContinuousAxial, Vec3::UnitZ(), 1};
    return o;
}

inline ObjectSpec make_plate() {
    ObjectSpec o;
    o.name = "plate";
    o.primitive = ObjectSpec::Primitive::Plate;
    o.radius = 0.75;
    o.height = 0.12;
    o.bands = {{0.93f, 0.93f, 0.95f}, {0.35f, 0.55f, 0.85f}, {0.90f, 0.55f, 0.20f}};
    o.cap_bottom = {0.55f, 0.55f, 0.58f};
    o.side = {0.80f, 0.80f, 0.84f};
    o.symmetry = {SymmetryDescriptor::Kind::ContinuousAxial, Vec3::UnitZ(), 1};
    return o;
}

inline ObjectSpec make_cube4() {
    ObjectSpec o;
    o.name = "cube4";
    o.primitive = ObjectSpec::Primitive::Cube;
    o.half_extents = Vec3(0.45, 0.45, 0.45);
    const Color side{0.20f, 0.45f, 0.80f};
    o.face_colors = {side, side, side, side, Color{0.95f, 0.90f, 0.20f}, Color{0.30f, 0.12f, 0.10f}};
    o.symmetry = {SymmetryDescriptor::Kind::DiscreteCyclic, Vec3::UnitZ(), 4};
    return o;
}

inline ObjectSpec make_cube() {
    ObjectSpec o;
    o.name = "cube";
    o.primitive = ObjectSpec::Primitive::Cube;
    o.half_extents = Vec3(0.45, 0.45, 0.45);
    o.face_colors = {Color{0.90f, 0.15f, 0.15f}, Color{0.95f, 0.55f, 0.10f},
                     Color{0.15f, 0.70f, 0.25f}, Color{0.15f, 0.35f, 0.85f},
                     Color{0.95f, 0.92f, 0.88f}, Color{0.90f, 0.85f, 0.15f}};
    o.face_border_width = 0.07;
    o.face_border_grid = 3;
    o.symmetry = {SymmetryDescriptor::Kind::Trivial, Vec3::UnitZ(), 1};
    return o;
}

inline ObjectSpec make_box() {
    ObjectSpec o;
    o.name = "box";
    o.primitive = ObjectSpec::Primitive::Box;
    o.half_extents = Vec3(0.30, 0.45, 0.60);
    o.face_colors = {Color{0.85f, 0.20f, 0.20f}, Color{0.95f, 0.95f, 0.90f},
                     Color{0.20f, 0.30f, 0.75f}, Color{0.95f, 0.80f, 0.25f},
                     Color{0.30f, 0.65f, 0.30f}, Color{0.40f, 0.25f, 0.15f}};
    o.symmetry = {SymmetryDescriptor::Kind::Trivial, Vec3::UnitZ(), 1};
    return o;
}

inline ObjectSpec make_cylinder_decal() {
    ObjectSpec o = make_cylinder();
    o.name = "cylinder-decal";
    o.decal.enabled = true;
    o.decal.azimuth_center = 0.0;
    o.decal.azimuth_halfwidth = 0.6;
    o.decal.z_lo = -0.35;
    o.decal.z_hi = 0.35;
    o.decal.color = {0.05f, 0.05f, 0.05f};
    o.symmetry = {SymmetryDescriptor::Kind::Trivial, Vec3::UnitZ(), 1};
    return o;
}

}  // namespace catalogdetail

// The standard object set: two round objects with continuous axial symmetry,
// one 4-fold cube, and two fully asymmetric textured shapes.
inline const std::vector<ObjectSpec>& catalog() {
    static const std::vector<ObjectSpec> objects = [] {
        std::vector<ObjectSpec> v{catalogdetail::make_cylinder(), catalogdetail::make_plate(),
                                  catalogdetail::make_cube4(), catalogdetail::make_cube(),
                                  catalogdetail::make_box(), catalogdetail::make_cylinder_decal()};
        for (const auto& o : v) o.validate();
        return v;
    }();
    return objects;
}

inline const ObjectSpec& object_by_name(const std::string& name) {
    for (const auto& o : catalog())
        if (o.name == name) return o;
    throw Error("unknown object '" + name + "'");
}

}  // namespace symlab
