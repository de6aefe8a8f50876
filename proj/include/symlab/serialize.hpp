#pragma once

#include <json.hpp>
#include <string>

#include "symlab/geometry.hpp"
#include "symlab/objects.hpp"

namespace symlab {

// ordered_json keeps insertion order, so serialized artifacts are
// byte-stable across runs.
using Json = nlohmann::ordered_json;

inline Json to_json(const Color& c) { return Json::array({c.r, c.g, c.b}); }

inline Color color_from_json(const Json& j) {
    return {j.at(0).get<float>(), j.at(1).get<float>(), j.at(2).get<float>()};
}

inline Json to_json(const Pose& p) {
    Json a = Json::array();
    const Mat4 m = p.homogeneous();
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) a.push_back(m(r, c));
    return a;
}

inline Pose pose_from_json(const Json& j) {
    if (j.size() != 16) throw Error("pose_from_json: expected 16 entries");
    Pose p;
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) p.rotation(r, c) = j.at(static_cast<size_t>(r) * 4 + c).get<double>();
        p.translation(r) = j.at(static_cast<size_t>(r) * 4 + 3).get<double>();
    }
    return p;
}

inline Json to_json(const SymmetryDescriptor& s) {
    Json j;
    switch (s.kind) {
        case SymmetryDescriptor::Kind::ContinuousAxial: j["kind"] = "continuous-axial"; break;
        case SymmetryDescriptor::Kind::DiscreteCyclic: j["kind"] = "discrete-cyclic"; break;
        case SymmetryDescriptor::Kind::Trivial: j["kind"] = "trivial"; break;
    }
    j["axis"] = Json::array({s.axis.x(), s.axis.y(), s.axis.z()});
    j["order"] = s.order;
    return j;
}

inline SymmetryDescriptor symmetry_from_json(const Json& j) {
    SymmetryDescriptor s;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "continuous-axial")
        s.kind = SymmetryDescriptor::Kind::ContinuousAxial;
    else if (kind == "discrete-cyclic")
        s.kind = SymmetryDescriptor::Kind::DiscreteCyclic;
    else if (kind == "trivial")
        s.kind = SymmetryDescriptor::Kind::Trivial;
    else
        throw Error("symmetry_from_json: unknown kind '" + kind + "'");
    const auto& a = j.at("axis");
    s.axis = Vec3(a.at(0).get<double>(), a.at(1).get<double>(), a.at(2).get<double>());
    s.order = j.at("order").get<int>();
    return s;
}

inline Json to_json(const ObjectSpec& o) {
    Json j;
    j["name"] = o.name;
    switch (o.primitive) {
        case ObjectSpec::Primitive::Cylinder: j["primitive"] = "cylinder"; break;
        case ObjectSpec::Primitive::Plate: j["primitive"] = "plate"; break;
        case ObjectSpec::Primitive::Box: j["primitive"] = "box"; break;
        case ObjectSpec::Primitive::Cube: j["primitive"] = "cube"; break;
    }
    j["radius"] = o.radius;
    j["height"] = o.height;
    j["half_extents"] = Json::array({o.half_extents.x(), o.half_extents.y(), o.half_extents.z()});
    Json bands = Json::array();
    for (const auto& b : o.bands) bands.push_back(to_json(b));
    j["bands"] = bands;
    j["cap_top"] = to_json(o.cap_top);
    j["cap_bottom"] = to_json(o.cap_bottom);
    j["side"] = to_json(o.side);
    Json faces = Json::array();
    for (const auto& f : o.face_colors) faces.push_back(to_json(f));
    j["face_colors"] = faces;
    j["face_border_width"] = o.face_border_width;
    j["face_border_grid"] = o.face_border_grid;
    j["face_border_color"] = to_json(o.face_border_color);
    j["decal"] = Json{{"enabled", o.decal.enabled},
                      {"azimuth_center", o.decal.azimuth_center},
                      {"azimuth_halfwidth", o.decal.azimuth_halfwidth},
                      {"z_lo", o.decal.z_lo},
                      {"z_hi", o.decal.z_hi},
                      {"color", to_json(o.decal.color)}};
    j["symmetry"] = to_json(o.symmetry);
    return j;
}

inline ObjectSpec object_from_json(const Json& j) {
    ObjectSpec o;
    o.name = j.at("name").get<std::string>();
    const std::string prim = j.at("primitive").get<std::string>();
    if (prim == "cylinder")
        o.primitive = ObjectSpec::Primitive::Cylinder;
    else if (prim == "plate")
        o.primitive = ObjectSpec::Primitive::Plate;
    else if (prim == "box")
        o.primitive = ObjectSpec::Primitive::Box;
    else if (prim == "cube")
        o.primitive = ObjectSpec::Primitive::Cube;
    else
        throw Error("object_from_json: unknown primitive '" + prim + "'");
    o.radius = j.at("radius").get<double>();
    o.height = j.at("height").get<double>();
    const auto& he = j.at("half_extents");
    o.half_extents = Vec3(he.at(0).get<double>(), he.at(1).get<double>(), he.at(2).get<double>());
    o.bands.clear();
    for (const auto& b : j.at("bands")) o.bands.push_back(color_from_json(b));
    o.cap_top = color_from_json(j.at("cap_top"));
    o.cap_bottom = color_from_json(j.at("cap_bottom"));
    o.side = color_from_json(j.at("side"));
    for (size_t i = 0; i < 6; ++i) o.face_colors[i] = color_from_json(j.at("face_colors").at(i));
    o.face_border_width = j.value("face_border_width", 0.0);
    o.face_border_grid = j.value("face_border_grid", 1);
    if (j.contains("face_border_color"))
        o.face_border_color = color_from_json(j.at("face_border_color"));
    const auto& d = j.at("decal");
    o.decal.enabled = d.at("enabled").get<bool>();
    o.decal.azimuth_center = d.at("azimuth_center").get<double>();
    o.decal.azimuth_halfwidth = d.at("azimuth_halfwidth").get<double>();
    o.decal.z_lo = d.at("z_lo").get<double>();
    o.decal.z_hi = d.at("z_hi").get<double>();
    o.decal.color = color_from_json(d.at("color"));
    o.symmetry = symmetry_from_json(j.at("symmetry"));
    o.validate();
    return o;
}

}  // namespace symlab
