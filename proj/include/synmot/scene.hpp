#pragma once

// Virtual-world data model: camera path, object trajectories with 3D
// extents, lighting and weather, plus procedural seed-scene generation
// and the scripted condition variations (camera rotation, lighting
// presets, fog, rain).
//
// Scene files are JSON with angles in degrees and lengths in meters;
// in memory all angles are radians. See docs/scene-schema.md.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "synmot/image.hpp"
#include "synmot/math.hpp"
#include "synmot/rng.hpp"

namespace synmot {

class SceneError : public std::runtime_error {
  public:
    explicit SceneError(const std::string& what) : std::runtime_error(what) {}
};

struct Pose {
    Vec3 position;
    double yaw = 0.0, pitch = 0.0, roll = 0.0;

    Mat3 rotation() const { return rotation_from_ypr(yaw, pitch, roll); }
    Transform transform() const { return {rotation(), position}; }
};

struct CameraIntrinsics {
    double fx = 725.0, fy = 725.0;
    double cx = 621.0, cy = 187.5;
    int width = 1242, height = 375;
};

enum class Shape { kCuboid, kCarLowpoly };

struct ObjectTrack {
    int track_id = 0;
    // width along local +x, height along +y, length along +z (forward).
    Vec3 extents{1.8, 1.5, 4.5};
    Shape shape = Shape::kCarLowpoly;
    Rgb albedo{0.7, 0.1, 0.1};
    std::map<int, Pose> poses;

    const Pose* pose_at(int frame) const {
        auto it = poses.find(frame);
        return it == poses.end() ? nullptr : &it->second;
    }
};

struct Lighting {
    Vec3 sun_direction{0.0, 0.7071067811865476, 0.7071067811865475};  // toward the sun
    double sun_intensity = 1.0;
    Rgb sun_color{1.0, 1.0, 1.0};
    double ambient_intensity = 0.4;
    std::string preset = "clone";
};

struct Weather {
    double fog_beta = 0.0;  // 1/m, 0 = no fog
    Rgb fog_color{0.75, 0.8, 0.85};
    double rain_intensity = 0.0;  // [0,1]
};

struct StaticProp {
    Vec3 extents{1.0, 1.0, 1.0};
    Pose pose;
    Rgb albedo{0.5, 0.5, 0.5};
};

struct GroundPlane {
    double height = 0.0;
    Rgb albedo{0.35, 0.35, 0.35};
};

struct SceneDescription {
    int frame_count = 1;
    double fps = 10.0;
    CameraIntrinsics intrinsics;
    std::vector<Pose> camera_poses;
    std::vector<ObjectTrack> objects;
    std::vector<StaticProp> static_props;
    GroundPlane ground;
    Lighting lighting;
    Weather weather;
};

// Sun direction unit vector from elevation above the horizon and azimuth
// (both radians; azimuth 0 = world +z, increasing toward +x).
inline Vec3 sun_from_angles(double elevation, double azimuth) {
    double c = std::cos(elevation);
    return {c * std::sin(azimuth), std::sin(elevation), c * std::cos(azimuth)};
}

inline void validate_scene(const SceneDescription& s) {
    auto check = [](bool ok, const std::string& msg) {
        if (!ok) throw SceneError("scene invariant violation: " + msg);
    };
    check(s.frame_count >= 1, "frame_count must be >= 1");
    check(s.fps > 0.0, "fps must be positive");
    const auto& in = s.intrinsics;
    check(in.fx > 0.0 && in.fy > 0.0, "intrinsics.fx/fy must be positive");
    check(in.width >= 16 && in.height >= 16, "intrinsics.width/height must be >= 16");
    check(in.cx > 0.0 && in.cx < in.width, "intrinsics.cx out of range");
    check(in.cy > 0.0 && in.cy < in.height, "intrinsics.cy out of range");
    check(static_cast<int>(s.camera_poses.size()) == s.frame_count,
          "camera_poses length must equal frame_count");
    for (const Pose& p : s.camera_poses)
        check(std::isfinite(p.position.x) && std::isfinite(p.position.y) &&
                  std::isfinite(p.position.z) && std::isfinite(p.yaw) && std::isfinite(p.pitch) &&
                  std::isfinite(p.roll),
              "camera pose must be finite");
    std::vector<int> ids;
    for (const ObjectTrack& o : s.objects) {
        std::string tag = "object track_id=" + std::to_string(o.track_id);
        check(o.track_id >= 0, tag + ": track_id must be non-negative");
        check(o.extents.x > 0.0 && o.extents.y > 0.0 && o.extents.z > 0.0,
              tag + ": extents must be strictly positive");
        for (const auto& [frame, pose] : o.poses) {
            check(frame >= 0 && frame < s.frame_count, tag + ": pose frame out of range");
            check(std::isfinite(pose.position.x) && std::isfinite(pose.yaw) &&
                      std::isfinite(pose.pitch) && std::isfinite(pose.roll),
                  tag + ": pose must be finite");
        }
        ids.push_back(o.track_id);
    }
    std::sort(ids.begin(), ids.end());
    check(std::adjacent_find(ids.begin(), ids.end()) == ids.end(), "track_id must be unique");
    check(std::abs(norm(s.lighting.sun_direction) - 1.0) <= 1e-9,
          "lighting.sun_direction must be a unit vector");
    check(s.lighting.sun_intensity >= 0.0 && s.lighting.ambient_intensity >= 0.0,
          "lighting intensities must be >= 0");
    check(s.weather.fog_beta >= 0.0, "weather.fog_beta must be >= 0");
    check(s.weather.rain_intensity >= 0.0 && s.weather.rain_intensity <= 1.0,
          "weather.rain_intensity must be in [0,1]");
}

// ---------------------------------------------------------------------------
// JSON serialization

namespace detail {

using nlohmann::json;

inline json vec3_to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }
inline Vec3 vec3_from_json(const json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 3) throw SceneError("field '" + field + "' must be a 3-array");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}
inline json rgb_to_json(const Rgb& c) { return json::array({c.r, c.g, c.b}); }
inline Rgb rgb_from_json(const json& j, const std::string& field) {
    Vec3 v = vec3_from_json(j, field);
    return {v.x, v.y, v.z};
}

inline json pose_to_json(const Pose& p) {
    return json{{"position", vec3_to_json(p.position)},
                {"yaw", rad_to_deg(p.yaw)},
                {"pitch", rad_to_deg(p.pitch)},
                {"roll", rad_to_deg(p.roll)}};
}
inline Pose pose_from_json(const json& j, const std::string& field) {
    Pose p;
    p.position = vec3_from_json(j.at("position"), field + ".position");
    p.yaw = deg_to_rad(j.at("yaw").get<double>());
    p.pitch = deg_to_rad(j.at("pitch").get<double>());
    p.roll = deg_to_rad(j.at("roll").get<double>());
    return p;
}

inline std::string shape_name(Shape s) { return s == Shape::kCuboid ? "cuboid" : "car_lowpoly"; }
inline Shape shape_from_name(const std::string& n) {
    if (n == "cuboid") return Shape::kCuboid;
    if (n == "car_lowpoly") return Shape::kCarLowpoly;
    throw SceneError("unknown shape '" + n + "'");
}

}  // namespace detail

inline nlohmann::json scene_to_json(const SceneDescription& s) {
    using namespace detail;
    json j;
    j["frame_count"] = s.frame_count;
    j["fps"] = s.fps;
    j["intrinsics"] = {{"fx", s.intrinsics.fx}, {"fy", s.intrinsics.fy},
                       {"cx", s.intrinsics.cx}, {"cy", s.intrinsics.cy},
                       {"width", s.intrinsics.width}, {"height", s.intrinsics.height}};
    j["camera_poses"] = json::array();
    for (const Pose& p : s.camera_poses) j["camera_poses"].push_back(pose_to_json(p));
    j["objects"] = json::array();
    for (const ObjectTrack& o : s.objects) {
        json jo;
        jo["track_id"] = o.track_id;
        jo["extents"] = vec3_to_json(o.extents);
        jo["shape"] = shape_name(o.shape);
        jo["albedo"] = rgb_to_json(o.albedo);
        json poses = json::object();
        for (const auto& [frame, pose] : o.poses) poses[std::to_string(frame)] = pose_to_json(pose);
        jo["poses"] = poses;
        j["objects"].push_back(jo);
    }
    j["static_props"] = json::array();
    for (const StaticProp& p : s.static_props)
        j["static_props"].push_back(json{{"extents", vec3_to_json(p.extents)},
                                         {"pose", pose_to_json(p.pose)},
                                         {"albedo", rgb_to_json(p.albedo)}});
    j["ground_plane"] = {{"height", s.ground.height}, {"albedo", rgb_to_json(s.ground.albedo)}};
    j["lighting"] = {{"sun_direction", vec3_to_json(s.lighting.sun_direction)},
                     {"sun_intensity", s.lighting.sun_intensity},
                     {"sun_color", rgb_to_json(s.lighting.sun_color)},
                     {"ambient_intensity", s.lighting.ambient_intensity},
                     {"preset", s.lighting.preset}};
    j["weather"] = {{"fog_beta", s.weather.fog_beta},
                    {"fog_color", rgb_to_json(s.weather.fog_color)},
                    {"rain_intensity", s.weather.rain_intensity}};
    return j;
}

inline SceneDescription scene_from_json(const nlohmann::json& j) {
    using namespace detail;
    SceneDescription s;
    try {
        s.frame_count = j.at("frame_count").get<int>();
        s.fps = j.at("fps").get<double>();
        const json& in = j.at("intrinsics");
        s.intrinsics = {in.at("fx").get<double>(), in.at("fy").get<double>(),
                        in.at("cx").get<double>(), in.at("cy").get<double>(),
                        in.at("width").get<int>(), in.at("height").get<int>()};
        for (const json& p : j.at("camera_poses"))
            s.camera_poses.push_back(pose_from_json(p, "camera_poses"));
        for (const json& jo : j.at("objects")) {
            ObjectTrack o;
            o.track_id = jo.at("track_id").get<int>();
            o.extents = vec3_from_json(jo.at("extents"), "objects.extents");
            o.shape = shape_from_name(jo.at("shape").get<std::string>());
            o.albedo = rgb_from_json(jo.at("albedo"), "objects.albedo");
            for (const auto& [key, val] : jo.at("poses").items())
                o.poses[std::stoi(key)] = pose_from_json(val, "objects.poses");
            s.objects.push_back(std::move(o));
        }
        if (j.contains("static_props"))
            for (const json& jp : j.at("static_props"))
                s.static_props.push_back({vec3_from_json(jp.at("extents"), "static_props.extents"),
                                          pose_from_json(jp.at("pose"), "static_props.pose"),
                                          rgb_from_json(jp.at("albedo"), "static_props.albedo")});
        const json& g = j.at("ground_plane");
        s.ground = {g.at("height").get<double>(), rgb_from_json(g.at("albedo"), "ground.albedo")};
        const json& l = j.at("lighting");
        s.lighting = {vec3_from_json(l.at("sun_direction"), "lighting.sun_direction"),
                      l.at("sun_intensity").get<double>(),
                      rgb_from_json(l.at("sun_color"), "lighting.sun_color"),
                      l.at("ambient_intensity").get<double>(),
                      l.at("preset").get<std::string>()};
        const json& w = j.at("weather");
        s.weather = {w.at("fog_beta").get<double>(),
                     rgb_from_json(w.at("fog_color"), "weather.fog_color"),
                     w.at("rain_intensity").get<double>()};
    } catch (const nlohmann::json::exception& e) {
        throw SceneError(std::string("scene parse error: ") + e.what());
    }
    validate_scene(s);
    return s;
}

inline SceneDescription load_scene(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw SceneError("cannot open scene file: " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(f);
    } catch (const nlohmann::json::parse_error& e) {
        throw SceneError("scene parse error in " + path + ": " + e.what());
    }
    return scene_from_json(j);
}

inline void save_scene(const SceneDescription& s, const std::string& path) {
    validate_scene(s);
    std::ofstream f(path);
    if (!f) throw SceneError("cannot open scene file for writing: " + path);
    f << scene_to_json(s).dump(2) << "\n";
    if (!f) throw SceneError("write failed: " + path);
}

// ---------------------------------------------------------------------------
// Procedural seed scenes

enum class MotionStyle { kUrban, kIntersection, kHighway, kStaticCamera };

inline std::string motion_style_name(MotionStyle m) {
    switch (m) {
        case MotionStyle::kUrban: return "urban";
        case MotionStyle::kIntersection: return "intersection";
        case MotionStyle::kHighway: return "highway";
        case MotionStyle::kStaticCamera: return "static_camera";
    }
    return "urban";
}

inline MotionStyle motion_style_from_name(const std::string& n) {
    if (n == "urban") return MotionStyle::kUrban;
    if (n == "intersection") return MotionStyle::kIntersection;
    if (n == "highway") return MotionStyle::kHighway;
    if (n == "static_camera") return MotionStyle::kStaticCamera;
    throw SceneError("unknown motion style '" + n + "'");
}

struct SeedParams {
    int n_objects = 5;
    int frame_count = 100;
    MotionStyle style = MotionStyle::kUrban;
};

namespace detail {

// 2D oriented-rectangle overlap in the ground plane (separating axis test).
// Rectangles are (center, half-extents along local x/z, yaw about world up).
struct GroundRect {
    double cx, cz, hx, hz, yaw;
};

inline bool ground_rects_overlap(const GroundRect& a, const GroundRect& b) {
    auto axes_of = [](const GroundRect& r) {
        double c = std::cos(r.yaw), s = std::sin(r.yaw);
        // local x axis and local z axis projected to the ground plane
        return std::array<Vec2, 2>{Vec2{c, -s}, Vec2{s, c}};
    };
    auto corners_of = [&](const GroundRect& r) {
        auto ax = axes_of(r);
        std::array<Vec2, 4> cs;
        int i = 0;
        for (double sx : {-1.0, 1.0})
            for (double sz : {-1.0, 1.0})
                cs[i++] = Vec2{r.cx, r.cz} + ax[0] * (sx * r.hx) + ax[1] * (sz * r.hz);
        return cs;
    };
    auto ca = corners_of(a), cb = corners_of(b);
    auto separated_on = [&](Vec2 axis) {
        auto range = [&](const std::array<Vec2, 4>& cs) {
            double lo = 1e300, hi = -1e300;
            for (const Vec2& c : cs) {
                double p = c.x * axis.x + c.y * axis.y;
                lo = std::min(lo, p);
                hi = std::max(hi, p);
            }
            return std::pair<double, double>{lo, hi};
        };
        auto [alo, ahi] = range(ca);
        auto [blo, bhi] = range(cb);
        return ahi < blo || bhi < alo;
    };
    for (Vec2 ax : axes_of(a))
        if (separated_on(ax)) return false;
    for (Vec2 ax : axes_of(b))
        if (separated_on(ax)) return false;
    return true;
}

}  // namespace detail

// Deterministic procedural stand-in for a real-world seed sequence.
// Objects drive constant-speed lane trajectories (optionally a gentle
// constant-rate turn, yaw rate <= 0.5 rad/s); the camera follows a smooth
// path fixed by the motion style. Throws SceneError if n_objects cannot
// be placed without interpenetration after 1000 attempts.
inline SceneDescription generate_seed_scene(std::uint64_t seed, const SeedParams& params) {
    if (params.n_objects < 0) throw SceneError("n_objects must be >= 0");
    if (params.frame_count < 1) throw SceneError("frame_count must be >= 1");

    SceneDescription s;
    s.frame_count = params.frame_count;
    s.fps = 10.0;
    s.intrinsics = CameraIntrinsics{};
    const double dt = 1.0 / s.fps;

    const bool is_static = params.style == MotionStyle::kStaticCamera;
    double cam_speed = 0.0;
    switch (params.style) {
        case MotionStyle::kUrban: cam_speed = 8.0; break;
        case MotionStyle::kIntersection: cam_speed = 4.0; break;
        case MotionStyle::kHighway: cam_speed = 22.0; break;
        case MotionStyle::kStaticCamera: cam_speed = 0.0; break;
    }
    for (int t = 0; t < s.frame_count; ++t) {
        Pose cam;
        cam.position = {0.0, 1.5, cam_speed * dt * t};
        cam.roll = kPi;  // upright camera: image-down = world-down
        s.camera_poses.push_back(cam);
    }

    RandomStream rng(seed, Role::kSceneGen, static_cast<std::uint64_t>(params.style),
                     static_cast<std::uint64_t>(params.n_objects));

    // Lane centers; the camera drives lane x=0.
    const std::vector<double> lanes = {-3.5, 0.0, 3.5, 7.0};

    std::vector<ObjectTrack> placed;
    for (int i = 0; i < params.n_objects; ++i) {
        bool ok = false;
        for (int attempt = 0; attempt < 1000 && !ok; ++attempt) {
            ObjectTrack o;
            o.track_id = i + 1;
            o.shape = Shape::kCarLowpoly;
            o.extents = {1.7 + rng.uniform(-0.1, 0.2), 1.4 + rng.uniform(-0.1, 0.3),
                         4.2 + rng.uniform(-0.4, 0.8)};
            o.albedo = {rng.uniform(0.1, 0.9), rng.uniform(0.1, 0.9), rng.uniform(0.1, 0.9)};

            double lane = lanes[static_cast<size_t>(rng.uniform_int(0, static_cast<int>(lanes.size()) - 1))];
            bool oncoming = lane < 0.0;
            double speed = rng.uniform(3.0, params.style == MotionStyle::kHighway ? 26.0 : 12.0);
            double z0 = rng.uniform(8.0, 70.0);
            // Some urban/intersection cars take a gentle constant-rate turn.
            double yaw_rate = 0.0;
            if (params.style != MotionStyle::kHighway && rng.uniform() < 0.3)
                yaw_rate = rng.uniform(-0.4, 0.4);

            double x = lane, z = z0, heading = oncoming ? kPi : 0.0;
            for (int t = 0; t < s.frame_count; ++t) {
                Pose p;
                p.position = {x, 0.0, z};
                p.yaw = heading;
                o.poses[t] = p;
                x += std::sin(heading) * speed * dt;
                z += std::cos(heading) * speed * dt;
                heading += yaw_rate * dt;
            }

            ok = true;
            for (const ObjectTrack& other : placed) {
                for (int t = 0; t < s.frame_count && ok; ++t) {
                    auto ra = detail::GroundRect{o.poses[t].position.x, o.poses[t].position.z,
                                                 o.extents.x * 0.5, o.extents.z * 0.5,
                                                 o.poses[t].yaw};
                    const Pose& pb = other.poses.at(t);
                    auto rb = detail::GroundRect{pb.position.x, pb.position.z, other.extents.x * 0.5,
                                                 other.extents.z * 0.5, pb.yaw};
                    if (detail::ground_rects_overlap(ra, rb)) ok = false;
                }
                if (!ok) break;
            }
            if (ok) placed.push_back(std::move(o));
        }
        if (!ok)
            throw SceneError("infeasible packing: could not place object " + std::to_string(i + 1) +
                             " after 1000 attempts");
    }
    s.objects = std::move(placed);

    // A few roadside props for background structure.
    int n_props = is_static ? 4 : 6;
    for (int i = 0; i < n_props; ++i) {
        StaticProp p;
        p.extents = {rng.uniform(0.5, 2.5), rng.uniform(1.0, 4.0), rng.uniform(0.5, 2.5)};
        p.pose.position = {(i % 2 == 0 ? -8.0 : 10.0) + rng.uniform(-1.0, 1.0), 0.0,
                           10.0 + 15.0 * i + rng.uniform(-3.0, 3.0)};
        p.pose.yaw = rng.uniform(0.0, 0.5);
        p.albedo = {rng.uniform(0.3, 0.7), rng.uniform(0.3, 0.7), rng.uniform(0.3, 0.7)};
        s.static_props.push_back(p);
    }

    s.ground = GroundPlane{};
    s.lighting = Lighting{};
    s.weather = Weather{};
    validate_scene(s);
    return s;
}

// ---------------------------------------------------------------------------
// Condition variations

enum class VariationKind {
    kClone,
    kRotateRight15,
    kRotateLeft15,
    kMorning,
    kSunset,
    kOvercast,
    kFog,
    kRain,
    kCustom
};

struct VariationParams {
    std::optional<double> rotation_deg;
    std::optional<double> fog_beta;
    std::optional<double> rain_intensity;
    std::optional<double> sun_elevation_deg;
    std::optional<double> sun_azimuth_deg;
    std::optional<double> sun_intensity;
    std::optional<double> ambient_intensity;
    std::optional<Rgb> sun_color;

    bool any() const {
        return rotation_deg || fog_beta || rain_intensity || sun_elevation_deg ||
               sun_azimuth_deg || sun_intensity || ambient_intensity || sun_color;
    }
};

struct VariationSpec {
    VariationKind kind = VariationKind::kClone;
    VariationParams params;
};

inline std::string variation_name(VariationKind k) {
    switch (k) {
        case VariationKind::kClone: return "clone";
        case VariationKind::kRotateRight15: return "rotate_right_15";
        case VariationKind::kRotateLeft15: return "rotate_left_15";
        case VariationKind::kMorning: return "morning";
        case VariationKind::kSunset: return "sunset";
        case VariationKind::kOvercast: return "overcast";
        case VariationKind::kFog: return "fog";
        case VariationKind::kRain: return "rain";
        case VariationKind::kCustom: return "custom";
    }
    return "clone";
}

inline VariationKind variation_from_name(const std::string& n) {
    for (VariationKind k :
         {VariationKind::kClone, VariationKind::kRotateRight15, VariationKind::kRotateLeft15,
          VariationKind::kMorning, VariationKind::kSunset, VariationKind::kOvercast,
          VariationKind::kFog, VariationKind::kRain, VariationKind::kCustom})
        if (variation_name(k) == n) return k;
    throw SceneError("unknown variation '" + n + "'");
}

// The seven canonical variations plus clone, in reporting order.
inline std::vector<VariationKind> canonical_variations() {
    return {VariationKind::kClone,   VariationKind::kRotateRight15, VariationKind::kRotateLeft15,
            VariationKind::kMorning, VariationKind::kSunset,        VariationKind::kOvercast,
            VariationKind::kFog,     VariationKind::kRain};
}

// Canonical numeric parameters for the named variations; the names
// alone do not pin numbers, so these constants define them for this
// pipeline and are serialized with every experiment.
inline constexpr double kDefaultFogBeta = 0.03;       // 1/m
inline constexpr double kDefaultRainIntensity = 0.7;  // [0,1]

inline Lighting lighting_preset(const std::string& name) {
    Lighting l;
    l.preset = name;
    if (name == "clone") {
        l.sun_direction = sun_from_angles(deg_to_rad(45.0), deg_to_rad(30.0));
    } else if (name == "morning") {
        l.sun_direction = sun_from_angles(deg_to_rad(15.0), deg_to_rad(100.0));
        l.sun_color = {1.0, 0.9, 0.7};
        l.ambient_intensity = 0.3;
    } else if (name == "sunset") {
        l.sun_direction = sun_from_angles(deg_to_rad(8.0), deg_to_rad(260.0));
        l.sun_color = {1.0, 0.6, 0.4};
        l.ambient_intensity = 0.25;
    } else if (name == "overcast") {
        l.sun_direction = sun_from_angles(deg_to_rad(45.0), deg_to_rad(30.0));
        l.sun_intensity = 0.0;
        l.ambient_intensity = 0.8;
        l.sun_color = {1.0, 1.0, 1.0};
    } else {
        throw SceneError("unknown lighting preset '" + name + "'");
    }
    return l;
}

// Applies a scripted condition variation. Only camera orientation,
// lighting and weather may change; trajectories, intrinsics and frame
// count are always preserved.
inline SceneDescription apply_variation(const SceneDescription& scene, const VariationSpec& v) {
    SceneDescription out = scene;
    auto rotate_cameras = [&out](double deg) {
        for (Pose& p : out.camera_poses) p.yaw += deg_to_rad(deg);
    };
    switch (v.kind) {
        case VariationKind::kClone:
            break;
        case VariationKind::kRotateRight15:
            rotate_cameras(v.params.rotation_deg.value_or(15.0));
            break;
        case VariationKind::kRotateLeft15:
            rotate_cameras(-v.params.rotation_deg.value_or(15.0));
            break;
        case VariationKind::kMorning:
            out.lighting = lighting_preset("morning");
            break;
        case VariationKind::kSunset:
            out.lighting = lighting_preset("sunset");
            break;
        case VariationKind::kOvercast:
            out.lighting = lighting_preset("overcast");
            break;
        case VariationKind::kFog:
            out.weather.fog_beta = v.params.fog_beta.value_or(kDefaultFogBeta);
            break;
        case VariationKind::kRain:
            out.weather.rain_intensity = v.params.rain_intensity.value_or(kDefaultRainIntensity);
            break;
        case VariationKind::kCustom: {
            if (!v.params.any())
                throw SceneError("custom variation requires at least one parameter override");
            const VariationParams& p = v.params;
            if (p.rotation_deg) rotate_cameras(*p.rotation_deg);
            if (p.fog_beta) out.weather.fog_beta = *p.fog_beta;
            if (p.rain_intensity) out.weather.rain_intensity = *p.rain_intensity;
            if (p.sun_elevation_deg || p.sun_azimuth_deg) {
                double elev = p.sun_elevation_deg.value_or(45.0);
                double azim = p.sun_azimuth_deg.value_or(30.0);
                out.lighting.sun_direction = sun_from_angles(deg_to_rad(elev), deg_to_rad(azim));
                out.lighting.preset = "custom";
            }
            if (p.sun_intensity) out.lighting.sun_intensity = *p.sun_intensity;
            if (p.ambient_intensity) out.lighting.ambient_intensity = *p.ambient_intensity;
            if (p.sun_color) out.lighting.sun_color = *p.sun_color;
            break;
        }
    }
    return out;
}

}  // namespace synmot
