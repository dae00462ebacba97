#pragma once

// Deterministic CPU rasterizer producing the four per-frame ground-truth
// buffers: flat-shaded color, metric depth, instance-ID segmentation and
// dense forward optical flow (t -> t+1), plus fog and rain post-effects.
//
// Rasterization rule: pixel-center sampling at (x+0.5, y+0.5), top-left
// fill convention, no anti-aliasing (exact instance/flow semantics need
// aliased coverage). Depth buffer stores camera-space z in meters with
// +inf for sky. Ties in depth keep the first writer; draw order is fixed
// (objects by track id, then props, then ground), so output is a pure
// function of (scene, frame).

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "synmot/image.hpp"
#include "synmot/math.hpp"
#include "synmot/rng.hpp"
#include "synmot/scene.hpp"

namespace synmot {

inline constexpr double kZNear = 0.1;
inline constexpr double kZFar = 1000.0;

// Instance IDs: 0 = background (sky + ground), 1..59999 = object track
// ids, 60000..65000 = static props (prop i -> 60000 + i).
inline constexpr std::uint16_t kPropInstanceBase = 60000;

struct CameraMatrices {
    Transform view;  // world -> camera
    CameraIntrinsics intr;

    Vec3 to_camera(const Vec3& world) const { return view * world; }

    // Pinhole projection of a camera-space point (z > 0).
    Vec2 project(const Vec3& cam) const {
        return {intr.fx * cam.x / cam.z + intr.cx, intr.fy * cam.y / cam.z + intr.cy};
    }
};

inline CameraMatrices compute_camera_matrices(const Pose& camera_pose,
                                              const CameraIntrinsics& intr) {
    return {camera_pose.transform().inverse(), intr};
}

struct FrameBuffers {
    ColorImage color;
    DepthImage depth;
    InstanceImage instance;
    FlowImage flow;
    MaskImage flow_valid;
};

struct Triangle {
    Vec3 a, b, c;  // local/model coordinates
};

// Axis-aligned cuboid sitting on y = y0: x in [-ex/2, ex/2],
// y in [y0, y0+ey], z in [zc-ez/2, zc+ez/2].
inline std::vector<Triangle> cuboid_mesh(const Vec3& extents, double y0 = 0.0, double zc = 0.0,
                                         double xs = 1.0) {
    double hx = extents.x * 0.5 * xs;
    double lo = y0, hi = y0 + extents.y;
    double hz = extents.z * 0.5;
    Vec3 v[8] = {{-hx, lo, zc - hz}, {hx, lo, zc - hz}, {hx, lo, zc + hz}, {-hx, lo, zc + hz},
                 {-hx, hi, zc - hz}, {hx, hi, zc - hz}, {hx, hi, zc + hz}, {-hx, hi, zc + hz}};
    auto quad = [&](int i0, int i1, int i2, int i3, std::vector<Triangle>& out) {
        out.push_back({v[i0], v[i1], v[i2]});
        out.push_back({v[i0], v[i2], v[i3]});
    };
    std::vector<Triangle> tris;
    tris.reserve(12);
    quad(0, 1, 2, 3, tris);  // bottom
    quad(4, 7, 6, 5, tris);  // top
    quad(0, 4, 5, 1, tris);  // -z
    quad(2, 6, 7, 3, tris);  // +z
    quad(0, 3, 7, 4, tris);  // -x
    quad(1, 5, 6, 2, tris);  // +x
    return tris;
}

// Two stacked cuboids (body + cabin) scaled to the object extents, so
// silhouettes are not plain rectangles and occupancy < 1 is exercised.
inline std::vector<Triangle> car_lowpoly_mesh(const Vec3& extents) {
    std::vector<Triangle> tris =
        cuboid_mesh({extents.x, extents.y * 0.6, extents.z}, 0.0, 0.0, 1.0);
    std::vector<Triangle> cabin = cuboid_mesh({extents.x, extents.y * 0.4, extents.z * 0.5},
                                              extents.y * 0.6, -extents.z * 0.05, 0.85);
    tris.insert(tris.end(), cabin.begin(), cabin.end());
    return tris;
}

inline std::vector<Triangle> object_mesh(const ObjectTrack& o) {
    return o.shape == Shape::kCuboid ? cuboid_mesh(o.extents) : car_lowpoly_mesh(o.extents);
}

namespace detail {

struct RenderItem {
    Transform model;  // local -> world
    std::vector<Triangle> tris;
    std::uint16_t instance_id = 0;
    Rgb albedo;
    int object_index = -1;  // index into scene.objects, -1 for static geometry
};

inline std::vector<Triangle> ground_mesh(double height) {
    const double e = 800.0;
    Vec3 v0{-e, height, -e}, v1{e, height, -e}, v2{e, height, e}, v3{-e, height, e};
    return {{v0, v1, v2}, {v0, v2, v3}};
}

inline std::vector<RenderItem> build_render_items(const SceneDescription& scene, int t) {
    std::vector<RenderItem> items;
    for (size_t i = 0; i < scene.objects.size(); ++i) {
        const ObjectTrack& o = scene.objects[i];
        const Pose* p = o.pose_at(t);
        if (!p) continue;
        RenderItem item;
        item.model = p->transform();
        item.tris = object_mesh(o);
        item.instance_id = static_cast<std::uint16_t>(o.track_id);
        item.albedo = o.albedo;
        item.object_index = static_cast<int>(i);
        items.push_back(std::move(item));
    }
    for (size_t i = 0; i < scene.static_props.size(); ++i) {
        const StaticProp& p = scene.static_props[i];
        RenderItem item;
        item.model = p.pose.transform();
        item.tris = cuboid_mesh(p.extents);
        item.instance_id = static_cast<std::uint16_t>(kPropInstanceBase + i);
        item.albedo = p.albedo;
        items.push_back(std::move(item));
    }
    RenderItem ground;
    ground.model = Transform::identity();
    ground.tris = ground_mesh(scene.ground.height);
    ground.instance_id = 0;
    ground.albedo = scene.ground.albedo;
    items.push_back(std::move(ground));
    return items;
}

struct ClipVertex {
    Vec3 cam;    // camera space
    Vec3 local;  // model space, carried for flow
};

// Clip a camera-space triangle against z = kZNear. Emits 0..2 triangles.
inline int clip_near(const ClipVertex in[3], ClipVertex out[2][3]) {
    ClipVertex poly[4];
    int n = 0;
    for (int i = 0; i < 3; ++i) {
        const ClipVertex& cur = in[i];
        const ClipVertex& nxt = in[(i + 1) % 3];
        bool cur_in = cur.cam.z >= kZNear;
        bool nxt_in = nxt.cam.z >= kZNear;
        if (cur_in) poly[n++] = cur;
        if (cur_in != nxt_in) {
            double s = (kZNear - cur.cam.z) / (nxt.cam.z - cur.cam.z);
            poly[n++] = {cur.cam + (nxt.cam - cur.cam) * s, cur.local + (nxt.local - cur.local) * s};
        }
    }
    if (n < 3) return 0;
    out[0][0] = poly[0];
    out[0][1] = poly[1];
    out[0][2] = poly[2];
    if (n == 3) return 1;
    out[1][0] = poly[0];
    out[1][1] = poly[2];
    out[1][2] = poly[3];
    return 2;
}

inline double orient2d(const Vec2& a, const Vec2& b, const Vec2& c) {
    return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

// Top-left fill rule for positive-area (screen y-down) triangles.
inline bool edge_top_left(const Vec2& a, const Vec2& b) {
    double dy = b.y - a.y;
    double dx = b.x - a.x;
    return (dy == 0.0 && dx > 0.0) || dy < 0.0;
}

// Internal per-pixel state feeding the shading and flow passes.
struct RasterState {
    Image<int> owner;        // index into items, -1 = sky
    Image<Vec3> local;       // model-space surface point
    Image<Vec3> normal;      // world-space flat normal
    DepthImage depth;

    RasterState(int w, int h)
        : owner(w, h, -1), local(w, h), normal(w, h), depth(w, h, kInfDepth) {}
};

inline void raster_triangle(RasterState& rs, const CameraMatrices& cam, int item_index,
                            const Transform& model, const Triangle& tri) {
    ClipVertex cv[3] = {{cam.to_camera(model * tri.a), tri.a},
                        {cam.to_camera(model * tri.b), tri.b},
                        {cam.to_camera(model * tri.c), tri.c}};
    // Flat world-space normal from original (unclipped) vertices.
    Vec3 wa = model * tri.a, wb = model * tri.b, wc = model * tri.c;
    Vec3 n = normalized(cross(wb - wa, wc - wa));

    ClipVertex clipped[2][3];
    int ntris = clip_near(cv, clipped);
    const int w = rs.owner.width(), h = rs.owner.height();
    for (int k = 0; k < ntris; ++k) {
        ClipVertex* v = clipped[k];
        Vec2 p0 = cam.project(v[0].cam);
        Vec2 p1 = cam.project(v[1].cam);
        Vec2 p2 = cam.project(v[2].cam);
        double area = orient2d(p0, p1, p2);
        if (area == 0.0) continue;
        if (area < 0.0) {
            std::swap(v[1], v[2]);
            std::swap(p1, p2);
            area = -area;
        }
        int x0 = std::max(0, static_cast<int>(std::floor(std::min({p0.x, p1.x, p2.x}) - 0.5)));
        int x1 = std::min(w - 1, static_cast<int>(std::ceil(std::max({p0.x, p1.x, p2.x}))));
        int y0 = std::max(0, static_cast<int>(std::floor(std::min({p0.y, p1.y, p2.y}) - 0.5)));
        int y1 = std::min(h - 1, static_cast<int>(std::ceil(std::max({p0.y, p1.y, p2.y}))));

        bool tl0 = edge_top_left(p1, p2);
        bool tl1 = edge_top_left(p2, p0);
        bool tl2 = edge_top_left(p0, p1);
        double iz0 = 1.0 / v[0].cam.z, iz1 = 1.0 / v[1].cam.z, iz2 = 1.0 / v[2].cam.z;

        for (int y = y0; y <= y1; ++y) {
            for (int x = x0; x <= x1; ++x) {
                Vec2 p{x + 0.5, y + 0.5};
                double w0 = orient2d(p1, p2, p);
                double w1 = orient2d(p2, p0, p);
                double w2 = orient2d(p0, p1, p);
                bool in0 = w0 > 0.0 || (w0 == 0.0 && tl0);
                bool in1 = w1 > 0.0 || (w1 == 0.0 && tl1);
                bool in2 = w2 > 0.0 || (w2 == 0.0 && tl2);
                if (!(in0 && in1 && in2)) continue;
                double l0 = w0 / area, l1 = w1 / area, l2 = w2 / area;
                double inv_z = l0 * iz0 + l1 * iz1 + l2 * iz2;
                double z = 1.0 / inv_z;
                if (z < kZNear || z > kZFar) continue;
                if (z >= rs.depth.at(x, y)) continue;
                rs.depth.at(x, y) = z;
                rs.owner.at(x, y) = item_index;
                Vec3 num = v[0].local * (l0 * iz0) + v[1].local * (l1 * iz1) + v[2].local * (l2 * iz2);
                rs.local.at(x, y) = num * z;
                rs.normal.at(x, y) = n;
            }
        }
    }
}

}  // namespace detail

// Volumetric fog: out = v*color + (1-v)*fog_color, v = exp(-beta*depth).
inline Rgb apply_fog(const Rgb& color, double depth, const Weather& weather) {
    if (weather.fog_beta <= 0.0) return color;
    if (std::isinf(depth)) return weather.fog_color;
    double v = std::exp(-weather.fog_beta * depth);
    return (color * v + weather.fog_color * (1.0 - v)).clamped();
}

// Particle-style rain streaks, color-only, deterministic per frame.
inline void apply_rain(ColorImage& img, double intensity, int frame) {
    int n = static_cast<int>(std::lround(intensity * 400.0));
    if (n <= 0) return;
    const Rgb streak_color{0.78, 0.8, 0.85};
    const double alpha = 0.35;
    for (int i = 0; i < n; ++i) {
        RandomStream rng(0x5EEDBA11, Role::kRain, static_cast<std::uint64_t>(frame),
                         static_cast<std::uint64_t>(i));
        double x0 = rng.uniform(0.0, img.width());
        double y0 = rng.uniform(0.0, img.height());
        double len = rng.uniform(8.0, 25.0);
        double slope = std::tan(deg_to_rad(rng.uniform(-10.0, 10.0)));
        for (int dy = 0; dy < static_cast<int>(len); ++dy) {
            int y = static_cast<int>(y0) + dy;
            int x = static_cast<int>(x0 + slope * dy);
            if (!img.in_bounds(x, y)) continue;
            Rgb& c = img.at(x, y);
            c = (c * (1.0 - alpha) + streak_color * alpha).clamped();
        }
    }
}

// Mask of pixels a rain pass with this intensity/frame would touch.
inline MaskImage rain_mask(int width, int height, double intensity, int frame) {
    MaskImage mask(width, height, 0);
    int n = static_cast<int>(std::lround(intensity * 400.0));
    for (int i = 0; i < n; ++i) {
        RandomStream rng(0x5EEDBA11, Role::kRain, static_cast<std::uint64_t>(frame),
                         static_cast<std::uint64_t>(i));
        double x0 = rng.uniform(0.0, width);
        double y0 = rng.uniform(0.0, height);
        double len = rng.uniform(8.0, 25.0);
        double slope = std::tan(deg_to_rad(rng.uniform(-10.0, 10.0)));
        for (int dy = 0; dy < static_cast<int>(len); ++dy) {
            int y = static_cast<int>(y0) + dy;
            int x = static_cast<int>(x0 + slope * dy);
            if (x >= 0 && x < width && y >= 0 && y < height) mask.at(x, y) = 1;
        }
    }
    return mask;
}

// Renders all four ground-truth buffers for frame t.
inline FrameBuffers render_frame(const SceneDescription& scene, int t) {
    if (t < 0 || t >= scene.frame_count)
        throw SceneError("render_frame: frame " + std::to_string(t) + " out of range");

    const CameraIntrinsics& intr = scene.intrinsics;
    const int w = intr.width, h = intr.height;
    CameraMatrices cam = compute_camera_matrices(scene.camera_poses[t], intr);

    std::vector<detail::RenderItem> items = detail::build_render_items(scene, t);
    detail::RasterState rs(w, h);
    for (size_t i = 0; i < items.size(); ++i)
        for (const Triangle& tri : items[i].tris)
            detail::raster_triangle(rs, cam, static_cast<int>(i), items[i].model, tri);

    FrameBuffers fb;
    fb.depth = rs.depth;
    fb.instance = InstanceImage(w, h, 0);
    fb.color = ColorImage(w, h);
    fb.flow = FlowImage(w, h);
    fb.flow_valid = MaskImage(w, h, 0);

    // Shading (color only; instance/depth are lighting-invariant).
    const Lighting& light = scene.lighting;
    const Rgb sky{0.55, 0.70, 0.90};
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            int ow = rs.owner.at(x, y);
            if (ow < 0) {
                fb.color.at(x, y) = sky;
                continue;
            }
            const detail::RenderItem& item = items[ow];
            fb.instance.at(x, y) = item.instance_id;
            double lambert = std::max(0.0, dot(rs.normal.at(x, y), light.sun_direction));
            Rgb shade = item.albedo *
                        (Rgb{light.ambient_intensity, light.ambient_intensity,
                             light.ambient_intensity} +
                         light.sun_color * (light.sun_intensity * lambert));
            fb.color.at(x, y) = shade.clamped();
        }
    }

    // Forward flow t -> t+1 from the exact model-space surface point.
    if (t + 1 < scene.frame_count) {
        CameraMatrices cam_next = compute_camera_matrices(scene.camera_poses[t + 1], intr);
        std::vector<std::optional<Transform>> model_next(items.size());
        for (size_t i = 0; i < items.size(); ++i) {
            if (items[i].object_index < 0) {
                model_next[i] = items[i].model;  // static geometry
            } else {
                const Pose* p = scene.objects[items[i].object_index].pose_at(t + 1);
                if (p) model_next[i] = p->transform();
            }
        }
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                int ow = rs.owner.at(x, y);
                if (ow < 0 || !model_next[ow]) continue;
                const Vec3& p_local = rs.local.at(x, y);
                Vec3 c0 = cam.to_camera(items[ow].model * p_local);
                Vec3 c1 = cam_next.to_camera(*model_next[ow] * p_local);
                if (c1.z <= 1e-9 || c0.z <= 1e-9) continue;
                Vec2 s0 = cam.project(c0);
                Vec2 s1 = cam_next.project(c1);
                fb.flow.at(x, y) = s1 - s0;
                fb.flow_valid.at(x, y) = 1;
            }
        }
    }

    // Post effects (color only).
    const Weather& weather = scene.weather;
    if (weather.fog_beta > 0.0)
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                fb.color.at(x, y) = apply_fog(fb.color.at(x, y), fb.depth.at(x, y), weather);
    if (weather.rain_intensity > 0.0) apply_rain(fb.color, weather.rain_intensity, t);

    return fb;
}

}  // namespace synmot
