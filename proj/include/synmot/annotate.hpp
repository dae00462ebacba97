#pragma once

// 2D tracking ground truth derived from scene geometry and rendered
// buffers: projected/clipped boxes, truncation via frustum clipping of
// the 3D box, occupancy via instance-pixel counting, fog visibility,
// and the evaluation-ignore filter.
//
// Output formats (see docs/gt-format.md): a KITTI-tracking-layout text
// file plus a .meta sidecar with occupancy/visibility/ignore.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "synmot/math.hpp"
#include "synmot/render.hpp"
#include "synmot/scene.hpp"

namespace synmot {

struct GtBox2D {
    int frame = 0;
    int track_id = 0;
    Box2 box;
    double truncation = 0.0;  // 0 = fully inside frustum
    double occupancy = 1.0;   // own instance pixels / box area
    double visibility = 1.0;  // fog extinction at object center
    bool ignore = false;
    // 3D context, KITTI-layout fields.
    double alpha = 0.0;
    Vec3 extents;   // (width, height, length)
    Vec3 location;  // object origin in camera coordinates
    double rot_y = 0.0;
};

struct EvalFilter {
    double min_height_px = 25.0;
    double max_truncation = 0.5;
    double min_occupancy = 0.25;
    double min_visibility = 0.25;
};

// Local-space corners of an object's 3D box (origin at bottom center).
inline std::array<Vec3, 8> cuboid_corners(const Vec3& extents) {
    double hx = extents.x * 0.5, hz = extents.z * 0.5;
    return {Vec3{-hx, 0, -hz}, {hx, 0, -hz}, {hx, 0, hz}, {-hx, 0, hz},
            {-hx, extents.y, -hz}, {hx, extents.y, -hz}, {hx, extents.y, hz},
            {-hx, extents.y, hz}};
}

// Projects the 3D box to an axis-aligned 2D hull clipped to the image.
// Edges crossing the near plane are clipped before projection. Returns
// nullopt when the box is entirely behind the camera or the hull misses
// the image.
inline std::optional<Box2> project_box(const Pose& obj_pose, const Vec3& extents,
                                       const CameraMatrices& cam) {
    auto corners = cuboid_corners(extents);
    Transform obj_to_cam = cam.view * obj_pose.transform();
    std::array<Vec3, 8> c;
    for (int i = 0; i < 8; ++i) c[i] = obj_to_cam * corners[i];

    static constexpr int kEdges[12][2] = {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {4, 5}, {5, 6},
                                          {6, 7}, {7, 4}, {0, 4}, {1, 5}, {2, 6}, {3, 7}};
    std::vector<Vec3> pts;
    pts.reserve(16);
    for (int i = 0; i < 8; ++i)
        if (c[i].z >= kZNear) pts.push_back(c[i]);
    for (const auto& e : kEdges) {
        const Vec3 &a = c[e[0]], &b = c[e[1]];
        if ((a.z >= kZNear) != (b.z >= kZNear)) {
            double s = (kZNear - a.z) / (b.z - a.z);
            pts.push_back(a + (b - a) * s);
        }
    }
    if (pts.empty()) return std::nullopt;

    double lo_u = 1e300, hi_u = -1e300, lo_v = 1e300, hi_v = -1e300;
    for (const Vec3& p : pts) {
        Vec2 s = cam.project(p);
        lo_u = std::min(lo_u, s.x);
        hi_u = std::max(hi_u, s.x);
        lo_v = std::min(lo_v, s.y);
        hi_v = std::max(hi_v, s.y);
    }
    Box2 box{std::max(0.0, lo_u), std::max(0.0, lo_v),
             std::min(static_cast<double>(cam.intr.width), hi_u),
             std::min(static_cast<double>(cam.intr.height), hi_v)};
    if (box.empty()) return std::nullopt;
    return box;
}

namespace detail {

// Halfspace n.x + d >= 0.
struct Plane {
    Vec3 n;
    double d;
    double eval(const Vec3& p) const { return dot(n, p) + d; }
};

// Camera-space frustum planes with inward normals.
inline std::vector<Plane> frustum_planes(const CameraIntrinsics& in) {
    return {
        {{0, 0, 1}, -kZNear},                       // near
        {{0, 0, -1}, kZFar},                        // far
        {{in.fx, 0, in.cx}, 0.0},                   // left  (u >= 0)
        {{-in.fx, 0, in.width - in.cx}, 0.0},       // right (u <= W)
        {{0, in.fy, in.cy}, 0.0},                   // top   (v >= 0)
        {{0, -in.fy, in.height - in.cy}, 0.0},      // bottom (v <= H)
    };
}

using Polygon = std::vector<Vec3>;

// Clips a convex polyhedron (polygon soup) by a halfspace, adding the
// cap polygon across the cut so subsequent clips see a closed solid.
inline std::vector<Polygon> clip_polyhedron(const std::vector<Polygon>& polys, const Plane& pl) {
    std::vector<Polygon> out;
    std::vector<Vec3> cut_points;
    for (const Polygon& poly : polys) {
        Polygon kept;
        size_t n = poly.size();
        for (size_t i = 0; i < n; ++i) {
            const Vec3& cur = poly[i];
            const Vec3& nxt = poly[(i + 1) % n];
            double dc = pl.eval(cur), dn = pl.eval(nxt);
            if (dc >= 0.0) kept.push_back(cur);
            if ((dc >= 0.0) != (dn >= 0.0)) {
                double s = dc / (dc - dn);
                Vec3 ip = cur + (nxt - cur) * s;
                kept.push_back(ip);
                cut_points.push_back(ip);
            }
        }
        if (kept.size() >= 3) out.push_back(std::move(kept));
    }
    if (cut_points.size() >= 3) {
        // Order cut points around their centroid in the plane.
        Vec3 centroid{};
        for (const Vec3& p : cut_points) centroid = centroid + p;
        centroid = centroid * (1.0 / cut_points.size());
        Vec3 nrm = normalized(pl.n);
        Vec3 u_axis = normalized(cross(nrm, std::abs(nrm.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0}));
        Vec3 v_axis = cross(nrm, u_axis);
        std::sort(cut_points.begin(), cut_points.end(), [&](const Vec3& a, const Vec3& b) {
            Vec3 da = a - centroid, db = b - centroid;
            return std::atan2(dot(da, v_axis), dot(da, u_axis)) <
                   std::atan2(dot(db, v_axis), dot(db, u_axis));
        });
        out.push_back(std::move(cut_points));
    }
    return out;
}

}  // namespace detail

// Fraction of the object's 3D box volume cut off by the camera frustum:
// 1 - vol(object-local AABB of the clipped box) / vol(full box).
inline double truncation_rate(const Pose& obj_pose, const Vec3& extents,
                              const CameraMatrices& cam) {
    // Transform frustum planes into object-local coordinates, then clip
    // the local box against them.
    Transform local_to_cam = cam.view * obj_pose.transform();
    Mat3 rot_t = local_to_cam.rot.transposed();

    auto corners = cuboid_corners(extents);
    std::vector<detail::Polygon> polys = {
        {corners[0], corners[1], corners[2], corners[3]},  // bottom
        {corners[4], corners[7], corners[6], corners[5]},  // top
        {corners[0], corners[4], corners[5], corners[1]},  // -z
        {corners[2], corners[6], corners[7], corners[3]},  // +z
        {corners[0], corners[3], corners[7], corners[4]},  // -x
        {corners[1], corners[5], corners[6], corners[2]},  // +x
    };
    for (const detail::Plane& p : detail::frustum_planes(cam.intr)) {
        detail::Plane local{rot_t * p.n, dot(p.n, local_to_cam.trans) + p.d};
        polys = detail::clip_polyhedron(polys, local);
        if (polys.empty()) return 1.0;
    }
    Vec3 lo{1e300, 1e300, 1e300}, hi{-1e300, -1e300, -1e300};
    for (const auto& poly : polys)
        for (const Vec3& v : poly) {
            lo = {std::min(lo.x, v.x), std::min(lo.y, v.y), std::min(lo.z, v.z)};
            hi = {std::max(hi.x, v.x), std::max(hi.y, v.y), std::max(hi.z, v.z)};
        }
    double vis = std::max(0.0, hi.x - lo.x) * std::max(0.0, hi.y - lo.y) *
                 std::max(0.0, hi.z - lo.z);
    double full = extents.x * extents.y * extents.z;
    return clamp01(1.0 - vis / full);
}

// Fraction of pixels inside the box whose instance ID is track_id.
inline double occupancy_rate(const InstanceImage& instance, int track_id, const Box2& box) {
    int x0 = static_cast<int>(std::ceil(box.left - 0.5));
    int x1 = static_cast<int>(std::ceil(box.right - 0.5));
    int y0 = static_cast<int>(std::ceil(box.top - 0.5));
    int y1 = static_cast<int>(std::ceil(box.bottom - 0.5));
    x0 = std::max(x0, 0);
    y0 = std::max(y0, 0);
    x1 = std::min(x1, instance.width());
    y1 = std::min(y1, instance.height());
    long total = 0, own = 0;
    for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x) {
            ++total;
            if (instance.at(x, y) == track_id) ++own;
        }
    return total > 0 ? static_cast<double>(own) / total : 0.0;
}

// exp(-beta * center depth); matches apply_fog's extinction term.
inline double fog_visibility(double center_depth, const Weather& weather) {
    if (weather.fog_beta <= 0.0) return 1.0;
    return std::exp(-weather.fog_beta * center_depth);
}

// 3-level occlusion code for the KITTI-layout column.
inline int occlusion_code(double occupancy) {
    if (occupancy > 0.75) return 0;
    if (occupancy >= 0.25) return 1;
    return 2;
}

// One GtBox2D per (frame, visible object), sorted by (frame, track_id).
// `instances` must hold one instance buffer per frame of the scene.
inline std::vector<GtBox2D> annotate_sequence(const SceneDescription& scene,
                                              const std::vector<InstanceImage>& instances,
                                              const EvalFilter& filter = {}) {
    if (static_cast<int>(instances.size()) != scene.frame_count)
        throw SceneError("annotate_sequence: buffer count does not match frame_count");
    std::vector<GtBox2D> rows;
    for (int t = 0; t < scene.frame_count; ++t) {
        CameraMatrices cam = compute_camera_matrices(scene.camera_poses[t], scene.intrinsics);
        for (const ObjectTrack& o : scene.objects) {
            const Pose* pose = o.pose_at(t);
            if (!pose) continue;
            auto box = project_box(*pose, o.extents, cam);
            if (!box) continue;
            GtBox2D row;
            row.frame = t;
            row.track_id = o.track_id;
            row.box = *box;
            row.truncation = truncation_rate(*pose, o.extents, cam);
            row.occupancy = occupancy_rate(instances[t], o.track_id, *box);
            Vec3 center_cam = cam.to_camera(pose->transform() * Vec3{0, o.extents.y * 0.5, 0});
            row.visibility = fog_visibility(std::max(center_cam.z, kZNear), scene.weather);
            row.ignore = box->height() < filter.min_height_px ||
                         row.truncation > filter.max_truncation ||
                         row.occupancy < filter.min_occupancy ||
                         row.visibility < filter.min_visibility;
            row.extents = o.extents;
            row.location = cam.to_camera(pose->position);
            row.rot_y = pose->yaw - scene.camera_poses[t].yaw;
            row.alpha = row.rot_y - std::atan2(row.location.x, row.location.z);
            rows.push_back(row);
        }
    }
    std::sort(rows.begin(), rows.end(), [](const GtBox2D& a, const GtBox2D& b) {
        return a.frame != b.frame ? a.frame < b.frame : a.track_id < b.track_id;
    });
    return rows;
}

// ---------------------------------------------------------------------------
// Ground-truth files (KITTI tracking layout + .meta sidecar)

inline void write_gt_files(const std::vector<GtBox2D>& rows, const std::string& gt_path,
                           const std::string& meta_path) {
    std::ofstream gt(gt_path);
    std::ofstream meta(meta_path);
    if (!gt || !meta) throw SceneError("cannot open ground-truth output files");
    gt.precision(6);
    meta.precision(6);
    gt << std::fixed;
    meta << std::fixed;
    for (const GtBox2D& r : rows) {
        gt << r.frame << " " << r.track_id << " Car " << r.truncation << " "
           << occlusion_code(r.occupancy) << " " << r.alpha << " " << r.box.left << " "
           << r.box.top << " " << r.box.right << " " << r.box.bottom << " " << r.extents.y << " "
           << r.extents.x << " " << r.extents.z << " " << r.location.x << " " << r.location.y
           << " " << r.location.z << " " << r.rot_y << " -1\n";
        meta << r.frame << " " << r.track_id << " " << r.occupancy << " " << r.visibility << " "
             << (r.ignore ? 1 : 0) << "\n";
    }
}

inline std::vector<GtBox2D> read_gt_files(const std::string& gt_path,
                                          const std::string& meta_path) {
    std::ifstream gt(gt_path);
    if (!gt) throw SceneError("cannot open ground-truth file: " + gt_path);
    std::vector<GtBox2D> rows;
    std::string line;
    while (std::getline(gt, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        GtBox2D r;
        std::string type;
        int occluded;
        double score;
        ss >> r.frame >> r.track_id >> type >> r.truncation >> occluded >> r.alpha >> r.box.left >>
            r.box.top >> r.box.right >> r.box.bottom >> r.extents.y >> r.extents.x >>
            r.extents.z >> r.location.x >> r.location.y >> r.location.z >> r.rot_y >> score;
        if (!ss) throw SceneError("malformed ground-truth row: " + line);
        rows.push_back(r);
    }
    std::ifstream meta(meta_path);
    if (!meta) throw SceneError("cannot open ground-truth meta file: " + meta_path);
    std::map<std::pair<int, int>, std::pair<double, std::pair<double, bool>>> meta_rows;
    while (std::getline(meta, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        int frame, id, ignore;
        double occ, vis;
        ss >> frame >> id >> occ >> vis >> ignore;
        if (!ss) throw SceneError("malformed meta row: " + line);
        meta_rows[{frame, id}] = {occ, {vis, ignore != 0}};
    }
    for (GtBox2D& r : rows) {
        auto it = meta_rows.find({r.frame, r.track_id});
        if (it == meta_rows.end())
            throw SceneError("meta row missing for frame " + std::to_string(r.frame));
        r.occupancy = it->second.first;
        r.visibility = it->second.second.first;
        r.ignore = it->second.second.second;
    }
    return rows;
}

}  // namespace synmot
