// Acceptance suite: one pass/fail line per criterion, nonzero exit on
// any failure. Unlike the unit tests these are end-to-end checks with
// runtime budgets; criteria 3 and 8 drive the installed CLI binary.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "oracles.hpp"
#include "synmot/annotate.hpp"
#include "synmot/calibrate.hpp"
#include "synmot/motmetrics.hpp"
#include "synmot/pipeline.hpp"
#include "synmot/render.hpp"
#include "synmot/scene.hpp"
#include "synmot/track.hpp"

namespace fs = std::filesystem;
using namespace synmot;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why) {
        pass = false;
        if (!detail.empty()) detail += "; ";
        detail += why;
    }
    void require(bool ok, const std::string& why) {
        if (!ok) fail(why);
    }
};

double now_seconds() {
    using clock = std::chrono::steady_clock;
    static const clock::time_point t0 = clock::now();
    return std::chrono::duration<double>(clock::now() - t0).count();
}

std::string run_cli(const std::string& args, int* exit_code) {
    std::string cmd = std::string(SYNMOT_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        *exit_code = -1;
        return "";
    }
    std::string out;
    char buf[512];
    while (fgets(buf, sizeof(buf), pipe)) out += buf;
    int status = pclose(pipe);
    *exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return out;
}

std::string read_file_bytes(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

SceneDescription half_resolution(SceneDescription s) {
    s.intrinsics.fx *= 0.5;
    s.intrinsics.fy *= 0.5;
    s.intrinsics.cx *= 0.5;
    s.intrinsics.cy *= 0.5;
    s.intrinsics.width /= 2;
    s.intrinsics.height /= 2;
    return s;
}

ObjectTrack make_cuboid(int id, const Vec3& extents, const Vec3& pos, double yaw, int frames) {
    ObjectTrack o;
    o.track_id = id;
    o.shape = Shape::kCuboid;
    o.extents = extents;
    for (int t = 0; t < frames; ++t) {
        Pose p;
        p.position = pos;
        p.yaw = yaw;
        o.poses[t] = p;
    }
    return o;
}

// ---------------------------------------------------------------------------
// 1. Geometry oracles

// Monte-Carlo estimate of truncation_rate's definition: sample the local
// box uniformly, keep in-frustum points, take the axis-aligned bounding
// box of the kept samples.
double mc_truncation(const Pose& obj_pose, const Vec3& extents, const CameraMatrices& cam,
                     int n_samples) {
    auto planes = detail::frustum_planes(cam.intr);
    Transform local_to_cam = cam.view * obj_pose.transform();
    RandomStream rng(0xACCE97u, Role::kBench, 1);
    double hx = extents.x * 0.5, hz = extents.z * 0.5;
    Vec3 lo{1e300, 1e300, 1e300}, hi{-1e300, -1e300, -1e300};
    long kept = 0;
    for (int i = 0; i < n_samples; ++i) {
        Vec3 p{rng.uniform(-hx, hx), rng.uniform(0.0, extents.y), rng.uniform(-hz, hz)};
        Vec3 c = local_to_cam * p;
        bool inside = true;
        for (const auto& pl : planes)
            if (pl.eval(c) < 0.0) {
                inside = false;
                break;
            }
        if (!inside) continue;
        ++kept;
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
    }
    if (kept == 0) return 1.0;
    double vis = (hi.x - lo.x) * (hi.y - lo.y) * (hi.z - lo.z);
    return clamp01(1.0 - vis / (extents.x * extents.y * extents.z));
}

Outcome criterion_geometry() {
    Outcome oc;
    CameraIntrinsics intr{100.0, 100.0, 50.0, 50.0, 100, 100};
    CameraMatrices cam{Transform::identity(), intr};

    // project_box: 2 m cube centered on the axis at depth 10; the hull is
    // governed by the near face z = 9.
    Pose cube_pose;
    cube_pose.position = {0.0, -1.0, 10.0};
    auto box = project_box(cube_pose, {2.0, 2.0, 2.0}, cam);
    oc.require(box.has_value(), "centered cube projects to nothing");
    if (box) {
        double lo = 50.0 - 100.0 / 9.0, hi = 50.0 + 100.0 / 9.0;
        oc.require(std::abs(box->left - lo) < 1e-6 && std::abs(box->top - lo) < 1e-6 &&
                       std::abs(box->right - hi) < 1e-6 && std::abs(box->bottom - hi) < 1e-6,
                   "cube hull not (38.89,38.89)-(61.11,61.11)");
    }
    Pose behind;
    behind.position = {0.0, -1.0, -10.0};
    oc.require(!project_box(behind, {2.0, 2.0, 2.0}, cam).has_value(),
               "box behind camera should project to nothing");
    Pose straddle;
    straddle.position = {-5.0, -1.0, 10.0};
    auto edge_box = project_box(straddle, {2.0, 2.0, 2.0}, cam);
    oc.require(edge_box && edge_box->left == 0.0, "left-edge straddle should clip to left==0");

    // truncation_rate: inside, outside, and an exact half cut by the near
    // plane (a thin rod never reaches the side planes).
    Pose inside_pose;
    inside_pose.position = {0.0, -0.5, 10.0};
    oc.require(truncation_rate(inside_pose, {1.0, 1.0, 1.0}, cam) < 1e-6,
               "fully visible cuboid should have truncation 0");
    Pose outside_pose;
    outside_pose.position = {0.0, -0.5, -10.0};
    oc.require(std::abs(truncation_rate(outside_pose, {1.0, 1.0, 1.0}, cam) - 1.0) < 1e-6,
               "fully hidden cuboid should have truncation 1");
    Pose rod_pose;
    rod_pose.position = {0.0, -0.005, kZNear};
    Vec3 rod{0.01, 0.01, 2.0};
    double rod_tr = truncation_rate(rod_pose, rod, cam);
    oc.require(std::abs(rod_tr - 0.5) < 1e-6, "near-plane bisected rod should truncate 0.5");
    oc.require(std::abs(mc_truncation(rod_pose, rod, cam, 4000000) - rod_tr) < 2e-3,
               "Monte-Carlo disagrees on the bisected rod");

    // Monte-Carlo cross-check on an oblique partially visible cuboid.
    Pose oblique;
    oblique.position = {-3.2, -0.8, 6.0};
    oblique.yaw = 0.3;
    Vec3 ext{1.6, 1.6, 2.4};
    double tr = truncation_rate(oblique, ext, cam);
    oc.require(tr > 0.05 && tr < 0.95, "oblique case should be partially truncated");
    oc.require(std::abs(mc_truncation(oblique, ext, cam, 4000000) - tr) < 2e-3,
               "Monte-Carlo disagrees on the oblique cuboid");

    // iou hand values.
    Box2 a{0, 0, 10, 10};
    oc.require(iou(a, a) == 1.0, "identical boxes should have IoU 1");
    oc.require(iou(a, Box2{20, 20, 30, 30}) == 0.0, "disjoint boxes should have IoU 0");
    oc.require(std::abs(iou(a, Box2{5, 0, 15, 10}) - 1.0 / 3.0) < 1e-12,
               "half-overlap boxes should have IoU 1/3");
    return oc;
}

// ---------------------------------------------------------------------------
// 2. Renderer correctness

Outcome criterion_renderer() {
    Outcome oc;

    // (a) z-buffer vs analytic ray casting on a 3-cuboid scene.
    {
        SceneDescription s;
        s.frame_count = 1;
        s.intrinsics = {100.0, 100.0, 70.0, 60.0, 140, 120};
        Pose cam;
        cam.position = {0.0, 1.5, 0.0};
        cam.roll = kPi;
        s.camera_poses = {cam};
        s.objects.push_back(make_cuboid(1, {2.0, 1.6, 4.0}, {-2.0, 0.0, 12.0}, 0.3, 1));
        s.objects.push_back(make_cuboid(2, {1.8, 1.4, 4.2}, {2.5, 0.0, 18.0}, -0.2, 1));
        s.objects.push_back(make_cuboid(3, {2.2, 2.0, 3.0}, {0.5, 0.0, 30.0}, 0.0, 1));
        FrameBuffers fb = render_frame(s, 0);

        Image<int> owner(s.intrinsics.width, s.intrinsics.height, 0);
        Image<double> odepth(s.intrinsics.width, s.intrinsics.height, kInfDepth);
        for (int y = 0; y < s.intrinsics.height; ++y)
            for (int x = 0; x < s.intrinsics.width; ++x) {
                auto [d, id] = oracle::raycast_depth(s, 0, x, y);
                owner.at(x, y) = id;
                odepth.at(x, y) = d;
            }
        long compared = 0;
        double worst = 0.0;
        for (int y = 1; y < s.intrinsics.height - 1; ++y)
            for (int x = 1; x < s.intrinsics.width - 1; ++x) {
                // off-silhouette: the oracle owner is locally constant
                bool edge = false;
                for (int dy = -1; dy <= 1 && !edge; ++dy)
                    for (int dx = -1; dx <= 1 && !edge; ++dx)
                        if (owner.at(x + dx, y + dy) != owner.at(x, y)) edge = true;
                if (edge || odepth.at(x, y) > 500.0) continue;
                ++compared;
                worst = std::max(worst, std::abs(fb.depth.at(x, y) - odepth.at(x, y)));
            }
        oc.require(compared > 2000, "too few off-silhouette pixels compared");
        oc.require(worst <= 1e-4,
                   "z-buffer deviates from ray casting by " + std::to_string(worst) + " m");
    }

    // (b) flow-warp consistency on a 30-frame seed scene.
    {
        SceneDescription s = half_resolution(generate_seed_scene(11, {3, 30, MotionStyle::kUrban}));
        std::map<int, const ObjectTrack*> by_id;
        for (const ObjectTrack& o : s.objects) by_id[o.track_id] = &o;

        FrameBuffers cur = render_frame(s, 0);
        long non_occluded = 0, consistent = 0;
        for (int t = 0; t + 1 < s.frame_count; ++t) {
            FrameBuffers nxt = render_frame(s, t + 1);
            CameraMatrices cam = compute_camera_matrices(s.camera_poses[t], s.intrinsics);
            CameraMatrices cam1 = compute_camera_matrices(s.camera_poses[t + 1], s.intrinsics);
            Transform cam_to_world = s.camera_poses[t].transform();
            for (int y = 0; y < s.intrinsics.height; ++y)
                for (int x = 0; x < s.intrinsics.width; ++x) {
                    if (!cur.flow_valid.at(x, y)) continue;
                    double d = cur.depth.at(x, y);
                    Vec3 p_cam{(x + 0.5 - s.intrinsics.cx) / s.intrinsics.fx * d,
                               (y + 0.5 - s.intrinsics.cy) / s.intrinsics.fy * d, d};
                    Vec3 p_world = cam_to_world * p_cam;
                    int id = cur.instance.at(x, y);
                    if (id >= 1 && id < kPropInstanceBase) {
                        const ObjectTrack* obj = by_id.at(id);
                        Transform m0 = obj->pose_at(t)->transform();
                        Transform m1 = obj->pose_at(t + 1)->transform();
                        p_world = m1 * (m0.inverse() * p_world);
                    }
                    Vec3 c1 = cam1.view * p_world;
                    if (c1.z < kZNear) continue;
                    Vec2 target{x + 0.5 + cur.flow.at(x, y).x, y + 0.5 + cur.flow.at(x, y).y};
                    int tx = static_cast<int>(std::floor(target.x));
                    int ty = static_cast<int>(std::floor(target.y));
                    if (!nxt.depth.in_bounds(tx, ty)) continue;
                    // occluded: something nearer covers the carried point
                    double tol = std::max(0.05, 0.02 * c1.z);
                    if (nxt.depth.at(tx, ty) < c1.z - tol) continue;
                    ++non_occluded;
                    if (nxt.instance.at(tx, ty) == id) ++consistent;
                }
            cur = std::move(nxt);
        }
        double frac = non_occluded > 0 ? static_cast<double>(consistent) / non_occluded : 0.0;
        oc.require(non_occluded > 100000, "too few valid flow pixels");
        oc.require(frac >= 0.99,
                   "flow-warp consistency " + std::to_string(frac) + " below 0.99");
    }

    // (c) GT buffers bitwise invariant under lighting/weather variations.
    {
        SceneDescription base =
            half_resolution(generate_seed_scene(11, {3, 4, MotionStyle::kUrban}));
        FrameBuffers ref = render_frame(base, 1);
        for (VariationKind k : {VariationKind::kMorning, VariationKind::kSunset,
                                VariationKind::kOvercast, VariationKind::kFog,
                                VariationKind::kRain}) {
            FrameBuffers fb = render_frame(apply_variation(base, {k, {}}), 1);
            bool same = true;
            for (int y = 0; y < base.intrinsics.height && same; ++y)
                for (int x = 0; x < base.intrinsics.width && same; ++x)
                    same = fb.depth.at(x, y) == ref.depth.at(x, y) &&
                           fb.instance.at(x, y) == ref.instance.at(x, y) &&
                           fb.flow.at(x, y) == ref.flow.at(x, y) &&
                           fb.flow_valid.at(x, y) == ref.flow_valid.at(x, y);
            oc.require(same, "GT buffers changed under variation '" + variation_name(k) + "'");
        }
    }
    return oc;
}

// ---------------------------------------------------------------------------
// 3. Rendering throughput via the CLI

Outcome criterion_throughput(const fs::path& work) {
    Outcome oc;
    fs::path scene = work / "bench.scene";
    int code = 0;
    run_cli("gen --seed 3 --style urban --objects 10 --frames 40 --out " + scene.string(),
            &code);
    if (code != 0) {
        oc.fail("scene generation failed (exit " + std::to_string(code) + ")");
        return oc;
    }
    auto measure = [&](int width, const std::string& tag) -> double {
        int ec = 0;
        std::string out = run_cli("render --scene " + scene.string() + " --width " +
                                      std::to_string(width) + " --jobs 1 --out " +
                                      (work / ("bench_" + tag)).string(),
                                  &ec);
        if (ec != 0) {
            oc.fail(tag + " render failed (exit " + std::to_string(ec) + ")");
            return 0.0;
        }
        int frames = 0, w = 0, h = 0;
        double secs = 0.0, fps = 0.0;
        size_t pos = out.find("rendered ");
        if (pos == std::string::npos ||
            std::sscanf(out.c_str() + pos, "rendered %d frames at %dx%d in %lf s (%lf FPS)",
                        &frames, &w, &h, &secs, &fps) != 5) {
            oc.fail(tag + ": could not parse the reported rate");
            return 0.0;
        }
        return fps;
    };
    double fps_half = measure(621, "half");
    oc.require(fps_half >= 5.0,
               "621x188 rate " + std::to_string(fps_half) + " FPS below 5");
    double fps_full = measure(1242, "full");
    oc.detail = "621-wide " + std::to_string(fps_half).substr(0, 5) + " FPS, 1242-wide " +
                std::to_string(fps_full).substr(0, 5) + " FPS (stretch " +
                (fps_full >= 5.0 ? "met" : "not met") + ")" +
                (oc.pass ? "" : "; " + oc.detail);
    return oc;
}

// ---------------------------------------------------------------------------
// 4. Tracker optimality vs exhaustive path-set enumeration

Outcome criterion_tracker(std::mt19937& gen) {
    Outcome oc;
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::uniform_int_distribution<int> nframes(2, 4);
    int equal = 0;
    for (int inst = 0; inst < 200; ++inst) {
        // two drifting jittered "objects" plus occasional clutter, <= 8 dets
        std::vector<Detection> dets;
        int frames = nframes(gen);
        double ox[2] = {10.0 + 40.0 * u01(gen), 10.0 + 40.0 * u01(gen)};
        double oy[2] = {10.0 + 40.0 * u01(gen), 10.0 + 40.0 * u01(gen)};
        for (int t = 0; t < frames && dets.size() < 8; ++t) {
            for (int k = 0; k < 2 && dets.size() < 8; ++k) {
                if (u01(gen) < 0.25) continue;  // missed
                double x = ox[k] + 3.0 * (u01(gen) - 0.5) + 2.0 * t;
                double y = oy[k] + 3.0 * (u01(gen) - 0.5);
                dets.push_back({t, Box2{x, y, x + 20, y + 15}, 0.35 + 0.6 * u01(gen)});
            }
            if (u01(gen) < 0.3 && dets.size() < 8) {
                double x = 100.0 * u01(gen), y = 100.0 * u01(gen);
                dets.push_back({t, Box2{x, y, x + 15, y + 12}, 0.3 + 0.5 * u01(gen)});
            }
        }
        HyperParams h;
        FlowGraph g = build_flow_graph(dets, h);
        double opt = oracle::exhaustive_tracker_optimum(g);
        double dp = 0.0;
        for (const Track& tr : solve_dp_mcf(g)) dp += tr.path_cost;
        if (dp < opt - 1e-9) {
            oc.fail("DP-MCF cost " + std::to_string(dp) + " below exhaustive optimum " +
                    std::to_string(opt) + " on instance " + std::to_string(inst));
            return oc;
        }
        if (std::abs(dp - opt) <= 1e-9) ++equal;
    }
    oc.require(equal >= 190, "DP-MCF matched the optimum on only " + std::to_string(equal) +
                                 "/200 instances");
    oc.detail = std::to_string(equal) + "/200 optimal" + (oc.pass ? "" : "; " + oc.detail);
    return oc;
}

// ---------------------------------------------------------------------------
// 5. CLEAR MOT oracle + permutation invariance

Outcome criterion_motmetrics(std::mt19937& gen) {
    Outcome oc;
    auto gt_row = [](int frame, int id, Box2 b) {
        GtBox2D r;
        r.frame = frame;
        r.track_id = id;
        r.box = b;
        return r;
    };
    Box2 b{10, 10, 60, 50};

    // perfect
    {
        std::vector<GtBox2D> gt;
        Track tr;
        tr.id = 1;
        for (int t = 0; t < 10; ++t) {
            gt.push_back(gt_row(t, 1, b));
            tr.boxes.push_back({t, b, 1.0, false});
        }
        MotReport r = evaluate(gt, {tr});
        oc.require(r.mota == 1.0 && r.motp == 1.0 && r.mt == 1.0 && r.idsw == 0 && r.frag == 0,
                   "perfect-tracker example wrong");
    }
    // empty hypotheses
    {
        std::vector<GtBox2D> gt;
        for (int t = 0; t < 10; ++t) gt.push_back(gt_row(t, 1, b));
        MotReport r = evaluate(gt, {});
        oc.require(r.mota == 0.0 && r.recall == 0.0 && r.ml == 1.0,
                   "empty-hypothesis example wrong");
    }
    // ID switch hand-trace: frames 0-4 hyp 1, frames 5-9 hyp 2
    {
        std::vector<GtBox2D> gt;
        Track t1, t2;
        t1.id = 1;
        t2.id = 2;
        for (int t = 0; t < 10; ++t) {
            gt.push_back(gt_row(t, 1, b));
            (t < 5 ? t1 : t2).boxes.push_back({t, b, 1.0, false});
        }
        MotReport r = evaluate(gt, {t1, t2});
        oc.require(r.mota == 0.9 && r.idsw == 1 && r.frag == 0 && r.mt == 1.0,
                   "ID-switch hand-trace wrong");
    }

    // hypothesis-ID permutation invariance on 50 random sequences
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int seq = 0; seq < 50; ++seq) {
        std::vector<GtBox2D> gt;
        std::vector<Track> tracks;
        int n_traj = 2 + static_cast<int>(u01(gen) * 3);
        for (int i = 0; i < n_traj; ++i) {
            double x = 30.0 + 200.0 * u01(gen), y = 30.0 + 120.0 * u01(gen);
            Track tr;
            tr.id = i + 1;
            for (int t = 0; t < 12; ++t) {
                Box2 gb{x + 2.0 * t, y, x + 2.0 * t + 40.0, y + 30.0};
                gt.push_back(gt_row(t, i + 1, gb));
                if (u01(gen) < 0.85) {
                    double dx = (u01(gen) - 0.5) * 8.0;
                    tr.boxes.push_back({t, Box2{gb.left + dx, gb.top, gb.right + dx, gb.bottom},
                                        0.9, false});
                }
            }
            if (!tr.boxes.empty()) tracks.push_back(tr);
        }
        // clutter track
        Track clutter;
        clutter.id = n_traj + 1;
        for (int t = 0; t < 12; t += 3)
            clutter.boxes.push_back({t, Box2{300, 300, 340, 330}, 0.5, false});
        tracks.push_back(clutter);

        std::vector<int> perm(tracks.size());
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), gen);
        std::vector<Track> renamed = tracks;
        for (size_t i = 0; i < renamed.size(); ++i) renamed[i].id = 1000 + perm[i];

        MotReport a = evaluate(gt, tracks);
        MotReport p = evaluate(gt, renamed);
        bool same = a.mota == p.mota && a.motp == p.motp && a.mt == p.mt && a.ml == p.ml &&
                    a.idsw == p.idsw && a.frag == p.frag && a.precision == p.precision &&
                    a.recall == p.recall && a.tp == p.tp && a.fp == p.fp && a.fn == p.fn;
        if (!same) {
            oc.fail("metrics changed under ID permutation on sequence " + std::to_string(seq));
            return oc;
        }
    }
    return oc;
}

// ---------------------------------------------------------------------------
// 6. Optimizer benchmark

Outcome criterion_optimizer() {
    Outcome oc;
    ParamSpace space = {{"x", ParamKind::kLinear, 0.0, 1.0}};
    auto f = [](const ParamVector& p) {
        double d = p.at("x") - 0.3;
        return -d * d;
    };
    int near_opt = 0;
    std::vector<double> smbo_best, rand_best;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        OptimizeResult s = optimize(f, space, 60, SearchStrategy::kSmbo, seed);
        OptimizeResult r = optimize(f, space, 60, SearchStrategy::kRandom, seed);
        if (std::abs(s.best.at("x") - 0.3) <= 0.05) ++near_opt;
        smbo_best.push_back(s.best_objective);
        rand_best.push_back(r.best_objective);
    }
    auto median = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        return 0.5 * (v[v.size() / 2 - 1] + v[v.size() / 2]);
    };
    double ms = median(smbo_best), mr = median(rand_best);
    oc.require(near_opt >= 18,
               "best-x within 0.05 for only " + std::to_string(near_opt) + "/20 seeds");
    oc.require(ms >= mr, "median SMBO objective " + std::to_string(ms) + " below random " +
                             std::to_string(mr));
    oc.detail = std::to_string(near_opt) + "/20 near optimum" + (oc.pass ? "" : "; " + oc.detail);
    return oc;
}

// ---------------------------------------------------------------------------
// 7. Gap-protocol sanity

Outcome criterion_gap_protocol() {
    Outcome oc;
    SceneDescription base =
        half_resolution(generate_seed_scene(11, {3, 120, MotionStyle::kUrban}));
    GapProtocolConfig cfg;
    cfg.budget = 40;
    cfg.seed = 5;
    cfg.filter.min_height_px = 12.0;
    // Search only the tracker's operating regime. The unconstrained
    // default space admits a degenerate optimum (track nothing, both
    // MOTAs 0) that trivially equalizes any pair; the degradation signs
    // asserted below are properties of configurations that track.
    cfg.space = {{"score_threshold", ParamKind::kLinear, 0.0, 0.45},
                 {"entry_cost", ParamKind::kLog, 0.01, 1.0},
                 {"exit_cost", ParamKind::kLog, 0.01, 1.0},
                 {"max_skip", ParamKind::kInteger, 1.0, 5.0},
                 {"skip_decay", ParamKind::kLinear, 0.5, 1.0},
                 {"min_iou", ParamKind::kLinear, 0.1, 0.5},
                 {"detection_cost_scale", ParamKind::kLog, 2.0, 10.0}};

    // (a) self-pair: zero deltas, objective exactly 2 * sum MOTA.
    {
        GapReport gap = run_gap_protocol({{base, base}}, cfg);
        const MotReport& d = gap.pairs[0].delta;
        oc.require(d.mota == 0.0 && d.motp == 0.0 && d.mt == 0.0 && d.ml == 0.0 && d.idsw == 0 &&
                       d.frag == 0 && d.precision == 0.0 && d.recall == 0.0,
                   "self-pair deltas not all zero");
        oc.require(gap.objective == gap.pairs[0].report_a.mota + gap.pairs[0].report_b.mota,
                   "self-pair objective is not 2*MOTA");
    }

    // (b) (clone, variation) pairs over the seven canonical variations:
    // fog degrades MOTA and R, and its R delta is the most negative.
    std::vector<std::pair<SceneDescription, SceneDescription>> pairs;
    std::vector<VariationKind> kinds;
    for (VariationKind k : canonical_variations()) {
        if (k == VariationKind::kClone) continue;
        kinds.push_back(k);
        pairs.emplace_back(base, apply_variation(base, {k, {}}));
    }
    GapReport gap = run_gap_protocol(pairs, cfg);
    double fog_r = 1.0;
    double min_other_r = 1.0;
    for (size_t i = 0; i < kinds.size(); ++i) {
        const MotReport& d = gap.pairs[i].delta;
        if (kinds[i] == VariationKind::kFog) {
            oc.require(d.mota < 0.0, "fog MOTA delta not negative");
            oc.require(d.recall < 0.0, "fog R delta not negative");
            fog_r = d.recall;
        } else {
            min_other_r = std::min(min_other_r, d.recall);
        }
    }
    oc.require(fog_r < min_other_r,
               "fog R delta " + std::to_string(fog_r) + " not the most negative (min other " +
                   std::to_string(min_other_r) + ")");
    return oc;
}

// ---------------------------------------------------------------------------
// 8. End-to-end determinism of cmd_sweep

Outcome criterion_determinism(const fs::path& work) {
    Outcome oc;
    fs::path scene = work / "det.scene";
    int code = 0;
    run_cli("gen --seed 9 --style urban --objects 3 --frames 10 --out " + scene.string(), &code);
    if (code != 0) {
        oc.fail("scene generation failed");
        return oc;
    }
    fs::path cfg_path = work / "sweep.json";
    {
        std::ofstream cfg(cfg_path);
        cfg << "{\n  \"scene\": \"" << scene.string() << "\"\n}\n";
    }
    fs::path out1 = work / "sweep1", out2 = work / "sweep2";
    run_cli("sweep --config " + cfg_path.string() + " --jobs 1 --out " + out1.string(), &code);
    oc.require(code == 0, "first sweep failed");
    run_cli("sweep --config " + cfg_path.string() + " --jobs 3 --out " + out2.string(), &code);
    oc.require(code == 0, "second sweep failed");
    if (!oc.pass) return oc;
    for (const char* name : {"report.txt", "report.json", "resolved_config.json"}) {
        std::string a = read_file_bytes(out1 / name);
        std::string b = read_file_bytes(out2 / name);
        oc.require(!a.empty() && a == b,
                   std::string(name) + " differs between runs with different --jobs");
    }
    return oc;
}

}  // namespace

int main() {
    fs::path work = fs::temp_directory_path() / "synmot_acceptance";
    fs::remove_all(work);
    fs::create_directories(work);
    std::mt19937 gen(20240817u);

    struct Entry {
        std::string label;
        double budget_s;
        std::function<Outcome()> run;
    };
    std::vector<Entry> entries = {
        {"geometry oracles", 5.0, [] { return criterion_geometry(); }},
        {"renderer correctness", 120.0, [] { return criterion_renderer(); }},
        {"rendering throughput", 0.0, [&] { return criterion_throughput(work); }},
        {"tracker optimality", 60.0, [&] { return criterion_tracker(gen); }},
        {"CLEAR MOT oracle", 0.0, [&] { return criterion_motmetrics(gen); }},
        {"optimizer benchmark", 30.0, [] { return criterion_optimizer(); }},
        {"gap-protocol sanity", 600.0, [] { return criterion_gap_protocol(); }},
        {"end-to-end determinism", 0.0, [&] { return criterion_determinism(work); }},
    };

    bool all_pass = true;
    for (size_t i = 0; i < entries.size(); ++i) {
        double t0 = now_seconds();
        Outcome oc;
        try {
            oc = entries[i].run();
        } catch (const std::exception& e) {
            oc.fail(std::string("exception: ") + e.what());
        }
        double elapsed = now_seconds() - t0;
        if (entries[i].budget_s > 0.0 && elapsed > entries[i].budget_s)
            oc.fail("runtime " + std::to_string(elapsed) + " s over the " +
                    std::to_string(entries[i].budget_s) + " s budget");
        std::printf("%s criterion %zu: %s (%.1f s)%s%s\n", oc.pass ? "PASS" : "FAIL", i + 1,
                    entries[i].label.c_str(), elapsed, oc.detail.empty() ? "" : " - ",
                    oc.detail.c_str());
        std::fflush(stdout);
        all_pass = all_pass && oc.pass;
    }
    return all_pass ? 0 : 1;
}
