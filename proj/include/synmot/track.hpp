#pragma once

// Tracking-by-detection as min-cost network flow with IoU pairwise
// affinities and multi-frame time-skip edges, solved by the dynamic
// programming successive-shortest-path scheme (negative-cost paths are
// extracted one at a time, removing their detections).

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "synmot/detsim.hpp"
#include "synmot/math.hpp"

namespace synmot {

struct HyperParams {
    double score_threshold = 0.3;
    double entry_cost = 0.4;       // C_en
    double exit_cost = 0.4;        // C_ex
    int max_skip = 3;              // K, max frame gap of transition edges
    double skip_decay = 0.9;       // gamma in (0,1]
    double min_iou = 0.25;         // tau: prune transitions below this affinity
    double detection_cost_scale = 4.0;  // beta
};

inline double detection_cost(const Detection& d, const HyperParams& h) {
    return h.detection_cost_scale * (0.5 - d.score);
}

// Gap-adjusted affinity iou * gamma^(dt-1); edge omitted below tau.
inline std::optional<double> transition_cost(const Detection& a, const Detection& b,
                                             const HyperParams& h) {
    int dt = b.frame - a.frame;
    if (dt < 1 || dt > h.max_skip) return std::nullopt;
    double s = iou(a.box, b.box) * std::pow(h.skip_decay, dt - 1);
    if (s < h.min_iou) return std::nullopt;
    return -std::log(s);
}

struct FlowGraph {
    std::vector<Detection> detections;  // score-filtered, sorted by frame
    struct Edge {
        int from;  // detection index
        double cost;
    };
    std::vector<std::vector<Edge>> incoming;  // per detection
    HyperParams params;
    size_t edge_count = 0;
};

inline FlowGraph build_flow_graph(const std::vector<Detection>& detections,
                                  const HyperParams& h) {
    FlowGraph g;
    g.params = h;
    for (const Detection& d : detections)
        if (d.score >= h.score_threshold) g.detections.push_back(d);
    std::stable_sort(g.detections.begin(), g.detections.end(),
                     [](const Detection& a, const Detection& b) { return a.frame < b.frame; });
    g.incoming.resize(g.detections.size());
    for (size_t j = 0; j < g.detections.size(); ++j) {
        for (size_t i = 0; i < j; ++i) {
            auto c = transition_cost(g.detections[i], g.detections[j], h);
            if (c) {
                g.incoming[j].push_back({static_cast<int>(i), *c});
                ++g.edge_count;
            }
        }
    }
    return g;
}

struct TrackBox {
    int frame;
    Box2 box;
    double score;
    bool interpolated;
};

struct Track {
    int id = 0;
    std::vector<TrackBox> boxes;  // strictly increasing frames
    double path_cost = 0.0;
};

namespace detail {

// One DP sweep over live detections in frame order; returns the best
// source->sink path (entry + detections + transitions + exit) if its
// cost is negative. Ties break toward the smallest detection index,
// which is also the smallest (frame, index) since detections are
// frame-sorted.
inline std::optional<std::vector<int>> best_path(const FlowGraph& g,
                                                 const std::vector<bool>& removed,
                                                 double* cost_out) {
    const size_t n = g.detections.size();
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> best(n, kInf);
    std::vector<int> parent(n, -1);
    for (size_t i = 0; i < n; ++i) {
        if (removed[i]) continue;
        double b = g.params.entry_cost;
        int par = -1;
        for (const FlowGraph::Edge& e : g.incoming[i]) {
            if (removed[e.from]) continue;
            double via = best[e.from] + e.cost;
            if (via < b) {
                b = via;
                par = e.from;
            }
        }
        best[i] = b + detection_cost(g.detections[i], g.params);
        parent[i] = par;
    }
    double best_total = kInf;
    int end = -1;
    for (size_t i = 0; i < n; ++i) {
        if (removed[i]) continue;
        double total = best[i] + g.params.exit_cost;
        if (total < best_total) {
            best_total = total;
            end = static_cast<int>(i);
        }
    }
    if (end < 0 || best_total >= 0.0) return std::nullopt;
    std::vector<int> path;
    for (int i = end; i >= 0; i = parent[i]) path.push_back(i);
    std::reverse(path.begin(), path.end());
    *cost_out = best_total;
    return path;
}

inline Box2 lerp_box(const Box2& a, const Box2& b, double s) {
    return {a.left + (b.left - a.left) * s, a.top + (b.top - a.top) * s,
            a.right + (b.right - a.right) * s, a.bottom + (b.bottom - a.bottom) * s};
}

}  // namespace detail

// Successive negative-cost path extraction with node removal. Output
// tracks sorted by (first frame, first detection index); frame gaps in
// each track are filled by linear interpolation, flagged `interpolated`.
inline std::vector<Track> solve_dp_mcf(const FlowGraph& g) {
    std::vector<bool> removed(g.detections.size(), false);
    struct RawTrack {
        std::vector<int> path;
        double cost;
    };
    std::vector<RawTrack> raw;
    for (;;) {
        double cost = 0.0;
        auto path = detail::best_path(g, removed, &cost);
        if (!path) break;
        for (int i : *path) removed[i] = true;
        raw.push_back({std::move(*path), cost});
    }
    std::sort(raw.begin(), raw.end(), [&](const RawTrack& a, const RawTrack& b) {
        int fa = g.detections[a.path.front()].frame;
        int fb = g.detections[b.path.front()].frame;
        if (fa != fb) return fa < fb;
        return a.path.front() < b.path.front();
    });

    std::vector<Track> tracks;
    for (size_t k = 0; k < raw.size(); ++k) {
        Track tr;
        tr.id = static_cast<int>(k) + 1;
        tr.path_cost = raw[k].cost;
        for (size_t idx = 0; idx < raw[k].path.size(); ++idx) {
            const Detection& d = g.detections[raw[k].path[idx]];
            if (idx > 0) {
                const Detection& prev = g.detections[raw[k].path[idx - 1]];
                for (int f = prev.frame + 1; f < d.frame; ++f) {
                    double s = static_cast<double>(f - prev.frame) / (d.frame - prev.frame);
                    tr.boxes.push_back({f, detail::lerp_box(prev.box, d.box, s),
                                        prev.score + (d.score - prev.score) * s, true});
                }
            }
            tr.boxes.push_back({d.frame, d.box, d.score, false});
        }
        tracks.push_back(std::move(tr));
    }
    return tracks;
}

inline std::vector<Track> run_tracker(const std::vector<Detection>& dets, const HyperParams& h) {
    return solve_dp_mcf(build_flow_graph(dets, h));
}

inline void write_tracks(const std::vector<Track>& tracks, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw SceneError("cannot open track file for writing: " + path);
    f.precision(6);
    f << std::fixed;
    for (const Track& tr : tracks)
        for (const TrackBox& b : tr.boxes)
            f << b.frame << " " << tr.id << " " << b.box.left << " " << b.box.top << " "
              << b.box.right << " " << b.box.bottom << " " << b.score << " "
              << (b.interpolated ? 1 : 0) << "\n";
}

inline std::vector<Track> read_tracks(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw SceneError("cannot open track file: " + path);
    std::map<int, Track> by_id;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        int frame, id, interp;
        TrackBox b{};
        ss >> frame >> id >> b.box.left >> b.box.top >> b.box.right >> b.box.bottom >> b.score >>
            interp;
        if (!ss) throw SceneError("malformed track row: " + line);
        b.frame = frame;
        b.interpolated = interp != 0;
        by_id[id].id = id;
        by_id[id].boxes.push_back(b);
    }
    std::vector<Track> tracks;
    for (auto& [id, tr] : by_id) tracks.push_back(std::move(tr));
    return tracks;
}

}  // namespace synmot
