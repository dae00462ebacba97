#pragma once

// Seeded stochastic detector: turns ground-truth boxes into detections
// with miss/false-positive/localization/score characteristics coupled to
// occupancy, truncation, fog visibility and box size. Random draws are
// counter-based and keyed per (seed, frame, role, box), so changing one
// condition never re-shuffles unrelated draws.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "synmot/annotate.hpp"
#include "synmot/math.hpp"
#include "synmot/rng.hpp"
#include "synmot/scene.hpp"

namespace synmot {

struct Detection {
    int frame = 0;
    Box2 box;
    double score = 0.0;
};

struct DetectorModel {
    double miss_base = 0.02;
    double occlusion_weight = 0.6;   // a, on (1 - occupancy)
    double truncation_weight = 0.4;  // b
    double fog_weight = 0.8;         // c, on (1 - visibility)
    double size_scale = 40.0;        // h0, px
    double jitter_sigma = 0.03;      // fraction of box dimension per edge
    double fp_rate = 0.2;            // expected false positives per frame
    double score_noise_sigma = 0.08;
    std::uint64_t seed = 1;
};

inline double miss_probability(const DetectorModel& m, const GtBox2D& gt) {
    double p = m.miss_base + m.occlusion_weight * (1.0 - gt.occupancy) +
               m.truncation_weight * gt.truncation + m.fog_weight * (1.0 - gt.visibility) +
               std::max(0.0, 1.0 - gt.box.height() / m.size_scale);
    return clamp01(p);
}

// Simulates detections over [0, frame_count). `gt` must include ignored
// rows (the detector does not see ignore flags).
inline std::vector<Detection> simulate_detections(const std::vector<GtBox2D>& gt,
                                                  const DetectorModel& m,
                                                  const CameraIntrinsics& intr,
                                                  int frame_count) {
    const double w = intr.width, h = intr.height;
    std::vector<Detection> dets;

    for (const GtBox2D& g : gt) {
        RandomStream miss(m.seed, Role::kMiss, g.frame, g.track_id);
        if (miss.uniform() < miss_probability(m, g)) continue;
        RandomStream jitter(m.seed, Role::kJitter, g.frame, g.track_id);
        double jw = m.jitter_sigma * g.box.width();
        double jh = m.jitter_sigma * g.box.height();
        Detection d;
        d.frame = g.frame;
        d.box.left = g.box.left + jitter.normal(0.0, jw);
        d.box.right = g.box.right + jitter.normal(0.0, jw);
        d.box.top = g.box.top + jitter.normal(0.0, jh);
        d.box.bottom = g.box.bottom + jitter.normal(0.0, jh);
        d.box.left = std::clamp(d.box.left, 0.0, w - 1.0);
        d.box.top = std::clamp(d.box.top, 0.0, h - 1.0);
        d.box.right = std::clamp(d.box.right, d.box.left + 1.0, w);
        d.box.bottom = std::clamp(d.box.bottom, d.box.top + 1.0, h);
        RandomStream score(m.seed, Role::kScore, g.frame, g.track_id);
        d.score = clamp01(0.5 + 0.5 * g.occupancy * g.visibility -
                          std::abs(score.normal(0.0, m.score_noise_sigma)));
        dets.push_back(d);
    }

    for (int t = 0; t < frame_count; ++t) {
        RandomStream count(m.seed, Role::kFalsePositiveCount, t);
        int n = m.fp_rate > 0.0 ? count.poisson(m.fp_rate) : 0;
        for (int i = 0; i < n; ++i) {
            RandomStream fp(m.seed, Role::kFalsePositive, t, i);
            double bh = fp.log_uniform(15.0, 150.0);
            double aspect = std::max(0.3, fp.normal(1.6, 0.3));
            double bw = bh * aspect;
            double cx = fp.uniform(0.0, w);
            double cy = fp.uniform(0.0, h);
            Detection d;
            d.frame = t;
            d.box.left = std::clamp(cx - bw / 2.0, 0.0, w - 2.0);
            d.box.top = std::clamp(cy - bh / 2.0, 0.0, h - 2.0);
            d.box.right = std::clamp(cx + bw / 2.0, d.box.left + 1.0, w);
            d.box.bottom = std::clamp(cy + bh / 2.0, d.box.top + 1.0, h);
            d.score = fp.beta(2, 5);
            dets.push_back(d);
        }
    }

    std::sort(dets.begin(), dets.end(), [](const Detection& a, const Detection& b) {
        if (a.frame != b.frame) return a.frame < b.frame;
        if (a.score != b.score) return a.score > b.score;
        return a.box.left < b.box.left;
    });
    return dets;
}

inline void write_detections(const std::vector<Detection>& dets, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw SceneError("cannot open detections file for writing: " + path);
    f.precision(6);
    f << std::fixed;
    for (const Detection& d : dets)
        f << d.frame << " " << d.box.left << " " << d.box.top << " " << d.box.right << " "
          << d.box.bottom << " " << d.score << "\n";
}

inline std::vector<Detection> read_detections(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw SceneError("cannot open detections file: " + path);
    std::vector<Detection> dets;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        Detection d;
        ss >> d.frame >> d.box.left >> d.box.top >> d.box.right >> d.box.bottom >> d.score;
        if (!ss) throw SceneError("malformed detection row: " + line);
        dets.push_back(d);
    }
    return dets;
}

}  // namespace synmot
