#pragma once

// Glue running the detect -> track -> evaluate chain over a scene.
// Rendering and annotation are done once per sequence; the tracker and
// metrics are cheap enough to re-run per hyperparameter candidate.

#include <vector>

#include "synmot/annotate.hpp"
#include "synmot/detsim.hpp"
#include "synmot/motmetrics.hpp"
#include "synmot/render.hpp"
#include "synmot/scene.hpp"
#include "synmot/track.hpp"

namespace synmot {

struct SequenceData {
    SceneDescription scene;
    std::vector<GtBox2D> gt;
    std::vector<Detection> detections;
};

// Renders every frame's instance buffer, annotates, and simulates
// detections. The color/depth/flow buffers are not kept (annotation
// needs only the instance maps).
inline SequenceData prepare_sequence(const SceneDescription& scene, const EvalFilter& filter,
                                     const DetectorModel& detector) {
    SequenceData seq;
    seq.scene = scene;
    std::vector<InstanceImage> instances;
    instances.reserve(scene.frame_count);
    for (int t = 0; t < scene.frame_count; ++t)
        instances.push_back(render_frame(scene, t).instance);
    seq.gt = annotate_sequence(scene, instances, filter);
    seq.detections = simulate_detections(seq.gt, detector, scene.intrinsics, scene.frame_count);
    return seq;
}

inline MotReport track_and_evaluate(const SequenceData& seq, const HyperParams& h,
                                    double iou_threshold = kDefaultMatchIou) {
    std::vector<Track> tracks = run_tracker(seq.detections, h);
    return evaluate(seq.gt, tracks, iou_threshold);
}

}  // namespace synmot
