#pragma once

// Experiment configuration: JSON binding for detector model, tracker
// hyperparameters, evaluation filter, variation lists and calibration
// settings. Every command writes its resolved config (defaults
// expanded) next to its outputs so runs are reproducible from one file.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "synmot/annotate.hpp"
#include "synmot/calibrate.hpp"
#include "synmot/detsim.hpp"
#include "synmot/scene.hpp"
#include "synmot/track.hpp"

namespace synmot {

using nlohmann::json;

inline json to_json(const DetectorModel& m) {
    return {{"miss_base", m.miss_base},
            {"occlusion_weight", m.occlusion_weight},
            {"truncation_weight", m.truncation_weight},
            {"fog_weight", m.fog_weight},
            {"size_scale", m.size_scale},
            {"jitter_sigma", m.jitter_sigma},
            {"fp_rate", m.fp_rate},
            {"score_noise_sigma", m.score_noise_sigma},
            {"seed", m.seed}};
}

inline DetectorModel detector_from_json(const json& j) {
    DetectorModel m;
    if (j.contains("miss_base")) m.miss_base = j["miss_base"].get<double>();
    if (j.contains("occlusion_weight")) m.occlusion_weight = j["occlusion_weight"].get<double>();
    if (j.contains("truncation_weight")) m.truncation_weight = j["truncation_weight"].get<double>();
    if (j.contains("fog_weight")) m.fog_weight = j["fog_weight"].get<double>();
    if (j.contains("size_scale")) m.size_scale = j["size_scale"].get<double>();
    if (j.contains("jitter_sigma")) m.jitter_sigma = j["jitter_sigma"].get<double>();
    if (j.contains("fp_rate")) m.fp_rate = j["fp_rate"].get<double>();
    if (j.contains("score_noise_sigma")) m.score_noise_sigma = j["score_noise_sigma"].get<double>();
    if (j.contains("seed")) m.seed = j["seed"].get<std::uint64_t>();
    return m;
}

inline json to_json(const HyperParams& h) {
    return {{"score_threshold", h.score_threshold}, {"entry_cost", h.entry_cost},
            {"exit_cost", h.exit_cost},             {"max_skip", h.max_skip},
            {"skip_decay", h.skip_decay},           {"min_iou", h.min_iou},
            {"detection_cost_scale", h.detection_cost_scale}};
}

inline HyperParams hyperparams_from_json(const json& j) {
    HyperParams h;
    if (j.contains("score_threshold")) h.score_threshold = j["score_threshold"].get<double>();
    if (j.contains("entry_cost")) h.entry_cost = j["entry_cost"].get<double>();
    if (j.contains("exit_cost")) h.exit_cost = j["exit_cost"].get<double>();
    if (j.contains("max_skip")) h.max_skip = j["max_skip"].get<int>();
    if (j.contains("skip_decay")) h.skip_decay = j["skip_decay"].get<double>();
    if (j.contains("min_iou")) h.min_iou = j["min_iou"].get<double>();
    if (j.contains("detection_cost_scale"))
        h.detection_cost_scale = j["detection_cost_scale"].get<double>();
    return h;
}

inline json to_json(const EvalFilter& f) {
    return {{"min_height_px", f.min_height_px},
            {"max_truncation", f.max_truncation},
            {"min_occupancy", f.min_occupancy},
            {"min_visibility", f.min_visibility}};
}

inline EvalFilter filter_from_json(const json& j) {
    EvalFilter f;
    if (j.contains("min_height_px")) f.min_height_px = j["min_height_px"].get<double>();
    if (j.contains("max_truncation")) f.max_truncation = j["max_truncation"].get<double>();
    if (j.contains("min_occupancy")) f.min_occupancy = j["min_occupancy"].get<double>();
    if (j.contains("min_visibility")) f.min_visibility = j["min_visibility"].get<double>();
    return f;
}

inline json to_json(const VariationSpec& v) {
    json j{{"kind", variation_name(v.kind)}};
    const VariationParams& p = v.params;
    if (p.rotation_deg) j["rotation_deg"] = *p.rotation_deg;
    if (p.fog_beta) j["fog_beta"] = *p.fog_beta;
    if (p.rain_intensity) j["rain_intensity"] = *p.rain_intensity;
    if (p.sun_elevation_deg) j["sun_elevation_deg"] = *p.sun_elevation_deg;
    if (p.sun_azimuth_deg) j["sun_azimuth_deg"] = *p.sun_azimuth_deg;
    if (p.sun_intensity) j["sun_intensity"] = *p.sun_intensity;
    if (p.ambient_intensity) j["ambient_intensity"] = *p.ambient_intensity;
    return j;
}

inline VariationSpec variation_from_json(const json& j) {
    VariationSpec v;
    if (j.is_string()) {
        v.kind = variation_from_name(j.get<std::string>());
        return v;
    }
    v.kind = variation_from_name(j.at("kind").get<std::string>());
    if (j.contains("rotation_deg")) v.params.rotation_deg = j["rotation_deg"].get<double>();
    if (j.contains("fog_beta")) v.params.fog_beta = j["fog_beta"].get<double>();
    if (j.contains("rain_intensity")) v.params.rain_intensity = j["rain_intensity"].get<double>();
    if (j.contains("sun_elevation_deg"))
        v.params.sun_elevation_deg = j["sun_elevation_deg"].get<double>();
    if (j.contains("sun_azimuth_deg")) v.params.sun_azimuth_deg = j["sun_azimuth_deg"].get<double>();
    if (j.contains("sun_intensity")) v.params.sun_intensity = j["sun_intensity"].get<double>();
    if (j.contains("ambient_intensity"))
        v.params.ambient_intensity = j["ambient_intensity"].get<double>();
    return v;
}

inline json to_json(const ParamSpace& space) {
    json arr = json::array();
    for (const ParamDef& d : space) {
        const char* kind = d.kind == ParamKind::kLinear ? "linear"
                           : d.kind == ParamKind::kLog  ? "log"
                                                        : "integer";
        arr.push_back({{"name", d.name}, {"kind", kind}, {"lo", d.lo}, {"hi", d.hi}});
    }
    return arr;
}

inline ParamSpace param_space_from_json(const json& j) {
    ParamSpace space;
    for (const json& jd : j) {
        ParamDef d;
        d.name = jd.at("name").get<std::string>();
        std::string kind = jd.at("kind").get<std::string>();
        d.kind = kind == "linear" ? ParamKind::kLinear
                 : kind == "log" ? ParamKind::kLog
                 : kind == "integer" ? ParamKind::kInteger
                                     : throw SceneError("unknown param kind '" + kind + "'");
        d.lo = jd.at("lo").get<double>();
        d.hi = jd.at("hi").get<double>();
        space.push_back(d);
    }
    return space;
}

inline json to_json(const MotReport& r) {
    return {{"MOTA", r.mota}, {"MOTP", r.motp}, {"MT", r.mt},       {"ML", r.ml},
            {"I", r.idsw},    {"F", r.frag},    {"P", r.precision}, {"R", r.recall},
            {"F1", r.f1},     {"TP", r.tp},     {"FP", r.fp},       {"FN", r.fn},
            {"total_gt", r.total_gt}};
}

inline json to_json(const ParamVector& p) {
    json j = json::object();
    for (const auto& [k, v] : p) j[k] = v;
    return j;
}

inline ParamVector param_vector_from_json(const json& j) {
    ParamVector p;
    for (const auto& [k, v] : j.items()) p[k] = v.get<double>();
    return p;
}

}  // namespace synmot
