// synmot: scene generation, ground-truth rendering, detection
// simulation, tracking, CLEAR MOT evaluation, variation sweeps and gap
// calibration as one reproducible command-line pipeline.
//
// Exit codes: 0 success, 1 usage error, 2 data/validation error,
// 3 internal error.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "synmot/config.hpp"
#include "synmot/pipeline.hpp"

namespace fs = std::filesystem;
using namespace synmot;

namespace {

// Static index partition; output files are per-index so results do not
// depend on the job count.
void parallel_for(int n, int jobs, const std::function<void(int)>& fn) {
    jobs = std::max(1, std::min(jobs, n));
    if (jobs == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> workers;
    for (int w = 0; w < jobs; ++w)
        workers.emplace_back([&, w] {
            for (int i = w; i < n; i += jobs) fn(i);
        });
    for (auto& t : workers) t.join();
}

std::string frame_name(int t, const char* ext) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%06d.%s", t, ext);
    return buf;
}

void write_json_file(const json& j, const fs::path& path) {
    std::ofstream f(path);
    if (!f) throw SceneError("cannot write " + path.string());
    f << j.dump(2) << "\n";
}

json load_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw SceneError("cannot open config file: " + path);
    return json::parse(f);
}

VariationSpec variation_from_cli(const std::string& name, double rotation_deg, double fog_beta,
                                 double rain_intensity) {
    VariationSpec v;
    v.kind = variation_from_name(name);
    if (rotation_deg > 0.0) v.params.rotation_deg = rotation_deg;
    if (fog_beta > 0.0) v.params.fog_beta = fog_beta;
    if (rain_intensity > 0.0) v.params.rain_intensity = rain_intensity;
    return v;
}

struct SweepRow {
    std::string name;
    MotReport report;
};

std::string format_delta_row(const std::string& label, const MotReport& d) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%-16s %+7.3f %+7.3f %+6.3f %+6.3f %+5d %+5d %+6.3f %+6.3f",
                  label.c_str(), d.mota, d.motp, d.mt, d.ml, d.idsw, d.frag, d.precision,
                  d.recall);
    return buf;
}

MotReport subtract_reports(const MotReport& a, const MotReport& b) {
    MotReport d;
    d.mota = b.mota - a.mota;
    d.motp = b.motp - a.motp;
    d.mt = b.mt - a.mt;
    d.ml = b.ml - a.ml;
    d.idsw = b.idsw - a.idsw;
    d.frag = b.frag - a.frag;
    d.precision = b.precision - a.precision;
    d.recall = b.recall - a.recall;
    d.f1 = b.f1 - a.f1;
    return d;
}

int cmd_gen(std::uint64_t seed, const std::string& style, int objects, int frames,
            const std::string& out) {
    SeedParams params;
    params.n_objects = objects;
    params.frame_count = frames;
    params.style = motion_style_from_name(style);
    SceneDescription scene = generate_seed_scene(seed, params);
    save_scene(scene, out);
    std::cout << "wrote " << out << " (" << scene.objects.size() << " objects, "
              << scene.frame_count << " frames)\n";
    return 0;
}

int cmd_render(const std::string& scene_path, const VariationSpec& variation,
               const std::string& out_dir, int jobs, int width_override) {
    SceneDescription scene = load_scene(scene_path);
    if (width_override > 0) {
        double scale = static_cast<double>(width_override) / scene.intrinsics.width;
        scene.intrinsics.fx *= scale;
        scene.intrinsics.fy *= scale;
        scene.intrinsics.cx *= scale;
        scene.intrinsics.cy *= scale;
        scene.intrinsics.width = width_override;
        scene.intrinsics.height = std::max(16, static_cast<int>(scene.intrinsics.height * scale));
        validate_scene(scene);
    }
    scene = apply_variation(scene, variation);

    fs::path root(out_dir);
    for (const char* pass : {"color", "depth", "instance", "flow"})
        fs::create_directories(root / pass);

    std::vector<InstanceImage> instances(scene.frame_count);
    auto start = std::chrono::steady_clock::now();
    parallel_for(scene.frame_count, jobs, [&](int t) {
        FrameBuffers fb = render_frame(scene, t);
        io::write_ppm((root / "color" / frame_name(t, "ppm")).string(), fb.color);
        io::write_pfm((root / "depth" / frame_name(t, "pfm")).string(), fb.depth);
        io::write_pgm16((root / "instance" / frame_name(t, "pgm")).string(), fb.instance);
        io::write_flo((root / "flow" / frame_name(t, "flo")).string(), fb.flow, fb.flow_valid);
        instances[t] = std::move(fb.instance);
    });
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    double fps = scene.frame_count / std::max(secs, 1e-9);

    EvalFilter filter;
    std::vector<GtBox2D> gt = annotate_sequence(scene, instances, filter);
    write_gt_files(gt, (root / "gt.txt").string(), (root / "gt.meta").string());

    json resolved{{"command", "render"},
                  {"scene", scene_path},
                  {"variation", to_json(variation)},
                  {"filter", to_json(filter)},
                  {"width_override", width_override},
                  {"frames", scene.frame_count}};
    write_json_file(resolved, root / "resolved_config.json");

    std::printf("rendered %d frames at %dx%d in %.2f s (%.2f FPS)\n", scene.frame_count,
                scene.intrinsics.width, scene.intrinsics.height, secs, fps);
    return 0;
}

int cmd_track_eval(const std::string& gt_path, const std::string& meta_path,
                   const std::string& det_path, const std::string& scene_path,
                   const DetectorModel& detector, const HyperParams& h, double iou_threshold,
                   const std::string& out_dir) {
    std::vector<GtBox2D> gt = read_gt_files(gt_path, meta_path);
    std::vector<Detection> dets;
    if (!det_path.empty()) {
        dets = read_detections(det_path);
    } else if (!scene_path.empty()) {
        SceneDescription scene = load_scene(scene_path);
        dets = simulate_detections(gt, detector, scene.intrinsics, scene.frame_count);
    } else {
        std::cerr << "track-eval: need --detections or --scene\n";
        return 1;
    }

    std::vector<Track> tracks = run_tracker(dets, h);
    MotReport report = evaluate(gt, tracks, iou_threshold);

    fs::path root(out_dir);
    fs::create_directories(root);
    write_tracks(tracks, (root / "tracks.txt").string());
    {
        std::ofstream f(root / "report.txt");
        f << report_table_header() << "\n" << format_report_row("sequence", report) << "\n";
    }
    write_json_file(to_json(report), root / "report.json");
    json resolved{{"command", "track_eval"},   {"gt", gt_path},
                  {"meta", meta_path},         {"detections", det_path},
                  {"scene", scene_path},       {"detector", to_json(detector)},
                  {"hyperparams", to_json(h)}, {"iou_threshold", iou_threshold}};
    write_json_file(resolved, root / "resolved_config.json");
    std::cout << report_table_header() << "\n" << format_report_row("sequence", report) << "\n";
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir, int jobs) {
    json cfg = load_json_file(config_path);
    SceneDescription base = load_scene(cfg.at("scene").get<std::string>());
    DetectorModel detector =
        cfg.contains("detector") ? detector_from_json(cfg["detector"]) : DetectorModel{};
    HyperParams h = cfg.contains("hyperparams") ? hyperparams_from_json(cfg["hyperparams"])
                                                : HyperParams{};
    EvalFilter filter = cfg.contains("filter") ? filter_from_json(cfg["filter"]) : EvalFilter{};
    double iou_threshold = cfg.value("iou_threshold", kDefaultMatchIou);

    std::vector<VariationSpec> variations;
    if (cfg.contains("variations")) {
        for (const json& jv : cfg["variations"]) variations.push_back(variation_from_json(jv));
    } else {
        for (VariationKind k : canonical_variations()) variations.push_back({k, {}});
    }

    std::vector<SweepRow> rows(variations.size());
    parallel_for(static_cast<int>(variations.size()), jobs, [&](int i) {
        SceneDescription varied = apply_variation(base, variations[i]);
        SequenceData seq = prepare_sequence(varied, filter, detector);
        rows[i] = {variation_name(variations[i].kind), track_and_evaluate(seq, h, iou_threshold)};
    });

    const MotReport* clone_report = nullptr;
    for (const SweepRow& r : rows)
        if (r.name == "clone") clone_report = &r.report;

    fs::path root(out_dir);
    fs::create_directories(root);
    std::ofstream rep(root / "report.txt");
    rep << report_table_header() << "\n";
    json jrows = json::array();
    for (const SweepRow& r : rows) {
        if (clone_report && r.name != "clone") {
            MotReport d = subtract_reports(*clone_report, r.report);
            rep << format_delta_row(r.name, d) << "\n";
            jrows.push_back({{"variation", r.name},
                             {"report", to_json(r.report)},
                             {"delta", to_json(d)}});
        } else {
            rep << format_report_row(r.name, r.report) << "\n";
            jrows.push_back({{"variation", r.name}, {"report", to_json(r.report)}});
        }
    }
    write_json_file(jrows, root / "report.json");

    json resolved{{"command", "sweep"},
                  {"scene", cfg.at("scene").get<std::string>()},
                  {"detector", to_json(detector)},
                  {"hyperparams", to_json(h)},
                  {"filter", to_json(filter)},
                  {"iou_threshold", iou_threshold}};
    json jvars = json::array();
    for (const VariationSpec& v : variations) jvars.push_back(to_json(v));
    resolved["variations"] = jvars;
    write_json_file(resolved, root / "resolved_config.json");
    std::cout << "sweep report written to " << (root / "report.txt").string() << "\n";
    return 0;
}

int cmd_calibrate(const std::string& config_path, const std::string& out_dir) {
    json cfg = load_json_file(config_path);
    GapProtocolConfig gp;
    if (cfg.contains("detector")) gp.detector = detector_from_json(cfg["detector"]);
    if (cfg.contains("filter")) gp.filter = filter_from_json(cfg["filter"]);
    if (cfg.contains("param_space")) gp.space = param_space_from_json(cfg["param_space"]);
    gp.budget = cfg.value("budget", 40);
    gp.strategy = cfg.value("strategy", std::string("smbo")) == "random"
                      ? SearchStrategy::kRandom
                      : SearchStrategy::kSmbo;
    gp.seed = cfg.value("seed", 1);
    gp.per_pair = cfg.value("per_pair", true);
    gp.iou_threshold = cfg.value("iou_threshold", kDefaultMatchIou);

    std::vector<std::pair<SceneDescription, SceneDescription>> pairs;
    std::vector<std::string> pair_labels;
    for (const json& jp : cfg.at("pairs")) {
        SceneDescription a = load_scene(jp.at("a").get<std::string>());
        SceneDescription b;
        std::string label_b;
        if (jp.contains("b_variation")) {
            VariationSpec v = variation_from_json(jp["b_variation"]);
            b = apply_variation(a, v);
            label_b = variation_name(v.kind);
        } else {
            b = load_scene(jp.at("b").get<std::string>());
            label_b = fs::path(jp.at("b").get<std::string>()).stem().string();
        }
        pair_labels.push_back(fs::path(jp.at("a").get<std::string>()).stem().string() + "/" +
                              label_b);
        pairs.emplace_back(std::move(a), std::move(b));
    }

    GapReport gap = run_gap_protocol(pairs, gp);

    fs::path root(out_dir);
    fs::create_directories(root);
    {
        std::ofstream rep(root / "report.txt");
        rep << report_table_header() << "\n";
        for (size_t i = 0; i < gap.pairs.size(); ++i) {
            rep << format_report_row(pair_labels[i] + " A", gap.pairs[i].report_a) << "\n";
            rep << format_report_row(pair_labels[i] + " B", gap.pairs[i].report_b) << "\n";
            rep << format_delta_row(pair_labels[i] + " d", gap.pairs[i].delta) << "\n";
        }
        rep << format_delta_row("AVG delta", gap.aggregate_delta) << "\n";
        char buf[64];
        std::snprintf(buf, sizeof(buf), "objective %.6f\n", gap.objective);
        rep << buf;
    }
    {
        std::ofstream hist(root / "history.csv");
        hist << "iteration";
        for (const ParamDef& d : gp.space) hist << "," << d.name;
        hist << ",objective\n";
        hist.precision(9);
        for (size_t i = 0; i < gap.history.size(); ++i) {
            hist << i;
            for (const ParamDef& d : gp.space) hist << "," << gap.history[i].params.at(d.name);
            hist << "," << gap.history[i].objective << "\n";
        }
    }
    {
        json jb = json::array();
        for (const ParamVector& p : gap.params_per_pair) jb.push_back(to_json(p));
        write_json_file(jb, root / "best_params.json");
    }
    json resolved{{"command", "calibrate"},
                  {"detector", to_json(gp.detector)},
                  {"filter", to_json(gp.filter)},
                  {"param_space", to_json(gp.space)},
                  {"budget", gp.budget},
                  {"strategy", gp.strategy == SearchStrategy::kSmbo ? "smbo" : "random"},
                  {"seed", gp.seed},
                  {"per_pair", gp.per_pair},
                  {"iou_threshold", gp.iou_threshold},
                  {"pairs", cfg.at("pairs")}};
    write_json_file(resolved, root / "resolved_config.json");
    std::printf("gap objective %.6f; report written to %s\n", gap.objective,
                (root / "report.txt").string().c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"synthetic driving-scene pipeline: generation, ground-truth rendering, "
                 "tracking, evaluation, calibration"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a procedural seed scene");
    std::uint64_t gen_seed = 1;
    std::string gen_style = "urban", gen_out = "scene.json";
    int gen_objects = 5, gen_frames = 100;
    gen->add_option("--seed", gen_seed, "random seed");
    gen->add_option("--style", gen_style, "urban|intersection|highway|static_camera");
    gen->add_option("--objects", gen_objects, "number of cars");
    gen->add_option("--frames", gen_frames, "frame count");
    gen->add_option("--out", gen_out, "output scene file")->required();

    // render
    auto* render = app.add_subcommand("render", "render buffers + ground truth for a scene");
    std::string r_scene, r_out, r_variation = "clone";
    double r_rot = 0.0, r_fog = 0.0, r_rain = 0.0;
    int r_jobs = 1, r_width = 0;
    render->add_option("--scene", r_scene, "scene file")->required();
    render->add_option("--variation", r_variation, "variation kind");
    render->add_option("--rotation-deg", r_rot, "custom rotation override");
    render->add_option("--fog-beta", r_fog, "fog extinction override (1/m)");
    render->add_option("--rain-intensity", r_rain, "rain intensity override");
    render->add_option("--width", r_width, "override render width (height scales)");
    render->add_option("--jobs", r_jobs, "parallel frame jobs");
    render->add_option("--out", r_out, "output directory")->required();

    // track-eval
    auto* te = app.add_subcommand("track-eval", "run the tracker and CLEAR MOT evaluation");
    std::string te_gt, te_meta, te_det, te_scene, te_out;
    DetectorModel te_model;
    HyperParams te_h;
    double te_iou = kDefaultMatchIou;
    te->add_option("--gt", te_gt, "ground-truth file")->required();
    te->add_option("--meta", te_meta, "ground-truth meta file")->required();
    te->add_option("--detections", te_det, "detection file (frame l t r b score)");
    te->add_option("--scene", te_scene, "scene file (simulate detections)");
    te->add_option("--det-seed", te_model.seed, "detector seed");
    te->add_option("--fp-rate", te_model.fp_rate, "false positives per frame");
    te->add_option("--score-threshold", te_h.score_threshold, "tracker score threshold");
    te->add_option("--entry-cost", te_h.entry_cost, "track entry cost");
    te->add_option("--exit-cost", te_h.exit_cost, "track exit cost");
    te->add_option("--max-skip", te_h.max_skip, "max transition frame gap");
    te->add_option("--skip-decay", te_h.skip_decay, "per-gap affinity decay");
    te->add_option("--min-iou", te_h.min_iou, "transition affinity floor");
    te->add_option("--detection-cost-scale", te_h.detection_cost_scale, "detection cost scale");
    te->add_option("--iou-threshold", te_iou, "evaluation match threshold");
    te->add_option("--out", te_out, "output directory")->required();

    // sweep
    auto* sweep = app.add_subcommand("sweep", "evaluate condition variations vs clone");
    std::string sw_config, sw_out;
    int sw_jobs = 1;
    sweep->add_option("--config", sw_config, "experiment config JSON")->required();
    sweep->add_option("--jobs", sw_jobs, "parallel variation jobs");
    sweep->add_option("--out", sw_out, "output directory")->required();

    // calibrate
    auto* cal = app.add_subcommand("calibrate", "run the gap-calibration protocol");
    std::string cal_config, cal_out;
    cal->add_option("--config", cal_config, "experiment config JSON")->required();
    cal->add_option("--out", cal_out, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (gen->parsed()) return cmd_gen(gen_seed, gen_style, gen_objects, gen_frames, gen_out);
        if (render->parsed())
            return cmd_render(r_scene, variation_from_cli(r_variation, r_rot, r_fog, r_rain),
                              r_out, r_jobs, r_width);
        if (te->parsed())
            return cmd_track_eval(te_gt, te_meta, te_det, te_scene, te_model, te_h, te_iou,
                                  te_out);
        if (sweep->parsed()) return cmd_sweep(sw_config, sw_out, sw_jobs);
        if (cal->parsed()) return cmd_calibrate(cal_config, cal_out);
    } catch (const SceneError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 1;
}
