#include <doctest.h>

#include <cmath>
#include <set>

#include "synmot/detsim.hpp"

using namespace synmot;

namespace {

GtBox2D gt_box(int frame, int id, Box2 box, double occ = 1.0, double trunc = 0.0,
               double vis = 1.0) {
    GtBox2D g;
    g.frame = frame;
    g.track_id = id;
    g.box = box;
    g.occupancy = occ;
    g.truncation = trunc;
    g.visibility = vis;
    return g;
}

DetectorModel ideal_model() {
    DetectorModel m;
    m.miss_base = 0.0;
    m.occlusion_weight = 0.0;
    m.truncation_weight = 0.0;
    m.fog_weight = 0.0;
    m.jitter_sigma = 0.0;
    m.fp_rate = 0.0;
    m.score_noise_sigma = 0.0;
    return m;
}

const CameraIntrinsics kIntr{725, 725, 621, 187.5, 1242, 375};

}  // namespace

TEST_CASE("miss probability matches hand-computed values and clamps to [0,1]") {
    DetectorModel m;  // defaults: 0.02 + 0.6(1-occ) + 0.4 trunc + 0.8(1-vis) + max(0,1-h/40)
    GtBox2D easy = gt_box(0, 1, {100, 100, 180, 180});  // height 80 >= 40
    CHECK(miss_probability(m, easy) == doctest::Approx(0.02).epsilon(1e-12));

    GtBox2D hard = gt_box(0, 1, {100, 100, 150, 120}, 0.5, 0.2, 0.75);  // height 20
    // 0.02 + 0.3 + 0.08 + 0.2 + 0.5 = 1.1 -> clamped
    CHECK(miss_probability(m, hard) == 1.0);

    GtBox2D mid = gt_box(0, 1, {100, 100, 180, 130}, 0.9, 0.1, 1.0);  // height 30
    CHECK(miss_probability(m, mid) ==
          doctest::Approx(0.02 + 0.06 + 0.04 + 0.25).epsilon(1e-12));
}

TEST_CASE("ideal detector reproduces ground truth exactly with score 1") {
    std::vector<GtBox2D> gt;
    for (int t = 0; t < 5; ++t) {
        gt.push_back(gt_box(t, 1, {100, 100, 200, 160}));
        gt.push_back(gt_box(t, 2, {400, 120, 520, 200}));
    }
    auto dets = simulate_detections(gt, ideal_model(), kIntr, 5);
    REQUIRE(dets.size() == gt.size());
    std::set<std::tuple<int, double, double>> want, got;
    for (const GtBox2D& g : gt) want.insert({g.frame, g.box.left, g.box.top});
    for (const Detection& d : dets) {
        got.insert({d.frame, d.box.left, d.box.top});
        CHECK(d.score == 1.0);
    }
    CHECK(want == got);
}

TEST_CASE("certain misses never produce a detection") {
    DetectorModel m;
    std::vector<GtBox2D> gt;
    // occupancy 0 and a 4-px box: 0.02 + 0.6 + 0.9 > 1, a guaranteed miss
    for (int t = 0; t < 200; ++t) gt.push_back(gt_box(t, 3, {100, 100, 110, 104}, 0.0));
    m.fp_rate = 0.0;
    auto dets = simulate_detections(gt, m, kIntr, 200);
    CHECK(dets.empty());
}

TEST_CASE("miss rate over many boxes converges to miss_base") {
    DetectorModel m = ideal_model();
    m.miss_base = 0.02;
    std::vector<GtBox2D> gt;
    for (int t = 0; t < 1000; ++t)
        for (int id = 1; id <= 10; ++id)
            gt.push_back(gt_box(t, id, {100, 100, 200, 160}));
    auto dets = simulate_detections(gt, m, kIntr, 1000);
    double miss_rate = 1.0 - static_cast<double>(dets.size()) / gt.size();
    CHECK(miss_rate == doctest::Approx(0.02).epsilon(0.25));  // 0.02 +- 0.005
    CHECK(std::abs(miss_rate - 0.02) < 0.005);
}

TEST_CASE("simulation is deterministic in the seed and sensitive to it") {
    std::vector<GtBox2D> gt;
    for (int t = 0; t < 50; ++t) gt.push_back(gt_box(t, 1, {100, 100, 200, 160}, 0.8));
    DetectorModel m;
    auto a = simulate_detections(gt, m, kIntr, 50);
    auto b = simulate_detections(gt, m, kIntr, 50);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].frame == b[i].frame);
        CHECK(a[i].box.left == b[i].box.left);
        CHECK(a[i].score == b[i].score);
    }
    m.seed = 2;
    auto c = simulate_detections(gt, m, kIntr, 50);
    bool differs = c.size() != a.size();
    for (size_t i = 0; !differs && i < a.size(); ++i)
        differs = a[i].box.left != c[i].box.left || a[i].score != c[i].score;
    CHECK(differs);
}

TEST_CASE("degrading ground truth only removes detections, never adds them") {
    // same stream keys, higher miss probability -> detected set shrinks
    std::vector<GtBox2D> clean, degraded;
    for (int t = 0; t < 300; ++t)
        for (int id = 1; id <= 5; ++id) {
            clean.push_back(gt_box(t, id, {100.0 + 30 * id, 100, 200.0 + 30 * id, 160}, 0.9));
            GtBox2D g = clean.back();
            g.occupancy = 0.55;
            g.visibility = 0.7;
            degraded.push_back(g);
        }
    DetectorModel m;
    m.fp_rate = 0.0;
    m.jitter_sigma = 0.0;
    auto da = simulate_detections(clean, m, kIntr, 300);
    auto db = simulate_detections(degraded, m, kIntr, 300);
    CHECK(db.size() < da.size());
    std::set<std::pair<int, double>> seen;
    for (const Detection& d : da) seen.insert({d.frame, d.box.left});
    for (const Detection& d : db) CHECK(seen.count({d.frame, d.box.left}) == 1);
}

TEST_CASE("without false positives every detection overlaps its ground truth") {
    std::vector<GtBox2D> gt;
    for (int t = 0; t < 100; ++t) gt.push_back(gt_box(t, 1, {300, 100, 420, 220}, 0.9));
    DetectorModel m;
    m.fp_rate = 0.0;
    auto dets = simulate_detections(gt, m, kIntr, 100);
    CHECK(dets.size() > 50);
    for (const Detection& d : dets) {
        double best = 0.0;
        for (const GtBox2D& g : gt)
            if (g.frame == d.frame) best = std::max(best, iou(g.box, d.box));
        CHECK(best > 0.3);
    }
}

TEST_CASE("false positives follow the configured rate and stay inside the image") {
    DetectorModel m;
    m.fp_rate = 2.0;
    auto dets = simulate_detections({}, m, kIntr, 500);
    double rate = static_cast<double>(dets.size()) / 500.0;
    CHECK(std::abs(rate - 2.0) < 0.2);
    for (const Detection& d : dets) {
        CHECK(d.box.left >= 0.0);
        CHECK(d.box.top >= 0.0);
        CHECK(d.box.right <= kIntr.width);
        CHECK(d.box.bottom <= kIntr.height);
        CHECK(d.box.right > d.box.left);
        CHECK(d.box.bottom > d.box.top);
        CHECK(d.score >= 0.0);
        CHECK(d.score <= 1.0);
    }
    // zero rate -> none at all
    m.fp_rate = 0.0;
    CHECK(simulate_detections({}, m, kIntr, 500).empty());
}

TEST_CASE("detections are sorted by frame then descending score") {
    std::vector<GtBox2D> gt;
    for (int t = 0; t < 40; ++t)
        for (int id = 1; id <= 4; ++id)
            gt.push_back(gt_box(t, id, {50.0 * id, 100, 50.0 * id + 90, 170}, 0.7 + 0.05 * id));
    DetectorModel m;
    m.fp_rate = 1.0;
    auto dets = simulate_detections(gt, m, kIntr, 40);
    for (size_t i = 1; i < dets.size(); ++i) {
        CHECK(dets[i - 1].frame <= dets[i].frame);
        if (dets[i - 1].frame == dets[i].frame) CHECK(dets[i - 1].score >= dets[i].score);
    }
}
