#pragma once

// CLEAR MOT evaluation: frame-by-frame correspondence with match
// persistence followed by optimal bipartite assignment on IoU, ignore
// regions that absorb would-be false positives, and the usual metric
// bundle (MOTA, MOTP, MT/ML, ID switches, fragmentation, P/R/F1).

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "synmot/annotate.hpp"
#include "synmot/math.hpp"
#include "synmot/track.hpp"

namespace synmot {

inline constexpr double kDefaultMatchIou = 0.5;

struct MotReport {
    double mota = 0.0;
    double motp = 0.0;
    double mt = 0.0;
    double ml = 0.0;
    int idsw = 0;
    int frag = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    // Raw tallies; aggregation sums these and recomputes the ratios.
    long tp = 0, fp = 0, fn = 0;
    long total_gt = 0;       // non-ignored GT boxes
    double sum_match_iou = 0.0;
    int trajectories = 0;    // GT trajectories with at least one scored box
    int mt_count = 0, ml_count = 0;

    void recompute() {
        mota = total_gt > 0 ? 1.0 - static_cast<double>(fn + fp + idsw) / total_gt : 0.0;
        motp = tp > 0 ? sum_match_iou / tp : 0.0;
        precision = (tp + fp) > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
        recall = (tp + fn) > 0 ? static_cast<double>(tp) / (tp + fn) : 0.0;
        f1 = (precision + recall) > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
        mt = trajectories > 0 ? static_cast<double>(mt_count) / trajectories : 0.0;
        ml = trajectories > 0 ? static_cast<double>(ml_count) / trajectories : 0.0;
    }
};

namespace detail {

// Hungarian algorithm (potentials formulation), minimizing total cost.
// cost is n x m with n <= m; returns for each row its assigned column.
inline std::vector<int> hungarian_min(const std::vector<std::vector<double>>& cost) {
    int n = static_cast<int>(cost.size());
    if (n == 0) return {};
    int m = static_cast<int>(cost[0].size());
    std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
    std::vector<int> p(m + 1, 0), way(m + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(m + 1, std::numeric_limits<double>::infinity());
        std::vector<char> used(m + 1, 0);
        do {
            used[j0] = 1;
            int i0 = p[j0], j1 = -1;
            double delta = std::numeric_limits<double>::infinity();
            for (int j = 1; j <= m; ++j) {
                if (used[j]) continue;
                double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> row_to_col(n, -1);
    for (int j = 1; j <= m; ++j)
        if (p[j] > 0) row_to_col[p[j] - 1] = j - 1;
    return row_to_col;
}

// Maximum-total-IoU assignment subject to IoU >= threshold. Returns
// (row, col) pairs. Pairs below threshold are never produced.
inline std::vector<std::pair<int, int>> max_iou_assignment(
    const std::vector<std::vector<double>>& iou_matrix, double threshold) {
    int n = static_cast<int>(iou_matrix.size());
    if (n == 0) return {};
    int m = static_cast<int>(iou_matrix[0].size());
    if (m == 0) return {};
    bool transposed = n > m;
    int rows = transposed ? m : n, cols = transposed ? n : m;
    std::vector<std::vector<double>> cost(rows, std::vector<double>(cols));
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            double v = transposed ? iou_matrix[j][i] : iou_matrix[i][j];
            cost[i][j] = v >= threshold ? -v : 0.0;
        }
    std::vector<int> assign = hungarian_min(cost);
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < rows; ++i) {
        int j = assign[i];
        if (j < 0) continue;
        int r = transposed ? j : i, c = transposed ? i : j;
        if (iou_matrix[r][c] >= threshold) out.emplace_back(r, c);
    }
    std::sort(out.begin(), out.end());
    return out;
}

struct FrameGt {
    int track_id;
    Box2 box;
    bool ignore;
};
struct FrameHyp {
    int track_id;
    Box2 box;
};

struct FrameOutcome {
    std::vector<std::pair<int, int>> matches;  // (gt track_id, hyp track_id)
    std::vector<double> match_ious;
    int fp = 0;
    int fn = 0;
    int absorbed = 0;
};

}  // namespace detail

// One frame of CLEAR MOT correspondence. `prior` maps GT track id to
// the hypothesis id it was last matched with; kept pairs survive as
// long as they still overlap at the threshold, new pairs are formed by
// maximum-total-IoU assignment, then unmatched hypotheses overlapping an
// ignored GT box (one per ignored box, greedy by IoU) are discarded.
inline detail::FrameOutcome match_frame(const std::vector<detail::FrameGt>& gts,
                                        const std::vector<detail::FrameHyp>& hyps,
                                        std::map<int, int>& prior,
                                        double iou_threshold = kDefaultMatchIou) {
    using namespace detail;
    FrameOutcome out;
    std::vector<bool> gt_used(gts.size(), false), hyp_used(hyps.size(), false);

    // (1) persistence
    for (size_t gi = 0; gi < gts.size(); ++gi) {
        if (gts[gi].ignore) continue;
        auto it = prior.find(gts[gi].track_id);
        if (it == prior.end()) continue;
        for (size_t hi = 0; hi < hyps.size(); ++hi) {
            if (hyp_used[hi] || hyps[hi].track_id != it->second) continue;
            double v = iou(gts[gi].box, hyps[hi].box);
            if (v >= iou_threshold) {
                gt_used[gi] = true;
                hyp_used[hi] = true;
                out.matches.emplace_back(gts[gi].track_id, hyps[hi].track_id);
                out.match_ious.push_back(v);
            }
            break;
        }
    }

    // (2) optimal assignment on the rest
    std::vector<int> free_gt, free_hyp;
    for (size_t gi = 0; gi < gts.size(); ++gi)
        if (!gt_used[gi] && !gts[gi].ignore) free_gt.push_back(static_cast<int>(gi));
    for (size_t hi = 0; hi < hyps.size(); ++hi)
        if (!hyp_used[hi]) free_hyp.push_back(static_cast<int>(hi));
    if (!free_gt.empty() && !free_hyp.empty()) {
        std::vector<std::vector<double>> ious(free_gt.size(),
                                              std::vector<double>(free_hyp.size()));
        for (size_t a = 0; a < free_gt.size(); ++a)
            for (size_t b = 0; b < free_hyp.size(); ++b)
                ious[a][b] = iou(gts[free_gt[a]].box, hyps[free_hyp[b]].box);
        for (auto [a, b] : detail::max_iou_assignment(ious, iou_threshold)) {
            int gi = free_gt[a], hi = free_hyp[b];
            gt_used[gi] = true;
            hyp_used[hi] = true;
            out.matches.emplace_back(gts[gi].track_id, hyps[hi].track_id);
            out.match_ious.push_back(ious[a][b]);
        }
    }

    // (3) ignored GT absorb leftover hypotheses, one each, greedy by IoU
    std::vector<std::tuple<double, int, int>> candidates;  // (iou, gt, hyp)
    for (size_t gi = 0; gi < gts.size(); ++gi) {
        if (!gts[gi].ignore) continue;
        for (size_t hi = 0; hi < hyps.size(); ++hi) {
            if (hyp_used[hi]) continue;
            double v = iou(gts[gi].box, hyps[hi].box);
            if (v >= iou_threshold)
                candidates.emplace_back(v, static_cast<int>(gi), static_cast<int>(hi));
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
        if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) > std::get<0>(b);
        if (std::get<1>(a) != std::get<1>(b)) return std::get<1>(a) < std::get<1>(b);
        return std::get<2>(a) < std::get<2>(b);
    });
    std::vector<bool> ignore_used(gts.size(), false);
    for (const auto& [v, gi, hi] : candidates) {
        if (ignore_used[gi] || hyp_used[hi]) continue;
        ignore_used[gi] = true;
        hyp_used[hi] = true;
        ++out.absorbed;
    }

    for (size_t hi = 0; hi < hyps.size(); ++hi)
        if (!hyp_used[hi]) ++out.fp;
    for (size_t gi = 0; gi < gts.size(); ++gi)
        if (!gts[gi].ignore && !gt_used[gi]) ++out.fn;
    for (const auto& [gt_id, hyp_id] : out.matches) prior[gt_id] = hyp_id;
    return out;
}

// Full-sequence CLEAR MOT evaluation.
inline MotReport evaluate(const std::vector<GtBox2D>& gt, const std::vector<Track>& tracks,
                          double iou_threshold = kDefaultMatchIou) {
    using namespace detail;
    std::map<int, std::vector<FrameGt>> gt_by_frame;
    int max_frame = -1;
    for (const GtBox2D& r : gt) {
        gt_by_frame[r.frame].push_back({r.track_id, r.box, r.ignore});
        max_frame = std::max(max_frame, r.frame);
    }
    std::map<int, std::vector<FrameHyp>> hyp_by_frame;
    for (const Track& tr : tracks)
        for (const TrackBox& b : tr.boxes) {
            hyp_by_frame[b.frame].push_back({tr.id, b.box});
            max_frame = std::max(max_frame, b.frame);
        }

    MotReport rep;
    std::map<int, int> prior;
    // Per GT trajectory: scored frames in order, with matched hyp id or -1.
    std::map<int, std::vector<int>> traj_matches;
    std::map<int, int> last_matched_id;

    static const std::vector<FrameGt> no_gt;
    static const std::vector<FrameHyp> no_hyp;
    for (int t = 0; t <= max_frame; ++t) {
        auto git = gt_by_frame.find(t);
        auto hit = hyp_by_frame.find(t);
        const auto& gts = git != gt_by_frame.end() ? git->second : no_gt;
        const auto& hyps = hit != hyp_by_frame.end() ? hit->second : no_hyp;
        FrameOutcome oc = match_frame(gts, hyps, prior, iou_threshold);

        rep.fp += oc.fp;
        rep.fn += oc.fn;
        rep.tp += static_cast<long>(oc.matches.size());
        for (double v : oc.match_ious) rep.sum_match_iou += v;

        std::map<int, int> matched_now;
        for (const auto& [gt_id, hyp_id] : oc.matches) matched_now[gt_id] = hyp_id;
        for (const FrameGt& g : gts) {
            if (g.ignore) continue;
            ++rep.total_gt;
            auto mit = matched_now.find(g.track_id);
            int hyp_id = mit != matched_now.end() ? mit->second : -1;
            traj_matches[g.track_id].push_back(hyp_id);
            if (hyp_id >= 0) {
                auto lit = last_matched_id.find(g.track_id);
                if (lit != last_matched_id.end() && lit->second != hyp_id) ++rep.idsw;
                last_matched_id[g.track_id] = hyp_id;
            }
        }
    }

    for (const auto& [traj_id, states] : traj_matches) {
        ++rep.trajectories;
        int matched = 0;
        bool seen_match = false;
        bool in_gap = false;
        for (int s : states) {
            if (s >= 0) {
                ++matched;
                if (in_gap && seen_match) ++rep.frag;
                seen_match = true;
                in_gap = false;
            } else {
                in_gap = true;
            }
        }
        double frac = static_cast<double>(matched) / states.size();
        if (frac >= 0.8) ++rep.mt_count;
        if (frac <= 0.2) ++rep.ml_count;
    }
    rep.recompute();
    return rep;
}

// Micro-aggregation: sum raw tallies, recompute ratios.
inline MotReport aggregate_reports(const std::vector<MotReport>& reports) {
    MotReport agg;
    for (const MotReport& r : reports) {
        agg.tp += r.tp;
        agg.fp += r.fp;
        agg.fn += r.fn;
        agg.idsw += r.idsw;
        agg.frag += r.frag;
        agg.total_gt += r.total_gt;
        agg.sum_match_iou += r.sum_match_iou;
        agg.trajectories += r.trajectories;
        agg.mt_count += r.mt_count;
        agg.ml_count += r.ml_count;
    }
    agg.recompute();
    return agg;
}

// Aligned table, columns in the reporting order MOTA MOTP MT ML I F P R.
inline std::string format_report_row(const std::string& label, const MotReport& r) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%-16s %7.3f %7.3f %6.3f %6.3f %5d %5d %6.3f %6.3f",
                  label.c_str(), r.mota, r.motp, r.mt, r.ml, r.idsw, r.frag, r.precision,
                  r.recall);
    return buf;
}

inline std::string report_table_header() {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%-16s %7s %7s %6s %6s %5s %5s %6s %6s", "sequence", "MOTA",
                  "MOTP", "MT", "ML", "I", "F", "P", "R");
    return buf;
}

}  // namespace synmot
