#pragma once

// Real-vs-virtual gap protocol: a scalar objective over paired sequence
// evaluations (joint MOTA minus the normalized MOTA gap) and a budgeted
// black-box hyperparameter search (quasi-random and density-ratio SMBO)
// driving the tracker over scene pairs with one fixed parameter vector.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "synmot/motmetrics.hpp"
#include "synmot/pipeline.hpp"
#include "synmot/rng.hpp"

namespace synmot {

inline constexpr double kGapEpsilon = 1e-3;

// O = sum_i (MOTA_Ai + MOTA_Bi) - sum_i |MOTA_Ai - MOTA_Bi| / (eps + D),
// where D is the mean absolute pairwise difference over the other
// normalized metrics (MOTP, MT, ML, P, R, and IDSW/FRAG divided by the
// pair's GT count).
inline double gap_objective(const std::vector<std::pair<MotReport, MotReport>>& pairs) {
    if (pairs.empty()) throw std::invalid_argument("gap_objective: no pairs");
    double joint = 0.0, mota_gap = 0.0;
    std::vector<double> metric_gaps(7, 0.0);
    for (const auto& [a, b] : pairs) {
        joint += a.mota + b.mota;
        mota_gap += std::abs(a.mota - b.mota);
        double gt_norm = std::max<long>(1, std::max(a.total_gt, b.total_gt));
        metric_gaps[0] += std::abs(a.motp - b.motp);
        metric_gaps[1] += std::abs(a.mt - b.mt);
        metric_gaps[2] += std::abs(a.ml - b.ml);
        metric_gaps[3] += std::abs(a.precision - b.precision);
        metric_gaps[4] += std::abs(a.recall - b.recall);
        metric_gaps[5] += std::abs(a.idsw - b.idsw) / gt_norm;
        metric_gaps[6] += std::abs(a.frag - b.frag) / gt_norm;
    }
    double deviation = 0.0;
    for (double g : metric_gaps) deviation += g / pairs.size();
    deviation /= metric_gaps.size();
    return joint - mota_gap / (kGapEpsilon + deviation);
}

// ---------------------------------------------------------------------------
// Hyperparameter search

enum class ParamKind { kLinear, kLog, kInteger };

struct ParamDef {
    std::string name;
    ParamKind kind = ParamKind::kLinear;
    double lo = 0.0;
    double hi = 1.0;
};

using ParamSpace = std::vector<ParamDef>;
using ParamVector = std::map<std::string, double>;

// Search space spanning the tracker's hyperparameters.
inline ParamSpace default_param_space() {
    return {{"score_threshold", ParamKind::kLinear, 0.0, 1.0},
            {"entry_cost", ParamKind::kLog, 1e-2, 10.0},
            {"exit_cost", ParamKind::kLog, 1e-2, 10.0},
            {"max_skip", ParamKind::kInteger, 1.0, 5.0},
            {"skip_decay", ParamKind::kLinear, 0.5, 1.0},
            {"min_iou", ParamKind::kLinear, 0.1, 0.7},
            {"detection_cost_scale", ParamKind::kLog, 0.1, 10.0}};
}

inline HyperParams hyperparams_from_vector(const ParamVector& v) {
    HyperParams h;
    auto get = [&](const std::string& name, double fallback) {
        auto it = v.find(name);
        return it == v.end() ? fallback : it->second;
    };
    h.score_threshold = get("score_threshold", h.score_threshold);
    h.entry_cost = get("entry_cost", h.entry_cost);
    h.exit_cost = get("exit_cost", h.exit_cost);
    h.max_skip = static_cast<int>(std::lround(get("max_skip", h.max_skip)));
    h.skip_decay = get("skip_decay", h.skip_decay);
    h.min_iou = get("min_iou", h.min_iou);
    h.detection_cost_scale = get("detection_cost_scale", h.detection_cost_scale);
    return h;
}

enum class SearchStrategy { kRandom, kSmbo };

struct EvalRecord {
    ParamVector params;
    double objective;
};

struct OptimizeResult {
    ParamVector best;
    double best_objective = -std::numeric_limits<double>::infinity();
    std::vector<EvalRecord> history;
};

namespace detail {

inline double sample_dim(const ParamDef& d, double u) {
    switch (d.kind) {
        case ParamKind::kLinear: return d.lo + (d.hi - d.lo) * u;
        case ParamKind::kLog: return std::exp(std::log(d.lo) + (std::log(d.hi) - std::log(d.lo)) * u);
        case ParamKind::kInteger: {
            double v = d.lo + (d.hi - d.lo + 1.0) * u;
            return std::clamp(std::floor(v), d.lo, d.hi);
        }
    }
    return d.lo;
}

inline double to_unit(const ParamDef& d, double v) {
    if (d.kind == ParamKind::kLog)
        return (std::log(v) - std::log(d.lo)) / (std::log(d.hi) - std::log(d.lo));
    return (v - d.lo) / (d.hi - d.lo);
}

inline ParamVector random_point(const ParamSpace& space, std::uint64_t seed, std::uint64_t iter) {
    ParamVector p;
    for (size_t dim = 0; dim < space.size(); ++dim) {
        RandomStream rng(seed, Role::kOptimizer, iter, dim);
        p[space[dim].name] = sample_dim(space[dim], rng.uniform());
    }
    return p;
}

// Per-dimension Gaussian KDE in unit coordinates, mixed with a uniform
// prior over [0,1] so proposals never lose global support.
struct Kde {
    std::vector<double> centers;
    double bandwidth = 0.1;
    double uniform_weight = 0.0;

    double density(double x) const {
        double acc = 0.0;
        for (double c : centers) {
            double d = (x - c) / bandwidth;
            acc += std::exp(-0.5 * d * d);
        }
        double kde = acc / (centers.size() * bandwidth * 2.5066282746310002);
        return (1.0 - uniform_weight) * kde + uniform_weight + 1e-12;
    }
};

inline Kde fit_kde(const std::vector<double>& xs) {
    Kde k;
    k.centers = xs;
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= xs.size();
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    double sd = xs.size() > 1 ? std::sqrt(var / (xs.size() - 1)) : 0.25;
    k.bandwidth = std::max(1.06 * sd * std::pow(static_cast<double>(xs.size()), -0.2), 0.005);
    return k;
}

}  // namespace detail

// Budgeted maximization of a black-box objective. kRandom draws
// quasi-uniform points (log-space for log dimensions). kSmbo seeds with
// max(10, budget/5) random points, then proposes candidates from a
// kernel-density model of the best quartile, scored by the good/bad
// density ratio. Deterministic given the seed; ties keep the first seen.
inline OptimizeResult optimize(const std::function<double(const ParamVector&)>& objective,
                               const ParamSpace& space, int budget, SearchStrategy strategy,
                               std::uint64_t seed) {
    if (budget < 1) throw std::invalid_argument("optimize: budget must be >= 1");
    OptimizeResult result;
    const int n_init = std::max(10, budget / 5);
    const int n_candidates = 24;

    for (int iter = 0; iter < budget; ++iter) {
        ParamVector p;
        if (strategy == SearchStrategy::kRandom || iter < n_init ||
            result.history.size() < 4 || (iter - n_init) % 5 == 4) {
            // every fifth model-based iteration stays a uniform draw, so the
            // search keeps global coverage even if the density model stalls
            p = detail::random_point(space, seed, iter);
        } else {
            // Split observations: "good" = top quartile by objective.
            std::vector<size_t> order(result.history.size());
            for (size_t i = 0; i < order.size(); ++i) order[i] = i;
            std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
                return result.history[a].objective > result.history[b].objective;
            });
            size_t n_good = std::max<size_t>(2, order.size() / 6);
            std::vector<detail::Kde> good_kde(space.size()), bad_kde(space.size());
            for (size_t dim = 0; dim < space.size(); ++dim) {
                std::vector<double> good_x, bad_x;
                for (size_t r = 0; r < order.size(); ++r) {
                    double x = detail::to_unit(
                        space[dim], result.history[order[r]].params.at(space[dim].name));
                    (r < n_good ? good_x : bad_x).push_back(x);
                }
                good_kde[dim] = detail::fit_kde(good_x);
                good_kde[dim].uniform_weight = 0.25;
                bad_kde[dim] = detail::fit_kde(bad_x.empty() ? good_x : bad_x);
            }
            double best_score = -std::numeric_limits<double>::infinity();
            for (int c = 0; c < n_candidates; ++c) {
                ParamVector cand;
                double score = 0.0;
                for (size_t dim = 0; dim < space.size(); ++dim) {
                    RandomStream rng(seed, Role::kOptimizer,
                                     0x10000ull + static_cast<std::uint64_t>(iter) * 64 + c, dim);
                    const detail::Kde& gk = good_kde[dim];
                    double x;
                    if (rng.uniform() < gk.uniform_weight) {
                        x = rng.uniform();
                    } else {
                        size_t pick = static_cast<size_t>(rng.uniform_int(
                            0, static_cast<std::int64_t>(gk.centers.size()) - 1));
                        x = std::clamp(gk.centers[pick] + rng.normal(0.0, gk.bandwidth), 0.0, 1.0);
                    }
                    score += std::log(gk.density(x)) - std::log(bad_kde[dim].density(x));
                    cand[space[dim].name] = detail::sample_dim(space[dim], x);
                    if (space[dim].kind == ParamKind::kInteger)
                        cand[space[dim].name] = std::clamp(
                            std::round(space[dim].lo + (space[dim].hi - space[dim].lo) * x),
                            space[dim].lo, space[dim].hi);
                }
                if (score > best_score) {
                    best_score = score;
                    p = cand;
                }
            }
        }
        double obj;
        try {
            obj = objective(p);
        } catch (const std::exception& e) {
            std::string msg = "objective evaluation failed at {";
            for (const auto& [k, v] : p) msg += k + "=" + std::to_string(v) + " ";
            throw std::runtime_error(msg + "}: " + e.what());
        }
        result.history.push_back({p, obj});
        if (obj > result.best_objective) {
            result.best_objective = obj;
            result.best = p;
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// Gap protocol

struct PairDelta {
    MotReport report_a, report_b;
    MotReport delta;  // B - A, stored field-wise in the metric slots
};

struct GapReport {
    std::vector<PairDelta> pairs;
    MotReport aggregate_delta;
    double objective = 0.0;
    std::vector<ParamVector> params_per_pair;  // one entry when global
    bool per_pair = true;
    std::vector<EvalRecord> history;
};

namespace detail {

inline MotReport report_delta(const MotReport& a, const MotReport& b) {
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

}  // namespace detail

struct GapProtocolConfig {
    EvalFilter filter;
    DetectorModel detector;
    ParamSpace space = default_param_space();
    int budget = 40;
    SearchStrategy strategy = SearchStrategy::kSmbo;
    std::uint64_t seed = 1;
    bool per_pair = true;
    double iou_threshold = kDefaultMatchIou;
};

// Runs the full protocol over (A, B) scene pairs: each candidate
// parameter vector is applied unchanged to every sequence, scored by
// gap_objective; the report at the optimum carries the search history.
inline GapReport run_gap_protocol(
    const std::vector<std::pair<SceneDescription, SceneDescription>>& scene_pairs,
    const GapProtocolConfig& cfg) {
    if (scene_pairs.empty()) throw std::invalid_argument("run_gap_protocol: no pairs");
    std::vector<std::pair<SequenceData, SequenceData>> prepared;
    prepared.reserve(scene_pairs.size());
    for (const auto& [a, b] : scene_pairs)
        prepared.emplace_back(prepare_sequence(a, cfg.filter, cfg.detector),
                              prepare_sequence(b, cfg.filter, cfg.detector));

    GapReport gap;
    gap.per_pair = cfg.per_pair;

    auto eval_pairs = [&](const HyperParams& h, size_t only_pair,
                          bool all) -> std::vector<std::pair<MotReport, MotReport>> {
        std::vector<std::pair<MotReport, MotReport>> reports;
        for (size_t i = 0; i < prepared.size(); ++i) {
            if (!all && i != only_pair) continue;
            reports.emplace_back(track_and_evaluate(prepared[i].first, h, cfg.iou_threshold),
                                 track_and_evaluate(prepared[i].second, h, cfg.iou_threshold));
        }
        return reports;
    };

    std::vector<std::pair<MotReport, MotReport>> final_reports;
    if (cfg.per_pair) {
        for (size_t i = 0; i < prepared.size(); ++i) {
            auto obj = [&](const ParamVector& p) {
                return gap_objective(eval_pairs(hyperparams_from_vector(p), i, false));
            };
            OptimizeResult r = optimize(obj, cfg.space, cfg.budget, cfg.strategy,
                                        cfg.seed + i * 7919);
            gap.params_per_pair.push_back(r.best);
            for (auto& rec : r.history) gap.history.push_back(rec);
            auto reports = eval_pairs(hyperparams_from_vector(r.best), i, false);
            final_reports.push_back(reports.front());
            gap.objective += r.best_objective;
        }
    } else {
        auto obj = [&](const ParamVector& p) {
            return gap_objective(eval_pairs(hyperparams_from_vector(p), 0, true));
        };
        OptimizeResult r = optimize(obj, cfg.space, cfg.budget, cfg.strategy, cfg.seed);
        gap.params_per_pair.push_back(r.best);
        gap.history = r.history;
        final_reports = eval_pairs(hyperparams_from_vector(r.best), 0, true);
        gap.objective = r.best_objective;
    }

    std::vector<MotReport> deltas;
    for (const auto& [ra, rb] : final_reports) {
        PairDelta pd;
        pd.report_a = ra;
        pd.report_b = rb;
        pd.delta = detail::report_delta(ra, rb);
        deltas.push_back(pd.delta);
        gap.pairs.push_back(std::move(pd));
    }
    MotReport agg;
    for (const MotReport& d : deltas) {
        agg.mota += d.mota;
        agg.motp += d.motp;
        agg.mt += d.mt;
        agg.ml += d.ml;
        agg.idsw += d.idsw;
        agg.frag += d.frag;
        agg.precision += d.precision;
        agg.recall += d.recall;
    }
    double n = static_cast<double>(deltas.size());
    agg.mota /= n;
    agg.motp /= n;
    agg.mt /= n;
    agg.ml /= n;
    agg.precision /= n;
    agg.recall /= n;
    gap.aggregate_delta = agg;
    return gap;
}

}  // namespace synmot
