#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "growth/detection.hpp"

namespace growth {

enum class YScale { log10, linear, reciprocal };

// Plot-area margins inside the canvas, in pixels.
inline constexpr int kFigureMarginLeft = 70;
inline constexpr int kFigureMarginRight = 30;
inline constexpr int kFigureMarginTop = 50;
inline constexpr int kFigureMarginBottom = 50;

/// One figure: observations, fitted curves, and labeled vertical markers.
struct FigureSpec {
    std::string title;
    TimeSeries series;
    std::vector<std::variant<HyperbolicFit, SegmentedFit>> overlays;
    std::vector<std::pair<double, std::string>> markers;
    YScale y_scale = YScale::log10;
    int width = 900;
    int height = 600;
};

/// Deterministic SVG 1.1 document: one point marker per observation, one
/// path per overlay (>= 200 samples, clipped at 0.99 * singularity), one
/// dashed line + label per marker. Identical specs yield identical bytes.
std::string render_figure(const FigureSpec& spec);

/// Takeoff verdict together with the region it belongs to.
struct VerdictEntry {
    std::string region;
    TakeoffVerdict verdict;
};

struct FitEntry {
    std::string region;
    HyperbolicFit fit;
    std::string model = "hyperbolic";
    std::optional<double> aic; // log-space AIC when computable
};

struct TransitionEntry {
    std::string region;
    TransitionClass transition;
    double pre_from = 0.0, pre_to = 0.0;
    double post_from = 0.0, post_to = 0.0;
};

struct SegmentationEntry {
    std::string region;
    SegmentedFit segmentation;
};

nlohmann::json to_json(const VerdictEntry& entry);
nlohmann::json to_json(const FitEntry& entry);
nlohmann::json to_json(const TransitionEntry& entry);
nlohmann::json to_json(const SegmentationEntry& entry);
VerdictEntry verdict_entry_from_json(const nlohmann::json& j);

std::string verdict_name(Verdict v);
std::string shift_name(TrajectoryShift s);
std::string region_class_name(RegionClass c);

/// Writes verdicts.json, fits.json, transitions.json and summary.csv under
/// `out_dir` (created if missing). Stable key order, LF line endings.
void write_results(const std::string& out_dir,
                   const std::vector<VerdictEntry>& verdicts,
                   const std::vector<FitEntry>& fits,
                   const std::vector<TransitionEntry>& transitions);

std::string summary_csv(const std::vector<VerdictEntry>& verdicts);

} // namespace growth
