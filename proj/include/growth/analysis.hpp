#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "growth/dataset.hpp"
#include "growth/detection.hpp"
#include "growth/report.hpp"

namespace growth {

struct YearWindow {
    double from = 0.0;
    double to = 0.0;
};

struct TransitionWindows {
    YearWindow pre;
    YearWindow post;
};

/// Whole-run configuration for the analyze pipeline. Defaults reproduce the
/// standard region matrix: developed regions tested against 1750,
/// less-developed against 1900, World against both.
struct AnalysisConfig {
    DetectionThresholds thresholds;
    FitWeighting weighting = FitWeighting::none;
    double claim_developed = TakeoffClaim::kDevelopedTakeoffYear;
    double claim_less_developed = TakeoffClaim::kLessDevelopedTakeoffYear;
    std::vector<std::string> region_filter; // empty = all regions
    std::map<std::string, YearWindow> fit_windows;        // per-region override
    std::map<std::string, TransitionWindows> transitions; // per-region override
    int max_breaks = 2;
    bool figures = true;
};

/// Built-in fit windows and transition windows for the Maddison regional
/// aggregates; unknown regions fall back to their full year span.
AnalysisConfig default_config();

/// Claims a region is tested against under `config` (1 or 2 entries).
std::vector<TakeoffClaim> claims_for_region(const std::string& region,
                                            const AnalysisConfig& config);

struct RegionResult {
    std::string region;
    HyperbolicFit window_fit;
    std::optional<double> window_fit_aic;
    SegmentedFit segmentation;
    std::vector<TakeoffVerdict> verdicts;
    std::vector<TransitionEntry> transitions;
    FigureSpec figure;
};

struct AnalysisResult {
    std::vector<RegionResult> regions;
};

/// ingest -> fit -> detect for every selected region; regions are processed
/// concurrently, results are ordered as in the dataset. Throws on the first
/// region whose configured window has too few observations.
AnalysisResult analyze_dataset(const RegionDataset& dataset,
                               const AnalysisConfig& config);

/// Writes the result bundle plus one SVG per region under out_dir.
void write_bundle(const AnalysisResult& result, const std::string& out_dir,
                  bool figures = true);

} // namespace growth
