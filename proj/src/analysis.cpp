#include "growth/analysis.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <set>

namespace growth {

namespace {

const std::set<std::string> kDevelopedRegions = {
    "Western Europe", "Eastern Europe", "Former USSR"};
const std::set<std::string> kLessDevelopedRegions = {"Asia", "Africa",
                                                     "Latin America"};

std::string region_slug(const std::string& region) {
    std::string slug;
    for (char c : region) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            slug.push_back(static_cast<char>(
                std::tolower(static_cast<unsigned char>(c))));
        } else if (!slug.empty() && slug.back() != '_') {
            slug.push_back('_');
        }
    }
    while (!slug.empty() && slug.back() == '_') slug.pop_back();
    return slug.empty() ? "region" : slug;
}

} // namespace

AnalysisConfig default_config() {
    AnalysisConfig config;
    // Null-model fit windows bracket the claimed takeoffs while keeping the
    // documented late-20th-century diversions and Africa's 1820 acceleration
    // out of the single-hyperbola fit.
    for (const char* region :
         {"World", "Western Europe", "Eastern Europe", "Former USSR", "Asia"}) {
        config.fit_windows[region] = {1000.0, 1955.0};
    }
    config.fit_windows["Africa"] = {1.0, 1820.0};
    config.fit_windows["Latin America"] = {1600.0, 1870.0};
    // Latin America's verdict at 1900 is read against its pre-1870
    // trajectory, so its transition windows are fixed rather than derived
    // from the free breakpoint search.
    config.transitions["Latin America"] = {{1600.0, 1870.0}, {1871.0, 2100.0}};
    return config;
}

std::vector<TakeoffClaim> claims_for_region(const std::string& region,
                                            const AnalysisConfig& config) {
    const TakeoffClaim developed = TakeoffClaim::developed(config.claim_developed);
    const TakeoffClaim less =
        TakeoffClaim::less_developed(config.claim_less_developed);
    if (kDevelopedRegions.count(region)) return {developed};
    if (kLessDevelopedRegions.count(region)) return {less};
    // World (and any unclassified region) is tested against both claims.
    return {developed, less};
}

namespace {

RegionResult analyze_region(const TimeSeries& series,
                            const AnalysisConfig& config) {
    RegionResult result;
    result.region = series.region();

    YearWindow fit_window{series.first_year(), series.last_year()};
    if (auto it = config.fit_windows.find(series.region());
        it != config.fit_windows.end()) {
        fit_window = it->second;
    }

    const TimeSeries windowed = window(series, fit_window.from, fit_window.to);
    result.window_fit = fit_hyperbolic(windowed, config.weighting);
    try {
        result.window_fit_aic =
            fit_model(windowed, ModelKind::hyperbolic()).aic;
    } catch (const Error&) {
        result.window_fit_aic.reset();
    }

    // The free breakpoint search starts at the null window but runs to the
    // end of the data; late diversions sit outside the fit window by design.
    const TimeSeries search_domain =
        window(series, fit_window.from, series.last_year());
    result.segmentation = find_breakpoints(search_domain, config.max_breaks);

    for (const TakeoffClaim& claim :
         claims_for_region(series.region(), config)) {
        result.verdicts.push_back(
            takeoff_test(series, claim, config.thresholds));
    }

    // Transitions: explicit windows when configured, otherwise around every
    // break the search found.
    if (auto it = config.transitions.find(series.region());
        it != config.transitions.end()) {
        const TransitionWindows& tw = it->second;
        TransitionEntry entry;
        entry.region = series.region();
        entry.pre_from = tw.pre.from;
        entry.pre_to = tw.pre.to;
        entry.post_from = tw.post.from;
        entry.post_to = std::min(tw.post.to, series.last_year());
        entry.transition = classify_transition(series, entry.pre_from,
                                               entry.pre_to, entry.post_from,
                                               entry.post_to);
        result.transitions.push_back(std::move(entry));
    } else {
        double pre_from = search_domain.first_year();
        for (double break_year : result.segmentation.breakpoints) {
            // last observation strictly before the break closes the pre window
            double pre_to = pre_from;
            for (const auto& o : search_domain.observations()) {
                if (o.year < break_year) pre_to = o.year;
            }
            try {
                TransitionEntry entry;
                entry.region = series.region();
                entry.pre_from = pre_from;
                entry.pre_to = pre_to;
                entry.post_from = break_year;
                entry.post_to = series.last_year();
                entry.transition =
                    classify_transition(series, entry.pre_from, entry.pre_to,
                                        entry.post_from, entry.post_to);
                result.transitions.push_back(std::move(entry));
            } catch (const Error&) {
                // a side too short to classify is reported by omission
            }
        }
    }

    FigureSpec figure;
    figure.title = series.region() + " GDP";
    figure.series = series;
    figure.overlays.emplace_back(result.window_fit);
    if (!result.segmentation.breakpoints.empty()) {
        figure.overlays.emplace_back(result.segmentation);
    }
    for (const TakeoffClaim& claim :
         claims_for_region(series.region(), config)) {
        char label[32];
        std::snprintf(label, sizeof(label), "claimed %g", claim.claimed_year);
        figure.markers.emplace_back(claim.claimed_year, label);
    }
    figure.y_scale = YScale::log10;
    result.figure = std::move(figure);
    return result;
}

} // namespace

AnalysisResult analyze_dataset(const RegionDataset& dataset,
                               const AnalysisConfig& config) {
    std::vector<const TimeSeries*> selected;
    if (config.region_filter.empty()) {
        for (const auto& s : dataset.series()) selected.push_back(&s);
    } else {
        for (const auto& region : config.region_filter) {
            selected.push_back(&dataset.get(region));
        }
    }

    AnalysisResult result;
    result.regions.resize(selected.size());
    std::vector<std::exception_ptr> errors(selected.size());

#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < static_cast<long long>(selected.size()); ++i) {
        try {
            result.regions[i] = analyze_region(*selected[i], config);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (const auto& error : errors) {
        if (error) std::rethrow_exception(error);
    }
    return result;
}

void write_bundle(const AnalysisResult& result, const std::string& out_dir,
                  bool figures) {
    namespace fs = std::filesystem;
    std::vector<VerdictEntry> verdicts;
    std::vector<FitEntry> fits;
    std::vector<TransitionEntry> transitions;
    nlohmann::json segments = nlohmann::json::array();
    for (const auto& region : result.regions) {
        for (const auto& v : region.verdicts) {
            verdicts.push_back({region.region, v});
        }
        fits.push_back(
            {region.region, region.window_fit, "hyperbolic", region.window_fit_aic});
        for (const auto& t : region.transitions) transitions.push_back(t);
        segments.push_back(
            to_json(SegmentationEntry{region.region, region.segmentation}));
    }
    write_results(out_dir, verdicts, fits, transitions);

    {
        const fs::path path = fs::path(out_dir) / "segments.json";
        std::ofstream out(path, std::ios::binary);
        if (!out) fail(ErrorKind::io_failure, "cannot open " + path.string());
        out << segments.dump(2) << "\n";
    }

    if (figures) {
        for (const auto& region : result.regions) {
            const std::string svg = render_figure(region.figure);
            const fs::path path =
                fs::path(out_dir) / ("fig_" + region_slug(region.region) + ".svg");
            std::ofstream out(path, std::ios::binary);
            if (!out) fail(ErrorKind::io_failure, "cannot open " + path.string());
            out.write(svg.data(), static_cast<std::streamsize>(svg.size()));
        }
    }
}

} // namespace growth
