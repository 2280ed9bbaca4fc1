#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "growth/analysis.hpp"
#include "growth/dataset.hpp"
#include "growth/report.hpp"

namespace {

using namespace growth;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::io_failure, "cannot read input file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::io_failure, "cannot open output file " + path);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) fail(ErrorKind::io_failure, "write failed for " + path);
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t hash = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 1099511628211ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(hash));
    return buf;
}

RegionDataset load_dataset(const std::string& path, const std::string& format) {
    const std::string bytes = read_file(path);
    const std::string source = path + "#fnv1a:" + fnv1a_hex(bytes);
    if (format == "maddison") {
        return parse_maddison_horizontal(bytes, source);
    }
    return parse_long_csv(bytes, source);
}

struct CommonFlags {
    std::string input;
    std::string format = "long";

    void attach(CLI::App* cmd) {
        cmd->add_option("--input", input, "input data file")->required();
        cmd->add_option("--format", format, "input layout")
            ->check(CLI::IsMember({"long", "maddison"}));
    }
};

struct ThresholdFlags {
    DetectionThresholds values;

    void attach(CLI::App* cmd) {
        cmd->add_option("--alpha", values.alpha,
                        "significance level for break prominence");
        cmd->add_option("--r-stag", values.stagnation_rate,
                        "max mean pre-break rate counted as stagnation (1/yr)");
        cmd->add_option("--r-growth", values.growth_rate,
                        "min mean post-break rate counted as growth (1/yr)");
        cmd->add_option("--tau", values.timing_tolerance,
                        "|break - claim| tolerance in years");
        cmd->add_option("--half-window", values.half_window,
                        "nominal half-window around the claimed year");
    }
};

RegionClass class_for(const std::string& region, const std::string& override_,
                      double year) {
    if (override_ == "developed") return RegionClass::developed;
    if (override_ == "less-developed") return RegionClass::less_developed;
    const AnalysisConfig defaults = default_config();
    const auto claims = claims_for_region(region, defaults);
    if (claims.size() == 1) return claims[0].region_class;
    return year <= 1825.0 ? RegionClass::developed : RegionClass::less_developed;
}

int run(int argc, char** argv) {
    CLI::App app{"hyperbolic-growth and takeoff analysis of historical GDP "
                 "series"};
    app.require_subcommand(1);

    // ingest -------------------------------------------------------------
    auto* ingest = app.add_subcommand(
        "ingest", "normalize an input table to long CSV");
    CommonFlags ingest_common;
    ingest_common.attach(ingest);
    std::string ingest_out;
    ingest->add_option("--out", ingest_out, "output long CSV path")->required();
    ingest->callback([&] {
        const RegionDataset ds =
            load_dataset(ingest_common.input, ingest_common.format);
        write_file(ingest_out, write_long_csv(ds));
        std::size_t total = 0;
        for (const auto& s : ds.series()) {
            std::printf("%s: %zu observations (%g-%g)\n", s.region().c_str(),
                        s.size(), s.first_year(), s.last_year());
            total += s.size();
        }
        std::printf("%zu regions, %zu observations -> %s\n",
                    ds.series().size(), total, ingest_out.c_str());
        std::printf("source: %s\n", ds.source().c_str());
    });

    // analyze ------------------------------------------------------------
    auto* analyze = app.add_subcommand(
        "analyze", "fit, test takeoff claims and report every region");
    CommonFlags analyze_common;
    analyze_common.attach(analyze);
    ThresholdFlags analyze_thresholds;
    analyze_thresholds.attach(analyze);
    std::string analyze_out;
    std::vector<std::string> analyze_regions;
    std::vector<std::string> window_specs;
    bool all_regions = false;
    bool weighted = false;
    bool no_figures = false;
    int max_breaks = 2;
    double claim_developed = TakeoffClaim::kDevelopedTakeoffYear;
    double claim_less = TakeoffClaim::kLessDevelopedTakeoffYear;
    analyze->add_option("--out", analyze_out, "output directory")->required();
    analyze->add_option("--regions", analyze_regions,
                        "regions to analyze (default: all)")
        ->delimiter(',');
    analyze->add_flag("--all-regions", all_regions,
                      "analyze every region in the input (default)");
    analyze->add_option("--window", window_specs,
                        "per-region fit window as REGION=FROM:TO")
        ->take_all();
    analyze->add_flag("--weighted", weighted,
                      "weight reciprocal residuals by gdp^4");
    analyze->add_flag("--no-figures", no_figures, "skip SVG output");
    analyze->add_option("--max-breaks", max_breaks, "breakpoint budget (0-2)")
        ->check(CLI::Range(0, 2));
    analyze->add_option("--claim-developed", claim_developed,
                        "claimed takeoff year for developed regions");
    analyze->add_option("--claim-less-developed", claim_less,
                        "claimed takeoff year for less-developed regions");
    analyze->callback([&] {
        const RegionDataset ds =
            load_dataset(analyze_common.input, analyze_common.format);
        AnalysisConfig config = default_config();
        config.thresholds = analyze_thresholds.values;
        config.weighting =
            weighted ? FitWeighting::gdp_quartic : FitWeighting::none;
        config.max_breaks = max_breaks;
        config.claim_developed = claim_developed;
        config.claim_less_developed = claim_less;
        config.region_filter = analyze_regions;
        config.figures = !no_figures;
        for (const auto& spec : window_specs) {
            const auto eq = spec.find('=');
            const auto colon = spec.find(':', eq);
            if (eq == std::string::npos || colon == std::string::npos) {
                fail(ErrorKind::bad_number,
                     "--window expects REGION=FROM:TO, got '" + spec + "'");
            }
            config.fit_windows[spec.substr(0, eq)] = {
                std::stod(spec.substr(eq + 1, colon - eq - 1)),
                std::stod(spec.substr(colon + 1))};
        }

        const AnalysisResult result = analyze_dataset(ds, config);
        write_bundle(result, analyze_out, config.figures);

        for (const auto& region : result.regions) {
            std::string verdicts;
            for (const auto& v : region.verdicts) {
                char item[64];
                std::snprintf(item, sizeof(item), " %g=%s",
                              v.claim.claimed_year,
                              verdict_name(v.verdict).c_str());
                verdicts += item;
            }
            std::string breaks;
            for (double b : region.segmentation.breakpoints) {
                char item[32];
                std::snprintf(item, sizeof(item), " %g", b);
                breaks += item;
            }
            std::printf("%s: takeoff%s; breaks:%s\n", region.region.c_str(),
                        verdicts.c_str(),
                        breaks.empty() ? " none" : breaks.c_str());
        }
        std::printf("results written to %s\n", analyze_out.c_str());
    });

    // takeoff ------------------------------------------------------------
    auto* takeoff = app.add_subcommand(
        "takeoff", "test one region against one claimed takeoff year");
    CommonFlags takeoff_common;
    takeoff_common.attach(takeoff);
    ThresholdFlags takeoff_thresholds;
    takeoff_thresholds.attach(takeoff);
    std::string takeoff_region;
    std::string takeoff_class;
    double takeoff_year = 0.0;
    takeoff->add_option("--region", takeoff_region, "region label")->required();
    takeoff->add_option("--year", takeoff_year, "claimed takeoff year")
        ->required();
    takeoff->add_option("--class", takeoff_class, "region class for the report")
        ->check(CLI::IsMember({"developed", "less-developed"}));
    takeoff->callback([&] {
        const RegionDataset ds =
            load_dataset(takeoff_common.input, takeoff_common.format);
        const TimeSeries& series = ds.get(takeoff_region);
        const TakeoffClaim claim{
            class_for(takeoff_region, takeoff_class, takeoff_year),
            takeoff_year};
        const TakeoffVerdict verdict =
            takeoff_test(series, claim, takeoff_thresholds.values);
        std::printf("%s\n",
                    to_json(VerdictEntry{takeoff_region, verdict}).dump(2).c_str());
    });

    // segment ------------------------------------------------------------
    auto* segment = app.add_subcommand(
        "segment", "free breakpoint search for one region");
    CommonFlags segment_common;
    segment_common.attach(segment);
    std::string segment_region;
    int segment_breaks = 1;
    double segment_from = -1e300, segment_to = 1e300;
    segment->add_option("--region", segment_region, "region label")->required();
    segment->add_option("--max-breaks", segment_breaks, "breakpoint budget")
        ->check(CLI::Range(0, 2));
    segment->add_option("--from", segment_from, "restrict to years >= from");
    segment->add_option("--to", segment_to, "restrict to years <= to");
    segment->callback([&] {
        const RegionDataset ds =
            load_dataset(segment_common.input, segment_common.format);
        const TimeSeries series =
            window(ds.get(segment_region), segment_from, segment_to);
        const SegmentedFit seg = find_breakpoints(series, segment_breaks);
        std::printf("%s\n",
                    to_json(SegmentationEntry{segment_region, seg}).dump(2).c_str());
    });

    // fig ----------------------------------------------------------------
    auto* fig = app.add_subcommand("fig", "render one region figure as SVG");
    CommonFlags fig_common;
    fig_common.attach(fig);
    std::string fig_region, fig_out, fig_scale = "log10";
    std::vector<std::string> fig_markers;
    int fig_width = 900, fig_height = 600;
    fig->add_option("--region", fig_region, "region label")->required();
    fig->add_option("--out", fig_out, "output SVG path")->required();
    fig->add_option("--scale", fig_scale, "y-axis scale")
        ->check(CLI::IsMember({"log10", "linear", "reciprocal"}));
    fig->add_option("--marker", fig_markers, "vertical marker as YEAR=LABEL")
        ->take_all();
    fig->add_option("--width", fig_width, "canvas width in px");
    fig->add_option("--height", fig_height, "canvas height in px");
    fig->callback([&] {
        const RegionDataset ds = load_dataset(fig_common.input, fig_common.format);
        const TimeSeries& series = ds.get(fig_region);

        FigureSpec spec;
        spec.title = fig_region + " GDP";
        spec.series = series;
        spec.width = fig_width;
        spec.height = fig_height;
        spec.y_scale = fig_scale == "linear"
                           ? YScale::linear
                           : fig_scale == "reciprocal" ? YScale::reciprocal
                                                       : YScale::log10;

        const AnalysisConfig defaults = default_config();
        YearWindow w{series.first_year(), series.last_year()};
        if (auto it = defaults.fit_windows.find(fig_region);
            it != defaults.fit_windows.end()) {
            w = it->second;
        }
        const TimeSeries windowed = window(series, w.from, w.to);
        if (windowed.size() >= 3) {
            spec.overlays.emplace_back(fit_hyperbolic(windowed));
        }
        if (fig_markers.empty()) {
            for (const auto& claim : claims_for_region(fig_region, defaults)) {
                char label[32];
                std::snprintf(label, sizeof(label), "claimed %g",
                              claim.claimed_year);
                spec.markers.emplace_back(claim.claimed_year, label);
            }
        }
        for (const auto& marker : fig_markers) {
            const auto eq = marker.find('=');
            if (eq == std::string::npos) {
                fail(ErrorKind::bad_number,
                     "--marker expects YEAR=LABEL, got '" + marker + "'");
            }
            spec.markers.emplace_back(std::stod(marker.substr(0, eq)),
                                      marker.substr(eq + 1));
        }
        write_file(fig_out, render_figure(spec));
        std::printf("figure written to %s\n", fig_out.c_str());
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2; // usage errors exit 2, help exits 0
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const growth::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
