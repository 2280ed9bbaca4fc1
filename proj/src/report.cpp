#include "growth/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

namespace growth {

namespace {

constexpr int kMarginLeft = kFigureMarginLeft;
constexpr int kMarginRight = kFigureMarginRight;
constexpr int kMarginTop = kFigureMarginTop;
constexpr int kMarginBottom = kFigureMarginBottom;
constexpr int kOverlaySamples = 200;

const char* kOverlayColors[] = {"#c0392b", "#2980b9", "#27ae60", "#8e44ad"};

std::string px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out.push_back(c);
        }
    }
    return out;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void include(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    bool valid() const { return lo <= hi; }
    void degenerate_guard(double pad) {
        if (hi - lo < 1e-12) {
            lo -= pad;
            hi += pad;
        }
    }
};

double transform_y(double y, YScale scale) {
    switch (scale) {
    case YScale::log10: return std::log10(y);
    case YScale::linear: return y;
    case YScale::reciprocal: return 1.0 / y;
    }
    return y;
}

// Upper x bound an overlay may be drawn to; stays left of the singularity.
double overlay_clip(const HyperbolicFit& fit) {
    if (fit.params.decline_rate > 0.0) {
        return 0.99 * fit.params.intercept / fit.params.decline_rate;
    }
    return std::numeric_limits<double>::infinity();
}

std::vector<double> nice_ticks(double lo, double hi, int target) {
    std::vector<double> ticks;
    const double span = hi - lo;
    if (!(span > 0.0)) return ticks;
    double step = std::pow(10.0, std::floor(std::log10(span / target)));
    for (double mult : {1.0, 2.0, 5.0, 10.0}) {
        if (span / (step * mult) <= target) {
            step *= mult;
            break;
        }
    }
    double first = std::ceil(lo / step) * step;
    for (double v = first; v <= hi + 1e-9 * span; v += step) {
        ticks.push_back(std::fabs(v) < 1e-12 * span ? 0.0 : v);
    }
    return ticks;
}

} // namespace

std::string render_figure(const FigureSpec& spec) {
    if (spec.series.empty() && spec.overlays.empty()) {
        fail(ErrorKind::empty_spec,
             "figure needs at least one of series/overlays");
    }
    if (spec.y_scale == YScale::log10) {
        for (const auto& o : spec.series.observations()) {
            if (!(o.gdp > 0.0)) {
                fail(ErrorKind::non_positive_on_log_scale,
                     "log10 scale requires positive values");
            }
        }
    }

    // x domain covers data, overlay windows and markers
    Range xr;
    for (const auto& o : spec.series.observations()) xr.include(o.year);
    for (const auto& overlay : spec.overlays) {
        if (const auto* fit = std::get_if<HyperbolicFit>(&overlay)) {
            xr.include(fit->window_from);
            xr.include(std::min(fit->window_to, overlay_clip(*fit)));
        } else {
            const auto& seg = std::get<SegmentedFit>(overlay);
            for (const auto& s : seg.segments) {
                xr.include(s.window_from);
                xr.include(std::min(s.window_to, overlay_clip(s)));
            }
        }
    }
    for (const auto& [year, label] : spec.markers) xr.include(year);
    xr.degenerate_guard(1.0);

    // sample the overlays before fixing the y domain
    struct Path {
        std::vector<std::pair<double, double>> points; // (year, value)
        std::vector<std::size_t> subpath_starts;
        const char* color;
    };
    std::vector<Path> paths;
    int color_index = 0;

    auto sample_fit = [&](const HyperbolicFit& fit, double from, double to,
                          Path& path) {
        const double hi = std::min(to, overlay_clip(fit));
        if (!(hi > from)) return;
        path.subpath_starts.push_back(path.points.size());
        for (int i = 0; i < kOverlaySamples; ++i) {
            const double t =
                from + (hi - from) * (static_cast<double>(i) /
                                      (kOverlaySamples - 1));
            const double denom =
                fit.params.intercept - fit.params.decline_rate * t;
            if (!(denom > 0.0)) break;
            const double y = 1.0 / denom;
            path.points.emplace_back(t, y);
        }
    };

    for (const auto& overlay : spec.overlays) {
        Path path;
        path.color = kOverlayColors[color_index++ % 4];
        if (const auto* fit = std::get_if<HyperbolicFit>(&overlay)) {
            sample_fit(*fit, xr.lo, xr.hi, path);
        } else {
            for (const auto& s : std::get<SegmentedFit>(overlay).segments) {
                sample_fit(s, s.window_from, s.window_to, path);
            }
        }
        if (!path.points.empty()) paths.push_back(std::move(path));
    }

    Range yr;
    for (const auto& o : spec.series.observations()) {
        yr.include(transform_y(o.gdp, spec.y_scale));
    }
    for (const auto& path : paths) {
        for (const auto& [t, y] : path.points) {
            if (spec.y_scale == YScale::log10 && !(y > 0.0)) continue;
            yr.include(transform_y(y, spec.y_scale));
        }
    }
    if (!yr.valid()) yr = {0.0, 1.0};
    yr.degenerate_guard(0.5);

    const double plot_w = spec.width - kMarginLeft - kMarginRight;
    const double plot_h = spec.height - kMarginTop - kMarginBottom;
    auto to_px_x = [&](double year) {
        return kMarginLeft + (year - xr.lo) / (xr.hi - xr.lo) * plot_w;
    };
    auto to_px_y = [&](double value) {
        const double ty = transform_y(value, spec.y_scale);
        return kMarginTop + (yr.hi - ty) / (yr.hi - yr.lo) * plot_h;
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width
        << "\" height=\"" << spec.height << "\" viewBox=\"0 0 " << spec.width
        << " " << spec.height << "\">\n";
    svg << "<rect width=\"" << spec.width << "\" height=\"" << spec.height
        << "\" fill=\"white\"/>\n";
    svg << "<text x=\"" << px(spec.width / 2.0)
        << "\" y=\"28\" font-family=\"serif\" font-size=\"18\" "
           "text-anchor=\"middle\">"
        << xml_escape(spec.title) << "</text>\n";

    // frame
    svg << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop
        << "\" width=\"" << px(plot_w) << "\" height=\"" << px(plot_h)
        << "\" fill=\"none\" stroke=\"#444\"/>\n";

    // x ticks
    for (double tick : nice_ticks(xr.lo, xr.hi, 6)) {
        const double x = to_px_x(tick);
        svg << "<line x1=\"" << px(x) << "\" y1=\""
            << px(kMarginTop + plot_h) << "\" x2=\"" << px(x) << "\" y2=\""
            << px(kMarginTop + plot_h + 5) << "\" stroke=\"#444\"/>\n";
        svg << "<text x=\"" << px(x) << "\" y=\""
            << px(kMarginTop + plot_h + 20)
            << "\" font-family=\"serif\" font-size=\"12\" "
               "text-anchor=\"middle\">"
            << num(tick) << "</text>\n";
    }

    // y ticks live in transformed space: decades on log scale, nice steps
    // otherwise (reciprocal axes are labeled in 1/y units)
    std::vector<std::pair<double, std::string>> yticks;
    if (spec.y_scale == YScale::log10) {
        for (int k = static_cast<int>(std::ceil(yr.lo - 1e-9));
             k <= static_cast<int>(std::floor(yr.hi + 1e-9)); ++k) {
            yticks.emplace_back(static_cast<double>(k), num(std::pow(10.0, k)));
        }
    } else {
        for (double tick : nice_ticks(yr.lo, yr.hi, 5)) {
            yticks.emplace_back(tick, num(tick));
        }
    }
    for (const auto& [tvalue, label] : yticks) {
        const double y = kMarginTop + (yr.hi - tvalue) / (yr.hi - yr.lo) * plot_h;
        svg << "<line x1=\"" << px(kMarginLeft - 5) << "\" y1=\"" << px(y)
            << "\" x2=\"" << kMarginLeft << "\" y2=\"" << px(y)
            << "\" stroke=\"#444\"/>\n";
        svg << "<text x=\"" << px(kMarginLeft - 9) << "\" y=\"" << px(y + 4)
            << "\" font-family=\"serif\" font-size=\"12\" "
               "text-anchor=\"end\">"
            << label << "</text>\n";
    }

    // overlays
    for (const auto& path : paths) {
        svg << "<path d=\"";
        for (std::size_t i = 0; i < path.points.size(); ++i) {
            const bool is_start =
                std::find(path.subpath_starts.begin(),
                          path.subpath_starts.end(),
                          i) != path.subpath_starts.end();
            svg << (is_start ? "M" : "L") << px(to_px_x(path.points[i].first))
                << " " << px(to_px_y(path.points[i].second));
        }
        svg << "\" fill=\"none\" stroke=\"" << path.color
            << "\" stroke-width=\"1.5\"/>\n";
    }

    // observations
    for (const auto& o : spec.series.observations()) {
        svg << "<circle cx=\"" << px(to_px_x(o.year)) << "\" cy=\""
            << px(to_px_y(o.gdp)) << "\" r=\"3\" fill=\"#1a1a1a\"/>\n";
    }

    // markers
    for (const auto& [year, label] : spec.markers) {
        const double x = to_px_x(year);
        svg << "<line x1=\"" << px(x) << "\" y1=\"" << kMarginTop
            << "\" x2=\"" << px(x) << "\" y2=\"" << px(kMarginTop + plot_h)
            << "\" stroke=\"#555\" stroke-dasharray=\"5 4\"/>\n";
        svg << "<text x=\"" << px(x + 4) << "\" y=\""
            << px(kMarginTop + 14)
            << "\" font-family=\"serif\" font-size=\"12\">"
            << xml_escape(label) << "</text>\n";
    }

    svg << "</svg>\n";
    return svg.str();
}

std::string verdict_name(Verdict v) {
    switch (v) {
    case Verdict::present: return "present";
    case Verdict::absent: return "absent";
    case Verdict::undecidable: return "undecidable";
    }
    return "unknown";
}

std::string shift_name(TrajectoryShift s) {
    switch (s) {
    case TrajectoryShift::slower: return "slower";
    case TrajectoryShift::faster: return "faster";
    case TrajectoryShift::none: return "none";
    }
    return "unknown";
}

std::string region_class_name(RegionClass c) {
    return c == RegionClass::developed ? "developed" : "less-developed";
}

namespace {

nlohmann::json number_or_null(double v) {
    if (std::isnan(v) || std::isinf(v)) return nullptr;
    return v;
}

double number_from(const nlohmann::json& j) {
    if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
    return j.get<double>();
}

} // namespace

nlohmann::json to_json(const VerdictEntry& entry) {
    const TakeoffVerdict& v = entry.verdict;
    return {
        {"region", entry.region},
        {"claimed_year", v.claim.claimed_year},
        {"region_class", region_class_name(v.claim.region_class)},
        {"criteria",
         {{"prominent", v.criterion_prominent},
          {"stagnation_to_growth", v.criterion_stagnation_to_growth},
          {"timing", v.criterion_timing}}},
        {"verdict", verdict_name(v.verdict)},
        {"break_year_best", number_or_null(v.break_year_best)},
        {"f_statistic", number_or_null(v.evidence.f_statistic)},
        {"p_value", number_or_null(v.evidence.p_value)},
        {"pre_rate", number_or_null(v.pre_rate)},
        {"post_rate", number_or_null(v.post_rate)},
        {"thresholds",
         {{"alpha", v.thresholds.alpha},
          {"r_stag", v.thresholds.stagnation_rate},
          {"r_growth", v.thresholds.growth_rate},
          {"tau", v.thresholds.timing_tolerance},
          {"half_window", v.thresholds.half_window}}},
    };
}

VerdictEntry verdict_entry_from_json(const nlohmann::json& j) {
    VerdictEntry entry;
    entry.region = j.at("region").get<std::string>();
    TakeoffVerdict& v = entry.verdict;
    v.claim.claimed_year = j.at("claimed_year").get<double>();
    v.claim.region_class = j.at("region_class").get<std::string>() == "developed"
                               ? RegionClass::developed
                               : RegionClass::less_developed;
    v.criterion_prominent = j.at("criteria").at("prominent").get<bool>();
    v.criterion_stagnation_to_growth =
        j.at("criteria").at("stagnation_to_growth").get<bool>();
    v.criterion_timing = j.at("criteria").at("timing").get<bool>();
    const std::string verdict = j.at("verdict").get<std::string>();
    v.verdict = verdict == "present"
                    ? Verdict::present
                    : verdict == "absent" ? Verdict::absent
                                          : Verdict::undecidable;
    v.break_year_best = number_from(j.at("break_year_best"));
    v.evidence.break_year = v.break_year_best;
    v.evidence.f_statistic = number_from(j.at("f_statistic"));
    v.evidence.p_value = number_from(j.at("p_value"));
    v.pre_rate = number_from(j.at("pre_rate"));
    v.post_rate = number_from(j.at("post_rate"));
    const auto& th = j.at("thresholds");
    v.thresholds.alpha = th.at("alpha").get<double>();
    v.thresholds.stagnation_rate = th.at("r_stag").get<double>();
    v.thresholds.growth_rate = th.at("r_growth").get<double>();
    v.thresholds.timing_tolerance = th.at("tau").get<double>();
    v.thresholds.half_window = th.at("half_window").get<double>();
    return entry;
}

nlohmann::json to_json(const FitEntry& entry) {
    const HyperbolicFit& f = entry.fit;
    nlohmann::json t_s = nullptr;
    if (f.params.decline_rate > 0.0) {
        t_s = f.params.intercept / f.params.decline_rate;
    }
    return {
        {"region", entry.region},
        {"window", {{"from", f.window_from}, {"to", f.window_to}}},
        {"model", entry.model},
        {"params", {{"a", f.params.intercept}, {"k", f.params.decline_rate}}},
        {"t_s", t_s},
        {"n", f.n},
        {"r2_reciprocal", f.r2_reciprocal},
        {"sse_reciprocal", f.sse_reciprocal},
        {"max_rel_err_gdp", number_or_null(f.max_rel_err_gdp)},
        {"aic", entry.aic ? nlohmann::json(*entry.aic) : nlohmann::json(nullptr)},
    };
}

nlohmann::json to_json(const TransitionEntry& entry) {
    return {
        {"region", entry.region},
        {"at", entry.transition.at},
        {"class", shift_name(entry.transition.shift)},
        {"mean_excess_reciprocal", entry.transition.mean_excess_reciprocal},
        {"pre_window", {{"from", entry.pre_from}, {"to", entry.pre_to}}},
        {"post_window", {{"from", entry.post_from}, {"to", entry.post_to}}},
    };
}

nlohmann::json to_json(const SegmentationEntry& entry) {
    nlohmann::json segments = nlohmann::json::array();
    for (const auto& fit : entry.segmentation.segments) {
        segments.push_back(to_json(FitEntry{entry.region, fit, "hyperbolic", {}}));
    }
    return {{"region", entry.region},
            {"breakpoints", entry.segmentation.breakpoints},
            {"segments", segments},
            {"total_sse", entry.segmentation.total_sse}};
}

namespace {

std::string csv_number(double v) {
    if (std::isnan(v)) return "";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::io_failure, "cannot open " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) fail(ErrorKind::io_failure, "write failed for " + path.string());
}

} // namespace

std::string summary_csv(const std::vector<VerdictEntry>& verdicts) {
    std::string csv = "region,claimed_year,verdict,break_year_best,p_value\n";
    for (const auto& entry : verdicts) {
        csv += entry.region.find(',') == std::string::npos
                   ? entry.region
                   : "\"" + entry.region + "\"";
        csv += "," + csv_number(entry.verdict.claim.claimed_year);
        csv += "," + verdict_name(entry.verdict.verdict);
        csv += "," + csv_number(entry.verdict.break_year_best);
        csv += "," + csv_number(entry.verdict.evidence.p_value);
        csv += "\n";
    }
    return csv;
}

void write_results(const std::string& out_dir,
                   const std::vector<VerdictEntry>& verdicts,
                   const std::vector<FitEntry>& fits,
                   const std::vector<TransitionEntry>& transitions) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) fail(ErrorKind::io_failure, "cannot create " + out_dir);

    auto dump = [](const auto& entries) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& e : entries) arr.push_back(to_json(e));
        return arr.dump(2) + "\n";
    };

    write_file(fs::path(out_dir) / "verdicts.json", dump(verdicts));
    write_file(fs::path(out_dir) / "fits.json", dump(fits));
    write_file(fs::path(out_dir) / "transitions.json", dump(transitions));
    write_file(fs::path(out_dir) / "summary.csv", summary_csv(verdicts));
}

} // namespace growth
