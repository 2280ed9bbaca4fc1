#include "growth/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace growth {

namespace {

struct LineFit {
    double intercept = 0.0; // value at t = 0
    double slope = 0.0;
    double sse = 0.0;
    double sst = 0.0;
};

// Weighted least squares of v on t, two-pass (means first, then centered
// moments) for numerical stability on year-scale abscissae.
LineFit weighted_line_fit(std::span<const double> t, std::span<const double> v,
                          std::span<const double> w) {
    const std::size_t n = t.size();
    double wsum = 0.0, tmean = 0.0, vmean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        wsum += w[i];
        tmean += w[i] * t[i];
        vmean += w[i] * v[i];
    }
    tmean /= wsum;
    vmean /= wsum;

    double stt = 0.0, stv = 0.0, svv = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dt = t[i] - tmean;
        const double dv = v[i] - vmean;
        stt += w[i] * dt * dt;
        stv += w[i] * dt * dv;
        svv += w[i] * dv * dv;
    }

    LineFit fit;
    fit.slope = stt > 0.0 ? stv / stt : 0.0;
    fit.intercept = vmean - fit.slope * tmean;
    fit.sst = svv;
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = v[i] - (fit.intercept + fit.slope * t[i]);
        sse += w[i] * r * r;
    }
    fit.sse = sse;
    return fit;
}

void require_points(const TimeSeries& series, std::size_t needed) {
    if (series.size() < needed) {
        fail(ErrorKind::too_few_points,
             "region '" + series.region() + "': " +
                 std::to_string(series.size()) + " observations, need " +
                 std::to_string(needed));
    }
}

double geometric_mean(std::span<const Observation> obs) {
    double acc = 0.0;
    for (const auto& o : obs) acc += std::log(o.gdp);
    return std::exp(acc / static_cast<double>(obs.size()));
}

} // namespace

double aic_value(int n, double sse, int param_count) {
    const double floored = std::max(sse, kSseFloor);
    return n * std::log(floored / n) + 2.0 * param_count;
}

HyperbolicFit fit_hyperbolic(const TimeSeries& series, FitWeighting weighting) {
    require_points(series, 3);
    const auto& obs = series.observations();
    const std::size_t n = obs.size();

    std::vector<double> t(n), r(n), w(n);
    for (std::size_t i = 0; i < n; ++i) {
        t[i] = obs[i].year;
        r[i] = 1.0 / obs[i].gdp;
        w[i] = weighting == FitWeighting::gdp_quartic
                   ? obs[i].gdp * obs[i].gdp * obs[i].gdp * obs[i].gdp
                   : 1.0;
    }
    const LineFit line = weighted_line_fit(t, r, w);

    HyperbolicFit fit;
    fit.params.intercept = line.intercept;
    fit.params.decline_rate = -line.slope;
    fit.window_from = obs.front().year;
    fit.window_to = obs.back().year;
    fit.n = static_cast<int>(n);
    fit.sse_reciprocal = line.sse;
    fit.r2_reciprocal =
        line.sst <= kSseFloor
            ? 1.0
            : std::clamp(1.0 - line.sse / line.sst, 0.0, 1.0);

    double max_rel = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double denom = fit.params.intercept - fit.params.decline_rate * t[i];
        if (!(denom > 0.0)) {
            max_rel = std::numeric_limits<double>::infinity();
            break;
        }
        max_rel = std::max(max_rel, std::fabs(1.0 / denom - obs[i].gdp) / obs[i].gdp);
    }
    fit.max_rel_err_gdp = max_rel;
    return fit;
}

ModelFit fit_model(const TimeSeries& series, const ModelKind& kind) {
    const int p = kind.param_count();
    require_points(series, static_cast<std::size_t>(p) + 1);
    const auto& obs = series.observations();
    const int n = static_cast<int>(obs.size());

    ModelFit fit;
    fit.kind = kind;
    fit.param_count = p;

    auto log_sse = [&](auto&& predict_log) {
        double sse = 0.0;
        for (const auto& o : obs) {
            const double r = std::log(o.gdp) - predict_log(o.year);
            sse += r * r;
        }
        return sse;
    };

    switch (kind.family) {
    case ModelFamily::constant: {
        const double level = geometric_mean(obs);
        fit.parameters = {level};
        fit.sse_log = log_sse([&](double) { return std::log(level); });
        break;
    }
    case ModelFamily::exponential: {
        std::vector<double> t, v, w;
        for (const auto& o : obs) {
            t.push_back(o.year);
            v.push_back(std::log(o.gdp));
            w.push_back(1.0);
        }
        const LineFit line = weighted_line_fit(t, v, w);
        fit.parameters = {std::exp(line.intercept), line.slope};
        fit.sse_log =
            log_sse([&](double year) { return line.intercept + line.slope * year; });
        break;
    }
    case ModelFamily::hyperbolic: {
        const HyperbolicFit h = fit_hyperbolic(series);
        for (const auto& o : obs) {
            if (!(h.params.intercept - h.params.decline_rate * o.year > 0.0)) {
                fail(ErrorKind::at_or_beyond_singularity,
                     "hyperbolic fit has its singularity inside the data range");
            }
        }
        fit.parameters = {h.params.intercept, h.params.decline_rate};
        fit.sse_log = log_sse([&](double year) {
            return -std::log(h.params.intercept - h.params.decline_rate * year);
        });
        break;
    }
    case ModelFamily::stagnation_then_exponential: {
        const double b = kind.break_year;
        std::vector<Observation> pre, post;
        for (const auto& o : obs) {
            (o.year < b ? pre : post).push_back(o);
        }
        if (pre.size() < 2 || post.size() < 2) {
            fail(ErrorKind::empty_regime,
                 "break year " + std::to_string(b) + " leaves " +
                     std::to_string(pre.size()) + " pre and " +
                     std::to_string(post.size()) + " post observations");
        }
        const double level = geometric_mean(pre);
        // Continuity at the break pins the post intercept, so only the rate
        // is free: through-origin regression in (t - b, ln y - ln level).
        double num = 0.0, den = 0.0;
        for (const auto& o : post) {
            const double dt = o.year - b;
            num += dt * (std::log(o.gdp) - std::log(level));
            den += dt * dt;
        }
        const double rate = den > 0.0 ? num / den : 0.0;
        fit.parameters = {level, rate, b};
        fit.sse_log = log_sse([&](double year) {
            return year < b ? std::log(level)
                            : std::log(level) + rate * (year - b);
        });
        break;
    }
    }

    fit.aic = aic_value(n, fit.sse_log, p);
    return fit;
}

std::vector<RankedModel> compare_models(const TimeSeries& series,
                                        std::span<const ModelKind> kinds) {
    std::vector<RankedModel> ranking;
    ranking.reserve(kinds.size());
    for (const auto& kind : kinds) {
        RankedModel row;
        row.kind = kind;
        try {
            row.fit = fit_model(series, kind);
        } catch (const Error& e) {
            row.infeasible_reason = e.what();
        }
        ranking.push_back(std::move(row));
    }
    std::stable_sort(ranking.begin(), ranking.end(),
                     [](const RankedModel& a, const RankedModel& b) {
                         if (a.feasible() != b.feasible()) return a.feasible();
                         if (!a.feasible()) return false;
                         if (a.fit->aic != b.fit->aic)
                             return a.fit->aic < b.fit->aic;
                         return a.fit->param_count < b.fit->param_count;
                     });
    return ranking;
}

} // namespace growth
