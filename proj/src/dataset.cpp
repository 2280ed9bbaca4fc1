#include "growth/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <unordered_map>

namespace growth {

namespace {

struct Field {
    std::string text;
    bool quoted = false;
};

// Splits one CSV record. Double quotes open/close a field; "" inside a
// quoted field is a literal quote.
std::vector<Field> split_fields(std::string_view line) {
    std::vector<Field> fields;
    Field current;
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    current.text.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                current.text.push_back(c);
            }
        } else if (c == '"' && current.text.empty()) {
            in_quotes = true;
            current.quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(current));
            current = {};
        } else {
            current.text.push_back(c);
        }
    }
    fields.push_back(std::move(current));
    return fields;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

bool parse_number(const Field& field, double* out) {
    std::string text(trim(field.text));
    if (field.quoted) {
        // thousands separators are only accepted inside quoted cells
        std::erase(text, ',');
    }
    if (text.empty()) return false;
    char* end = nullptr;
    double value = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size()) return false;
    if (!std::isfinite(value)) return false;
    *out = value;
    return true;
}

std::string format_number(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    (void)ec;
    return std::string(buf, ptr);
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) {
        if (c == '"') quoted += "\"\"";
        else quoted.push_back(c);
    }
    quoted.push_back('"');
    return quoted;
}

// Accumulates rows per region in first-appearance order.
class SeriesBuilder {
public:
    void add(const std::string& region, Observation obs) {
        auto it = index_.find(region);
        if (it == index_.end()) {
            index_.emplace(region, rows_.size());
            rows_.push_back({region, {obs}});
        } else {
            rows_[it->second].second.push_back(obs);
        }
    }

    bool has_region(const std::string& region) const {
        return index_.count(region) > 0;
    }

    std::vector<TimeSeries> finish() && {
        std::vector<TimeSeries> out;
        out.reserve(rows_.size());
        for (auto& [region, obs] : rows_) {
            std::stable_sort(obs.begin(), obs.end(),
                             [](const Observation& a, const Observation& b) {
                                 return a.year < b.year;
                             });
            for (std::size_t i = 1; i < obs.size(); ++i) {
                if (obs[i].year == obs[i - 1].year) {
                    fail(ErrorKind::duplicate_year,
                         "duplicate year " + format_number(obs[i].year) +
                             " for region '" + region + "'");
                }
            }
            out.emplace_back(region, std::move(obs));
        }
        return out;
    }

private:
    std::vector<std::pair<std::string, std::vector<Observation>>> rows_;
    std::unordered_map<std::string, std::size_t> index_;
};

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) {
            lines.push_back(text.substr(start));
            break;
        }
        lines.push_back(text.substr(start, end - start));
        start = end + 1;
    }
    // CRLF input: strip the trailing CR from every line
    for (auto& line : lines) {
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    }
    if (!lines.empty() && lines.back().empty()) lines.pop_back();
    return lines;
}

void check_year_convention(double year, const std::string& where) {
    if (year < 1.0) {
        fail(ErrorKind::bad_number,
             where + ": year " + format_number(year) +
                 " is before AD 1 (dataset convention)");
    }
}

} // namespace

TimeSeries::TimeSeries(std::string region, std::vector<Observation> observations)
    : region_(std::move(region)), observations_(std::move(observations)) {
    for (std::size_t i = 0; i < observations_.size(); ++i) {
        if (!(observations_[i].gdp > 0.0)) {
            fail(ErrorKind::non_positive_gdp,
                 "region '" + region_ + "': gdp must be positive at year " +
                     format_number(observations_[i].year));
        }
        if (i > 0 && !(observations_[i].year > observations_[i - 1].year)) {
            fail(observations_[i].year == observations_[i - 1].year
                     ? ErrorKind::duplicate_year
                     : ErrorKind::bad_number,
                 "region '" + region_ + "': years must be strictly increasing");
        }
    }
}

TimeSeries TimeSeries::from_unsorted(std::string region,
                                     std::vector<Observation> observations) {
    std::stable_sort(observations.begin(), observations.end(),
                     [](const Observation& a, const Observation& b) {
                         return a.year < b.year;
                     });
    return TimeSeries(std::move(region), std::move(observations));
}

RegionDataset::RegionDataset(std::vector<TimeSeries> series, std::string source)
    : series_(std::move(series)), source_(std::move(source)) {
    for (std::size_t i = 0; i < series_.size(); ++i) {
        for (std::size_t j = i + 1; j < series_.size(); ++j) {
            if (series_[i].region() == series_[j].region()) {
                fail(ErrorKind::duplicate_region,
                     "duplicate region label '" + series_[i].region() + "'");
            }
        }
    }
}

const TimeSeries* RegionDataset::find(std::string_view region) const {
    for (const auto& s : series_) {
        if (s.region() == region) return &s;
    }
    return nullptr;
}

const TimeSeries& RegionDataset::get(std::string_view region) const {
    if (const TimeSeries* s = find(region)) return *s;
    std::string msg = "unknown region '" + std::string(region) + "'; available:";
    for (const auto& s : series_) msg += " '" + s.region() + "'";
    fail(ErrorKind::unknown_region, msg);
}

std::vector<std::string> RegionDataset::region_labels() const {
    std::vector<std::string> labels;
    labels.reserve(series_.size());
    for (const auto& s : series_) labels.push_back(s.region());
    return labels;
}

RegionDataset parse_long_csv(std::string_view text, std::string source) {
    auto lines = split_lines(text);
    if (lines.empty() || lines[0] != "region,year,gdp") {
        fail(ErrorKind::malformed_header,
             "line 1: expected header 'region,year,gdp'");
    }
    SeriesBuilder builder;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        if (trim(lines[i]).empty()) continue;
        auto fields = split_fields(lines[i]);
        if (fields.size() != 3) {
            fail(ErrorKind::bad_number,
                 "line " + std::to_string(line_no) + ": expected 3 fields, got " +
                     std::to_string(fields.size()));
        }
        double year = 0.0, gdp = 0.0;
        if (!parse_number(fields[1], &year)) {
            fail(ErrorKind::bad_number, "line " + std::to_string(line_no) +
                                            ": unparsable year '" +
                                            fields[1].text + "'");
        }
        if (!parse_number(fields[2], &gdp)) {
            fail(ErrorKind::bad_number, "line " + std::to_string(line_no) +
                                            ": unparsable gdp '" +
                                            fields[2].text + "'");
        }
        check_year_convention(year, "line " + std::to_string(line_no));
        if (!(gdp > 0.0)) {
            fail(ErrorKind::non_positive_gdp,
                 "line " + std::to_string(line_no) + ": gdp must be positive");
        }
        builder.add(fields[0].text, Observation{year, gdp});
    }
    return RegionDataset(std::move(builder).finish(), std::move(source));
}

RegionDataset parse_maddison_horizontal(std::string_view text,
                                        std::string source) {
    auto lines = split_lines(text);
    if (lines.empty()) fail(ErrorKind::malformed_header, "empty input");
    auto header = split_fields(lines[0]);
    if (header.size() < 2) {
        fail(ErrorKind::malformed_header, "header row holds no year labels");
    }
    std::vector<double> years;
    years.reserve(header.size() - 1);
    for (std::size_t c = 1; c < header.size(); ++c) {
        double year = 0.0;
        if (!parse_number(header[c], &year)) {
            fail(ErrorKind::malformed_header,
                 "header column " + std::to_string(c + 1) +
                     ": unparsable year label '" + header[c].text + "'");
        }
        check_year_convention(year, "header column " + std::to_string(c + 1));
        years.push_back(year);
    }

    SeriesBuilder builder;
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const std::size_t row_no = r + 1;
        if (trim(lines[r]).empty()) continue;
        auto fields = split_fields(lines[r]);
        const std::string region = fields[0].text;
        if (trim(region).empty()) {
            fail(ErrorKind::bad_number,
                 "row " + std::to_string(row_no) + ": empty region label");
        }
        if (builder.has_region(region)) {
            fail(ErrorKind::duplicate_region, "row " + std::to_string(row_no) +
                                                  ": duplicate region '" +
                                                  region + "'");
        }
        if (fields.size() > years.size() + 1) {
            fail(ErrorKind::bad_number,
                 "row " + std::to_string(row_no) + ": " +
                     std::to_string(fields.size() - 1) +
                     " value cells but only " + std::to_string(years.size()) +
                     " year columns");
        }
        bool any = false;
        for (std::size_t c = 1; c < fields.size(); ++c) {
            if (trim(fields[c].text).empty()) continue; // gap
            double gdp = 0.0;
            if (!parse_number(fields[c], &gdp)) {
                fail(ErrorKind::bad_number,
                     "row " + std::to_string(row_no) + ", column " +
                         std::to_string(c + 1) + ": unparsable value '" +
                         fields[c].text + "'");
            }
            if (!(gdp > 0.0)) {
                fail(ErrorKind::non_positive_gdp,
                     "row " + std::to_string(row_no) + ", column " +
                         std::to_string(c + 1) + ": gdp must be positive");
            }
            builder.add(region, Observation{years[c - 1], gdp});
            any = true;
        }
        if (!any) {
            fail(ErrorKind::bad_number,
                 "row " + std::to_string(row_no) + ": region '" + region +
                     "' has no values");
        }
    }
    return RegionDataset(std::move(builder).finish(), std::move(source));
}

std::string write_long_csv(const RegionDataset& dataset) {
    std::string out = "region,year,gdp\n";
    for (const auto& series : dataset.series()) {
        for (const auto& obs : series.observations()) {
            out += csv_quote(series.region());
            out.push_back(',');
            out += format_number(obs.year);
            out.push_back(',');
            out += format_number(obs.gdp);
            out.push_back('\n');
        }
    }
    return out;
}

TimeSeries window(const TimeSeries& series, double from, double to) {
    if (from > to) {
        fail(ErrorKind::inverted_window,
             "window [" + format_number(from) + ", " + format_number(to) +
                 "] is inverted");
    }
    std::vector<Observation> kept;
    for (const auto& obs : series.observations()) {
        if (obs.year >= from && obs.year <= to) kept.push_back(obs);
    }
    return TimeSeries(series.region(), std::move(kept));
}

} // namespace growth
