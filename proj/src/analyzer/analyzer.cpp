// Copyright 2026 The Kaya Authors
// SPDX-License-Identifier: Apache-2.0

#include <kaya/analyzer/analyzer.hpp>
#include <kaya/common/error.hpp>
#include <kaya/common/lexer.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

namespace kaya::analyzer {

namespace {

BigInt as_number(const Word& w, const minisol::ElementaryType& type)
{
    return type.is_signed() ? to_signed(w) : to_unsigned(w);
}

std::string display(const Word& w, const minisol::ElementaryType& type)
{
    if (type.kind == minisol::ElementaryKind::address)
        return to_hex(w);
    return to_decimal(as_number(w, type));
}

std::string fixed(double r)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", r);
    return buf;
}

/// Columns padded to their widest cell, two spaces apart, no trailing blanks.
void append_table(std::string& out, std::string_view indent, const std::vector<std::vector<std::string>>& rows)
{
    std::vector<std::size_t> widths;
    for (const auto& row : rows) {
        widths.resize(std::max(widths.size(), row.size()));
        for (std::size_t c = 0; c < row.size(); ++c)
            widths[c] = std::max(widths[c], row[c].size());
    }
    for (const auto& row : rows) {
        std::string line{indent};
        for (std::size_t c = 0; c < row.size(); ++c) {
            line += row[c];
            if (c + 1 < row.size())
                line.append(widths[c] - row[c].size() + 2, ' ');
        }
        while (!line.empty() && line.back() == ' ')
            line.pop_back();
        out += line;
        out += '\n';
    }
}

}  // namespace

std::vector<VariableChange> summarize_changes(const runner::RunResult& result)
{
    std::set<layout::VariablePath> paths;
    for (const auto& [p, _] : result.initial_values)
        paths.insert(p);
    for (const auto& [p, _] : result.final_values)
        paths.insert(p);

    std::map<layout::VariablePath, std::size_t> writes;
    for (const auto& t : result.traces)
        ++writes[t.path];

    std::vector<VariableChange> out;
    for (const auto& p : paths) {
        const auto& info = result.variables.at(p);
        VariableChange c;
        c.path = info.text;
        c.type = info.type;
        if (auto it = result.initial_values.find(p); it != result.initial_values.end())
            c.initial = it->second;
        if (auto it = result.final_values.find(p); it != result.final_values.end())
            c.final_value = it->second;
        c.delta = as_number(c.final_value, c.type) - as_number(c.initial, c.type);
        if (auto it = writes.find(p); it != writes.end())
            c.write_count = it->second;
        out.push_back(std::move(c));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.path < b.path; });
    return out;
}

std::optional<double> pearson(std::span<const double> xs, std::span<const double> ys)
{
    const std::size_t n = std::min(xs.size(), ys.size());
    if (n < 2)
        return std::nullopt;
    double mx = 0;
    double my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0;
    double syy = 0;
    double sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0 || syy == 0)
        return std::nullopt;
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<Correlation> correlate(std::span<const runner::RunResult> results, const CorrelationOptions& options)
{
    if (results.empty() || results.size() < options.min_points)
        return {};

    struct Series {
        std::string text;
        std::vector<BigInt> values;
    };
    std::vector<Series> series;
    for (const auto& [p, info] : results[0].variables) {
        Series s{info.text, {}};
        for (const auto& r : results) {
            const auto it = r.final_values.find(p);
            if (it == r.final_values.end())
                break;
            s.values.push_back(as_number(it->second, info.type));
        }
        const bool constant = std::all_of(s.values.begin(), s.values.end(),
                                          [&](const BigInt& v) { return v == s.values.front(); });
        if (s.values.size() == results.size() && !constant)
            series.push_back(std::move(s));
    }
    std::sort(series.begin(), series.end(), [](const auto& a, const auto& b) { return a.text < b.text; });

    std::vector<Correlation> out;
    for (std::size_t i = 0; i < series.size(); ++i) {
        for (std::size_t j = i + 1; j < series.size(); ++j) {
            // Sorting the points makes the sums independent of case order.
            std::vector<std::pair<BigInt, BigInt>> points;
            for (std::size_t k = 0; k < results.size(); ++k)
                points.emplace_back(series[i].values[k], series[j].values[k]);
            std::sort(points.begin(), points.end());
            std::vector<double> xs;
            std::vector<double> ys;
            for (const auto& [x, y] : points) {
                xs.push_back(x.convert_to<double>());
                ys.push_back(y.convert_to<double>());
            }
            const auto r = pearson(xs, ys);
            if (r && std::abs(*r) >= options.threshold)
                out.push_back({series[i].text, series[j].text, *r, points.size()});
        }
    }
    return out;
}

bool AnalysisReport::all_expectations_pass() const noexcept
{
    return std::all_of(cases.begin(), cases.end(), [](const CaseReport& c) {
        return std::all_of(c.expectations.begin(), c.expectations.end(), [](const auto& e) { return e.pass; });
    });
}

AnalysisReport analyze(std::span<const runner::RunResult> results, const CorrelationOptions& options)
{
    AnalysisReport report;
    for (const auto& r : results)
        report.cases.push_back({r.name, summarize_changes(r), r.events, r.expectations, r.unknown_writes});
    report.correlations = correlate(results, options);
    return report;
}

Format parse_format(std::string_view name)
{
    if (name == "text")
        return Format::text;
    if (name == "json")
        return Format::json;
    throw Error{ErrorCode::unsupported_format, "unsupported report format '" + std::string{name} + "'"};
}

nlohmann::ordered_json report_to_json(const AnalysisReport& report)
{
    using nlohmann::ordered_json;
    ordered_json cases = ordered_json::array();
    for (const auto& c : report.cases) {
        ordered_json changes = ordered_json::array();
        for (const auto& v : c.changes)
            changes.push_back({{"path", v.path},
                               {"initial", to_hex(v.initial)},
                               {"final", to_hex(v.final_value)},
                               {"delta", to_decimal(v.delta)},
                               {"writes", v.write_count}});
        ordered_json events = ordered_json::array();
        for (const auto& e : c.events) {
            ordered_json ev{{"call", e.call}, {"status", vm::to_string(e.status)}};
            if (!e.reason.empty())
                ev["reason"] = e.reason;
            if (e.return_value)
                ev["return"] = to_hex(*e.return_value);
            events.push_back(std::move(ev));
        }
        ordered_json expectations = ordered_json::array();
        for (const auto& e : c.expectations)
            expectations.push_back({{"expr", e.expr}, {"pass", e.pass}, {"actual", to_hex(e.actual)}});
        ordered_json unknown = ordered_json::array();
        for (const auto& t : c.unknown_writes)
            unknown.push_back(vm::trace_to_json(t));
        cases.push_back({{"name", c.name},
                         {"changes", std::move(changes)},
                         {"events", std::move(events)},
                         {"expectations", std::move(expectations)},
                         {"unknown_writes", std::move(unknown)}});
    }

    ordered_json correlations = ordered_json::array();
    for (const auto& f : report.correlations)
        correlations.push_back({{"a", f.a}, {"b", f.b}, {"r", f.r}, {"n", f.n}});

    ordered_json out{{"cases", std::move(cases)}, {"correlations", std::move(correlations)}};
    if (report.generated_at)
        out["generated_at"] = *report.generated_at;
    return out;
}

std::string render_report(const AnalysisReport& report, Format format)
{
    if (format == Format::json)
        return report_to_json(report).dump();

    std::string out;
    if (report.generated_at)
        out += "generated " + *report.generated_at + "\n\n";
    for (const auto& c : report.cases) {
        out += "case " + quote(c.name) + "\n";
        if (!c.events.empty()) {
            std::vector<std::vector<std::string>> rows;
            for (const auto& e : c.events) {
                std::string detail = e.reason;
                if (e.return_value)
                    detail = "returned " + to_decimal(*e.return_value);
                rows.push_back({e.call, std::string{vm::to_string(e.status)}, detail});
            }
            out += "  events\n";
            append_table(out, "    ", rows);
        }
        std::vector<std::vector<std::string>> rows{{"path", "initial", "final", "delta", "writes"}};
        for (const auto& v : c.changes)
            rows.push_back({v.path, display(v.initial, v.type), display(v.final_value, v.type),
                            (v.delta > 0 ? "+" : "") + to_decimal(v.delta), std::to_string(v.write_count)});
        out += "  changes\n";
        append_table(out, "    ", rows);
        if (!c.expectations.empty()) {
            std::vector<std::vector<std::string>> exp;
            for (const auto& e : c.expectations)
                exp.push_back({e.pass ? "PASS" : "FAIL", e.expr, "actual " + to_hex(e.actual)});
            out += "  expectations\n";
            append_table(out, "    ", exp);
        }
        if (!c.unknown_writes.empty()) {
            std::vector<std::vector<std::string>> unk{{"event", "step", "contract", "slot", "old", "new"}};
            for (const auto& t : c.unknown_writes)
                unk.push_back({std::to_string(t.event_index), std::to_string(t.step_index), t.contract,
                               to_hex(t.slot), to_hex(t.old_word), to_hex(t.new_word)});
            out += "  unknown writes\n";
            append_table(out, "    ", unk);
        }
        out += "\n";
    }
    out += "correlations\n";
    if (report.correlations.empty()) {
        out += "  none\n";
    }
    else {
        std::vector<std::vector<std::string>> rows{{"a", "b", "r", "n"}};
        for (const auto& f : report.correlations)
            rows.push_back({f.a, f.b, fixed(f.r), std::to_string(f.n)});
        append_table(out, "  ", rows);
    }
    return out;
}

}  // namespace kaya::analyzer
