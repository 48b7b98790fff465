// Copyright 2026 The Kaya Authors
// SPDX-License-Identifier: Apache-2.0

#include <kaya/app/app.hpp>
#include <kaya/common/error.hpp>
#include <kaya/layout/storage_layout.hpp>
#include <kaya/minisol/parser.hpp>

#include <chrono>
#include <ctime>

namespace kaya::app {

namespace {

using nlohmann::json;

[[noreturn]] void bad_field(std::string_view where, std::string_view what)
{
    throw DiagnosticError{{Diagnostic{ErrorCode::syntax_error, std::string{where} + ": " + std::string{what}}}};
}

const json& require(const json& obj, const char* key, std::string_view where)
{
    if (!obj.is_object() || !obj.contains(key))
        bad_field(where, std::string{"missing field '"} + key + "'");
    return obj.at(key);
}

std::string text_field(const json& obj, const char* key, std::string_view where)
{
    const auto& v = require(obj, key, where);
    if (!v.is_string())
        bad_field(where, std::string{"field '"} + key + "' must be a string");
    return v.get<std::string>();
}

const json& array_field(const json& obj, const char* key, std::string_view where)
{
    static const json empty = json::array();
    if (!obj.contains(key))
        return empty;
    const auto& v = obj.at(key);
    if (!v.is_array())
        bad_field(where, std::string{"field '"} + key + "' must be an array");
    return v;
}

dbdl::Literal literal_of(const json& v, std::string_view where)
{
    if (v.is_boolean())
        return dbdl::Literal::boolean(v.get<bool>());
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0)
        return dbdl::Literal::number(v.get<std::uint64_t>());
    if (v.is_string())
        return dbdl::parse_literal(v.get<std::string>());
    bad_field(where, "expected a literal");
}

/// "1 ether", "5 wei", or a bare number of wei.
Word amount_of(const json& v, std::string_view where)
{
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0)
        return v.get<std::uint64_t>();
    if (!v.is_string())
        bad_field(where, "expected an amount");
    const auto s = v.get<std::string>();
    if (s.find_first_of(" \t") != std::string::npos)
        return dbdl::parse_amount(s);
    return parse_word(s);
}

nlohmann::ordered_json diagnostic_json(const Diagnostic& d)
{
    return {{"code", to_string(d.code)}, {"message", d.message}, {"line", d.line}, {"column", d.column}};
}

}  // namespace

nlohmann::ordered_json variables_json(const minisol::SourceUnit& unit)
{
    nlohmann::ordered_json vars = nlohmann::ordered_json::array();
    for (const auto& contract : unit.contracts) {
        const auto layout = layout::compute_layout(contract);
        for (const auto& v : minisol::extract_variables(contract)) {
            const auto& placed = layout.vars.at(v.decl_index);
            vars.push_back({{"contract", contract.name},
                            {"name", v.name},
                            {"type", minisol::to_string(v.type)},
                            {"slot", to_hex(placed.base.slot)},
                            {"offset", placed.base.offset},
                            {"width", placed.base.width}});
        }
    }
    return {{"variables", std::move(vars)}};
}

std::string render_variables(const minisol::SourceUnit& unit, analyzer::Format format)
{
    if (format == analyzer::Format::json)
        return variables_json(unit).dump();
    std::string out;
    for (const auto& contract : unit.contracts) {
        const auto layout = layout::compute_layout(contract);
        out += "contract " + contract.name + "\n";
        std::vector<std::array<std::string, 5>> rows{{"name", "type", "slot", "offset", "width"}};
        for (const auto& v : minisol::extract_variables(contract)) {
            const auto& base = layout.vars.at(v.decl_index).base;
            rows.push_back({v.name, minisol::to_string(v.type), to_decimal(base.slot), std::to_string(base.offset),
                            std::to_string(base.width)});
        }
        std::array<std::size_t, 5> widths{};
        for (const auto& r : rows)
            for (std::size_t c = 0; c < r.size(); ++c)
                widths[c] = std::max(widths[c], r[c].size());
        for (const auto& r : rows) {
            std::string line = "  ";
            for (std::size_t c = 0; c < r.size(); ++c) {
                line += r[c];
                if (c + 1 < r.size())
                    line.append(widths[c] - r[c].size() + 2, ' ');
            }
            out += line + "\n";
        }
    }
    return out;
}

analyzer::AnalysisReport run_report(const dbdl::TestSuite& suite, const dbdl::SourceSet& sources,
                                    const RunConfig& config)
{
    runner::Options options;
    options.step_limit = config.step_limit;
    options.jobs = config.jobs;
    const auto results = runner::run_suite(suite, sources, options);
    auto report = analyzer::analyze(results, {config.threshold, 3});
    if (config.timestamps)
        report.generated_at = utc_timestamp();
    return report;
}

RunConfig config_from_json(const nlohmann::json& options)
{
    RunConfig config;
    if (options.is_null())
        return config;
    if (!options.is_object())
        throw Error{ErrorCode::invalid_word, "options must be an object"};
    auto bad = [](const char* key) { return Error{ErrorCode::invalid_word, std::string{"bad option '"} + key + "'"}; };
    if (options.contains("threshold")) {
        if (!options["threshold"].is_number())
            throw bad("threshold");
        config.threshold = options["threshold"].get<double>();
    }
    if (options.contains("step_limit")) {
        if (!options["step_limit"].is_number_integer() || options["step_limit"].get<std::int64_t>() <= 0)
            throw bad("step_limit");
        config.step_limit = options["step_limit"].get<std::uint64_t>();
    }
    if (options.contains("jobs")) {
        if (!options["jobs"].is_number_integer() || options["jobs"].get<std::int64_t>() <= 0)
            throw bad("jobs");
        config.jobs = static_cast<unsigned>(std::min<std::uint64_t>(options["jobs"].get<std::uint64_t>(), 64));
    }
    return config;
}

dbdl::TestCase case_from_json(const nlohmann::json& body, const dbdl::SourceSet& sources)
{
    if (!body.is_object())
        bad_field("case", "expected an object");
    dbdl::TestCase tc;
    tc.name = body.contains("name") ? text_field(body, "name", "case") : "case";

    if (body.contains("contracts")) {
        for (const auto& c : array_field(body, "contracts", "case"))
            tc.contracts.push_back({text_field(c, "alias", "contracts"), text_field(c, "source", "contracts"), {}});
    }
    else {
        for (const auto& src : sources.sources())
            for (const auto& decl : src.unit.contracts)
                tc.contracts.push_back({decl.name, src.name, {}});
    }

    for (const auto& a : array_field(body, "accounts", "case")) {
        dbdl::Account acct;
        acct.alias = text_field(a, "alias", "accounts");
        if (a.contains("balance"))
            acct.balance = amount_of(a["balance"], "accounts");
        tc.accounts.push_back(std::move(acct));
    }

    for (const auto& p : array_field(body, "prestate", "case"))
        tc.prestate.push_back(
            {dbdl::parse_path(text_field(p, "path", "prestate")), literal_of(require(p, "value", "prestate"), "prestate")});

    for (const auto& e : array_field(body, "events", "case")) {
        dbdl::Event ev;
        ev.contract = text_field(e, "contract", "events");
        ev.function = text_field(e, "function", "events");
        for (const auto& arg : array_field(e, "args", "events"))
            ev.args.push_back(literal_of(arg, "events"));
        ev.sender = text_field(e, "from", "events");
        if (e.contains("value"))
            ev.value = amount_of(e["value"], "events");
        tc.events.push_back(std::move(ev));
    }

    for (const auto& x : array_field(body, "expectations", "case")) {
        dbdl::Expectation exp;
        exp.path = dbdl::parse_path(text_field(x, "path", "expectations"));
        exp.cmp = x.contains("op") ? dbdl::parse_comparator(text_field(x, "op", "expectations")) : dbdl::Comparator::eq;
        exp.expected = literal_of(require(x, "value", "expectations"), "expectations");
        tc.expectations.push_back(std::move(exp));
    }

    if (auto diags = dbdl::check_names(tc); !diags.empty())
        throw DiagnosticError{std::move(diags)};
    return tc;
}

dbdl::TestSuite suite_from_json(const nlohmann::json& body, const dbdl::SourceSet& sources)
{
    if (body.is_object() && body.contains("dbdl")) {
        if (!body["dbdl"].is_string())
            bad_field("body", "field 'dbdl' must be a string");
        return dbdl::parse_dbdl(body["dbdl"].get<std::string>());
    }
    dbdl::TestSuite suite;
    if (body.is_object() && body.contains("cases")) {
        for (const auto& c : array_field(body, "cases", "body"))
            suite.cases.push_back(case_from_json(c, sources));
        if (auto diags = dbdl::check_names(suite); !diags.empty())
            throw DiagnosticError{std::move(diags)};
        return suite;
    }
    suite.cases.push_back(case_from_json(body, sources));
    return suite;
}

nlohmann::ordered_json error_json(const std::exception& error)
{
    nlohmann::ordered_json diags = nlohmann::ordered_json::array();
    std::string code = "Error";
    if (const auto* e = dynamic_cast<const Error*>(&error)) {
        code = std::string{to_string(e->code())};
        if (const auto* d = dynamic_cast<const DiagnosticError*>(e))
            for (const auto& diag : d->diagnostics())
                diags.push_back(diagnostic_json(diag));
        else
            diags.push_back(diagnostic_json({e->code(), e->what(), 0, 0}));
    }
    return {{"error", code}, {"message", error.what()}, {"diagnostics", std::move(diags)}};
}

std::string utc_timestamp()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace kaya::app
