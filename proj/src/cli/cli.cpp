// Copyright 2026 The Kaya Authors
// SPDX-License-Identifier: Apache-2.0

#include <kaya/cli/cli.hpp>

#include <kaya/app/app.hpp>
#include <kaya/common/error.hpp>
#include <kaya/minisol/parser.hpp>
#include <kaya/server/server.hpp>

#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <pthread.h>
#include <sstream>
#include <thread>

namespace kaya::cli {

namespace {

/// An input failure tied to the file it came from.
struct InputError {
    std::string file;
    std::exception_ptr cause;
};

std::string read_file(const std::string& path)
{
    std::ifstream in{path, std::ios::binary};
    if (!in)
        throw Error{ErrorCode::io_error, "cannot read " + path};
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

template <typename F>
auto from_file(const std::string& path, F parse)
{
    try {
        return parse(read_file(path));
    }
    catch (...) {
        throw InputError{path, std::current_exception()};
    }
}

int report_error(std::ostream& err, bool json, const std::string& file, std::exception_ptr cause)
{
    try {
        std::rethrow_exception(cause);
    }
    catch (const std::exception& e) {
        if (json) {
            auto body = app::error_json(e);
            if (!file.empty())
                body["file"] = file;
            err << body.dump() << "\n";
        }
        else if (const auto* d = dynamic_cast<const DiagnosticError*>(&e)) {
            for (const auto& diag : d->diagnostics())
                err << (file.empty() ? "" : file + ":") << diag.to_string() << "\n";
        }
        else {
            err << (file.empty() ? "" : file + ": ") << e.what() << "\n";
        }
    }
    return exit_input_error;
}

bool write_output(const std::string& bytes, const std::string& out_path, std::ostream& out, std::ostream& err)
{
    if (out_path.empty()) {
        out << bytes;
        out.flush();
        return true;
    }
    std::ofstream file{out_path, std::ios::binary | std::ios::trunc};
    file << bytes;
    if (!file) {
        err << "cannot write " << out_path << "\n";
        return false;
    }
    return true;
}

int serve(const std::string& host, int port, const std::string& state_dir, std::ostream& err)
{
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    server::ServerOptions options;
    if (!state_dir.empty())
        options.state_dir = state_dir;
    std::unique_ptr<server::ApiServer> api;
    try {
        api = std::make_unique<server::ApiServer>(options);
    }
    catch (const std::exception& e) {
        err << "cannot start server: " << e.what() << "\n";
        return exit_input_error;
    }
    if (!api->bind(host, port)) {
        err << "cannot bind " << host << ":" << port << "\n";
        return exit_input_error;
    }
    std::thread listener{[&] { api->listen(); }};
    api->wait_until_ready();
    err << "listening on http://" << host << ":" << api->port() << "\n";
    err.flush();

    int received = 0;
    sigwait(&signals, &received);
    api->stop();
    listener.join();
    return exit_ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App cli{"Kaya: build blockchain pre-states, replay front-end events and analyze storage changes",
                 "kaya_cmd"};
    cli.require_subcommand(1);

    std::string format = "text";
    auto* analyze = cli.add_subcommand("analyze", "List the state variables of a MiniSol contract");
    std::string contract_path;
    analyze->add_option("file", contract_path, "MiniSol source")->required();
    analyze->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));

    auto* run_cmd = cli.add_subcommand("run", "Run a DBDL suite and print the analysis report");
    std::vector<std::string> contract_paths;
    std::string suite_path;
    std::string out_path;
    app::RunConfig config;
    run_cmd->add_option("-c,--contract", contract_paths, "MiniSol sources")->required();
    run_cmd->add_option("-t,--test", suite_path, "DBDL suite")->required();
    run_cmd->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
    run_cmd->add_option("--out", out_path, "Write the report here instead of stdout");
    run_cmd->add_option("--threshold", config.threshold, "Minimum |r| for correlation findings")
        ->check(CLI::Range(0.0, 1.0));
    run_cmd->add_option("--step-limit", config.step_limit, "Interpreter steps per call")->check(CLI::PositiveNumber);
    run_cmd->add_option("--jobs", config.jobs, "Cases run in parallel")->check(CLI::Range(1u, 256u));
    run_cmd->add_flag("--timestamps", config.timestamps, "Stamp the report with the generation time");

    auto* serve_cmd = cli.add_subcommand("serve", "Serve the HTTP API");
    int port = default_port;
    std::string host = "127.0.0.1";
    std::string state_dir;
    serve_cmd->add_option("--port", port, "Listen port")->envname("KAYA_PORT")->check(CLI::Range(0, 65535));
    serve_cmd->add_option("--host", host, "Listen address");
    serve_cmd->add_option("--state-dir", state_dir, "Directory for session snapshots");

    try {
        std::vector<std::string> reversed{args.rbegin(), args.rend()};
        cli.parse(reversed);
    }
    catch (const CLI::ParseError& e) {
        const int code = cli.exit(e, out, err);
        return code == 0 ? exit_ok : exit_input_error;
    }
    const bool json = format == "json";
    const auto fmt = json ? analyzer::Format::json : analyzer::Format::text;

    if (*analyze) {
        try {
            const auto unit = from_file(contract_path, [](const std::string& text) {
                return minisol::parse_source(text);
            });
            return write_output(app::render_variables(unit, fmt), "", out, err) ? exit_ok : exit_input_error;
        }
        catch (const InputError& e) {
            return report_error(err, json, e.file, e.cause);
        }
    }

    if (*run_cmd) {
        dbdl::SourceSet sources;
        dbdl::TestSuite suite;
        try {
            for (const auto& path : contract_paths)
                sources.add(path, from_file(path, [](const std::string& text) { return minisol::parse_source(text); }));
            suite = from_file(suite_path, [](const std::string& text) { return dbdl::parse_dbdl(text); });
        }
        catch (const InputError& e) {
            return report_error(err, json, e.file, e.cause);
        }

        analyzer::AnalysisReport report;
        try {
            report = app::run_report(suite, sources, config);
        }
        catch (...) {
            return report_error(err, json, suite_path, std::current_exception());
        }
        if (!write_output(analyzer::render_report(report, fmt), out_path, out, err))
            return exit_input_error;
        return report.all_expectations_pass() ? exit_ok : exit_expectation_failed;
    }

    return serve(host, port, state_dir, err);
}

}  // namespace kaya::cli
