// Copyright 2026 The Kaya Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any fails.

#include <kaya/analyzer/analyzer.hpp>
#include <kaya/app/app.hpp>
#include <kaya/dbdl/validate.hpp>
#include <kaya/layout/storage_layout.hpp>
#include <kaya/minisol/parser.hpp>
#include <kaya/server/server.hpp>

#include <support/fixtures.hpp>
#include <support/generators.hpp>
#include <support/layout_golden.hpp>
#include <support/oracle.hpp>
#include <support/vm_harness.hpp>
#include <support/vm_properties.hpp>

#include <httplib.h>
#include <json.hpp>

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

using namespace kaya;
using nlohmann::json;

namespace {

// Pinned thresholds.
constexpr int differential_contracts = 100;
constexpr int differential_cases_per_contract = 5;
constexpr double differential_budget_seconds = 30.0;
constexpr int roundtrip_inputs = 100;
constexpr int roundtrip_paths = 1000;
constexpr int vm_random_calls = 1000;
constexpr double correlation_floor = 0.8;
constexpr std::size_t sweep_points = 5;

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::filesystem::path scratch()
{
    static const auto dir = [] {
        auto d = std::filesystem::temp_directory_path() / "kaya_acceptance";
        std::filesystem::create_directories(d);
        return d;
    }();
    return dir;
}

void write_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream{path, std::ios::binary} << text;
}

struct Process {
    int exit_code = -1;
    std::string out;
};

/// Runs a shell command, capturing stdout.
Process run_command(const std::string& command)
{
    Process p;
    FILE* pipe = ::popen(command.c_str(), "r");
    if (!pipe)
        return p;
    char buf[4096];
    std::size_t n = 0;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0)
        p.out.append(buf, n);
    const int status = ::pclose(pipe);
    p.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return p;
}

std::string shell_arg(const std::filesystem::path& p)
{
    return "'" + p.string() + "'";
}

Process kaya_cmd(const std::string& args)
{
    return run_command(std::string{"'"} + KAYA_CMD + "' " + args + " 2>/dev/null");
}

/// Validates with the jsonschema package; empty when valid.
std::optional<std::string> schema_errors(const std::string& document)
{
    const auto file = scratch() / "report.json";
    write_file(file, document);
    const auto p = run_command("python3 " + shell_arg(test::source_path("tools/check_schema.py")) + " " +
                               shell_arg(test::source_path("tests/golden/report.schema.json")) + " " + shell_arg(file) +
                               " 2>&1");
    if (p.exit_code == 0)
        return std::nullopt;
    return p.out.empty() ? std::string{"schema checker failed to run"} : p.out;
}

Verdict differential()
{
    const auto start = std::chrono::steady_clock::now();
    test::Rng rng{2026};
    int cases = 0;
    int agreeing = 0;
    std::size_t events = 0;
    std::string first;
    for (int i = 0; i < differential_contracts; ++i) {
        minisol::SourceUnit unit;
        unit.contracts.push_back(test::random_contract(rng));
        dbdl::SourceSet sources;
        sources.add("gen.msol", minisol::parse_source(minisol::format_source(unit)));
        const auto suite = test::random_suite(rng, unit.contracts[0], "gen.msol", differential_cases_per_contract);
        for (const auto& tc : suite.cases) {
            const auto bound = dbdl::bind_case(tc, sources);
            ++cases;
            events += bound.events.size();
            const auto diff = test::oracle_disagreement(bound);
            if (!diff)
                ++agreeing;
            else if (first.empty())
                first = "contract " + std::to_string(i) + ": " + *diff;
        }
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ostringstream d;
    d << differential_contracts << " contracts, " << cases << " cases, " << events << " events, " << agreeing << "/"
      << cases << " agree, " << seconds << " s (budget " << differential_budget_seconds << " s)";
    if (!first.empty())
        d << "; " << first;
    return {agreeing == cases && seconds < differential_budget_seconds, d.str()};
}

Verdict layout_goldens()
{
    int fixtures = 0;
    int layouts_ok = 0;
    std::string first;
    for (const char* name : {"packing", "mappings", "arrays", "nested", "snail_throne"}) {
        ++fixtures;
        const auto unit = minisol::parse_source(test::read_text(std::string{"tests/fixtures/layout/"} + name + ".msol"));
        const auto golden = test::load_json(std::string{"tests/golden/layout/"} + name + ".solc.json");
        const auto problems = test::compare_with_solc(layout::compute_layout(unit.contracts.at(0)), golden);
        if (problems.empty())
            ++layouts_ok;
        else if (first.empty())
            first = std::string{name} + ": " + problems.front();
    }

    int slots = 0;
    int slots_ok = 0;
    const auto keccak = test::load_json("tests/golden/keccak.json");
    for (const auto& entry : keccak.at("derived_slots")) {
        ++slots;
        const auto fixture = entry.at("fixture").get<std::string>();
        const auto unit = minisol::parse_source(test::read_text("tests/fixtures/layout/" + fixture + ".msol"));
        const auto l = layout::compute_layout(unit.contracts.at(0));
        layout::AddressRegistry registry;
        const auto a = layout::resolve_address(l, test::path_from_golden(l.contract, entry), registry);
        if (to_hex_padded(a.slot, 32) == entry.at("slot").get<std::string>() &&
            a.offset == entry.at("offset").get<unsigned>() && a.width == entry.at("width").get<unsigned>())
            ++slots_ok;
        else if (first.empty())
            first = fixture + "." + entry.at("root").get<std::string>() + ": derived slot differs";
    }
    std::ostringstream d;
    d << layouts_ok << "/" << fixtures << " layouts match solc, " << slots_ok << "/" << slots
      << " derived slots match keccak digests";
    if (!first.empty())
        d << "; " << first;
    return {fixtures == 5 && layouts_ok == fixtures && slots > 0 && slots_ok == slots, d.str()};
}

Verdict round_trips()
{
    test::Rng rng{7};
    int failures = 0;
    std::string first;
    auto note = [&](const std::string& what) {
        if (failures++ == 0)
            first = what;
    };

    for (int i = 0; i < roundtrip_inputs; ++i) {
        const auto text = test::random_unit(rng).text;
        const auto once = minisol::parse_source(text);
        const auto formatted = minisol::format_source(once);
        const auto twice = minisol::parse_source(formatted);
        if (twice.contracts != once.contracts || minisol::format_source(twice) != formatted)
            note("MiniSol input " + std::to_string(i));
    }

    for (int i = 0; i < roundtrip_inputs; ++i) {
        const auto contract = test::random_contract(rng);
        const auto text = dbdl::format_dbdl(test::random_suite(rng, contract, "gen.msol", 1 + i % 4));
        const auto once = dbdl::parse_dbdl(text);
        const auto formatted = dbdl::format_dbdl(once);
        const auto twice = dbdl::parse_dbdl(formatted);
        if (!(twice == once) || dbdl::format_dbdl(twice) != formatted)
            note("DBDL input " + std::to_string(i));
    }

    int paths = 0;
    while (paths < roundtrip_paths) {
        const auto l = layout::compute_layout(test::random_contract(rng));
        layout::AddressRegistry registry;
        for (int k = 0; k < 25; ++k, ++paths) {
            const auto path = test::random_path(rng, l);
            const auto a = layout::resolve_address(l, path, registry);
            try {
                if (layout::decode_address(l, registry, a.slot, a.offset, a.width) != path)
                    note("decode(resolve(" + layout::format_path(l, path) + ")) differs");
            }
            catch (const Error& e) {
                note("decode(resolve(" + layout::format_path(l, path) + ")): " + e.what());
            }
        }
    }
    std::ostringstream d;
    d << roundtrip_inputs << " MiniSol + " << roundtrip_inputs << " DBDL fixpoints, " << paths
      << " decode/resolve paths, " << failures << " failures";
    if (!first.empty())
        d << "; " << first;
    return {failures == 0, d.str()};
}

Verdict vm_semantics()
{
    std::vector<std::string> problems;
    const Address alice = test::test_address(0xa1);

    // Checked arithmetic: each call must revert and leave the state unchanged.
    test::VmHarness h{R"(
contract Checked {
    uint8 small;
    uint256 big;
    int256 s;
    uint256 zero;
    function inc() { small += 1; }
    function dbl() { big = big * 2; }
    function dec() { s = s - 1; }
    function under() { zero -= 1; }
}
)"};
    h.deploy({}, {{h.path("small"), 255},
                  {h.path("big"), Word{1} << 255},
                  {h.path("s"), Word{1} << 255}});
    for (const char* fn : {"inc", "dbl", "dec", "under"}) {
        const auto before = h.state;
        const auto out = h.call(fn, alice);
        if (out.status != vm::Status::revert || out.reason != "arithmetic overflow" &&
                                                    out.reason.find("out of range") == std::string::npos)
            problems.push_back(std::string{fn} + " did not revert on overflow: " + out.reason);
        if (!(h.state == before))
            problems.push_back(std::string{fn} + " changed state on revert");
    }

    // Step limit: an endless loop stops at the limit and rolls back.
    test::VmHarness spin{R"(
contract Spin {
    uint256 x;
    function spin() {
        uint256 i = 0;
        x = 1;
        for (i = 0; i < 1; i += 0) {
            x += 1;
        }
    }
}
)"};
    const auto spin_before = spin.state;
    const auto out = spin.call("spin", alice, 0, {}, 50000);
    if (out.status != vm::Status::step_limit_exceeded || out.steps != 50001 || !(spin.state == spin_before))
        problems.push_back("endless loop did not stop cleanly at the step limit");

    // Random calls: wei conservation, bit-identical rollback, sound traces.
    test::Rng rng{99};
    const auto sweep = test::sweep_vm_invariants(rng, vm_random_calls);
    test::Rng tight{100};
    const auto aborts = test::sweep_vm_invariants(tight, vm_random_calls / 4, 4);
    problems.insert(problems.end(), sweep.failures.begin(), sweep.failures.end());
    problems.insert(problems.end(), aborts.failures.begin(), aborts.failures.end());
    if (sweep.reverts == 0 || aborts.step_aborts == 0)
        problems.push_back("random calls never exercised reverts or step-limit aborts");

    std::ostringstream d;
    d << "4 overflow reverts, step-limit abort, " << sweep.calls + aborts.calls << " random calls ("
      << sweep.reverts + aborts.reverts << " reverts, " << aborts.step_aborts << " step-limit aborts), "
      << problems.size() << " violations";
    if (!problems.empty())
        d << "; " << problems.front();
    return {problems.empty() && sweep.calls >= vm_random_calls, d.str()};
}

bool is_pair(const analyzer::Correlation& c, const std::string& x, const std::string& y)
{
    return (c.a == x && c.b == y) || (c.a == y && c.b == x);
}

Verdict snail_sweep()
{
    const std::string source_file = "tests/fixtures/snail_throne.msol";
    dbdl::SourceSet sources;
    sources.add(source_file, minisol::parse_source(test::read_text(source_file)));
    const auto suite = dbdl::parse_dbdl(test::read_text("tests/fixtures/snail_throne.dbdl"));

    std::set<Word> counts;
    for (const auto& tc : suite.cases)
        for (const auto& p : tc.prestate)
            if (p.path.variable == "hatcherySnail" && p.path.keys.size() == 1 && p.path.keys[0].alias == "a")
                counts.insert(p.value.value);

    const auto report = app::run_report(suite, sources, {});
    const std::string earnings = "SnailThrone.playerEarnings[a]";
    const std::string snails = "SnailThrone.hatcherySnail[a]";
    const auto found = std::find_if(report.correlations.begin(), report.correlations.end(),
                                    [&](const auto& c) { return is_pair(c, earnings, snails); });

    const auto text = analyzer::render_report(report, analyzer::Format::text);
    const auto doc = json::parse(analyzer::render_report(report, analyzer::Format::json));
    bool in_json = false;
    for (const auto& c : doc.at("correlations"))
        in_json = in_json || ((c["a"] == earnings && c["b"] == snails) || (c["a"] == snails && c["b"] == earnings));
    bool in_text = false;
    const auto block = text.find("correlations");
    std::istringstream lines{block == std::string::npos ? std::string{} : text.substr(block)};
    for (std::string line; std::getline(lines, line);)
        in_text = in_text || (line.find(earnings) != std::string::npos && line.find(snails) != std::string::npos);

    std::ostringstream d;
    d << counts.size() << " pre-state snail counts; ";
    if (found == report.correlations.end())
        d << "no (playerEarnings[a], hatcherySnail[a]) finding";
    else
        d << "r(playerEarnings[a], hatcherySnail[a]) = " << found->r << " over n = " << found->n
          << " (floor " << correlation_floor << ")";
    d << "; rendered in text: " << (in_text ? "yes" : "no") << ", json: " << (in_json ? "yes" : "no");
    const bool pass = counts.size() >= sweep_points && found != report.correlations.end() &&
                      found->r >= correlation_floor && found->n >= sweep_points && in_text && in_json;
    return {pass, d.str()};
}

std::filesystem::path failing_suite()
{
    auto suite = dbdl::parse_dbdl(test::read_text("tests/fixtures/snail_throne.dbdl"));
    suite.cases.at(0).expectations.push_back({dbdl::parse_path("SnailThrone.hatcherySnail[a]"), dbdl::Comparator::eq,
                                              dbdl::Literal::number(41)});
    const auto path = scratch() / "failing.dbdl";
    write_file(path, dbdl::format_dbdl(suite));
    return path;
}

Verdict single_shot()
{
    const auto contract = shell_arg(test::source_path("tests/fixtures/snail_throne.msol"));
    const auto good = kaya_cmd("run -c " + contract + " -t " +
                               shell_arg(test::source_path("tests/fixtures/snail_throne.dbdl")) + " --format json");
    const auto good_schema = schema_errors(good.out);
    const auto bad = kaya_cmd("run -c " + contract + " -t " + shell_arg(failing_suite()) + " --format json");
    const auto bad_schema = schema_errors(bad.out);

    std::ostringstream d;
    d << "passing suite: exit " << good.exit_code << ", schema " << (good_schema ? "invalid" : "valid")
      << "; failing expectation: exit " << bad.exit_code << ", schema " << (bad_schema ? "invalid" : "valid");
    if (good_schema)
        d << "; " << *good_schema;
    return {good.exit_code == 0 && !good_schema && bad.exit_code == 1 && !bad_schema, d.str()};
}

Verdict cli_api_parity()
{
    server::ApiServer api;
    if (!api.bind("127.0.0.1", 0))
        return {false, "could not bind the API server"};
    std::thread listener{[&] { api.listen(); }};
    api.wait_until_ready();
    httplib::Client client{"127.0.0.1", api.port()};
    client.set_read_timeout(60);

    const auto msol = test::source_path("tests/fixtures/snail_throne.msol");
    const auto upload = json{{"name", "snail_throne.msol"}, {"source", test::read_text("tests/fixtures/snail_throne.msol")}};

    struct Input {
        std::string label;
        std::filesystem::path suite;
        std::string flags;
        json options;
    };
    const std::vector<Input> inputs{
        {"fixture", test::source_path("tests/fixtures/snail_throne.dbdl"), "", json::object()},
        {"failing expectation", failing_suite(), "", json::object()},
        {"threshold 0.5, one job", test::source_path("tests/fixtures/snail_throne.dbdl"), " --threshold 0.5 --jobs 1",
         json{{"threshold", 0.5}, {"jobs", 1}}},
    };

    int identical = 0;
    std::string first;
    for (const auto& in : inputs) {
        const auto cli = kaya_cmd("run -c " + shell_arg(msol) + " -t " + shell_arg(in.suite) + " --format json" + in.flags);
        const auto id = json::parse(client.Post("/sessions")->body)["id"].get<std::string>();
        const auto base = "/sessions/" + id;
        client.Post(base + "/contracts", upload.dump(), "application/json");
        client.Put(base + "/case", json{{"dbdl", test::read_file(in.suite.string())}}.dump(), "application/json");
        const auto res = client.Post(base + "/run", json{{"options", in.options}}.dump(), "application/json");
        if (res && !cli.out.empty() && res->body == cli.out)
            ++identical;
        else if (first.empty())
            first = in.label + " differs";
    }
    api.stop();
    listener.join();

    std::ostringstream d;
    d << identical << "/" << inputs.size() << " inputs byte-identical between kaya_cmd run and POST /run";
    if (!first.empty())
        d << "; " << first;
    return {identical == static_cast<int>(inputs.size()), d.str()};
}

}  // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
        {"differential-oracle", differential},
        {"storage-layout-goldens", layout_goldens},
        {"round-trip-laws", round_trips},
        {"vm-semantics", vm_semantics},
        {"snailthrone-correlation", snail_sweep},
        {"kaya-cmd-single-shot", single_shot},
        {"cli-api-parity", cli_api_parity},
    };
    int failed = 0;
    for (const auto& [name, check] : criteria) {
        Verdict v;
        try {
            v = check();
        }
        catch (const std::exception& e) {
            v = {false, std::string{"exception: "} + e.what()};
        }
        failed += v.pass ? 0 : 1;
        std::cout << (v.pass ? "PASS " : "FAIL ") << name << ": " << v.detail << std::endl;
    }
    std::filesystem::remove_all(scratch());
    return failed == 0 ? 0 : 1;
}
