// Copyright 2026 The Kaya Authors
// SPDX-License-Identifier: Apache-2.0

#include <kaya/common/error.hpp>
#include <kaya/dbdl/dbdl.hpp>
#include <kaya/minisol/parser.hpp>
#include <kaya/runner/runner.hpp>
#include <kaya/vm/mini_vm.hpp>

#include <support/fixtures.hpp>

#include <gtest/gtest.h>

using namespace kaya;
using namespace kaya::runner;
using kaya::layout::Accessor;

namespace {

constexpr std::string_view counter_source = R"(
contract C {
    uint256 x;
    uint128 lo;
    uint128 hi;
    mapping(address => uint256) m;
    function inc() { x += 1; }
    function fail() { x += 1; require(false, "nope"); }
    function both(uint128 a, uint128 b) { lo = a; hi = b; }
    function credit(address who) { m[who] += 5; }
}
)";

dbdl::SourceSet counter_sources()
{
    dbdl::SourceSet s;
    s.add("c.msol", minisol::parse_source(counter_source));
    return s;
}

dbdl::TestSuite suite_with(std::string_view body)
{
    return dbdl::parse_dbdl("testcase \"t\" { contract C from \"c.msol\" account a { balance: 1 ether } " +
                            std::string{body} + " }");
}

const RunResult& only(const std::vector<RunResult>& results)
{
    EXPECT_EQ(results.size(), 1u);
    return results.at(0);
}

layout::VariablePath path(std::string root, std::vector<Accessor> acc = {})
{
    return {"C", std::move(root), std::move(acc)};
}

std::vector<RunResult> run_snail_sweep(unsigned jobs)
{
    dbdl::SourceSet sources;
    sources.add("snail_throne.msol", minisol::parse_source(test::read_text("tests/fixtures/snail_throne.msol")));
    Options opts;
    opts.jobs = jobs;
    return run_suite(dbdl::parse_dbdl(test::read_text("tests/fixtures/snail_throne.dbdl")), sources, opts);
}

/// Delegates to MiniVm but reports every write as a whole-slot store, the
/// way an EVM SSTORE trace would.
class WholeSlotBackend final : public vm::ScvmBackend {
public:
    std::string_view name() const noexcept override { return "whole-slot"; }

    vm::WorldState deploy_prestate(std::span<const vm::DeployedContract> contracts,
                                   std::span<const vm::Balance> balances,
                                   std::span<const vm::PreStateWrite> params) const override
    {
        return inner_.deploy_prestate(contracts, balances, params);
    }

    vm::ExecutionOutcome execute_call(vm::WorldState& state, const vm::DeployedContract& contract,
                                      std::string_view function, const vm::CallContext& ctx,
                                      std::uint64_t step_limit, std::size_t event_index) const override
    {
        auto out = inner_.execute_call(state, contract, function, ctx, step_limit, event_index);
        for (auto& t : out.traces) {
            t.offset = 0;
            t.width = 32;
        }
        return out;
    }

private:
    vm::MiniVm inner_;
};

}  // namespace

TEST(run_suite, two_increments)
{
    const auto results = run_suite(suite_with("prestate { C.x = 0 } events { call C.inc() from a call C.inc() from a } "
                                              "expect { C.x == 2 }"),
                                   counter_sources());
    const auto& r = only(results);
    EXPECT_EQ(r.final_values.at(path("x")), Word{2});
    EXPECT_EQ(r.initial_values.at(path("x")), Word{0});
    ASSERT_EQ(r.traces.size(), 2u);
    EXPECT_EQ(r.traces[1].old_value, Word{1});
    EXPECT_EQ(r.traces[1].new_value, Word{2});
    EXPECT_EQ(r.traces[1].event_index, 1u);
    EXPECT_TRUE(r.all_expectations_pass());
}

TEST(run_suite, revert_does_not_abort_later_events)
{
    const auto results = run_suite(
        suite_with("events { call C.inc() from a call C.fail() from a call C.inc() from a } expect { C.x == 3 }"),
        counter_sources());
    const auto& r = only(results);
    ASSERT_EQ(r.events.size(), 3u);
    EXPECT_EQ(r.events[0].status, vm::Status::success);
    EXPECT_EQ(r.events[1].status, vm::Status::revert);
    EXPECT_EQ(r.events[1].reason, "nope");
    EXPECT_EQ(r.events[2].status, vm::Status::success);
    EXPECT_EQ(r.final_values.at(path("x")), Word{2});
    ASSERT_EQ(r.expectations.size(), 1u);
    EXPECT_FALSE(r.expectations[0].pass);
    EXPECT_EQ(r.expectations[0].actual, Word{2});
    EXPECT_FALSE(r.all_expectations_pass());
}

TEST(run_suite, snail_throne_sale_raises_earnings)
{
    const auto results = run_snail_sweep(1);
    ASSERT_EQ(results.size(), 5u);
    const auto& r = results[0];
    const layout::VariablePath earnings{"SnailThrone", "playerEarnings",
                                        {Accessor::key(to_word(dbdl::account_address("a")))}};
    EXPECT_EQ(r.initial_values.at(earnings), Word{0});
    EXPECT_GT(r.final_values.at(earnings), Word{0});
    EXPECT_EQ(r.variables.at(earnings).text, "SnailThrone.playerEarnings[a]");
    EXPECT_TRUE(r.all_expectations_pass());
    EXPECT_TRUE(r.unknown_writes.empty());
}

TEST(run_suite, parallel_runs_keep_suite_order)
{
    const auto serial = run_snail_sweep(1);
    const auto parallel = run_snail_sweep(4);
    ASSERT_EQ(serial.size(), parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i)
        EXPECT_EQ(to_json(serial[i]).dump(), to_json(parallel[i]).dump());
}

TEST(run_suite, refuses_invalid_suites)
{
    try {
        run_suite(suite_with("events { call C.nothing() from a }"), counter_sources());
        FAIL() << "expected DiagnosticError";
    }
    catch (const DiagnosticError& e) {
        EXPECT_EQ(e.diagnostics().at(0).code, ErrorCode::unknown_function);
    }
}

TEST(run_suite, replay_matches_final_values)
{
    const auto results = run_suite(
        suite_with("prestate { C.lo = 4 } events { call C.both(1, 2) from a call C.credit(a) from a "
                   "call C.credit(a) from a call C.inc() from a }"),
        counter_sources());
    const auto& r = only(results);
    auto replay = r.initial_values;
    for (const auto& t : r.traces)
        replay[t.path] = t.new_value;
    EXPECT_EQ(replay, r.final_values);
}

TEST(run_suite, pluggable_backend_with_whole_slot_traces)
{
    Options opts;
    opts.backend = std::make_shared<WholeSlotBackend>();
    const auto results =
        run_suite(suite_with("prestate { C.lo = 4 C.hi = 9 } events { call C.both(1, 2) from a }"), counter_sources(),
                  opts);
    const auto& r = only(results);
    // Each whole-slot write touches both halves but only one changes.
    ASSERT_EQ(r.traces.size(), 2u);
    EXPECT_EQ(r.traces[0].path, path("lo"));
    EXPECT_EQ(r.traces[0].old_value, Word{4});
    EXPECT_EQ(r.traces[0].new_value, Word{1});
    EXPECT_EQ(r.traces[1].path, path("hi"));
    EXPECT_EQ(r.traces[1].new_value, Word{2});
    EXPECT_TRUE(r.unknown_writes.empty());
}

TEST(transform_variables, examples)
{
    const auto layout = layout::compute_layout(minisol::parse_source(counter_source).contracts[0]);
    layout::AddressRegistry reg;
    const std::vector<vm::PreStateWrite> one{{path("x"), 7}};
    const auto w = transform_variables(layout, one, reg);
    ASSERT_EQ(w.size(), 1u);
    EXPECT_EQ(w[0], (layout::StorageWrite{{0, 0, 32}, 7}));

    const std::vector<vm::PreStateWrite> halves{{path("lo"), 1}, {path("hi"), 2}};
    const auto h = transform_variables(layout, halves, reg);
    ASSERT_EQ(h.size(), 2u);
    EXPECT_EQ(h[0].address, (layout::SlotAddress{1, 0, 16}));
    EXPECT_EQ(h[1].address, (layout::SlotAddress{1, 16, 16}));

    EXPECT_TRUE(transform_variables(layout, {}, reg).empty());
}

TEST(decode_traces, names_derived_and_flags_unknown)
{
    const auto layout = layout::compute_layout(minisol::parse_source(counter_source).contracts[0]);
    layout::AddressRegistry reg;
    const auto key = path("m", {Accessor::key(0xabc)});
    const auto a = layout::resolve_address(layout, key, reg);
    std::vector<vm::TraceRecord> traces{
        {0, 0, "C", a.slot, 0, 32, 0, 5},
        {0, 1, "C", parse_word("0x1234567890"), 0, 32, 0, 1},
        {0, 2, "C", 1, 0, 32, (Word{9} << 128) | 4, (Word{2} << 128) | 1},
    };
    const auto d = decode_traces(layout, reg, traces);
    ASSERT_EQ(d.rows.size(), 3u);
    EXPECT_EQ(d.rows[0].path, key);
    EXPECT_EQ(layout::format_path(layout, d.rows[0].path), "C.m[0x0000000000000000000000000000000000000abc]");
    EXPECT_EQ(d.rows[1].path, path("lo"));
    EXPECT_EQ(d.rows[2].path, path("hi"));
    EXPECT_EQ(d.rows[2].old_value, Word{9});
    ASSERT_EQ(d.unknown_writes.size(), 1u);
    EXPECT_EQ(d.unknown_writes[0].step_index, 1u);
}

TEST(run_result, json_shape)
{
    const auto results = run_suite(
        suite_with("events { call C.inc() from a call C.fail() from a } expect { C.x >= 1 }"), counter_sources());
    const auto j = to_json(only(results));
    EXPECT_EQ(j.dump(),
              R"({"case":"t","events":[{"call":"call C.inc() from a","status":"Success"},)"
              R"({"call":"call C.fail() from a","status":"Revert","reason":"nope"}],)"
              R"("variables":[{"path":"C.x","initial":"0x0","final":"0x1"}],)"
              R"("traces":[{"event":0,"step":0,"path":"C.x","old":"0x0","new":"0x1"}],)"
              R"("expectations":[{"expr":"C.x >= 1","pass":true,"actual":"0x1"}],"unknown_writes":[]})");
}
