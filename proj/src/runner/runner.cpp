// Copyright 2026 The Kaya Authors
// SPDX-License-Identifier: Apache-2.0

#include <kaya/common/error.hpp>
#include <kaya/runner/runner.hpp>
#include <kaya/vm/mini_vm.hpp>

#include <algorithm>
#include <atomic>
#include <exception>
#include <set>
#include <thread>

namespace kaya::runner {

bool RunResult::all_expectations_pass() const noexcept
{
    return std::all_of(expectations.begin(), expectations.end(), [](const auto& e) { return e.pass; });
}

std::vector<layout::StorageWrite> transform_variables(const layout::StorageLayout& layout,
                                                      std::span<const vm::PreStateWrite> params,
                                                      layout::AddressRegistry& registry)
{
    std::vector<layout::StorageWrite> out;
    out.reserve(params.size());
    for (const auto& p : params)
        out.push_back(layout::encode_assignment(layout, p.path, p.value, registry));
    return out;
}

DecodeResult decode_traces(const layout::StorageLayout& layout, const layout::AddressRegistry& registry,
                           std::span<const vm::TraceRecord> traces)
{
    DecodeResult out;
    for (const auto& t : traces) {
        const auto occupants = layout::variables_in_slot(layout, registry, t.slot);
        const unsigned lo = t.offset;
        const unsigned hi = t.offset + t.width;
        std::vector<const layout::SlotOccupant*> overlapping;
        for (const auto& o : occupants) {
            if (o.offset < hi && lo < o.offset + o.width)
                overlapping.push_back(&o);
        }
        auto row = [&](const layout::SlotOccupant& o) {
            return DecodedTrace{o.path, extract_bytes(t.old_word, o.offset, o.width),
                                extract_bytes(t.new_word, o.offset, o.width), t.event_index, t.step_index};
        };

        const auto covering = std::find_if(overlapping.begin(), overlapping.end(), [&](const auto* o) {
            return o->offset <= lo && hi <= o->offset + o->width;
        });
        if (covering != overlapping.end()) {
            out.rows.push_back(row(**covering));
            continue;
        }

        // Split a multi-variable write; changed bytes outside every variable are unknown.
        Word claimed = 0;
        for (const auto* o : overlapping) {
            claimed = insert_bytes(claimed, o->offset, o->width, width_mask(o->width));
            auto r = row(*o);
            if (r.old_value != r.new_value)
                out.rows.push_back(std::move(r));
        }
        const Word range = insert_bytes(Word{0}, lo, t.width, width_mask(t.width));
        const Word changed = (t.old_word ^ t.new_word) & range;
        if (overlapping.empty() || (changed & ~claimed) != 0)
            out.unknown_writes.push_back(t);
    }
    return out;
}

namespace {

struct Instance {
    const dbdl::BoundContract* bound = nullptr;
    layout::AddressRegistry registry;
};

Word read_value(const vm::WorldState& state, Instance& inst, const layout::VariablePath& path)
{
    const auto a = layout::resolve_address(inst.bound->layout, path, inst.registry);
    return extract_bytes(state.load(inst.bound->alias, a.slot), a.offset, a.width);
}

}  // namespace

RunResult run_case(const dbdl::BoundCase& tc, const Options& options)
{
    static const auto default_backend = std::make_shared<const vm::MiniVm>();
    const vm::ScvmBackend& backend = options.backend ? *options.backend : *default_backend;

    RunResult result;
    result.name = tc.name;

    std::vector<Instance> instances(tc.contracts.size());
    std::vector<vm::DeployedContract> deployed;
    for (std::size_t i = 0; i < tc.contracts.size(); ++i)
        instances[i].bound = &tc.contracts[i];
    for (auto& inst : instances)
        deployed.push_back({inst.bound->alias, inst.bound->address, &inst.bound->decl, &inst.bound->layout,
                            &inst.registry});
    auto instance_of = [&](const std::string& alias) -> Instance& {
        for (auto& inst : instances)
            if (inst.bound->alias == alias)
                return inst;
        throw Error{ErrorCode::unknown_contract, "no deployed contract '" + alias + "'"};
    };
    auto deployed_of = [&](const std::string& alias) -> const vm::DeployedContract& {
        for (const auto& d : deployed)
            if (d.alias == alias)
                return d;
        throw Error{ErrorCode::unknown_contract, "no deployed contract '" + alias + "'"};
    };

    std::vector<vm::PreStateWrite> params;
    for (const auto& p : tc.prestate)
        params.push_back({p.path, p.value});
    vm::WorldState state = backend.deploy_prestate(deployed, tc.balances, params);
    const vm::WorldState initial = state;

    std::vector<vm::TraceRecord> traces;
    for (std::size_t i = 0; i < tc.events.size(); ++i) {
        const auto& call = tc.events[i];
        const auto out = backend.execute_call(state, deployed_of(call.contract), call.function,
                                              vm::CallContext{call.sender, call.value, call.args},
                                              options.step_limit, i);
        EventResult ev;
        ev.call = call.text;
        ev.status = out.status;
        ev.reason = out.reason;
        ev.return_value = out.return_value;
        result.events.push_back(std::move(ev));
        traces.insert(traces.end(), out.traces.begin(), out.traces.end());
    }

    std::set<layout::VariablePath> paths;
    for (const auto& p : tc.prestate)
        paths.insert(p.path);
    for (const auto& e : tc.expectations)
        paths.insert(e.path);
    for (auto& inst : instances) {
        std::vector<vm::TraceRecord> mine;
        std::copy_if(traces.begin(), traces.end(), std::back_inserter(mine),
                     [&](const auto& t) { return t.contract == inst.bound->alias; });
        auto decoded = decode_traces(inst.bound->layout, inst.registry, mine);
        for (auto& row : decoded.rows) {
            paths.insert(row.path);
            result.traces.push_back(std::move(row));
        }
        result.unknown_writes.insert(result.unknown_writes.end(), decoded.unknown_writes.begin(),
                                     decoded.unknown_writes.end());
    }
    auto by_order = [](const auto& a, const auto& b) {
        return std::tie(a.event_index, a.step_index) < std::tie(b.event_index, b.step_index);
    };
    std::stable_sort(result.traces.begin(), result.traces.end(), by_order);
    std::stable_sort(result.unknown_writes.begin(), result.unknown_writes.end(), by_order);

    for (const auto& p : paths) {
        auto& inst = instance_of(p.contract);
        result.initial_values[p] = read_value(initial, inst, p);
        result.final_values[p] = read_value(state, inst, p);
        result.variables[p] = {layout::format_path(inst.bound->layout, p, &tc.aliases),
                               layout::location_type(inst.bound->layout, p)};
    }

    for (const auto& e : tc.expectations) {
        const Word actual = result.final_values.at(e.path);
        result.expectations.push_back({e.text, dbdl::compare(actual, e.cmp, e.expected, e.type.is_signed()), actual});
    }
    return result;
}

std::vector<RunResult> run_suite(const dbdl::TestSuite& suite, const dbdl::SourceSet& sources,
                                 const Options& options)
{
    if (auto diags = dbdl::validate(suite, sources); !diags.empty())
        throw DiagnosticError{std::move(diags)};

    std::vector<dbdl::BoundCase> bound;
    for (const auto& tc : suite.cases)
        bound.push_back(dbdl::bind_case(tc, sources));

    std::vector<RunResult> results(bound.size());
    std::vector<std::exception_ptr> errors(bound.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < bound.size(); i = next++) {
            try {
                results[i] = run_case(bound[i], options);
            }
            catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };

    const std::size_t threads = std::min<std::size_t>(std::max(1u, options.jobs), bound.size());
    if (threads <= 1) {
        worker();
    }
    else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t)
            pool.emplace_back(worker);
    }
    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    return results;
}

nlohmann::ordered_json to_json(const RunResult& r)
{
    using nlohmann::ordered_json;
    auto text_of = [&](const layout::VariablePath& p) { return r.variables.at(p).text; };

    ordered_json events = ordered_json::array();
    for (const auto& e : r.events) {
        ordered_json ev{{"call", e.call}, {"status", vm::to_string(e.status)}};
        if (!e.reason.empty())
            ev["reason"] = e.reason;
        if (e.return_value)
            ev["return"] = to_hex(*e.return_value);
        events.push_back(std::move(ev));
    }

    std::vector<std::pair<std::string, layout::VariablePath>> ordered;
    for (const auto& [p, info] : r.variables)
        ordered.emplace_back(info.text, p);
    std::sort(ordered.begin(), ordered.end());
    ordered_json variables = ordered_json::array();
    for (const auto& [text, p] : ordered)
        variables.push_back(
            {{"path", text}, {"initial", to_hex(r.initial_values.at(p))}, {"final", to_hex(r.final_values.at(p))}});

    ordered_json traces = ordered_json::array();
    for (const auto& t : r.traces)
        traces.push_back({{"event", t.event_index},
                          {"step", t.step_index},
                          {"path", text_of(t.path)},
                          {"old", to_hex(t.old_value)},
                          {"new", to_hex(t.new_value)}});

    ordered_json expectations = ordered_json::array();
    for (const auto& e : r.expectations)
        expectations.push_back({{"expr", e.expr}, {"pass", e.pass}, {"actual", to_hex(e.actual)}});

    ordered_json unknown = ordered_json::array();
    for (const auto& t : r.unknown_writes)
        unknown.push_back(vm::trace_to_json(t));

    return {{"case", r.name},
            {"events", std::move(events)},
            {"variables", std::move(variables)},
            {"traces", std::move(traces)},
            {"expectations", std::move(expectations)},
            {"unknown_writes", std::move(unknown)}};
}

}  // namespace kaya::runner
