// Copyright 2026 The Kaya Authors
// SPDX-License-Identifier: Apache-2.0

#include <kaya/app/app.hpp>
#include <kaya/cli/cli.hpp>
#include <kaya/minisol/parser.hpp>
#include <kaya/server/server.hpp>

#include <support/fixtures.hpp>

#include <gtest/gtest.h>
#include <httplib.h>
#include <json.hpp>

#include <atomic>
#include <filesystem>
#include <sstream>
#include <thread>

using namespace kaya;
using nlohmann::json;

namespace {

class Running {
public:
    explicit Running(server::ServerOptions options = {}) : api_{std::move(options)}
    {
        EXPECT_TRUE(api_.bind("127.0.0.1", 0));
        thread_ = std::thread{[this] { api_.listen(); }};
        api_.wait_until_ready();
        client_ = std::make_unique<httplib::Client>("127.0.0.1", api_.port());
    }
    ~Running()
    {
        api_.stop();
        thread_.join();
    }

    httplib::Client& client() { return *client_; }
    int port() const { return api_.port(); }

    std::string new_session()
    {
        const auto res = client_->Post("/sessions");
        EXPECT_EQ(res->status, 201);
        const auto id = json::parse(res->body)["id"].get<std::string>();
        return id;
    }

    httplib::Result post(const std::string& path, const json& body)
    {
        return client_->Post(path, body.dump(), "application/json");
    }
    httplib::Result put(const std::string& path, const json& body)
    {
        return client_->Put(path, body.dump(), "application/json");
    }

private:
    server::ApiServer api_;
    std::thread thread_;
    std::unique_ptr<httplib::Client> client_;
};

json snail_upload()
{
    return {{"name", "snail_throne.msol"}, {"source", test::read_text("tests/fixtures/snail_throne.msol")}};
}

}  // namespace

TEST(api_server, health)
{
    Running s;
    const auto res = s.client().Get("/health");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
}

TEST(api_server, session_ids_are_128_bit_and_distinct)
{
    Running s;
    const auto a = s.new_session();
    const auto b = s.new_session();
    EXPECT_EQ(a.size(), 32u);
    EXPECT_EQ(a.find_first_not_of("0123456789abcdef"), std::string::npos);
    EXPECT_NE(a, b);
}

TEST(api_server, contract_listing_matches_cli)
{
    Running s;
    const auto id = s.new_session();
    const auto res = s.post("/sessions/" + id + "/contracts", snail_upload());
    ASSERT_EQ(res->status, 200);

    std::ostringstream out;
    std::ostringstream err;
    ASSERT_EQ(cli::run({"analyze", test::source_path("tests/fixtures/snail_throne.msol"), "--format", "json"}, out,
                       err),
              cli::exit_ok);
    EXPECT_EQ(res->body, out.str());
}

TEST(api_server, invalid_contract_is_422_with_position)
{
    Running s;
    const auto id = s.new_session();
    const auto res = s.post("/sessions/" + id + "/contracts", {{"name", "x.msol"}, {"source", "contract C { uint8 }"}});
    ASSERT_EQ(res->status, 422);
    const auto body = json::parse(res->body);
    EXPECT_EQ(body["error"], "SyntaxError");
    EXPECT_EQ(body["diagnostics"][0]["line"], 1);
}

TEST(api_server, unknown_session_is_404)
{
    Running s;
    EXPECT_EQ(s.post("/sessions/00000000000000000000000000000000/contracts", snail_upload())->status, 404);
    EXPECT_EQ(s.client().Get("/sessions/nope/report")->status, 404);
    EXPECT_EQ(s.post("/sessions/nope/run", json::object())->status, 404);
}

TEST(api_server, case_with_unknown_variable_is_422_naming_the_path)
{
    Running s;
    const auto id = s.new_session();
    s.post("/sessions/" + id + "/contracts", snail_upload());
    const json body{{"name", "t"},
                    {"accounts", {{{"alias", "a"}}}},
                    {"prestate", {{{"path", "SnailThrone.snails[a]"}, {"value", 1}}}},
                    {"events", {{{"contract", "SnailThrone"}, {"function", "sellSnails"}, {"from", "a"}}}}};
    const auto res = s.put("/sessions/" + id + "/case", body);
    ASSERT_EQ(res->status, 422);
    EXPECT_NE(res->body.find("SnailThrone.snails"), std::string::npos) << res->body;
    EXPECT_NE(res->body.find("UnknownVariable"), std::string::npos);
}

TEST(api_server, run_before_case_is_422_and_report_before_run_is_404)
{
    Running s;
    const auto id = s.new_session();
    EXPECT_EQ(s.post("/sessions/" + id + "/run", json::object())->status, 422);
    EXPECT_EQ(s.client().Get("/sessions/" + id + "/report")->status, 404);
}

TEST(api_server, five_step_walkthrough_matches_cli_bytes)
{
    Running s;
    const auto id = s.new_session();
    ASSERT_EQ(s.post("/sessions/" + id + "/contracts", snail_upload())->status, 200);

    json cases = json::array();
    for (int n = 100; n <= 500; n += 100)
        cases.push_back({{"name", "sell " + std::to_string(n)},
                         {"accounts", {{{"alias", "a"}, {"balance", "1 ether"}}, {{"alias", "b"}, {"balance", "2 ether"}}}},
                         {"prestate",
                          {{{"path", "SnailThrone.gameActive"}, {"value", true}},
                           {{"path", "SnailThrone.hatcherySnail[a]"}, {"value", n}},
                           {{"path", "SnailThrone.hatcherySnail[b]"}, {"value", 50}}}},
                         {"events", {{{"contract", "SnailThrone"}, {"function", "sellSnails"}, {"from", "a"}}}},
                         {"expectations",
                          {{{"path", "SnailThrone.hatcherySnail[a]"}, {"op", "=="}, {"value", n - n * 3 / 5}},
                           {{"path", "SnailThrone.playerEarnings[a]"}, {"op", ">"}, {"value", 0}}}}});
    const auto put = s.put("/sessions/" + id + "/case", {{"cases", cases}});
    ASSERT_EQ(put->status, 200) << put->body;
    const auto dbdl_text = json::parse(put->body)["dbdl"].get<std::string>();
    EXPECT_EQ(dbdl::parse_dbdl(dbdl_text), dbdl::parse_dbdl(test::read_text("tests/fixtures/snail_throne.dbdl")));

    const auto run = s.post("/sessions/" + id + "/run", json::object());
    ASSERT_EQ(run->status, 200) << run->body;
    const auto report = json::parse(run->body);
    EXPECT_FALSE(report["correlations"].empty());
    EXPECT_EQ(s.client().Get("/sessions/" + id + "/report")->body, run->body);

    std::ostringstream out;
    std::ostringstream err;
    ASSERT_EQ(cli::run({"run", "-c", test::source_path("tests/fixtures/snail_throne.msol"), "-t",
                        test::source_path("tests/fixtures/snail_throne.dbdl"), "--format", "json"},
                       out, err),
              cli::exit_ok);
    EXPECT_EQ(run->body, out.str());
}

TEST(api_server, sessions_are_isolated)
{
    Running s;
    const auto a = s.new_session();
    const auto b = s.new_session();
    s.post("/sessions/" + a + "/contracts", snail_upload());
    const auto put = s.put("/sessions/" + b + "/case", {{"dbdl", test::read_text("tests/fixtures/snail_throne.dbdl")}});
    EXPECT_EQ(put->status, 422);
    EXPECT_NE(put->body.find("UnknownSource"), std::string::npos);
}

TEST(api_server, concurrent_runs_on_distinct_sessions)
{
    Running s;
    std::vector<std::string> ids;
    for (int i = 0; i < 4; ++i) {
        ids.push_back(s.new_session());
        s.post("/sessions/" + ids.back() + "/contracts", snail_upload());
        s.put("/sessions/" + ids.back() + "/case", {{"dbdl", test::read_text("tests/fixtures/snail_throne.dbdl")}});
    }
    std::vector<std::string> bodies(ids.size());
    std::vector<std::thread> threads;
    for (std::size_t i = 0; i < ids.size(); ++i)
        threads.emplace_back([&, i] {
            httplib::Client c{"127.0.0.1", s.port()};
            bodies[i] = c.Post("/sessions/" + ids[i] + "/run", "{}", "application/json")->body;
        });
    for (auto& t : threads)
        t.join();
    for (const auto& b : bodies)
        EXPECT_EQ(b, bodies[0]);
}

TEST(api_server, expired_sessions_are_404)
{
    std::atomic<std::int64_t> hours{0};
    server::ServerOptions options;
    options.now = [&] { return server::Clock::time_point{} + std::chrono::hours{hours.load()}; };
    Running s{options};
    const auto id = s.new_session();
    hours = 23;
    EXPECT_EQ(s.post("/sessions/" + id + "/contracts", snail_upload())->status, 200);
    hours = 24;
    EXPECT_EQ(s.post("/sessions/" + id + "/contracts", snail_upload())->status, 404);
}

TEST(api_server, state_dir_survives_restart)
{
    const auto dir = std::filesystem::temp_directory_path() / "kaya_state_test";
    std::filesystem::remove_all(dir);
    server::ServerOptions options;
    options.state_dir = dir;
    std::string id;
    std::string report;
    {
        Running s{options};
        id = s.new_session();
        s.post("/sessions/" + id + "/contracts", snail_upload());
        s.put("/sessions/" + id + "/case", {{"dbdl", test::read_text("tests/fixtures/snail_throne.dbdl")}});
        report = s.post("/sessions/" + id + "/run", json::object())->body;
    }
    Running again{options};
    const auto res = again.client().Get("/sessions/" + id + "/report");
    ASSERT_EQ(res->status, 200);
    EXPECT_EQ(res->body, report);
    EXPECT_EQ(again.post("/sessions/" + id + "/run", json::object())->body, report);
}

TEST(api_server, cors_allows_localhost_only)
{
    Running s;
    const auto local = s.client().Get("/health", {{"Origin", "http://localhost:5173"}});
    EXPECT_EQ(local->get_header_value("Access-Control-Allow-Origin"), "http://localhost:5173");
    const auto remote = s.client().Get("/health", {{"Origin", "http://example.com"}});
    EXPECT_FALSE(remote->has_header("Access-Control-Allow-Origin"));
    const auto preflight = s.client().Options("/sessions", {{"Origin", "http://127.0.0.1:3000"}});
    EXPECT_EQ(preflight->status, 204);
}

TEST(api_server, mutations_during_a_run_are_409)
{
    Running s;
    const auto id = s.new_session();
    const std::string spin = R"(contract Spin {
    uint256 x;
    function spin(uint256 n) {
        uint256 i = 0;
        for (i = 0; i < n; i += 1) {
            x += 1;
        }
    }
})";
    ASSERT_EQ(s.post("/sessions/" + id + "/contracts", {{"name", "spin.msol"}, {"source", spin}})->status, 200);
    const json body{{"name", "spin"},
                    {"accounts", {{{"alias", "a"}}}},
                    {"events", {{{"contract", "Spin"}, {"function", "spin"}, {"args", {600000}}, {"from", "a"}}}}};
    ASSERT_EQ(s.put("/sessions/" + id + "/case", body)->status, 200);

    std::atomic<bool> done{false};
    int run_status = 0;
    std::thread runner{[&] {
        httplib::Client c{"127.0.0.1", s.port()};
        c.set_read_timeout(60);
        run_status = c.Post("/sessions/" + id + "/run", json{{"options", {{"step_limit", 100000000}}}}.dump(),
                            "application/json")
                         ->status;
        done = true;
    }};
    bool saw_conflict = false;
    while (!done && !saw_conflict) {
        saw_conflict = s.put("/sessions/" + id + "/case", body)->status == 409 &&
                       s.post("/sessions/" + id + "/run", json::object())->status == 409;
        std::this_thread::sleep_for(std::chrono::milliseconds{5});
    }
    runner.join();
    EXPECT_TRUE(saw_conflict);
    EXPECT_EQ(run_status, 200);
    EXPECT_EQ(s.put("/sessions/" + id + "/case", body)->status, 200);
}
