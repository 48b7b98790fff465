// Copyright 2026 The Kaya Authors
// SPDX-License-Identifier: Apache-2.0

#include <kaya/server/server.hpp>

#include <kaya/app/app.hpp>
#include <kaya/common/error.hpp>
#include <kaya/minisol/parser.hpp>

#include <httplib.h>
#include <json.hpp>

#include <fstream>
#include <map>
#include <mutex>
#include <random>
#include <regex>
#include <sstream>

namespace kaya::server {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

struct Upload {
    std::string name;
    std::string text;
    minisol::SourceUnit unit;
};

struct Session {
    std::string id;
    Clock::time_point created_at;

    std::mutex mutex;
    std::vector<Upload> uploads;
    std::optional<dbdl::TestSuite> suite;
    std::optional<std::string> report;
    bool running = false;

    dbdl::SourceSet sources() const
    {
        dbdl::SourceSet set;
        for (const auto& u : uploads)
            set.add(u.name, u.unit);
        return set;
    }
};

std::string new_session_id()
{
    static std::mutex m;
    static std::random_device rd;
    std::lock_guard lock{m};
    std::ostringstream out;
    out << std::hex;
    for (int i = 0; i < 4; ++i) {
        const std::uint32_t part = rd();
        out.width(8);
        out.fill('0');
        out << part;
    }
    return out.str();
}

void send_json(httplib::Response& res, int status, const ordered_json& body)
{
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, std::string code, std::string message)
{
    send_json(res, status, {{"error", std::move(code)}, {"message", std::move(message)}, {"diagnostics", json::array()}});
}

std::optional<json> parse_body(const httplib::Request& req, httplib::Response& res)
{
    if (req.body.empty())
        return json::object();
    auto body = json::parse(req.body, nullptr, false);
    if (body.is_discarded()) {
        send_error(res, 400, "BadRequest", "request body is not valid JSON");
        return std::nullopt;
    }
    return body;
}

bool localhost_origin(const std::string& origin)
{
    static const std::regex pattern{R"(^https?://(localhost|127\.0\.0\.1|\[::1\])(:[0-9]+)?$)"};
    return std::regex_match(origin, pattern);
}

}  // namespace

struct ApiServer::Impl {
    ServerOptions options;
    httplib::Server http;
    int port = -1;

    std::mutex sessions_mutex;
    std::map<std::string, std::shared_ptr<Session>> sessions;

    explicit Impl(ServerOptions opts) : options{std::move(opts)}
    {
        if (!options.now)
            options.now = [] { return Clock::now(); };
        load_snapshots();
        routes();
    }

    // Sessions ------------------------------------------------------------

    void sweep_locked()
    {
        const auto now = options.now();
        for (auto it = sessions.begin(); it != sessions.end();) {
            if (now - it->second->created_at >= options.ttl) {
                remove_snapshot(it->first);
                it = sessions.erase(it);
            }
            else {
                ++it;
            }
        }
    }

    std::shared_ptr<Session> find(const std::string& id)
    {
        std::lock_guard lock{sessions_mutex};
        sweep_locked();
        const auto it = sessions.find(id);
        return it == sessions.end() ? nullptr : it->second;
    }

    std::shared_ptr<Session> create()
    {
        auto s = std::make_shared<Session>();
        s->created_at = options.now();
        std::lock_guard lock{sessions_mutex};
        sweep_locked();
        do {
            s->id = new_session_id();
        } while (sessions.count(s->id) != 0);
        sessions.emplace(s->id, s);
        return s;
    }

    // Snapshots -----------------------------------------------------------

    std::filesystem::path snapshot_path(const std::string& id) const { return *options.state_dir / (id + ".json"); }

    /// Caller holds the session mutex.
    void save(const Session& s) const
    {
        if (!options.state_dir)
            return;
        ordered_json sources = ordered_json::array();
        for (const auto& u : s.uploads)
            sources.push_back({{"name", u.name}, {"text", u.text}});
        ordered_json snap{{"id", s.id},
                          {"created_at", std::chrono::duration_cast<std::chrono::seconds>(
                                             s.created_at.time_since_epoch())
                                             .count()},
                          {"sources", std::move(sources)},
                          {"dbdl", s.suite ? ordered_json(dbdl::format_dbdl(*s.suite)) : ordered_json()},
                          {"report", s.report ? ordered_json(*s.report) : ordered_json()}};
        const auto target = snapshot_path(s.id);
        const auto tmp = target.string() + ".tmp";
        {
            std::ofstream out{tmp, std::ios::binary | std::ios::trunc};
            out << snap.dump();
        }
        std::filesystem::rename(tmp, target);
    }

    void remove_snapshot(const std::string& id) const
    {
        if (options.state_dir) {
            std::error_code ec;
            std::filesystem::remove(snapshot_path(id), ec);
        }
    }

    void load_snapshots()
    {
        if (!options.state_dir)
            return;
        std::filesystem::create_directories(*options.state_dir);
        for (const auto& entry : std::filesystem::directory_iterator{*options.state_dir}) {
            if (entry.path().extension() != ".json")
                continue;
            std::ifstream in{entry.path(), std::ios::binary};
            const auto snap = json::parse(in, nullptr, false);
            if (snap.is_discarded() || !snap.is_object())
                continue;
            try {
                auto s = std::make_shared<Session>();
                s->id = snap.at("id").get<std::string>();
                s->created_at = Clock::time_point{std::chrono::seconds{snap.at("created_at").get<std::int64_t>()}};
                for (const auto& src : snap.at("sources")) {
                    const auto text = src.at("text").get<std::string>();
                    s->uploads.push_back({src.at("name").get<std::string>(), text, minisol::parse_source(text)});
                }
                if (snap.at("dbdl").is_string())
                    s->suite = dbdl::parse_dbdl(snap.at("dbdl").get<std::string>());
                if (snap.at("report").is_string())
                    s->report = snap.at("report").get<std::string>();
                sessions.emplace(s->id, std::move(s));
            }
            catch (const std::exception&) {
                // Unreadable snapshots are ignored.
            }
        }
        std::lock_guard lock{sessions_mutex};
        sweep_locked();
    }

    // Routes --------------------------------------------------------------

    template <typename Handler>
    auto with_session(Handler handler)
    {
        return [this, handler](const httplib::Request& req, httplib::Response& res) {
            auto session = find(req.path_params.at("id"));
            if (!session) {
                send_error(res, 404, "UnknownSession", "no such session");
                return;
            }
            handler(*session, req, res);
        };
    }

    void routes()
    {
        // The library default sets SO_REUSEPORT, which lets a second server
        // share a port that is already taken.
        http.set_socket_options([](socket_t sock) {
            int yes = 1;
            setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
        });

        http.set_pre_routing_handler([](const httplib::Request& req, httplib::Response& res) {
            const auto origin = req.get_header_value("Origin");
            if (localhost_origin(origin)) {
                res.set_header("Access-Control-Allow-Origin", origin);
                res.set_header("Vary", "Origin");
                res.set_header("Access-Control-Allow-Methods", "GET, POST, PUT, OPTIONS");
                res.set_header("Access-Control-Allow-Headers", "Content-Type");
            }
            if (req.method == "OPTIONS") {
                res.status = 204;
                return httplib::Server::HandlerResponse::Handled;
            }
            return httplib::Server::HandlerResponse::Unhandled;
        });

        http.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
            try {
                std::rethrow_exception(ep);
            }
            catch (const std::exception& e) {
                send_json(res, 500, app::error_json(e));
            }
            catch (...) {
                send_error(res, 500, "Internal", "unknown failure");
            }
        });

        http.Get("/health", [](const httplib::Request&, httplib::Response& res) {
            send_json(res, 200, {{"status", "ok"}});
        });

        http.Post("/sessions", [this](const httplib::Request&, httplib::Response& res) {
            auto s = create();
            std::lock_guard lock{s->mutex};
            save(*s);
            send_json(res, 201, {{"id", s->id}});
        });

        http.Post("/sessions/:id/contracts", with_session([this](Session& s, const auto& req, auto& res) {
                      const auto body = parse_body(req, res);
                      if (!body)
                          return;
                      std::string name;
                      std::string text;
                      try {
                          if (!body->is_object() || !(*body)["name"].is_string() || !(*body)["source"].is_string())
                              throw DiagnosticError{{Diagnostic{ErrorCode::syntax_error,
                                                                "body must be {\"name\": string, \"source\": string}"}}};
                          name = (*body)["name"].template get<std::string>();
                          text = (*body)["source"].template get<std::string>();
                      }
                      catch (const Error& e) {
                          send_json(res, 422, app::error_json(e));
                          return;
                      }
                      minisol::SourceUnit unit;
                      try {
                          unit = minisol::parse_source(text);
                      }
                      catch (const Error& e) {
                          send_json(res, 422, app::error_json(e));
                          return;
                      }
                      std::lock_guard lock{s.mutex};
                      if (s.running) {
                          send_error(res, 409, "RunInProgress", "a run is in progress for this session");
                          return;
                      }
                      const auto listing = app::variables_json(unit);
                      auto same = std::find_if(s.uploads.begin(), s.uploads.end(),
                                               [&](const Upload& u) { return u.name == name; });
                      if (same != s.uploads.end())
                          *same = Upload{name, text, std::move(unit)};
                      else
                          s.uploads.push_back(Upload{name, text, std::move(unit)});
                      save(s);
                      send_json(res, 200, listing);
                  }));

        http.Put("/sessions/:id/case", with_session([this](Session& s, const auto& req, auto& res) {
                     const auto body = parse_body(req, res);
                     if (!body)
                         return;
                     std::lock_guard lock{s.mutex};
                     if (s.running) {
                         send_error(res, 409, "RunInProgress", "a run is in progress for this session");
                         return;
                     }
                     const auto sources = s.sources();
                     try {
                         auto suite = app::suite_from_json(*body, sources);
                         if (auto diags = dbdl::validate(suite, sources); !diags.empty())
                             throw DiagnosticError{std::move(diags)};
                         s.suite = std::move(suite);
                     }
                     catch (const Error& e) {
                         send_json(res, 422, app::error_json(e));
                         return;
                     }
                     save(s);
                     send_json(res, 200, {{"dbdl", dbdl::format_dbdl(*s.suite)}});
                 }));

        http.Post("/sessions/:id/run", with_session([this](Session& s, const auto& req, auto& res) {
                      const auto body = parse_body(req, res);
                      if (!body)
                          return;
                      app::RunConfig config;
                      try {
                          config = app::config_from_json(body->is_object() && body->contains("options")
                                                             ? (*body)["options"]
                                                             : json());
                      }
                      catch (const Error& e) {
                          send_json(res, 422, app::error_json(e));
                          return;
                      }

                      dbdl::TestSuite suite;
                      dbdl::SourceSet sources;
                      {
                          std::lock_guard lock{s.mutex};
                          if (s.running) {
                              send_error(res, 409, "RunInProgress", "a run is in progress for this session");
                              return;
                          }
                          if (!s.suite) {
                              send_error(res, 422, "NoCase", "no test case has been submitted");
                              return;
                          }
                          s.running = true;
                          suite = *s.suite;
                          sources = s.sources();
                      }

                      std::string rendered;
                      std::optional<ordered_json> failure;
                      try {
                          rendered = analyzer::render_report(app::run_report(suite, sources, config),
                                                             analyzer::Format::json);
                      }
                      catch (const Error& e) {
                          failure = app::error_json(e);
                      }

                      std::lock_guard lock{s.mutex};
                      s.running = false;
                      if (failure) {
                          send_json(res, 422, *failure);
                          return;
                      }
                      s.report = rendered;
                      save(s);
                      res.status = 200;
                      res.set_content(rendered, "application/json");
                  }));

        http.Get("/sessions/:id/report", with_session([](Session& s, const auto&, auto& res) {
                     std::lock_guard lock{s.mutex};
                     if (!s.report) {
                         send_error(res, 404, "NoReport", "no report yet");
                         return;
                     }
                     res.status = 200;
                     res.set_content(*s.report, "application/json");
                 }));
    }
};

ApiServer::ApiServer(ServerOptions options) : impl_{std::make_unique<Impl>(std::move(options))} {}

ApiServer::~ApiServer() = default;

bool ApiServer::bind(const std::string& host, int port)
{
    if (port == 0) {
        impl_->port = impl_->http.bind_to_any_port(host);
        return impl_->port > 0;
    }
    if (!impl_->http.bind_to_port(host, port))
        return false;
    impl_->port = port;
    return true;
}

int ApiServer::port() const noexcept
{
    return impl_->port;
}

bool ApiServer::listen()
{
    return impl_->http.listen_after_bind();
}

void ApiServer::stop()
{
    impl_->http.stop();
}

void ApiServer::wait_until_ready() const
{
    impl_->http.wait_until_ready();
}

}  // namespace kaya::server
