// Copyright 2026 The Kaya Authors
// SPDX-License-Identifier: Apache-2.0

// Drives the real kaya_cmd binary: signals and exit codes need a process.

#include <kaya/cli/cli.hpp>
#include <kaya/server/server.hpp>

#include <gtest/gtest.h>
#include <httplib.h>

#include <chrono>
#include <csignal>
#include <cstdlib>
#include <regex>
#include <string>
#include <thread>
#include <vector>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

namespace {

struct Child {
    pid_t pid = -1;
    int stderr_fd = -1;
};

Child spawn(const std::vector<std::string>& args, const std::vector<std::string>& env = {})
{
    int fds[2];
    EXPECT_EQ(pipe(fds), 0);
    const pid_t pid = fork();
    if (pid == 0) {
        dup2(fds[1], STDERR_FILENO);
        close(fds[0]);
        close(fds[1]);
        unsetenv("KAYA_PORT");
        for (const auto& kv : env)
            putenv(const_cast<char*>(kv.c_str()));
        std::vector<char*> argv{const_cast<char*>(KAYA_CMD)};
        for (const auto& a : args)
            argv.push_back(const_cast<char*>(a.c_str()));
        argv.push_back(nullptr);
        execv(KAYA_CMD, argv.data());
        _exit(127);
    }
    close(fds[1]);
    return {pid, fds[0]};
}

/// Reads stderr until the listening line shows up; returns the port or -1.
int wait_for_port(const Child& c, std::chrono::milliseconds timeout = std::chrono::seconds{10})
{
    std::string seen;
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    const std::regex listening{R"(listening on http://[^:]+:([0-9]+))"};
    while (std::chrono::steady_clock::now() < deadline) {
        pollfd p{c.stderr_fd, POLLIN, 0};
        if (poll(&p, 1, 100) <= 0)
            continue;
        char buf[256];
        const auto n = read(c.stderr_fd, buf, sizeof buf);
        if (n <= 0)
            return -1;
        seen.append(buf, static_cast<std::size_t>(n));
        std::smatch m;
        if (std::regex_search(seen, m, listening))
            return std::stoi(m[1]);
    }
    return -1;
}

/// Exit status, or -1 if the child is still running after the timeout.
int wait_exit(pid_t pid, std::chrono::milliseconds timeout)
{
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    while (std::chrono::steady_clock::now() < deadline) {
        int status = 0;
        if (waitpid(pid, &status, WNOHANG) == pid)
            return WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
        std::this_thread::sleep_for(std::chrono::milliseconds{20});
    }
    kill(pid, SIGKILL);
    waitpid(pid, nullptr, 0);
    return -1;
}

/// Holds a port for the duration of a test.
struct Occupied {
    kaya::server::ApiServer api;
    int port;
    Occupied()
    {
        EXPECT_TRUE(api.bind("127.0.0.1", 0));
        port = api.port();
    }
};

}  // namespace

TEST(kaya_cmd_serve, health_then_clean_shutdown_on_sigint)
{
    const auto child = spawn({"serve", "--port", "0"});
    const int port = wait_for_port(child);
    ASSERT_GT(port, 0);
    httplib::Client client{"127.0.0.1", port};
    const auto res = client.Get("/health");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);

    kill(child.pid, SIGINT);
    EXPECT_EQ(wait_exit(child.pid, std::chrono::seconds{5}), kaya::cli::exit_ok);
    close(child.stderr_fd);
}

TEST(kaya_cmd_serve, sigterm_also_exits_cleanly)
{
    const auto child = spawn({"serve", "--port", "0"});
    ASSERT_GT(wait_for_port(child), 0);
    kill(child.pid, SIGTERM);
    EXPECT_EQ(wait_exit(child.pid, std::chrono::seconds{5}), kaya::cli::exit_ok);
    close(child.stderr_fd);
}

TEST(kaya_cmd_serve, bind_conflict_exits_2)
{
    Occupied held;
    const auto child = spawn({"serve", "--port", std::to_string(held.port)});
    EXPECT_EQ(wait_exit(child.pid, std::chrono::seconds{5}), kaya::cli::exit_input_error);
    close(child.stderr_fd);
}

TEST(kaya_cmd_serve, port_env_var_applies_and_flag_wins)
{
    Occupied held;
    const std::string env = "KAYA_PORT=" + std::to_string(held.port);

    const auto from_env = spawn({"serve"}, {env});
    EXPECT_EQ(wait_exit(from_env.pid, std::chrono::seconds{5}), kaya::cli::exit_input_error);
    close(from_env.stderr_fd);

    const auto flagged = spawn({"serve", "--port", "0"}, {env});
    ASSERT_GT(wait_for_port(flagged), 0);
    kill(flagged.pid, SIGINT);
    EXPECT_EQ(wait_exit(flagged.pid, std::chrono::seconds{5}), kaya::cli::exit_ok);
    close(flagged.stderr_fd);
}
