#pragma once

// Minimal HTTP/1.0 fixture server for exercising the client, the link
// checker and web-based discovery.  Test harness only.

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "termweb/net.hpp"

namespace fixture {

struct Request {
    std::string method;
    std::string path;
    std::map<std::string, std::string> headers;  // lowercased names
};

struct Route {
    int status = 200;
    std::string phrase = "OK";
    std::string content_type = "text/html";
    std::string body;
    bool stall = false;        // read the request, never answer
    bool conditional = false;  // 304 when If-Modified-Since is present
    std::vector<std::pair<std::string, std::string>> extra_headers;
};

class HttpServer {
public:
    HttpServer() : listener_(0) {
        accept_thread_ = std::thread([this] { accept_loop(); });
    }

    ~HttpServer() { stop(); }

    void stop() {
        bool expected = false;
        if (!stopping_.compare_exchange_strong(expected, true)) return;
        listener_.close();
        if (accept_thread_.joinable()) accept_thread_.join();
        std::vector<std::thread> workers;
        {
            std::lock_guard lock(mutex_);
            workers.swap(workers_);
        }
        for (auto& w : workers)
            if (w.joinable()) w.join();
    }

    void route(const std::string& path, Route r) {
        std::lock_guard lock(mutex_);
        routes_[path] = std::move(r);
    }

    /// Serve files under `dir` for any path without an explicit route.
    void serve_directory(std::filesystem::path dir) {
        std::lock_guard lock(mutex_);
        directory_ = std::move(dir);
    }

    int port() const { return listener_.port(); }

    std::string url(const std::string& path) const {
        return "http://127.0.0.1:" + std::to_string(port()) + path;
    }

    std::vector<Request> log() const {
        std::lock_guard lock(mutex_);
        return log_;
    }

private:
    void accept_loop() {
        while (!stopping_) {
            auto socket = listener_.accept();
            if (!socket) break;
            std::lock_guard lock(mutex_);
            if (stopping_) break;
            workers_.emplace_back(
                [this, s = std::make_shared<termweb::net::Socket>(std::move(*socket))] {
                    handle(*s);
                });
        }
    }

    std::optional<Request> read_request(termweb::net::Socket& socket) {
        std::string buffer;
        char chunk[2048];
        auto deadline = termweb::net::deadline_in(10);
        while (buffer.find("\r\n\r\n") == std::string::npos &&
               buffer.find("\n\n") == std::string::npos) {
            std::size_t n;
            try {
                n = socket.read_some(chunk, sizeof(chunk), deadline);
            } catch (const std::exception&) {
                return std::nullopt;
            }
            if (n == 0) return std::nullopt;
            buffer.append(chunk, n);
            if (buffer.size() > 65536) return std::nullopt;
        }
        std::istringstream in(buffer);
        Request req;
        std::string version, line;
        in >> req.method >> req.path >> version;
        std::getline(in, line);
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) break;
            std::size_t colon = line.find(':');
            if (colon == std::string::npos) continue;
            std::string name = line.substr(0, colon);
            for (char& c : name) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
            std::size_t vstart = line.find_first_not_of(' ', colon + 1);
            req.headers[name] = vstart == std::string::npos ? "" : line.substr(vstart);
        }
        return req;
    }

    void handle(termweb::net::Socket& socket) {
        auto request = read_request(socket);
        if (!request) return;
        Route route;
        {
            std::lock_guard lock(mutex_);
            log_.push_back(*request);
            auto it = routes_.find(request->path);
            if (it != routes_.end()) {
                route = it->second;
            } else if (!directory_.empty()) {
                std::filesystem::path file = directory_ / request->path.substr(1);
                std::ifstream in(file, std::ios::binary);
                if (in) {
                    std::ostringstream buf;
                    buf << in.rdbuf();
                    route.body = std::move(buf).str();
                    route.content_type = "text/plain";
                } else {
                    route.status = 404;
                    route.phrase = "Not Found";
                }
            } else {
                route.status = 404;
                route.phrase = "Not Found";
            }
        }

        if (route.stall) {
            // hold the connection open without answering
            for (int i = 0; i < 600 && !stopping_; ++i)
                std::this_thread::sleep_for(std::chrono::milliseconds(50));
            return;
        }

        int status = route.status;
        std::string phrase = route.phrase;
        std::string body = route.body;
        if (route.conditional && request->headers.count("if-modified-since")) {
            status = 304;
            phrase = "Not Modified";
            body.clear();
        }

        std::string response = "HTTP/1.0 " + std::to_string(status) + " " + phrase + "\r\n";
        response += "Content-Type: " + route.content_type + "\r\n";
        response += "Content-Length: " + std::to_string(body.size()) + "\r\n";
        for (const auto& [name, value] : route.extra_headers)
            response += name + ": " + value + "\r\n";
        response += "\r\n";
        if (request->method != "HEAD") response += body;
        try {
            socket.write_all(response, termweb::net::deadline_in(10));
        } catch (const std::exception&) {
        }
    }

    termweb::net::Listener listener_;
    std::atomic<bool> stopping_{false};
    std::thread accept_thread_;
    mutable std::mutex mutex_;
    std::map<std::string, Route> routes_;
    std::filesystem::path directory_;
    std::vector<Request> log_;
    std::vector<std::thread> workers_;
};

}  // namespace fixture
