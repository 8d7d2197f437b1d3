#pragma once

#include <chrono>
#include <optional>
#include <string>

#include "termweb/error.hpp"

namespace termweb::net {

using Deadline = std::chrono::steady_clock::time_point;

inline Deadline deadline_in(int seconds) {
    return std::chrono::steady_clock::now() + std::chrono::seconds(seconds);
}

inline Deadline deadline_in_ms(int milliseconds) {
    return std::chrono::steady_clock::now() + std::chrono::milliseconds(milliseconds);
}

/// Owning TCP socket with deadline-bounded blocking operations.
/// Read/write past the deadline raise termweb::Timeout.
class Socket {
public:
    Socket() = default;
    explicit Socket(int fd) : fd_(fd) {}
    ~Socket();
    Socket(Socket&& other) noexcept;
    Socket& operator=(Socket&& other) noexcept;
    Socket(const Socket&) = delete;
    Socket& operator=(const Socket&) = delete;

    static Socket connect(const std::string& host, int port, Deadline deadline);

    bool valid() const { return fd_ >= 0; }
    int fd() const { return fd_; }

    /// Up to `size` bytes; 0 on orderly shutdown.
    std::size_t read_some(char* data, std::size_t size, Deadline deadline);
    /// Exactly `size` bytes or false on EOF before any byte;
    /// a short read after the first byte raises Error.
    bool read_exact(char* data, std::size_t size, Deadline deadline);
    void write_all(const char* data, std::size_t size, Deadline deadline);
    void write_all(const std::string& data, Deadline deadline) {
        write_all(data.data(), data.size(), deadline);
    }

    void close();

private:
    int fd_ = -1;
};

/// Listening TCP socket bound to 127.0.0.1 on the given port (0 picks
/// an ephemeral one).
class Listener {
public:
    explicit Listener(int port = 0);
    ~Listener();
    Listener(Listener&& other) noexcept;
    Listener(const Listener&) = delete;
    Listener& operator=(const Listener&) = delete;

    int port() const { return port_; }

    /// Next connection; nullopt once close() has been called (or on a
    /// transient accept failure after it).
    std::optional<Socket> accept();

    /// Unblocks any accept() in progress; safe from other threads.
    void close();

private:
    int fd_ = -1;
    int port_ = 0;
};

}  // namespace termweb::net
