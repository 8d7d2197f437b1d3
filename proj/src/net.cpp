#include "termweb/net.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

namespace termweb::net {

namespace {

int remaining_ms(Deadline deadline) {
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
                    deadline - std::chrono::steady_clock::now())
                    .count();
    if (left <= 0) return 0;
    if (left > 3'600'000) return 3'600'000;
    return static_cast<int>(left);
}

void wait_ready(int fd, short events, Deadline deadline, const char* what) {
    while (true) {
        int ms = remaining_ms(deadline);
        if (ms == 0) throw Timeout(std::string(what) + " timed out");
        pollfd p{fd, events, 0};
        int rc = ::poll(&p, 1, ms);
        if (rc > 0) return;
        if (rc == 0) throw Timeout(std::string(what) + " timed out");
        if (errno != EINTR) throw Error(std::string("poll: ") + std::strerror(errno));
    }
}

void set_nonblocking(int fd) {
    int flags = ::fcntl(fd, F_GETFL, 0);
    ::fcntl(fd, F_SETFL, flags | O_NONBLOCK);
}

}  // namespace

Socket::~Socket() { close(); }

Socket::Socket(Socket&& other) noexcept : fd_(other.fd_) { other.fd_ = -1; }

Socket& Socket::operator=(Socket&& other) noexcept {
    if (this != &other) {
        close();
        fd_ = other.fd_;
        other.fd_ = -1;
    }
    return *this;
}

void Socket::close() {
    if (fd_ >= 0) {
        ::close(fd_);
        fd_ = -1;
    }
}

Socket Socket::connect(const std::string& host, int port, Deadline deadline) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* results = nullptr;
    int rc = ::getaddrinfo(host.c_str(), std::to_string(port).c_str(), &hints, &results);
    if (rc != 0)
        throw ConnectFailed("cannot resolve " + host + ": " + ::gai_strerror(rc));

    std::string last_error = "no addresses";
    for (addrinfo* ai = results; ai; ai = ai->ai_next) {
        int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
        if (fd < 0) {
            last_error = std::strerror(errno);
            continue;
        }
        set_nonblocking(fd);
        if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) {
            ::freeaddrinfo(results);
            return Socket(fd);
        }
        if (errno == EINPROGRESS) {
            try {
                wait_ready(fd, POLLOUT, deadline, "connect");
            } catch (...) {
                ::close(fd);
                ::freeaddrinfo(results);
                throw;
            }
            int err = 0;
            socklen_t len = sizeof(err);
            ::getsockopt(fd, SOL_SOCKET, SO_ERROR, &err, &len);
            if (err == 0) {
                ::freeaddrinfo(results);
                return Socket(fd);
            }
            last_error = std::strerror(err);
        } else {
            last_error = std::strerror(errno);
        }
        ::close(fd);
    }
    ::freeaddrinfo(results);
    throw ConnectFailed("cannot connect to " + host + ":" + std::to_string(port) + ": " +
                        last_error);
}

std::size_t Socket::read_some(char* data, std::size_t size, Deadline deadline) {
    while (true) {
        ssize_t n = ::recv(fd_, data, size, 0);
        if (n >= 0) return static_cast<std::size_t>(n);
        if (errno == EAGAIN || errno == EWOULDBLOCK) {
            wait_ready(fd_, POLLIN, deadline, "read");
            continue;
        }
        if (errno == EINTR) continue;
        throw Error(std::string("recv: ") + std::strerror(errno));
    }
}

bool Socket::read_exact(char* data, std::size_t size, Deadline deadline) {
    std::size_t got = 0;
    while (got < size) {
        std::size_t n = read_some(data + got, size - got, deadline);
        if (n == 0) {
            if (got == 0) return false;
            throw Error("connection closed mid-message");
        }
        got += n;
    }
    return true;
}

void Socket::write_all(const char* data, std::size_t size, Deadline deadline) {
    std::size_t sent = 0;
    while (sent < size) {
        ssize_t n = ::send(fd_, data + sent, size - sent, MSG_NOSIGNAL);
        if (n > 0) {
            sent += static_cast<std::size_t>(n);
            continue;
        }
        if (n < 0 && (errno == EAGAIN || errno == EWOULDBLOCK)) {
            wait_ready(fd_, POLLOUT, deadline, "write");
            continue;
        }
        if (n < 0 && errno == EINTR) continue;
        throw Error(std::string("send: ") + std::strerror(errno));
    }
}

Listener::Listener(int port) {
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd_ < 0) throw Error(std::string("socket: ") + std::strerror(errno));
    int one = 1;
    ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    addr.sin_port = htons(static_cast<std::uint16_t>(port));
    if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0 ||
        ::listen(fd_, 64) != 0) {
        std::string msg = std::strerror(errno);
        ::close(fd_);
        fd_ = -1;
        throw Error("bind/listen on port " + std::to_string(port) + ": " + msg);
    }
    socklen_t len = sizeof(addr);
    ::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
    port_ = ntohs(addr.sin_port);
}

Listener::~Listener() {
    close();
    if (fd_ >= 0) {
        ::close(fd_);
        fd_ = -1;
    }
}

Listener::Listener(Listener&& other) noexcept : fd_(other.fd_), port_(other.port_) {
    other.fd_ = -1;
}

std::optional<Socket> Listener::accept() {
    int fd = ::accept(fd_, nullptr, nullptr);
    if (fd < 0) return std::nullopt;
    set_nonblocking(fd);
    return Socket(fd);
}

void Listener::close() {
    // shutdown unblocks a concurrent accept(); the fd itself stays
    // valid until destruction so other threads never see it reused
    if (fd_ >= 0) ::shutdown(fd_, SHUT_RDWR);
}

}  // namespace termweb::net
