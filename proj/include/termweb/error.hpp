#pragma once

#include <stdexcept>
#include <string>

namespace termweb {

/// Base class for every error this library raises on purpose.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Network-level failures shared by the HTTP client and the RPC runtime.

class ConnectFailed : public Error {
public:
    explicit ConnectFailed(const std::string& what) : Error(what) {}
};

class Timeout : public Error {
public:
    explicit Timeout(const std::string& what) : Error(what) {}
};

}  // namespace termweb
