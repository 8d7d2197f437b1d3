#pragma once

#include <atomic>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <thread>
#include <vector>

#include "termweb/net.hpp"
#include "termweb/term.hpp"
#include "termweb/url.hpp"

namespace termweb::actmod {

class BindFailed : public Error {
public:
    explicit BindFailed(const std::string& what) : Error(what) {}
};

class PublishFailed : public Error {
public:
    explicit PublishFailed(const std::string& what) : Error(what) {}
};

class LocateFailed : public Error {
public:
    explicit LocateFailed(const std::string& what) : Error(what) {}
};

class WireError : public Error {
public:
    explicit WireError(const std::string& what) : Error(what) {}
};

class UnknownOperation : public Error {
public:
    explicit UnknownOperation(const std::string& what) : Error(what) {}
};

/// Where a running module can be reached.
struct ModuleAddress {
    std::string host;
    int port = 0;
    bool operator==(const ModuleAddress&) const = default;
};

/// One remote request: operation name plus argument terms (placeholders
/// for outputs).
struct GoalCall {
    std::string operation;
    term::TermList args;
};

/// The result of a call: success with the fully bound argument vector,
/// plain failure, or an error reported by the remote side.
struct CallOutcome {
    enum class Kind { Success, Failure, RemoteError };
    Kind kind = Kind::Failure;
    term::TermList bound_args;  // success only; same arity as the call
    std::string error;          // remote_error only

    static CallOutcome success(term::TermList bound_args);
    static CallOutcome failure();
    static CallOutcome remote_error(std::string message);

    bool ok() const { return kind == Kind::Success; }
    bool operator==(const CallOutcome&) const = default;
};

/// Outcome as canonical term text: success([...]) | failure |
/// remote_error("...").  parse_outcome is the inverse.
std::string outcome_text(const CallOutcome& outcome);
CallOutcome parse_outcome(const term::Term& t);

/// The operations a module exports.  Handlers get the argument vector
/// and return an outcome; handlers registered as mutating run under
/// exclusive access, read-only ones may run concurrently.
class Registry {
public:
    using Handler = std::function<CallOutcome(const term::TermList&)>;

    void add(const std::string& operation, std::size_t arity, Handler handler,
             bool mutating = false);
    bool empty() const { return entries_.empty(); }

    /// Dispatches in-process, with the same outcome contract the wire
    /// delivers (unknown operations become remote_error, exceptions are
    /// captured as remote_error).
    CallOutcome invoke(const GoalCall& call) const;

private:
    struct Entry {
        Handler handler;
        bool mutating;
    };
    std::map<std::pair<std::string, std::size_t>, Entry> entries_;
    // shared so Registry stays copyable; copies share the dispatch lock
    std::shared_ptr<std::shared_mutex> state_mutex_ = std::make_shared<std::shared_mutex>();
};

using Publisher = std::function<void(const ModuleAddress&)>;
using Locator = std::function<ModuleAddress(const std::string& module)>;

/// A running active module: a listening socket plus a dispatch loop per
/// connection.  Each connection carries any number of length-prefixed
/// call frames, one outcome frame each.
class Server {
public:
    /// Binds (ephemeral port when 0), publishes the address, starts
    /// serving.  The registry must be non-empty.
    Server(Registry registry, const Publisher& publisher, int port = 0);
    ~Server();
    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    const ModuleAddress& address() const { return address_; }
    void shutdown();

private:
    void accept_loop();
    void serve_connection(net::Socket socket);

    Registry registry_;
    ModuleAddress address_;
    net::Listener listener_;
    std::atomic<bool> stopping_{false};
    std::thread accept_thread_;
    std::mutex workers_mutex_;
    std::vector<std::thread> workers_;
};

/// Sends one call and reads one outcome.  Raises termweb::ConnectFailed,
/// termweb::Timeout or WireError.
CallOutcome call_remote(const ModuleAddress& address, const GoalCall& call,
                        int timeout_seconds = 60);

/// Callable stubs for an imported module: every call locates the module
/// address first (so a restarted module is found again) and then calls
/// remotely.  Only declared operations may be called.
class ModuleStub {
public:
    ModuleStub(std::string module, std::vector<std::pair<std::string, std::size_t>> operations,
               Locator locator, int timeout_seconds = 60);

    CallOutcome call(const std::string& operation, term::TermList args) const;

private:
    std::string module_;
    std::vector<std::pair<std::string, std::size_t>> operations_;
    Locator locator_;
    int timeout_seconds_;
};

ModuleStub import_stub(std::string module,
                       std::vector<std::pair<std::string, std::size_t>> operations,
                       Locator locator);

// ---- discovery: shared directory ---------------------------------------

/// Writes `<module>.addr` ("host port\n") atomically into `directory`.
void publish_filebased(const ModuleAddress& address, const std::string& module,
                       const std::filesystem::path& directory);
ModuleAddress locate_filebased(const std::string& module, const std::filesystem::path& directory);

Publisher filebased_publisher(std::string module, std::filesystem::path directory);
Locator filebased_locator(std::filesystem::path directory);

// ---- discovery: posted at a web address ---------------------------------

/// Publish drops the addr file into an HTTP-served directory; locate
/// fetches `<base_url>/<module>.addr` and parses it.
void publish_webbased(const ModuleAddress& address, const std::string& module,
                      const std::filesystem::path& served_directory);
ModuleAddress locate_webbased(const std::string& module, const std::string& base_url);

Publisher webbased_publisher(std::string module, std::filesystem::path served_directory);
Locator webbased_locator(std::string base_url);

// ---- discovery: name server ---------------------------------------------

/// The contact agency: itself an active module at a fixed address,
/// exporting register/2 and lookup/2 over module address records.
class NameServer {
public:
    explicit NameServer(int port);
    const ModuleAddress& address() const { return server_->address(); }
    void shutdown() { server_->shutdown(); }

private:
    std::shared_ptr<std::map<std::string, ModuleAddress>> table_;
    std::shared_ptr<Server> server_;
};

Publisher nameserver_publisher(std::string module, ModuleAddress name_server);
Locator nameserver_locator(ModuleAddress name_server);

}  // namespace termweb::actmod
