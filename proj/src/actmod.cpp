#include "termweb/actmod.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include "termweb/http.hpp"

namespace termweb::actmod {

namespace {

constexpr std::size_t kMaxFrameBytes = 16 * 1024 * 1024;
constexpr int kReadTickMs = 250;

std::string encode_frame(const std::string& payload) {
    std::uint32_t n = static_cast<std::uint32_t>(payload.size());
    std::string out;
    out.reserve(payload.size() + 4);
    out += static_cast<char>((n >> 24) & 0xFF);
    out += static_cast<char>((n >> 16) & 0xFF);
    out += static_cast<char>((n >> 8) & 0xFF);
    out += static_cast<char>(n & 0xFF);
    out += payload;
    return out;
}

std::uint32_t decode_length(const char* bytes) {
    auto b = [&](int i) { return static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[i])); };
    return (b(0) << 24) | (b(1) << 16) | (b(2) << 8) | b(3);
}

std::string call_payload(const GoalCall& call) {
    if (call.args.empty()) return term::to_text(term::Term::atom(call.operation));
    return term::to_text(term::Term::compound(call.operation, call.args));
}

GoalCall parse_call(const term::Term& t) {
    if (t.is_atom()) return GoalCall{t.text(), {}};
    if (t.is_compound()) return GoalCall{t.name(), t.args()};
    throw WireError("call frame is not a goal: " + term::to_text(t));
}

term::Term address_term(const ModuleAddress& address) {
    return term::Term::compound(
        "address", {term::Term::str(address.host), term::Term::integer(address.port)});
}

ModuleAddress address_from_term(const term::Term& t) {
    if (t.is_compound() && t.name() == "address" && t.args().size() == 2 &&
        t.args()[1].kind() == term::Term::Kind::Int) {
        const term::Term& host = t.args()[0];
        if (host.is_string() || host.is_atom())
            return ModuleAddress{host.text(), static_cast<int>(t.args()[1].int_value())};
    }
    throw WireError("not an address record: " + term::to_text(t));
}

}  // namespace

CallOutcome CallOutcome::success(term::TermList bound_args) {
    CallOutcome o;
    o.kind = Kind::Success;
    o.bound_args = std::move(bound_args);
    return o;
}

CallOutcome CallOutcome::failure() { return CallOutcome{}; }

CallOutcome CallOutcome::remote_error(std::string message) {
    CallOutcome o;
    o.kind = Kind::RemoteError;
    o.error = std::move(message);
    return o;
}

std::string outcome_text(const CallOutcome& outcome) {
    switch (outcome.kind) {
    case CallOutcome::Kind::Success:
        return term::to_text(
            term::Term::compound("success", {term::Term::list(outcome.bound_args)}));
    case CallOutcome::Kind::Failure: return "failure";
    case CallOutcome::Kind::RemoteError:
        return term::to_text(term::Term::compound("remote_error", {term::Term::str(outcome.error)}));
    }
    return "failure";
}

CallOutcome parse_outcome(const term::Term& t) {
    if (t.is_atom() && t.text() == "failure") return CallOutcome::failure();
    if (t.is_compound() && t.name() == "success" && t.args().size() == 1 && t.args()[0].is_list())
        return CallOutcome::success(t.args()[0].items());
    if (t.is_compound() && t.name() == "remote_error" && t.args().size() == 1 &&
        (t.args()[0].is_string() || t.args()[0].is_atom()))
        return CallOutcome::remote_error(t.args()[0].text());
    throw WireError("not an outcome: " + term::to_text(t));
}

void Registry::add(const std::string& operation, std::size_t arity, Handler handler,
                   bool mutating) {
    entries_[{operation, arity}] = Entry{std::move(handler), mutating};
}

CallOutcome Registry::invoke(const GoalCall& call) const {
    auto it = entries_.find({call.operation, call.args.size()});
    if (it == entries_.end())
        return CallOutcome::remote_error("unknown operation " + call.operation + "/" +
                                         std::to_string(call.args.size()));
    CallOutcome outcome;
    try {
        if (it->second.mutating) {
            std::unique_lock lock(*state_mutex_);
            outcome = it->second.handler(call.args);
        } else {
            std::shared_lock lock(*state_mutex_);
            outcome = it->second.handler(call.args);
        }
    } catch (const std::exception& e) {
        return CallOutcome::remote_error(e.what());
    }
    if (outcome.kind == CallOutcome::Kind::Success &&
        outcome.bound_args.size() != call.args.size())
        return CallOutcome::remote_error("handler for " + call.operation +
                                         " bound the wrong arity");
    return outcome;
}

// ---- server ---------------------------------------------------------------

Server::Server(Registry registry, const Publisher& publisher, int port)
    : registry_(std::move(registry)), listener_([&]() -> net::Listener {
          if (registry_.empty()) throw std::invalid_argument("registry is empty");
          try {
              return net::Listener(port);
          } catch (const Error& e) {
              throw BindFailed(e.what());
          }
      }()) {
    address_ = ModuleAddress{"127.0.0.1", listener_.port()};
    try {
        publisher(address_);
    } catch (const PublishFailed&) {
        throw;
    } catch (const std::exception& e) {
        throw PublishFailed(e.what());
    }
    accept_thread_ = std::thread([this] { accept_loop(); });
}

Server::~Server() { shutdown(); }

void Server::shutdown() {
    bool expected = false;
    if (!stopping_.compare_exchange_strong(expected, true)) {
        if (accept_thread_.joinable()) accept_thread_.join();
        return;
    }
    listener_.close();
    if (accept_thread_.joinable()) accept_thread_.join();
    std::vector<std::thread> workers;
    {
        std::lock_guard lock(workers_mutex_);
        workers.swap(workers_);
    }
    for (auto& w : workers)
        if (w.joinable()) w.join();
}

void Server::accept_loop() {
    while (!stopping_) {
        auto socket = listener_.accept();
        if (!socket) break;
        std::lock_guard lock(workers_mutex_);
        if (stopping_) break;
        workers_.emplace_back(
            [this, s = std::make_shared<net::Socket>(std::move(*socket))]() mutable {
                serve_connection(std::move(*s));
            });
    }
}

namespace {

enum class FrameResult { Ok, Closed, Oversized };

// Reads one length-prefixed frame, polling in short ticks so shutdown
// is prompt.  Oversized frames report without reading the payload.
FrameResult read_frame(net::Socket& socket, const std::atomic<bool>& stopping,
                       std::string& payload) {
    char header[4];
    std::size_t got = 0;
    while (got < 4) {
        if (stopping) return FrameResult::Closed;
        try {
            std::size_t n = socket.read_some(header + got, 4 - got, net::deadline_in_ms(kReadTickMs));
            if (n == 0) return FrameResult::Closed;
            got += n;
        } catch (const Timeout&) {
            continue;
        } catch (const Error&) {
            return FrameResult::Closed;
        }
    }
    std::uint32_t length = decode_length(header);
    if (length > kMaxFrameBytes) return FrameResult::Oversized;
    payload.resize(length);
    got = 0;
    while (got < length) {
        if (stopping) return FrameResult::Closed;
        try {
            std::size_t n =
                socket.read_some(payload.data() + got, length - got, net::deadline_in_ms(kReadTickMs));
            if (n == 0) return FrameResult::Closed;
            got += n;
        } catch (const Timeout&) {
            continue;
        } catch (const Error&) {
            return FrameResult::Closed;
        }
    }
    return FrameResult::Ok;
}

}  // namespace

void Server::serve_connection(net::Socket socket) {
    while (!stopping_) {
        std::string payload;
        FrameResult result = read_frame(socket, stopping_, payload);
        if (result == FrameResult::Closed) return;

        CallOutcome outcome;
        bool fatal = false;
        if (result == FrameResult::Oversized) {
            outcome = CallOutcome::remote_error("frame too large");
            fatal = true;
        } else {
            try {
                outcome = registry_.invoke(parse_call(term::parse_term(payload)));
            } catch (const std::exception& e) {
                outcome = CallOutcome::remote_error(std::string("malformed frame: ") + e.what());
                fatal = true;
            }
        }
        try {
            socket.write_all(encode_frame(outcome_text(outcome)), net::deadline_in(30));
        } catch (const std::exception&) {
            return;
        }
        if (fatal) return;
    }
}

// ---- client ---------------------------------------------------------------

CallOutcome call_remote(const ModuleAddress& address, const GoalCall& call, int timeout_seconds) {
    net::Deadline deadline = net::deadline_in(timeout_seconds);
    net::Socket socket = net::Socket::connect(address.host, address.port, deadline);
    socket.write_all(encode_frame(call_payload(call)), deadline);

    char header[4];
    if (!socket.read_exact(header, 4, deadline))
        throw WireError("connection closed before a response frame");
    std::uint32_t length = decode_length(header);
    if (length > kMaxFrameBytes) throw WireError("response frame too large");
    std::string payload(length, '\0');
    if (length > 0 && !socket.read_exact(payload.data(), length, deadline))
        throw WireError("connection closed mid-frame");
    try {
        return parse_outcome(term::parse_term(payload));
    } catch (const term::TermSyntax& e) {
        throw WireError(std::string("bad outcome payload: ") + e.what());
    }
}

ModuleStub::ModuleStub(std::string module,
                       std::vector<std::pair<std::string, std::size_t>> operations,
                       Locator locator, int timeout_seconds)
    : module_(std::move(module)),
      operations_(std::move(operations)),
      locator_(std::move(locator)),
      timeout_seconds_(timeout_seconds) {}

CallOutcome ModuleStub::call(const std::string& operation, term::TermList args) const {
    std::pair<std::string, std::size_t> key{operation, args.size()};
    bool declared = false;
    for (const auto& op : operations_)
        if (op == key) declared = true;
    if (!declared)
        throw UnknownOperation(operation + "/" + std::to_string(args.size()) +
                               " is not imported from " + module_);
    ModuleAddress address = locator_(module_);
    return call_remote(address, GoalCall{operation, std::move(args)}, timeout_seconds_);
}

ModuleStub import_stub(std::string module,
                       std::vector<std::pair<std::string, std::size_t>> operations,
                       Locator locator) {
    return ModuleStub(std::move(module), std::move(operations), std::move(locator));
}

// ---- file-based discovery --------------------------------------------------

void publish_filebased(const ModuleAddress& address, const std::string& module,
                       const std::filesystem::path& directory) {
    std::error_code ec;
    std::filesystem::create_directories(directory, ec);
    std::filesystem::path final_path = directory / (module + ".addr");
    std::filesystem::path temp_path =
        directory / (module + ".addr.tmp" + std::to_string(::getpid()));
    {
        std::ofstream out(temp_path, std::ios::binary | std::ios::trunc);
        if (!out) throw PublishFailed("cannot write " + temp_path.string());
        out << address.host << " " << address.port << "\n";
        if (!out.flush()) throw PublishFailed("cannot write " + temp_path.string());
    }
    std::filesystem::rename(temp_path, final_path, ec);
    if (ec) throw PublishFailed("cannot rename to " + final_path.string() + ": " + ec.message());
}

namespace {

ModuleAddress parse_addr_record(const std::string& content, const std::string& where) {
    std::istringstream in(content);
    ModuleAddress address;
    if (!(in >> address.host >> address.port) || address.port <= 0 || address.port >= 65536)
        throw LocateFailed("bad address record in " + where);
    return address;
}

}  // namespace

ModuleAddress locate_filebased(const std::string& module,
                               const std::filesystem::path& directory) {
    std::filesystem::path path = directory / (module + ".addr");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw LocateFailed(module + ": no address file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_addr_record(std::move(buf).str(), path.string());
}

Publisher filebased_publisher(std::string module, std::filesystem::path directory) {
    return [module = std::move(module), directory = std::move(directory)](
               const ModuleAddress& address) { publish_filebased(address, module, directory); };
}

Locator filebased_locator(std::filesystem::path directory) {
    return [directory = std::move(directory)](const std::string& module) {
        return locate_filebased(module, directory);
    };
}

// ---- web-based discovery ----------------------------------------------------

void publish_webbased(const ModuleAddress& address, const std::string& module,
                      const std::filesystem::path& served_directory) {
    publish_filebased(address, module, served_directory);
}

ModuleAddress locate_webbased(const std::string& module, const std::string& base_url) {
    std::string addr_url = base_url;
    if (!addr_url.empty() && addr_url.back() != '/') addr_url += '/';
    addr_url += module + ".addr";
    try {
        http::ResponseParams response = http::fetch(url::url_info(addr_url));
        const auto* status = http::find_param<http::Status>(response);
        if (!status || status->cls != http::StatusClass::Success)
            throw LocateFailed(module + ": " + addr_url + " returned " +
                               (status ? std::to_string(status->code) : "no status"));
        const auto* content = http::find_param<http::Content>(response);
        if (!content) throw LocateFailed(module + ": empty response from " + addr_url);
        return parse_addr_record(content->bytes, addr_url);
    } catch (const LocateFailed&) {
        throw;
    } catch (const Error& e) {
        throw LocateFailed(module + ": " + e.what());
    }
}

Publisher webbased_publisher(std::string module, std::filesystem::path served_directory) {
    return [module = std::move(module), served_directory = std::move(served_directory)](
               const ModuleAddress& address) {
        publish_webbased(address, module, served_directory);
    };
}

Locator webbased_locator(std::string base_url) {
    return [base_url = std::move(base_url)](const std::string& module) {
        return locate_webbased(module, base_url);
    };
}

// ---- name-server discovery ----------------------------------------------------

NameServer::NameServer(int port)
    : table_(std::make_shared<std::map<std::string, ModuleAddress>>()) {
    Registry registry;
    auto table = table_;
    // the registry's dispatch lock guards the table: register mutates,
    // lookup reads
    registry.add(
        "register", 2,
        [table](const term::TermList& args) -> CallOutcome {
            if (!args[0].is_atom() && !args[0].is_string())
                return CallOutcome::remote_error("register: bad module name");
            (*table)[args[0].text()] = address_from_term(args[1]);
            return CallOutcome::success(args);
        },
        /*mutating=*/true);
    registry.add("lookup", 2, [table](const term::TermList& args) -> CallOutcome {
        if (!args[0].is_atom() && !args[0].is_string())
            return CallOutcome::remote_error("lookup: bad module name");
        auto it = table->find(args[0].text());
        if (it == table->end()) return CallOutcome::failure();
        return CallOutcome::success({args[0], address_term(it->second)});
    });
    server_ = std::make_shared<Server>(std::move(registry), [](const ModuleAddress&) {}, port);
}

Publisher nameserver_publisher(std::string module, ModuleAddress name_server) {
    return [module = std::move(module), name_server](const ModuleAddress& address) {
        try {
            CallOutcome outcome =
                call_remote(name_server, GoalCall{"register", {term::Term::atom(module),
                                                               address_term(address)}});
            if (!outcome.ok()) throw PublishFailed("name server refused: " + outcome_text(outcome));
        } catch (const PublishFailed&) {
            throw;
        } catch (const Error& e) {
            throw PublishFailed(std::string("name server unreachable: ") + e.what());
        }
    };
}

Locator nameserver_locator(ModuleAddress name_server) {
    return [name_server](const std::string& module) -> ModuleAddress {
        try {
            CallOutcome outcome = call_remote(
                name_server,
                GoalCall{"lookup", {term::Term::atom(module), term::Term::placeholder()}});
            if (outcome.kind == CallOutcome::Kind::Failure)
                throw LocateFailed(module + ": not registered with the name server");
            if (!outcome.ok()) throw LocateFailed(module + ": " + outcome.error);
            return address_from_term(outcome.bound_args.at(1));
        } catch (const LocateFailed&) {
            throw;
        } catch (const Error& e) {
            throw LocateFailed(module + ": " + e.what());
        }
    };
}

}  // namespace termweb::actmod
