// CGI form producer/handler for the telephone database demo.  By
// default it answers in-process; --backend HOST:PORT forwards the query
// to a running phone_db active module.

#include <iostream>
#include <string>

#include "termweb/actmod.hpp"
#include "termweb/forms.hpp"
#include "termweb/html_codec.hpp"
#include "termweb/phonedb.hpp"
#include "termweb/sugar.hpp"

using namespace termweb;

namespace {

markup::NodeList backend_response(const actmod::ModuleAddress& backend, const std::string& name) {
    actmod::CallOutcome outcome = actmod::call_remote(
        backend,
        actmod::GoalCall{"response", {term::Term::str(name), term::Term::placeholder()}});
    if (!outcome.ok()) throw Error("backend call failed: " + actmod::outcome_text(outcome));
    return sugar::nodes_from_term(outcome.bound_args.at(1));
}

}  // namespace

int main(int argc, char** argv) {
    try {
        std::string backend_spec;
        for (int i = 1; i < argc; ++i) {
            std::string arg = argv[i];
            if (arg == "--backend" && i + 1 < argc) {
                backend_spec = argv[++i];
            } else {
                std::cerr << "usage: phone_db.cgi [--backend HOST:PORT]" << std::endl;
                return 2;
            }
        }

        forms::CgiEnv env = forms::CgiEnv::capture(std::cin);
        forms::FormDict input = forms::get_form_input(env);
        std::string name = forms::get_form_value(input, "person_name").text();

        markup::NodeList response;
        if (backend_spec.empty()) {
            response = phonedb::PhoneBook().response(name);
        } else {
            std::size_t colon = backend_spec.rfind(':');
            if (colon == std::string::npos) throw Error("--backend expects HOST:PORT");
            actmod::ModuleAddress backend{backend_spec.substr(0, colon),
                                          std::stoi(backend_spec.substr(colon + 1))};
            response = backend_response(backend, name);
        }

        codec::render_to_stream(phonedb::page(response), codec::Dialect::Html, std::cout);
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "phone_db.cgi: " << e.what() << std::endl;
        return 1;
    }
}
