#include <fstream>
#include <iostream>
#include <map>
#include <set>

#include <CLI11.hpp>

#include "report.hpp"

using namespace fpsyn;
using namespace fpsyn::cli;

namespace {

struct CommandSpec {
    const char* name;
    const char* help;
    std::set<std::string> flags;
    bool syn;
};

const std::vector<CommandSpec>& commands() {
    static const std::vector<CommandSpec> list{
        {"validate", "check the invariants of a module or datum", {"module", "datum"}, false},
        {"star", "composed product of two polynomials", {"p", "q"}, false},
        {"bezout", "canonical Bezout pair for the composed product", {"p", "q"}, false},
        {"st-cohomology", "cohomology of the three-term complex", {"module", "poly", "twist"}, false},
        {"st-cup", "product of two st classes", {"module", "module2", "poly1", "poly2", "class", "class2", "lambda"},
         false},
        {"convenient", "the isomorphism D_K/Fil^0 -> H^1 for convenient modules", {"module", "poly", "class"}, false},
        {"trace-qp1", "trace on H^1 of the Qp(1)-model", {"module", "poly", "class"}, false},
        {"wa-check", "weak admissibility", {"module"}, false},
        {"syn-build-check", "build the syntomic complex and check d o d = 0", {"datum", "poly", "twist"}, true},
        {"syn-cohomology", "syntomic cohomology", {"datum", "poly", "twist", "degree"}, true},
        {"syn-cup", "product of two syntomic classes",
         {"datum", "poly1", "poly2", "twist", "twist2", "class", "class2", "lambda"}, true},
        {"descent", "graded pieces of the descent filtration", {"datum", "poly", "twist", "degree", "knight"}, true},
        {"triple-symbol", "the triple symbol via lifts and the trace",
         {"datum", "class", "poly0", "poly1", "poly2", "lambda", "knight"}, true},
        {"triple-symbol-alt", "the triple symbol via the explicit formula",
         {"datum", "class", "poly0", "poly1", "poly2", "lambda", "knight"}, true},
    };
    return list;
}

void add_flags(CLI::App* sub, const std::set<std::string>& flags, Options& o) {
    std::map<std::string, std::pair<std::string*, const char*>> text{
        {"module", {&o.module, "module file"}},
        {"module2", {&o.module2, "second module file (defaults to --module)"}},
        {"datum", {&o.datum, "datum file"}},
        {"poly", {&o.poly, "polynomial P"}},
        {"poly0", {&o.poly0, "polynomial P0"}},
        {"poly1", {&o.poly1, "polynomial P1"}},
        {"poly2", {&o.poly2, "polynomial P2"}},
        {"p", {&o.p, "first polynomial"}},
        {"q", {&o.q, "second polynomial"}},
        {"lambda", {&o.lambda, "homotopy parameter (default 0)"}},
        {"class", {&o.cls, "class file"}},
        {"class2", {&o.cls2, "second class file"}},
        {"knight", {&o.knight, "knight's move maps (default zero)"}},
    };
    for (const auto& name : flags) {
        if (auto it = text.find(name); it != text.end()) {
            sub->add_option("--" + name, *it->second.first, it->second.second);
        }
    }
    if (flags.count("twist")) {
        sub->add_option("--twist", o.twist, "twist r (default 0)");
    }
    if (flags.count("twist2")) {
        sub->add_option("--twist2", o.twist2, "twist of the second class (default 0)");
    }
    if (flags.count("degree")) {
        sub->add_option("--degree", o.degree, "cohomological degree");
    }
    sub->add_option("--out", o.out, "write the report here instead of stdout");
}

int exit_code(ErrorKind k) {
    switch (k) {
    case ErrorKind::ParseError:
        return 2;
    case ErrorKind::InternalInconsistency:
        return 4;
    default:
        return 3;
    }
}

void emit(const Options& o, const Json& j) {
    std::string text = io::dump(j);
    if (o.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(o.out);
    if (!out) {
        throw Error(ErrorKind::ParseError, "cannot write " + o.out);
    }
    out << text;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact workbench for finite-polynomial syntomic cohomology"};
    app.require_subcommand(1);
    Options o;
    std::map<CLI::App*, const CommandSpec*> subs;
    for (const CommandSpec& c : commands()) {
        CLI::App* sub = app.add_subcommand(c.name, c.help);
        add_flags(sub, c.flags, o);
        subs[sub] = &c;
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    const CommandSpec* spec = nullptr;
    for (const auto& [sub, c] : subs) {
        if (sub->parsed()) {
            spec = c;
        }
    }
    Report r;
    try {
        if (spec->syn) {
            run_syn_command(spec->name, o, r);
        } else {
            run_module_command(spec->name, o, r);
        }
    } catch (const Error& e) {
        if (r.inputs.empty()) {
            Json args = Json::array();
            for (int i = 2; i < argc; ++i) {
                args.push_back(argv[i]);
            }
            r.inputs["args"] = args;
        }
        Json err{{"command", spec->name},
                 {"inputs", r.inputs},
                 {"error", Json{{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}}}};
        try {
            emit(o, err);
        } catch (const Error&) {
        }
        std::cerr << spec->name << ": " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << spec->name << ": internal error: " << e.what() << "\n";
        return 4;
    }
    emit(o, Json{{"command", spec->name}, {"inputs", r.inputs}, {"result", r.result}});
    std::cerr << spec->name << ": " << r.summary << "\n";
    return 0;
}
