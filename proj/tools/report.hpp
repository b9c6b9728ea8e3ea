#pragma once

// Shared plumbing for the command-line front end.

#include <string>

#include "fpsyn/io.hpp"

namespace fpsyn::cli {

using io::Json;

struct Options {
    std::string module;
    std::string module2;
    std::string datum;
    std::string poly;
    std::string poly0;
    std::string poly1;
    std::string poly2;
    std::string p;
    std::string q;
    long twist = 0;
    long twist2 = 0;
    int degree = -1;
    std::string lambda = "0";
    std::string cls;
    std::string cls2;
    std::string knight;
    std::string out;
};

/// The report under construction and a one-line summary for stderr.
struct Report {
    Json inputs = Json::object();
    Json result = Json::object();
    std::string summary;
};

FilPhiNModule load_module(const std::string& path);
HKDatumPtr load_datum(const std::string& path);
CurveDatum load_curve(const std::string& path);
OnePoly load_poly(const Field& f, const std::string& text, const char* flag);
Elem load_lambda(const Field& f, const std::string& text);
KnightMaps load_knight(const Field& f, const std::string& path);

Json bezout_json(const BezoutPair& ab);
Json dims_json(const std::vector<std::size_t>& dims);

void run_module_command(const std::string& name, const Options& o, Report& r);
void run_syn_command(const std::string& name, const Options& o, Report& r);

} // namespace fpsyn::cli
