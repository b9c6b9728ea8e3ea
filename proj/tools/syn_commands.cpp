#include "report.hpp"

namespace fpsyn::cli {

namespace {

Json knight_echo(const Options& o, const KnightMaps& k) {
    if (o.knight.empty()) {
        return "zero";
    }
    return io::knight_to_json(k);
}

void cmd_syn_build_check(const Options& o, Report& r) {
    if (o.datum.empty()) {
        throw Error(ErrorKind::ParseError, "--datum is required");
    }
    HKDatum raw = io::datum_from_json(io::read_file(o.datum));
    ValidationReport rep = validate(raw);
    HKDatumPtr d = std::make_shared<const HKDatum>(std::move(raw));
    OnePoly p = load_poly(d->field, o.poly, "--poly");
    r.inputs = Json{{"datum", o.datum}, {"poly", p.to_string()}, {"twist", o.twist}};
    Json checks = Json::array();
    for (const CheckItem& c : rep.items) {
        checks.push_back(Json{{"check", c.name}, {"passed", c.passed}});
    }
    r.result["datum_checks"] = checks;
    if (!rep.ok()) {
        throw Error(ErrorKind::InvalidDatum, rep.first_failure());
    }
    SynComplexPtr c = syn_build(d, p, o.twist);
    std::vector<std::size_t> dims;
    Json dd = Json::array();
    bool all = true;
    for (int n = 0; n <= c->top; ++n) {
        dims.push_back(c->dim(n));
        if (n + 1 <= c->top) {
            bool zero = (c->differential(n + 1) * c->differential(n)).is_zero();
            all = all && zero;
            dd.push_back(Json{{"degree", n}, {"d_squared_zero", zero}});
        }
    }
    r.result["cochain_dims"] = dims_json(dims);
    r.result["d_squared"] = dd;
    r.result["ok"] = all;
    if (!all) {
        throw Error(ErrorKind::InternalInconsistency, "d o d != 0");
    }
    r.summary = "syn complex built; d o d = 0 in every degree";
}

void cmd_syn_cohomology(const Options& o, Report& r) {
    HKDatumPtr d = load_datum(o.datum);
    OnePoly p = load_poly(d->field, o.poly, "--poly");
    r.inputs = Json{{"datum", o.datum}, {"poly", p.to_string()}, {"twist", o.twist}};
    SynComplexPtr c = syn_build(d, p, o.twist);
    auto dims = syn_dims(*c);
    r.result["dims"] = dims_json(dims);
    Json reps = Json::object();
    for (int n = 0; n <= c->top; ++n) {
        if (o.degree >= 0 && n != o.degree) {
            continue;
        }
        CohomologyGroup h = syn_cohomology(*c, n);
        Json list = Json::array();
        for (std::size_t j = 0; j < h.dim(); ++j) {
            list.push_back(io::syn_class_to_json({c, n, h.reps.column(j)}));
        }
        reps[std::to_string(n)] = list;
    }
    r.result["representatives"] = reps;
    std::string text;
    for (std::size_t n = 0; n < dims.size(); ++n) {
        text += (n ? "," : "") + std::to_string(dims[n]);
    }
    r.summary = "H_syn dims (" + text + ")";
}

void cmd_syn_cup(const Options& o, Report& r) {
    HKDatumPtr d = load_datum(o.datum);
    OnePoly p1 = load_poly(d->field, o.poly1, "--poly1");
    OnePoly p2 = load_poly(d->field, o.poly2, "--poly2");
    Elem lambda = load_lambda(d->field, o.lambda);
    if (o.cls.empty() || o.cls2.empty()) {
        throw Error(ErrorKind::ParseError, "syn-cup needs --class and --class2");
    }
    SynComplexPtr c1 = syn_build(d, p1, o.twist);
    SynComplexPtr c2 = syn_build(d, p2, o.twist2);
    SynClass a = io::syn_class_from_json(c1, io::read_file(o.cls));
    SynClass b = io::syn_class_from_json(c2, io::read_file(o.cls2));
    BezoutPair ab = bezout_star(p1, p2);
    r.inputs = Json{{"datum", o.datum},         {"poly1", p1.to_string()}, {"poly2", p2.to_string()},
                    {"twist", o.twist},         {"twist2", o.twist2},      {"class", o.cls},
                    {"class2", o.cls2},         {"lambda", lambda.to_string()},
                    {"bezout", bezout_json(ab)}};
    SynClass prod = syn_cup(a, b, lambda, ab);
    r.result = Json{{"poly", prod.complex->P.to_string()},
                    {"twist", prod.complex->r},
                    {"product", io::syn_class_to_json(prod)},
                    {"cocycle", syn_is_cocycle(prod)},
                    {"coboundary", syn_is_coboundary(prod)}};
    r.summary = "cup product in degree " + std::to_string(prod.degree);
}

void cmd_descent(const Options& o, Report& r) {
    HKDatumPtr d = load_datum(o.datum);
    OnePoly p = load_poly(d->field, o.poly, "--poly");
    KnightMaps k = load_knight(d->field, o.knight);
    if (o.degree < 0) {
        throw Error(ErrorKind::ParseError, "--degree is required");
    }
    r.inputs = Json{{"datum", o.datum},
                    {"poly", p.to_string()},
                    {"twist", o.twist},
                    {"degree", o.degree},
                    {"knight", knight_echo(o, k)}};
    DescentGradeds g = descent_gradeds(*d, p, o.twist, o.degree, k);
    Json pieces = Json::array();
    for (const GradedPiece& piece : g.pieces) {
        Json basis = Json::array();
        for (const Vector& v : piece.basis) {
            basis.push_back(io::vector_to_json(v));
        }
        pieces.push_back(Json{{"dim", piece.dim}, {"basis", basis}});
    }
    SynComplexPtr c = syn_build(d, p, o.twist);
    auto dims = syn_dims(*c);
    std::size_t syn = o.degree <= c->top ? dims[static_cast<std::size_t>(o.degree)] : 0;
    r.result = Json{{"gradeds", pieces}, {"total", g.total()}, {"syn_dim", syn}};
    r.summary = "gradeds (" + std::to_string(g.pieces[0].dim) + "," + std::to_string(g.pieces[1].dim) + "," +
                std::to_string(g.pieces[2].dim) + "), H_syn dim " + std::to_string(syn);
}

TripleInputs triple_inputs(const Options& o, const CurveDatum& curve, Report& r) {
    const Field& f = curve.X->field;
    if (o.cls.empty()) {
        throw Error(ErrorKind::ParseError, "--class with eta, omega1, omega2 is required");
    }
    Json cls = io::read_file(o.cls);
    auto target = [&](const char* key) {
        if (!cls.contains(key)) {
            throw Error(ErrorKind::ParseError, std::string("class file lacks \"") + key + "\"");
        }
        return io::lift_target_from_json(f, cls.at(key));
    };
    TripleInputs in{target("eta"),
                    target("omega1"),
                    target("omega2"),
                    load_poly(f, o.poly0, "--poly0"),
                    load_poly(f, o.poly1, "--poly1"),
                    load_poly(f, o.poly2, "--poly2"),
                    load_lambda(f, o.lambda),
                    load_knight(f, o.knight)};
    r.inputs = Json{{"datum", o.datum},
                    {"class", o.cls},
                    {"poly0", in.P0.to_string()},
                    {"poly1", in.P1.to_string()},
                    {"poly2", in.P2.to_string()},
                    {"lambda", in.lambda.to_string()},
                    {"bezout", bezout_json(bezout_star(in.P1, in.P2))},
                    {"knight", knight_echo(o, in.knight)}};
    return in;
}

void cmd_triple(const Options& o, Report& r) {
    CurveDatum curve = load_curve(o.datum);
    TripleInputs in = triple_inputs(o, curve, r);
    TripleResult res = triple_symbol(curve, in);
    r.result = Json{{"value", res.value.to_string()},
                    {"eta_lift", io::syn_class_to_json(res.eta_lift)},
                    {"omega1_lift", io::syn_class_to_json(res.omega1_lift)},
                    {"omega2_lift", io::syn_class_to_json(res.omega2_lift)},
                    {"product", io::syn_class_to_json(res.product)}};
    r.summary = "triple symbol " + res.value.to_string();
}

void cmd_triple_alt(const Options& o, Report& r) {
    CurveDatum curve = load_curve(o.datum);
    TripleInputs in = triple_inputs(o, curve, r);
    AltResult res = triple_symbol_alt(curve, in);
    r.result = Json{{"value", res.value.to_string()},
                    {"w", io::vector_to_json(res.w)},
                    {"x", io::vector_to_json(res.x)},
                    {"y", io::vector_to_json(res.y)}};
    r.summary = "triple symbol (alt) " + res.value.to_string();
}

} // namespace

void run_syn_command(const std::string& name, const Options& o, Report& r) {
    if (name == "syn-build-check") {
        cmd_syn_build_check(o, r);
    } else if (name == "syn-cohomology") {
        cmd_syn_cohomology(o, r);
    } else if (name == "syn-cup") {
        cmd_syn_cup(o, r);
    } else if (name == "descent") {
        cmd_descent(o, r);
    } else if (name == "triple-symbol") {
        cmd_triple(o, r);
    } else if (name == "triple-symbol-alt") {
        cmd_triple_alt(o, r);
    } else {
        throw Error(ErrorKind::InternalInconsistency, "unknown command " + name);
    }
}

} // namespace fpsyn::cli
