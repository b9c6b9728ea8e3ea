#include <sstream>

#include "report.hpp"

namespace fpsyn::cli {

FilPhiNModule load_module(const std::string& path) {
    if (path.empty()) {
        throw Error(ErrorKind::ParseError, "--module is required");
    }
    return io::module_from_json(io::read_file(path));
}

HKDatumPtr load_datum(const std::string& path) {
    if (path.empty()) {
        throw Error(ErrorKind::ParseError, "--datum is required");
    }
    HKDatum d = io::datum_from_json(io::read_file(path));
    require_valid(d);
    return std::make_shared<const HKDatum>(std::move(d));
}

CurveDatum load_curve(const std::string& path) {
    if (path.empty()) {
        throw Error(ErrorKind::ParseError, "--datum is required");
    }
    CurveDatum c = io::curve_from_json(io::read_file(path));
    require_valid(c);
    return c;
}

OnePoly load_poly(const Field& f, const std::string& text, const char* flag) {
    if (text.empty()) {
        throw Error(ErrorKind::ParseError, std::string(flag) + " is required");
    }
    return OnePoly::parse(f, text);
}

Elem load_lambda(const Field& f, const std::string& text) { return f.parse(text); }

KnightMaps load_knight(const Field& f, const std::string& path) {
    if (path.empty()) {
        return {};
    }
    return io::knight_from_json(f, io::read_file(path));
}

Json bezout_json(const BezoutPair& ab) { return Json{{"a", ab.a.to_string()}, {"b", ab.b.to_string()}}; }

Json dims_json(const std::vector<std::size_t>& dims) {
    Json out = Json::array();
    for (std::size_t d : dims) {
        out.push_back(d);
    }
    return out;
}

namespace {

Json checks_json(const ValidationReport& rep) {
    Json out = Json::array();
    for (const CheckItem& c : rep.items) {
        Json item{{"check", c.name}, {"passed", c.passed}};
        if (!c.detail.empty()) {
            item["detail"] = c.detail;
        }
        out.push_back(item);
    }
    return out;
}

std::string dims_text(const std::vector<std::size_t>& dims) {
    std::ostringstream s;
    s << "(";
    for (std::size_t i = 0; i < dims.size(); ++i) {
        s << (i ? "," : "") << dims[i];
    }
    s << ")";
    return s.str();
}

void cmd_star(const Options& o, Report& r) {
    Field f = Field::rationals();
    OnePoly p = load_poly(f, o.p, "--p");
    OnePoly q = load_poly(f, o.q, "--q");
    r.inputs = Json{{"p", p.to_string()}, {"q", q.to_string()}};
    OnePoly s = star(p, q);
    r.result = Json{{"star", s.to_string()}, {"degree", s.degree()}};
    r.summary = "P * Q = " + s.to_string();
}

void cmd_bezout(const Options& o, Report& r) {
    Field f = Field::rationals();
    OnePoly p = load_poly(f, o.p, "--p");
    OnePoly q = load_poly(f, o.q, "--q");
    r.inputs = Json{{"p", p.to_string()}, {"q", q.to_string()}};
    BezoutPair ab = bezout_star(p, q);
    bool ok = bezout_identity_holds(p, q, ab);
    r.result = Json{{"star", star(p, q).to_string()}, {"pair", bezout_json(ab)}, {"identity_holds", ok}};
    r.summary = std::string("Bezout pair found; identity ") + (ok ? "holds" : "FAILS");
}

void cmd_validate(const Options& o, Report& r) {
    if (!o.module.empty()) {
        FilPhiNModule m = load_module(o.module);
        ValidationReport rep = validate(m);
        r.inputs = Json{{"module", o.module}};
        r.result = Json{{"kind", "module"}, {"valid", rep.ok()}, {"checks", checks_json(rep)}};
        r.summary = rep.ok() ? "module valid" : "module invalid: " + rep.first_failure();
        return;
    }
    if (o.datum.empty()) {
        throw Error(ErrorKind::ParseError, "validate needs --module or --datum");
    }
    Json j = io::read_file(o.datum);
    HKDatum d = io::datum_from_json(j);
    ValidationReport rep = validate(d);
    r.inputs = Json{{"datum", o.datum}};
    r.result = Json{{"kind", "datum"}, {"valid", rep.ok()}, {"checks", checks_json(rep)}};
    r.summary = rep.ok() ? "datum valid" : "datum invalid: " + rep.first_failure();
    if (rep.ok() && j.contains("trace")) {
        CurveDatum c = io::curve_from_json(j);
        std::string curve = "ok";
        try {
            require_valid(c);
        } catch (const Error& e) {
            curve = e.what();
        }
        r.result["curve"] = Json{{"proper", c.proper()}, {"status", curve}};
    }
}

void cmd_st_cohomology(const Options& o, Report& r) {
    FilPhiNModule m = tate_twist(load_module(o.module), o.twist);
    require_valid(m);
    OnePoly p = load_poly(m.field, o.poly, "--poly");
    r.inputs = Json{{"module", o.module}, {"poly", p.to_string()}, {"twist", o.twist}};
    StComplexPtr c = st_build(m, p);
    StCohomology h = st_cohomology(*c);
    auto dims = h.dims();
    Json reps = Json::array();
    for (int k = 0; k < 3; ++k) {
        Json list = Json::array();
        for (std::size_t i = 0; i < dims[static_cast<std::size_t>(k)]; ++i) {
            list.push_back(io::st_class_to_json(h.rep(c, k, i)));
        }
        reps.push_back(list);
    }
    std::vector<std::size_t> dv(dims.begin(), dims.end());
    r.result = Json{{"dims", dims_json(dv)}, {"representatives", reps}};
    r.summary = "H_st dims " + dims_text(dv);
}

void cmd_st_cup(const Options& o, Report& r) {
    FilPhiNModule m1 = load_module(o.module);
    FilPhiNModule m2 = o.module2.empty() ? m1 : load_module(o.module2);
    require_valid(m1);
    require_valid(m2);
    OnePoly p1 = load_poly(m1.field, o.poly1, "--poly1");
    OnePoly p2 = load_poly(m2.field, o.poly2, "--poly2");
    Elem lambda = load_lambda(m1.field, o.lambda);
    if (o.cls.empty() || o.cls2.empty()) {
        throw Error(ErrorKind::ParseError, "st-cup needs --class and --class2");
    }
    StComplexPtr c1 = st_build(m1, p1);
    StComplexPtr c2 = st_build(m2, p2);
    StClass a = io::st_class_from_json(c1, io::read_file(o.cls));
    StClass b = io::st_class_from_json(c2, io::read_file(o.cls2));
    BezoutPair ab = bezout_star(p1, p2);
    r.inputs = Json{{"module", o.module},
                    {"module2", o.module2.empty() ? o.module : o.module2},
                    {"poly1", p1.to_string()},
                    {"poly2", p2.to_string()},
                    {"class", o.cls},
                    {"class2", o.cls2},
                    {"lambda", lambda.to_string()},
                    {"bezout", bezout_json(ab)}};
    StClass prod = st_cup(a, b, lambda, ab);
    r.result = Json{{"poly", prod.complex->P.to_string()},
                    {"product", io::st_class_to_json(prod)},
                    {"coboundary", st_is_coboundary(*prod.complex, prod.degree, prod.cocycle)}};
    r.summary = "cup product in degree " + std::to_string(prod.degree) + " over " + prod.complex->P.to_string();
}

void cmd_convenient(const Options& o, Report& r) {
    FilPhiNModule m = load_module(o.module);
    require_valid(m);
    OnePoly p = load_poly(m.field, o.poly, "--poly");
    r.inputs = Json{{"module", o.module}, {"poly", p.to_string()}};
    bool conv = is_convenient(m, p);
    r.result["convenient"] = conv;
    if (!conv) {
        r.summary = "not convenient";
        return;
    }
    StComplexPtr c = st_build(m, p);
    FilQuotient quot(c->fil0);
    Json forward = Json::array();
    bool roundtrip = true;
    for (std::size_t i = 0; i < quot.free_coords.size(); ++i) {
        Vector e = zero_vector(m.field, quot.free_coords.size());
        e[i] = m.field.one();
        Vector y = quot.from_coords(e);
        StClass cls = convenient_forward(c, y);
        roundtrip = roundtrip && quot.reduce(convenient_inverse(cls)) == quot.reduce(y);
        forward.push_back(Json{{"y", io::vector_to_json(y)}, {"class", io::st_class_to_json(cls)}});
    }
    StCohomology h = st_cohomology(*c);
    Json inverse = Json::array();
    bool x_zero = true;
    for (std::size_t i = 0; i < h.groups[1].dim(); ++i) {
        StClass cls = h.rep(c, 1, i);
        x_zero = x_zero && is_zero(cls.component("x"));
        Vector back = convenient_inverse(cls);
        StClass again = convenient_forward(c, back);
        roundtrip = roundtrip && st_is_coboundary(*c, 1, again.cocycle - cls.cocycle);
        inverse.push_back(Json{{"class", io::st_class_to_json(cls)}, {"y", io::vector_to_json(back)}});
    }
    r.result["forward"] = forward;
    r.result["inverse"] = inverse;
    r.result["roundtrip"] = roundtrip;
    r.result["x_vanishes"] = x_zero;
    if (!o.cls.empty()) {
        StClass cls = io::st_class_from_json(c, io::read_file(o.cls));
        r.result["class_image"] = io::vector_to_json(convenient_inverse(cls));
    }
    r.summary = std::string("convenient; roundtrip ") + (roundtrip ? "ok" : "FAILED");
}

void cmd_trace_qp1(const Options& o, Report& r) {
    FilPhiNModule m = load_module(o.module);
    require_valid(m);
    OnePoly p = load_poly(m.field, o.poly, "--poly");
    r.inputs = Json{{"module", o.module}, {"poly", p.to_string()}};
    StComplexPtr c = st_build(m, p);
    if (!o.cls.empty()) {
        StClass cls = io::st_class_from_json(c, io::read_file(o.cls));
        Elem t = trace_qp1(cls);
        r.inputs["class"] = o.cls;
        r.result = Json{{"trace", t.to_string()}};
        r.summary = "trace " + t.to_string();
        return;
    }
    StCohomology h = st_cohomology(*c);
    Json list = Json::array();
    for (std::size_t i = 0; i < h.groups[1].dim(); ++i) {
        StClass cls = h.rep(c, 1, i);
        list.push_back(Json{{"class", io::st_class_to_json(cls)}, {"trace", trace_qp1(cls).to_string()}});
    }
    r.result = Json{{"basis_traces", list}};
    r.summary = "traces of " + std::to_string(list.size()) + " basis classes";
}

void cmd_wa_check(const Options& o, Report& r) {
    FilPhiNModule m = load_module(o.module);
    require_valid(m);
    r.inputs = Json{{"module", o.module}};
    WAReport rep = check_weak_admissibility(m);
    HodgeNewton hn = hodge_newton(m);
    Json eig = Json::array();
    for (const Elem& e : rep.eigenvalues) {
        eig.push_back(e.to_string());
    }
    Json subs = Json::array();
    for (const SubobjectCheck& s : rep.subobjects) {
        subs.push_back(Json{{"eigen_indices", s.eigen_indices},
                            {"t_H", rational_to_string(s.t_h)},
                            {"t_N", rational_to_string(s.t_n)},
                            {"ok", s.ok}});
    }
    r.result = Json{{"weakly_admissible", rep.weakly_admissible},
                    {"t_H", rational_to_string(hn.t_h)},
                    {"t_N", rational_to_string(hn.t_n)},
                    {"eigenvalues", eig},
                    {"subobjects", subs},
                    {"violations", rep.violations}};
    r.summary = rep.weakly_admissible ? "weakly admissible" : "not weakly admissible";
}

} // namespace

void run_module_command(const std::string& name, const Options& o, Report& r) {
    if (name == "star") {
        cmd_star(o, r);
    } else if (name == "bezout") {
        cmd_bezout(o, r);
    } else if (name == "validate") {
        cmd_validate(o, r);
    } else if (name == "st-cohomology") {
        cmd_st_cohomology(o, r);
    } else if (name == "st-cup") {
        cmd_st_cup(o, r);
    } else if (name == "convenient") {
        cmd_convenient(o, r);
    } else if (name == "trace-qp1") {
        cmd_trace_qp1(o, r);
    } else if (name == "wa-check") {
        cmd_wa_check(o, r);
    } else {
        throw Error(ErrorKind::InternalInconsistency, "unknown command " + name);
    }
}

} // namespace fpsyn::cli
