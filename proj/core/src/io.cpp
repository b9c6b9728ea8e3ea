#include "fpsyn/io.hpp"

#include <fstream>
#include <sstream>

namespace fpsyn::io {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::ParseError, what); }

const Json& need(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) {
        bad(std::string("missing key \"") + key + "\"");
    }
    return j.at(key);
}

long need_int(const Json& j, const char* key) {
    const Json& v = need(j, key);
    if (!v.is_number_integer()) {
        bad(std::string("\"") + key + "\" must be an integer");
    }
    return v.get<long>();
}

std::size_t need_size(const Json& j, const char* key) {
    long v = need_int(j, key);
    if (v < 0) {
        bad(std::string("\"") + key + "\" must be nonnegative");
    }
    return static_cast<std::size_t>(v);
}

const Json& need_array(const Json& j, const char* what) {
    if (!j.is_array()) {
        bad(std::string(what) + " must be a list");
    }
    return j;
}

// Sparse product tables: {"i", "j", "table": [[a, b, vector], ...]}.
Json products_to_json(const std::map<std::pair<int, int>, Matrix>& mult, const std::vector<std::size_t>& right) {
    Json out = Json::array();
    for (const auto& [key, m] : mult) {
        auto [i, j] = key;
        std::size_t nb = right[static_cast<std::size_t>(j)];
        Json table = Json::array();
        for (std::size_t col = 0; col < m.cols(); ++col) {
            Vector v = m.column(col);
            if (is_zero(v)) {
                continue;
            }
            table.push_back(Json::array({col / nb, col % nb, vector_to_json(v)}));
        }
        if (!table.empty()) {
            out.push_back(Json{{"i", i}, {"j", j}, {"table", table}});
        }
    }
    return out;
}

std::map<std::pair<int, int>, Matrix> products_from_json(const Field& f, const Json& j,
                                                         const std::vector<std::size_t>& left,
                                                         const std::vector<std::size_t>& right,
                                                         const std::vector<std::size_t>& target) {
    std::map<std::pair<int, int>, Matrix> out;
    for (const Json& entry : need_array(j, "products")) {
        long i = need_int(entry, "i");
        long k = need_int(entry, "j");
        if (i < 0 || k < 0 || static_cast<std::size_t>(i) >= left.size() ||
            static_cast<std::size_t>(k) >= right.size() || static_cast<std::size_t>(i + k) >= target.size()) {
            bad("product degrees (" + std::to_string(i) + ", " + std::to_string(k) + ") out of range");
        }
        std::size_t na = left[static_cast<std::size_t>(i)];
        std::size_t nb = right[static_cast<std::size_t>(k)];
        std::size_t nt = target[static_cast<std::size_t>(i + k)];
        auto key = std::make_pair(static_cast<int>(i), static_cast<int>(k));
        auto [it, fresh] = out.try_emplace(key, Matrix(f, nt, na * nb));
        if (!fresh) {
            bad("product degrees listed twice");
        }
        for (const Json& row : need_array(need(entry, "table"), "table")) {
            if (!row.is_array() || row.size() != 3 || !row[0].is_number_integer() || !row[1].is_number_integer()) {
                bad("product entries are [a, b, vector]");
            }
            long a = row[0].get<long>();
            long b = row[1].get<long>();
            if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= na || static_cast<std::size_t>(b) >= nb) {
                bad("product basis index out of range");
            }
            Vector v = vector_from_json(f, row[2], nt);
            std::size_t col = static_cast<std::size_t>(a) * nb + static_cast<std::size_t>(b);
            for (std::size_t r = 0; r < nt; ++r) {
                it->second.at(r, col) = v[r];
            }
        }
    }
    return out;
}

Json matrices_to_json(const std::vector<Matrix>& ms) {
    Json out = Json::array();
    for (const Matrix& m : ms) {
        out.push_back(matrix_to_json(m));
    }
    return out;
}

std::vector<Matrix> matrices_from_json(const Field& f, const Json& j, const char* what,
                                       const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) {
    need_array(j, what);
    if (j.size() != rows.size()) {
        bad(std::string(what) + " needs one matrix per degree");
    }
    std::vector<Matrix> out;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        out.push_back(matrix_from_json(f, j[k], rows[k], cols[k]));
    }
    return out;
}

} // namespace

Json read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        bad("cannot open " + path);
    }
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        bad(path + ": " + e.what());
    }
}

namespace {

bool scalar_list(const Json& j) {
    if (!j.is_array()) {
        return false;
    }
    for (const Json& e : j) {
        if (e.is_structured()) {
            return false;
        }
    }
    return true;
}

// Scalars mixed with scalar lists, such as product entries [a, b, vector].
bool inline_list(const Json& j) {
    if (!j.is_array()) {
        return false;
    }
    bool scalar = false;
    for (const Json& e : j) {
        if (e.is_structured() && !scalar_list(e)) {
            return false;
        }
        scalar = scalar || !e.is_structured();
    }
    return scalar || j.empty();
}

// Like dump(2), except that lists of scalars stay on one line.
void write(std::string& out, const Json& j, int indent) {
    const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
    const std::string close(static_cast<std::size_t>(indent), ' ');
    if (j.is_object() && !j.empty()) {
        out += "{\n";
        std::size_t k = 0;
        for (const auto& [key, v] : j.items()) {
            out += pad + Json(key).dump() + ": ";
            write(out, v, indent + 2);
            out += ++k < j.size() ? ",\n" : "\n";
        }
        out += close + "}";
    } else if (j.is_array() && !inline_list(j)) {
        out += "[\n";
        for (std::size_t k = 0; k < j.size(); ++k) {
            out += pad;
            write(out, j[k], indent + 2);
            out += k + 1 < j.size() ? ",\n" : "\n";
        }
        out += close + "]";
    } else if (j.is_array()) {
        out += "[";
        for (std::size_t k = 0; k < j.size(); ++k) {
            out += k ? ", " : "";
            write(out, j[k], indent);
        }
        out += "]";
    } else {
        out += j.dump();
    }
}

} // namespace

std::string dump(const Json& j) {
    std::string out;
    write(out, j, 0);
    return out + "\n";
}

Json field_to_json(const Field& f) {
    const FieldSpec& s = f.spec();
    Json out;
    if (s.kind == FieldSpec::Kind::Rationals) {
        out["kind"] = "rationals";
    } else {
        out["kind"] = "extension";
        Json mp = Json::array();
        for (const Rational& c : s.minpoly) {
            mp.push_back(rational_to_string(c));
        }
        out["minpoly"] = mp;
    }
    if (s.prime) {
        out["prime"] = *s.prime;
    }
    if (s.gen_valuation) {
        out["gen_valuation"] = rational_to_string(*s.gen_valuation);
    }
    return out;
}

Field field_from_json(const Json& j) {
    if (!j.is_object()) {
        bad("field must be an object");
    }
    std::optional<long> prime;
    if (j.contains("prime")) {
        prime = need_int(j, "prime");
    }
    std::string kind = j.value("kind", "rationals");
    if (kind == "rationals") {
        return Field::rationals(prime);
    }
    if (kind != "extension") {
        bad("field kind must be \"rationals\" or \"extension\"");
    }
    std::vector<Rational> minpoly;
    for (const Json& c : need_array(need(j, "minpoly"), "minpoly")) {
        minpoly.push_back(c.is_string() ? parse_rational(c.get<std::string>())
                                        : parse_rational(c.dump()));
    }
    std::optional<Rational> gv;
    if (j.contains("gen_valuation")) {
        const Json& v = j.at("gen_valuation");
        gv = parse_rational(v.is_string() ? v.get<std::string>() : v.dump());
    }
    return Field::extension(std::move(minpoly), prime, gv);
}

Json elem_to_json(const Elem& e) { return e.to_string(); }

Elem elem_from_json(const Field& f, const Json& j) {
    if (j.is_string()) {
        try {
            return f.parse(j.get<std::string>());
        } catch (const Error& e) {
            bad("element \"" + j.get<std::string>() + "\": " + e.what());
        }
    }
    if (j.is_number_integer()) {
        return f.from_int(j.get<long>());
    }
    bad("field elements must be strings or integers");
}

Json vector_to_json(const Vector& v) {
    Json out = Json::array();
    for (const Elem& e : v) {
        out.push_back(elem_to_json(e));
    }
    return out;
}

Vector vector_from_json(const Field& f, const Json& j, std::size_t expected) {
    need_array(j, "vector");
    if (j.size() != expected) {
        bad("vector has length " + std::to_string(j.size()) + ", expected " + std::to_string(expected));
    }
    Vector out;
    for (const Json& e : j) {
        out.push_back(elem_from_json(f, e));
    }
    return out;
}

Json matrix_to_json(const Matrix& m) {
    Json out = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        out.push_back(vector_to_json(m.row(i)));
    }
    return out;
}

Matrix matrix_from_json(const Field& f, const Json& j, std::size_t rows, std::size_t cols) {
    need_array(j, "matrix");
    if (j.size() != rows) {
        bad("matrix has " + std::to_string(j.size()) + " rows, expected " + std::to_string(rows));
    }
    Matrix out(f, rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        Vector r = vector_from_json(f, j[i], cols);
        for (std::size_t c = 0; c < cols; ++c) {
            out.at(i, c) = r[c];
        }
    }
    return out;
}

Json filtration_to_json(const Filtration& fil) {
    Json out = Json::array();
    for (const FilStep& s : fil.steps()) {
        Json basis = Json::array();
        for (const Vector& v : s.basis.columns()) {
            basis.push_back(vector_to_json(v));
        }
        out.push_back(Json{{"index", s.index}, {"basis", basis}});
    }
    return out;
}

Filtration filtration_from_json(const Field& f, const Json& j, std::size_t dim) {
    std::vector<FilStep> steps;
    for (const Json& s : need_array(j, "fil")) {
        std::vector<Vector> cols;
        for (const Json& v : need_array(need(s, "basis"), "basis")) {
            cols.push_back(vector_from_json(f, v, dim));
        }
        steps.push_back({need_int(s, "index"), Matrix::from_columns(f, dim, cols)});
    }
    return Filtration(f, dim, std::move(steps));
}

Json module_to_json(const FilPhiNModule& m) {
    return Json{{"field", field_to_json(m.field)}, {"p", m.p},
                {"f", m.f},
                {"n", m.n},
                {"phi", matrix_to_json(m.phi)},
                {"N", matrix_to_json(m.N)},
                {"iota", matrix_to_json(m.iota)},
                {"fil", filtration_to_json(m.fil)}};
}

FilPhiNModule module_from_json(const Json& j) {
    Field f = field_from_json(need(j, "field"));
    std::size_t n = need_size(j, "n");
    Matrix phi = matrix_from_json(f, need(j, "phi"), n, n);
    Matrix nn = j.contains("N") ? matrix_from_json(f, j.at("N"), n, n) : Matrix(f, n, n);
    Matrix iota = j.contains("iota") ? matrix_from_json(f, j.at("iota"), n, n) : Matrix::identity(f, n);
    Filtration fil = filtration_from_json(f, need(j, "fil"), n);
    return make_module(f, need_int(j, "p"), j.contains("f") ? need_int(j, "f") : 1, phi, nn, iota, fil.steps());
}

Json st_class_to_json(const StClass& c) {
    Json comps;
    if (c.degree == 0) {
        comps["u"] = vector_to_json(c.component("u"));
        comps["v"] = vector_to_json(c.v_ambient());
    } else if (c.degree == 1) {
        for (const char* k : {"w", "x", "y"}) {
            comps[k] = vector_to_json(c.component(k));
        }
    } else {
        comps["z"] = vector_to_json(c.component("z"));
    }
    return Json{{"degree", c.degree}, {"components", comps}};
}

StClass st_class_from_json(const StComplexPtr& c, const Json& j) {
    long degree = need_int(j, "degree");
    if (degree < 0 || degree > 2) {
        bad("st class degree must be 0, 1 or 2");
    }
    const Field& f = c->module.field;
    std::map<std::string, Vector> parts;
    if (j.contains("components")) {
        for (const auto& [k, v] : j.at("components").items()) {
            parts[k] = vector_from_json(f, v, c->module.n);
        }
    }
    return make_st_class(c, static_cast<int>(degree), parts);
}

Json dga_to_json(const DGAComplex& g) {
    return Json{{"dims", g.dims},
                {"d", matrices_to_json(g.d)},
                {"products", products_to_json(g.mult, g.dims)},
                {"unit", vector_to_json(g.unit)}};
}

DGAComplex dga_from_json(const Field& f, const Json& j) {
    DGAComplex g;
    for (const Json& d : need_array(need(j, "dims"), "dims")) {
        if (!d.is_number_integer() || d.get<long>() < 0) {
            bad("dims must be nonnegative integers");
        }
        g.dims.push_back(d.get<std::size_t>());
    }
    if (g.dims.empty()) {
        bad("dims must not be empty");
    }
    std::vector<std::size_t> rows(g.dims.begin() + 1, g.dims.end());
    std::vector<std::size_t> cols(g.dims.begin(), g.dims.end() - 1);
    g.d = matrices_from_json(f, need(j, "d"), "d", rows, cols);
    g.mult = products_from_json(f, need(j, "products"), g.dims, g.dims, g.dims);
    g.unit = vector_from_json(f, need(j, "unit"), g.dims[0]);
    return g;
}

Json datum_to_json(const HKDatum& d) {
    std::vector<Json> fil;
    for (const Filtration& fl : d.fil) {
        fil.push_back(filtration_to_json(fl));
    }
    return Json{{"field", field_to_json(d.field)},
                {"p", d.p},
                {"f", d.f},
                {"q", elem_to_json(d.q())},
                {"A", dga_to_json(d.A)},
                {"B", dga_to_json(d.B)},
                {"phi", matrices_to_json(d.phi)},
                {"N", matrices_to_json(d.N)},
                {"iota", matrices_to_json(d.iota)},
                {"fil", fil}};
}

HKDatum datum_from_json(const Json& j) {
    Field f = field_from_json(need(j, "field"));
    HKDatum d{f, need_int(j, "p"), j.contains("f") ? need_int(j, "f") : 1, dga_from_json(f, need(j, "A")),
              dga_from_json(f, need(j, "B")), {}, {}, {}, {}};
    if (j.contains("q") && elem_from_json(f, j.at("q")) != d.q()) {
        bad("q does not equal p^f");
    }
    const auto& a = d.A.dims;
    const auto& b = d.B.dims;
    if (a.size() != b.size()) {
        bad("A and B must span the same degrees");
    }
    d.phi = matrices_from_json(f, need(j, "phi"), "phi", a, a);
    d.N = j.contains("N") ? matrices_from_json(f, j.at("N"), "N", a, a) : std::vector<Matrix>{};
    if (!j.contains("N")) {
        for (std::size_t n : a) {
            d.N.emplace_back(f, n, n);
        }
    }
    d.iota = matrices_from_json(f, need(j, "iota"), "iota", b, a);
    const Json& fil = need_array(need(j, "fil"), "fil");
    if (fil.size() != b.size()) {
        bad("fil needs one filtration per degree");
    }
    for (std::size_t k = 0; k < b.size(); ++k) {
        d.fil.push_back(filtration_from_json(f, fil[k], b[k]));
    }
    return d;
}

Json curve_to_json(const CurveDatum& c) {
    Json out = datum_to_json(*c.X);
    if (!c.proper()) {
        Json comp = datum_to_json(*c.Xc);
        comp["to_X_A"] = matrices_to_json(c.to_X_A);
        comp["to_X_B"] = matrices_to_json(c.to_X_B);
        comp["action_A"] = products_to_json(c.actA, c.X->A.dims);
        comp["action_B"] = products_to_json(c.actB, c.X->B.dims);
        out["companion"] = comp;
    }
    out["trace"] = vector_to_json(c.trace);
    return out;
}

CurveDatum curve_from_json(const Json& j) {
    CurveDatum c;
    c.X = std::make_shared<const HKDatum>(datum_from_json(j));
    const Field& f = c.X->field;
    if (j.contains("companion") && !j.at("companion").is_null()) {
        const Json& comp = j.at("companion");
        c.Xc = std::make_shared<const HKDatum>(datum_from_json(comp));
        const auto& ca = c.Xc->A.dims;
        const auto& cb = c.Xc->B.dims;
        if (ca.size() != c.X->A.dims.size()) {
            bad("companion must span the same degrees as the datum");
        }
        c.to_X_A = matrices_from_json(f, need(comp, "to_X_A"), "to_X_A", c.X->A.dims, ca);
        c.to_X_B = matrices_from_json(f, need(comp, "to_X_B"), "to_X_B", c.X->B.dims, cb);
        c.actA = products_from_json(f, need(comp, "action_A"), ca, c.X->A.dims, ca);
        c.actB = products_from_json(f, need(comp, "action_B"), cb, c.X->B.dims, cb);
    }
    const HKDatum& cmp = *c.compact();
    c.trace = vector_from_json(f, need(j, "trace"), cmp.B.dims.back());
    return c;
}

Json syn_class_to_json(const SynClass& c) {
    Json comps;
    for (const char* k : {"u", "v", "w", "x", "y", "z"}) {
        Vector v = std::string(k) == "v" ? c.v_ambient() : c.component(k);
        if (!v.empty()) {
            comps[k] = vector_to_json(v);
        }
    }
    return Json{{"degree", c.degree}, {"components", comps}};
}

SynClass syn_class_from_json(const SynComplexPtr& c, const Json& j) {
    long degree = need_int(j, "degree");
    if (degree < 0 || degree > c->top) {
        bad("syn class degree out of range");
    }
    int n = static_cast<int>(degree);
    const HKDatum& d = *c->datum;
    const Field& f = d.field;
    std::map<std::string, std::size_t> sizes{{"u", d.A.dim(n)},     {"v", d.B.dim(n)},     {"w", d.A.dim(n - 1)},
                                             {"x", d.A.dim(n - 1)}, {"y", d.B.dim(n - 1)}, {"z", d.A.dim(n - 2)}};
    std::map<std::string, Vector> parts;
    if (j.contains("components")) {
        for (const auto& [k, v] : j.at("components").items()) {
            auto it = sizes.find(k);
            if (it == sizes.end()) {
                bad("unknown component \"" + k + "\"");
            }
            parts[k] = vector_from_json(f, v, it->second);
        }
    }
    return make_syn_cochain(c, n, parts);
}

Json knight_to_json(const KnightMaps& k) {
    Json maps = Json::array();
    for (const auto& [j, m] : k) {
        maps.push_back(Json{{"j", j}, {"rows", m.rows()}, {"cols", m.cols()}, {"matrix", matrix_to_json(m)}});
    }
    return Json{{"maps", maps}};
}

KnightMaps knight_from_json(const Field& f, const Json& j) {
    KnightMaps out;
    for (const Json& e : need_array(need(j, "maps"), "maps")) {
        long deg = need_int(e, "j");
        const Json& m = need(e, "matrix");
        need_array(m, "matrix");
        std::size_t rows = e.contains("rows") ? need_size(e, "rows") : m.size();
        std::size_t cols = e.contains("cols") ? need_size(e, "cols") : (m.empty() ? 0 : m[0].size());
        out.insert_or_assign(static_cast<int>(deg), matrix_from_json(f, m, rows, cols));
    }
    return out;
}

Json lift_target_to_json(const LiftTarget& t) {
    return Json{{"side", t.side == LiftSide::HK ? "HK" : "dR"}, {"cocycle", vector_to_json(t.cocycle)}};
}

LiftTarget lift_target_from_json(const Field& f, const Json& j) {
    const Json& side = need(j, "side");
    if (!side.is_string() || (side != "HK" && side != "dR")) {
        bad("side must be \"HK\" or \"dR\"");
    }
    const Json& v = need_array(need(j, "cocycle"), "cocycle");
    return {side == "HK" ? LiftSide::HK : LiftSide::dR, vector_from_json(f, v, v.size())};
}

} // namespace fpsyn::io
