#pragma once

// JSON file forms for fields, modules, classes, data and knight maps.
// Field elements are always strings in the shared element grammar.

#include <string>

#include <json.hpp>

#include "fpsyn/stcomplex.hpp"
#include "fpsyn/syncomplex.hpp"

namespace fpsyn::io {

using Json = nlohmann::ordered_json;

/// Parses a file; syntax errors and missing files raise ParseError.
Json read_file(const std::string& path);
/// Two-space indentation and a trailing newline.
std::string dump(const Json& j);

Json field_to_json(const Field& f);
Field field_from_json(const Json& j);

Json elem_to_json(const Elem& e);
Elem elem_from_json(const Field& f, const Json& j);
Json vector_to_json(const Vector& v);
Vector vector_from_json(const Field& f, const Json& j, std::size_t expected);
/// List of rows.
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Field& f, const Json& j, std::size_t rows, std::size_t cols);

/// Steps as {"index", "basis": list of vectors}.
Json filtration_to_json(const Filtration& fil);
Filtration filtration_from_json(const Field& f, const Json& j, std::size_t dim);

Json module_to_json(const FilPhiNModule& m);
FilPhiNModule module_from_json(const Json& j);

Json st_class_to_json(const StClass& c);
/// Omitted components are zero; v is given in D_K coordinates.
StClass st_class_from_json(const StComplexPtr& c, const Json& j);

Json dga_to_json(const DGAComplex& g);
DGAComplex dga_from_json(const Field& f, const Json& j);

Json datum_to_json(const HKDatum& d);
HKDatum datum_from_json(const Json& j);

/// A datum file with "trace" and, for open curves, "companion".
Json curve_to_json(const CurveDatum& c);
CurveDatum curve_from_json(const Json& j);

Json syn_class_to_json(const SynClass& c);
SynClass syn_class_from_json(const SynComplexPtr& c, const Json& j);

/// {"maps": [{"j": int, "matrix": rows}]}.
Json knight_to_json(const KnightMaps& k);
KnightMaps knight_from_json(const Field& f, const Json& j);

/// {"side": "HK" | "dR", "cocycle": vector}.
Json lift_target_to_json(const LiftTarget& t);
LiftTarget lift_target_from_json(const Field& f, const Json& j);

} // namespace fpsyn::io
