#pragma once

#include <string>

#include <json.hpp>

#include "cofree/coalgebra.hpp"

namespace cofree {

using Json = nlohmann::json;

/// Integers inside the int64 range are JSON numbers, others decimal strings.
Json integer_to_json(const Integer& x);
/// Accepts a JSON integer or a decimal string.
Integer integer_from_json(const Json& j);

Json matrix_to_json(const IntegerMatrix& m);
IntegerMatrix matrix_from_json(const Json& j);

/// CXF: {"degrees": {"k": [labels]}, "d": {"k": {source label: {target label: coeff}}}}.
/// Degree keys are decimal strings; zero entries and empty maps are omitted.
Json complex_to_json(const ChainComplex& c);
ChainComplex complex_from_json(const Json& j);

/// {"free_rank": r, "torsion": [..]}.
Json homology_to_json(const HomologyGroup& h);
/// Degree -> group.
Json homology_table_to_json(const HomologyTable& t);

/// {"N", "unital", "name", "components": {n: {"complex": CXF, "action": {i: {label: {label: coeff}}}}},
///  "unit": {label: coeff}, "compose": {"m,i,n": {a: {b: {c: coeff}}}}}. Action keys i are one-based:
/// generator i swaps inputs i and i+1.
Json operad_to_json(const TruncatedOperad& o);
OperadPtr operad_from_json(const Json& j);

/// {"carrier": CXF, "structure": {n: {v label: {carrier label: {"(a,b)": coeff}}}}}.
Json coalgebra_to_json(const OperadCoalgebra& x);

Json axiom_report_to_json(const AxiomReport& r);

/// Reads a JSON file; throws Error with the path on failure.
Json read_json_file(const std::string& path);

}  // namespace cofree
