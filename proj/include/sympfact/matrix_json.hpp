#pragma once

#include <json.hpp>

#include <string>

#include "sympfact/matrix.hpp"
#include "sympfact/scalar.hpp"

namespace sympfact {

// {"n": half_dim, "entries": [[[re, im], ...], ...]} with numbers as decimal
// strings; an entry may also be a single exact string "p/q" (imaginary part 0).
Matrix<Complex> complex_matrix_from_json(const nlohmann::json& j);
nlohmann::json complex_matrix_to_json(const Matrix<Complex>& m);

// Exact variant: every entry a rational string.
Matrix<Rat> rat_matrix_from_json(const nlohmann::json& j);
nlohmann::json rat_matrix_to_json(const Matrix<Rat>& m);

// Shortest round-tripping decimal form.
std::string format_double(double x);
double parse_decimal(const std::string& s);

}  // namespace sympfact
