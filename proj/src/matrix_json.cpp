#include "sympfact/matrix_json.hpp"

#include <cerrno>
#include <charconv>
#include <cstdlib>
#include <stdexcept>

namespace sympfact {

namespace {

using nlohmann::json;

std::size_t checked_size(const json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("entries"))
    throw std::invalid_argument("matrix JSON needs fields \"n\" and \"entries\"");
  if (!j["n"].is_number_integer() || j["n"].get<long>() < 1)
    throw std::invalid_argument("matrix JSON field \"n\" must be a positive integer");
  const auto dim = 2 * j["n"].get<std::size_t>();
  const json& e = j["entries"];
  if (!e.is_array() || e.size() != dim) throw std::invalid_argument("matrix JSON must have 2n rows");
  for (const auto& row : e)
    if (!row.is_array() || row.size() != dim) throw std::invalid_argument("matrix JSON must have 2n columns");
  return dim;
}

double number(const json& x) {
  if (x.is_string()) {
    const auto s = x.get<std::string>();
    if (s.find('/') != std::string::npos) return parse_rat(s).get_d();
    return parse_decimal(s);
  }
  if (x.is_number()) return x.get<double>();
  throw std::invalid_argument("matrix entry must be a string or number");
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

double parse_decimal(const std::string& s) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE)
    throw std::invalid_argument("malformed decimal: " + s);
  return v;
}

Matrix<Complex> complex_matrix_from_json(const json& j) {
  const std::size_t dim = checked_size(j);
  Matrix<Complex> m(dim, dim);
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c) {
      const json& x = j["entries"][r][c];
      if (x.is_array()) {
        if (x.size() != 2) throw std::invalid_argument("complex entry must be [re, im]");
        m(r, c) = Complex(number(x[0]), number(x[1]));
      } else {
        m(r, c) = Complex(number(x), 0.0);
      }
    }
  return m;
}

json complex_matrix_to_json(const Matrix<Complex>& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c)
      row.push_back(json::array({format_double(m(r, c).real()), format_double(m(r, c).imag())}));
    rows.push_back(row);
  }
  return json{{"n", m.rows() / 2}, {"entries", rows}};
}

Matrix<Rat> rat_matrix_from_json(const json& j) {
  const std::size_t dim = checked_size(j);
  Matrix<Rat> m(dim, dim);
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c) {
      const json& x = j["entries"][r][c];
      if (x.is_string())
        m(r, c) = parse_rat(x.get<std::string>());
      else if (x.is_number_integer())
        m(r, c) = Rat(x.get<long>());
      else
        throw std::invalid_argument("exact matrix entries must be rational strings");
    }
  return m;
}

json rat_matrix_to_json(const Matrix<Rat>& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(to_string(m(r, c)));
    rows.push_back(row);
  }
  return json{{"n", m.rows() / 2}, {"entries", rows}};
}

}  // namespace sympfact
