#pragma once

// Format strings and the JSON tensor file.
//
// Format grammar: factors separated by 'x'; a factor is `<m>` or `C<m>` (d = 1),
// or `S<d>(<m>)` / `S<d>C<m>` (symmetric power). Examples: 2x2x2, S3(2), S3C2xC3.
//
// Tensor file:
//   {"format": {"degrees": [...], "dims": [...]}, "basis": "monomial-weighted",
//    "entries": [{"mono": [[exp...], ...], "re": x, "im": y}, ...]}
// Coefficients are those of the monomial basis; unlisted monomials are zero.

#include <string>

#include "json.hpp"

#include "crit/tensor_space.hpp"

namespace crit {

/// Malformed tensor file; line/column refer to the JSON text when known.
class ParseError : public InputError {
 public:
  ParseError(const std::string& what, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

TensorFormat parse_format(const std::string& text);
std::string format_string(const TensorFormat& format);

nlohmann::json format_json(const TensorFormat& format);
nlohmann::json tensor_json(const Tensor& t);
Tensor tensor_from_json(const nlohmann::json& doc);

/// Doubles are printed in shortest round-trip form, so read(write(t)) == t bit for bit.
std::string write_tensor(const Tensor& t);
Tensor read_tensor(const std::string& text);

Tensor read_tensor_file(const std::string& path);
void write_tensor_file(const Tensor& t, const std::string& path);

nlohmann::json complex_json(cplx z);
nlohmann::json vector_json(const CVector& v);

}  // namespace crit
