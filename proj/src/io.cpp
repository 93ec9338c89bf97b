#include "crit/io.hpp"

#include <cctype>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

namespace crit {

using nlohmann::json;

ParseError::ParseError(const std::string& what, int line, int column)
    : InputError(line > 0 ? what + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"
                          : what),
      line_(line),
      column_(column) {}

TensorFormat parse_format(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw InputError("empty format string");

  static const std::regex plain(R"(C?([0-9]+))");
  static const std::regex sym_paren(R"(S([0-9]+)\(([0-9]+)\))");
  static const std::regex sym_c(R"(S([0-9]+)C([0-9]+))");

  std::vector<int> degrees, dims;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = s.find('x', pos);
    const std::string tok = s.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    std::smatch m;
    try {
      if (std::regex_match(tok, m, plain)) {
        degrees.push_back(1);
        dims.push_back(std::stoi(m[1]));
      } else if (std::regex_match(tok, m, sym_paren) || std::regex_match(tok, m, sym_c)) {
        degrees.push_back(std::stoi(m[1]));
        dims.push_back(std::stoi(m[2]));
      } else {
        throw InputError("bad factor '" + tok + "' in format string '" + text + "'");
      }
    } catch (const std::out_of_range&) {
      throw InputError("number out of range in format string '" + text + "'");
    }
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return TensorFormat(degrees, dims);
}

std::string format_string(const TensorFormat& format) {
  std::string out;
  for (int l = 0; l < format.factors(); ++l) {
    if (l) out += 'x';
    if (format.degree(l) == 1)
      out += std::to_string(format.dim(l));
    else
      out += "S" + std::to_string(format.degree(l)) + "(" + std::to_string(format.dim(l)) + ")";
  }
  return out;
}

json format_json(const TensorFormat& format) {
  return json{{"degrees", format.degrees()}, {"dims", format.dims()}};
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

json vector_json(const CVector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(complex_json(v(i)));
  return out;
}

json tensor_json(const Tensor& t) {
  json entries = json::array();
  for (Index pos = 0; pos < t.size(); ++pos) {
    if (t[pos] == cplx(0.0)) continue;
    entries.push_back({{"mono", t.basis().monomial(pos).exponents}, {"re", t[pos].real()}, {"im", t[pos].imag()}});
  }
  return json{{"format", format_json(t.format())}, {"basis", "monomial-weighted"}, {"entries", entries}};
}

namespace {

std::vector<int> int_array(const json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected an array of integers");
  std::vector<int> out;
  for (const json& x : j) {
    if (!x.is_number_integer()) throw InputError(where + ": expected an array of integers");
    out.push_back(x.get<int>());
  }
  return out;
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw InputError(where + ": expected a number");
  return j.get<double>();
}

}  // namespace

Tensor tensor_from_json(const json& doc) {
  if (!doc.is_object()) throw InputError("tensor file: top level must be an object");
  if (!doc.contains("format") || !doc["format"].is_object()) throw InputError("tensor file: missing 'format'");
  const TensorFormat fmt(int_array(doc["format"].value("degrees", json()), "format.degrees"),
                         int_array(doc["format"].value("dims", json()), "format.dims"));
  if (doc.contains("basis") && doc["basis"] != "monomial-weighted")
    throw InputError("tensor file: unsupported basis " + doc["basis"].dump());
  const BasisPtr basis = MonomialBasis::make(fmt);
  CVector c = CVector::Zero(basis->size());
  if (!doc.contains("entries") || !doc["entries"].is_array()) throw InputError("tensor file: missing 'entries'");
  std::set<Index> seen;
  int i = 0;
  for (const json& e : doc["entries"]) {
    const std::string where = "entries[" + std::to_string(i++) + "]";
    if (!e.is_object() || !e.contains("mono")) throw InputError(where + ": expected {mono, re, im}");
    const json& mono = e["mono"];
    if (!mono.is_array() || static_cast<int>(mono.size()) != fmt.factors())
      throw InputError(where + ".mono: expected one exponent vector per factor");
    MonomialIndex m;
    for (int l = 0; l < fmt.factors(); ++l) {
      Exponents a = int_array(mono[l], where + ".mono");
      if (static_cast<int>(a.size()) != fmt.dim(l) || basis->local_lookup(l, a) < 0)
        throw InputError(where + ".mono: not a monomial of degree " + std::to_string(fmt.degree(l)) + " in " +
                         std::to_string(fmt.dim(l)) + " variables");
      m.exponents.push_back(std::move(a));
    }
    const Index pos = basis->position(m);
    if (!seen.insert(pos).second) throw InputError(where + ": duplicate monomial");
    const double re = e.contains("re") ? number(e["re"], where + ".re") : 0.0;
    const double im = e.contains("im") ? number(e["im"], where + ".im") : 0.0;
    c(pos) = cplx(re, im);
  }
  require_finite(c, "tensor file");
  return Tensor(basis, std::move(c));
}

std::string write_tensor(const Tensor& t) { return tensor_json(t).dump(2) + "\n"; }

Tensor read_tensor(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    int line = 1, column = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError("JSON syntax error", line, column);
  }
  return tensor_from_json(doc);
}

Tensor read_tensor_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return read_tensor(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": JSON syntax error", e.line(), e.column());
  }
}

void write_tensor_file(const Tensor& t, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << write_tensor(t);
}

}  // namespace crit
