#include "entgeom/state_file.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "entgeom/errors.hpp"

namespace entgeom {

namespace {

using nlohmann::json;

struct Position {
  std::size_t line = 1;
  std::size_t column = 1;
};

Position position_of(std::string_view text, std::size_t byte) {
  Position p;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++p.line;
      p.column = 1;
    } else {
      ++p.column;
    }
  }
  return p;
}

// Layout errors are reported at the start of the document; the JSON itself parsed.
[[noreturn]] void layout_error(const std::string& what) { throw ParseError("state file: " + what, 1, 1); }

std::vector<double> number_array(const json& doc, const char* key, std::size_t expected) {
  const auto it = doc.find(key);
  if (it == doc.end()) layout_error(std::string("missing \"") + key + "\" array");
  if (!it->is_array()) layout_error(std::string("\"") + key + "\" must be an array");
  if (it->size() != expected) {
    layout_error(std::string("\"") + key + "\" has " + std::to_string(it->size()) + " entries, expected " +
                 std::to_string(expected));
  }
  std::vector<double> out;
  out.reserve(expected);
  for (const auto& v : *it) {
    if (!v.is_number()) layout_error(std::string("\"") + key + "\" must contain only numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

void append_number(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

void append_array(std::string& out, const char* key, const Complex* data, std::size_t n, bool imaginary) {
  out += "  \"";
  out += key;
  out += "\": [";
  for (std::size_t i = 0; i < n; ++i) {
    if (i) out += ", ";
    append_number(out, imaginary ? data[i].imag() : data[i].real());
  }
  out += "]";
}

std::string document(const SpaceShape& shape, const char* kind, const Complex* data, std::size_t n) {
  std::string out = "{\n";
  if (kind) {
    out += "  \"kind\": \"";
    out += kind;
    out += "\",\n";
  }
  out += "  \"dims\": [";
  for (std::size_t k = 0; k < shape.rank(); ++k) {
    if (k) out += ", ";
    out += std::to_string(shape.dim(k));
  }
  out += "],\n";
  append_array(out, "re", data, n, false);
  out += ",\n";
  append_array(out, "im", data, n, true);
  out += "\n}\n";
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw PreconditionError("cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw PreconditionError("failed writing " + path.string());
}

}  // namespace

StateFileContents parse_state_file(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // e.byte is one past the offending character.
    const Position p = position_of(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ParseError("state file: malformed JSON at line " + std::to_string(p.line) + ", column " +
                         std::to_string(p.column),
                     p.line, p.column);
  }
  if (!doc.is_object()) layout_error("top level must be an object");

  bool density = false;
  if (const auto it = doc.find("kind"); it != doc.end()) {
    if (!it->is_string()) layout_error("\"kind\" must be a string");
    const auto kind = it->get<std::string>();
    if (kind == "density") {
      density = true;
    } else if (kind != "pure") {
      layout_error("unknown kind \"" + kind + "\"");
    }
  }

  const auto dims_it = doc.find("dims");
  if (dims_it == doc.end() || !dims_it->is_array()) layout_error("missing \"dims\" array");
  std::vector<std::size_t> dims;
  for (const auto& d : *dims_it) {
    if (!d.is_number_unsigned() || d.get<std::uint64_t>() == 0) layout_error("\"dims\" must hold positive integers");
    dims.push_back(d.get<std::size_t>());
  }
  const SpaceShape shape(std::move(dims));
  const std::size_t total = shape.total_dim();
  const std::size_t n = density ? total * total : total;
  const auto re = number_array(doc, "re", n);
  const auto im = number_array(doc, "im", n);

  if (density) {
    const auto d = static_cast<Eigen::Index>(total);
    CMatrix m(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) {
        const auto k = static_cast<std::size_t>(i * d + j);
        m(i, j) = Complex(re[k], im[k]);
      }
    }
    return DensityOperator(shape, std::move(m), kLoadTolerance);
  }
  CVector v(static_cast<Eigen::Index>(total));
  for (std::size_t k = 0; k < total; ++k) v(static_cast<Eigen::Index>(k)) = Complex(re[k], im[k]);
  return PureState(shape, std::move(v), kLoadTolerance);
}

StateFileContents read_state_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw PreconditionError("cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_state_file(ss.str());
}

PureState read_pure_state(const std::filesystem::path& path) {
  auto contents = read_state_file(path);
  if (auto* p = std::get_if<PureState>(&contents)) return std::move(*p);
  throw PreconditionError(path.string() + " holds a density operator, expected a unit vector");
}

DensityOperator read_density_operator(const std::filesystem::path& path) {
  auto contents = read_state_file(path);
  if (auto* p = std::get_if<DensityOperator>(&contents)) return std::move(*p);
  return DensityOperator::from_pure(std::get<PureState>(contents));
}

std::string to_state_file(const PureState& state) {
  return document(state.shape(), nullptr, state.amplitudes().data(), state.shape().total_dim());
}

std::string to_state_file(const DensityOperator& rho) {
  // Row-major copy of the column-major matrix.
  const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> m = rho.matrix();
  return document(rho.shape(), "density", m.data(), static_cast<std::size_t>(m.size()));
}

void write_state_file(const std::filesystem::path& path, const PureState& state) {
  write_text(path, to_state_file(state));
}

void write_state_file(const std::filesystem::path& path, const DensityOperator& rho) {
  write_text(path, to_state_file(rho));
}

}  // namespace entgeom
