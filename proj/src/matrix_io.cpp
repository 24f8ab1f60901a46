#include "tailcs/matrix_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace tailcs {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_real_token(const std::string& tok) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("matrix format: bad numeric token '" + tok + "'");
  }
  if (pos != tok.size())
    throw std::invalid_argument("matrix format: bad numeric token '" + tok + "'");
  if (!std::isfinite(v))
    throw std::invalid_argument("matrix format: entries must be finite");
  return v;
}

Complex parse_complex_token(const std::string& tok) {
  const std::size_t comma = tok.find(',');
  if (comma == std::string::npos)
    throw std::invalid_argument("matrix format: complex entry must be re,im");
  return Complex(parse_real_token(tok.substr(0, comma)),
                 parse_real_token(tok.substr(comma + 1)));
}

template <typename Scalar>
MatrixX<Scalar> read_body(std::istream& is, Index rows, Index cols, bool complex_field) {
  MatrixX<Scalar> a(rows, cols);
  std::string line;
  for (Index i = 0; i < rows; ++i) {
    if (!std::getline(is, line))
      throw std::invalid_argument("matrix format: unexpected end of input");
    std::istringstream ls(line);
    std::string tok;
    for (Index j = 0; j < cols; ++j) {
      if (!(ls >> tok)) throw std::invalid_argument("matrix format: short row");
      if constexpr (std::is_same_v<Scalar, Complex>) {
        a(i, j) = parse_complex_token(tok);
      } else {
        if (tok.find(',') != std::string::npos)
          throw std::invalid_argument("matrix format: complex entry in real matrix");
        a(i, j) = parse_real_token(tok);
      }
    }
    if (ls >> tok) throw std::invalid_argument("matrix format: trailing tokens in row");
  }
  (void)complex_field;
  return a;
}

}  // namespace

std::string format_scalar(double v) { return fmt17(v); }

std::string format_scalar(const Complex& v) {
  return fmt17(v.real()) + "," + fmt17(v.imag());
}

bool is_real(const TaggedMatrix& a) { return std::holds_alternative<MatrixX<double>>(a); }

Index matrix_rows(const TaggedMatrix& a) {
  return std::visit([](const auto& m) { return m.rows(); }, a);
}

Index matrix_cols(const TaggedMatrix& a) {
  return std::visit([](const auto& m) { return m.cols(); }, a);
}

void write_matrix(std::ostream& os, const TaggedMatrix& a) {
  std::visit(
      [&os](const auto& m) {
        using Scalar = typename std::decay_t<decltype(m)>::Scalar;
        const bool complex_field = std::is_same_v<Scalar, Complex>;
        os << "matrix " << (complex_field ? "complex" : "real") << ' ' << m.rows() << ' '
           << m.cols() << '\n';
        for (Index i = 0; i < m.rows(); ++i) {
          for (Index j = 0; j < m.cols(); ++j) {
            if (j > 0) os << ' ';
            os << format_scalar(m(i, j));
          }
          os << '\n';
        }
      },
      a);
}

TaggedMatrix read_matrix(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("matrix format: empty input");
  std::istringstream hs(line);
  std::string magic, field;
  long long rows = 0, cols = 0;
  if (!(hs >> magic >> field >> rows >> cols) || magic != "matrix")
    throw std::invalid_argument("matrix format: bad header '" + line + "'");
  if (rows < 1 || cols < 1)
    throw std::invalid_argument("matrix format: dimensions must be positive");
  if (field == "real")
    return read_body<double>(is, rows, cols, false);
  if (field == "complex")
    return read_body<Complex>(is, rows, cols, true);
  throw std::invalid_argument("matrix format: field must be real or complex");
}

void write_matrix_file(const std::string& path, const TaggedMatrix& a) {
  std::ofstream os(path);
  if (!os) throw std::invalid_argument("cannot open for writing: " + path);
  write_matrix(os, a);
  if (!os) throw std::runtime_error("write failed: " + path);
}

TaggedMatrix read_matrix_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("cannot open: " + path);
  return read_matrix(is);
}

TaggedVec read_vector_file(const std::string& path) {
  TaggedMatrix m = read_matrix_file(path);
  if (matrix_cols(m) != 1)
    throw std::invalid_argument("vector file must have exactly one column: " + path);
  if (is_real(m)) return VecX<double>(std::get<MatrixX<double>>(m).col(0));
  return VecX<Complex>(std::get<MatrixX<Complex>>(m).col(0));
}

void write_vector_file(const std::string& path, const TaggedVec& v) {
  std::visit(
      [&path](const auto& vec) {
        using Scalar = typename std::decay_t<decltype(vec)>::Scalar;
        MatrixX<Scalar> m = vec;
        write_matrix_file(path, TaggedMatrix(std::move(m)));
      },
      v);
}

}  // namespace tailcs
