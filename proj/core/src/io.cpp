#include "intrank/io.hpp"

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace intrank {

namespace {

// Tokenizer that remembers line/column (1-based) for every token.
struct Token {
  std::string text;
  int line;
  int column;
};

std::vector<std::vector<Token>> tokenize_lines(const std::string& text) {
  std::vector<std::vector<Token>> lines;
  int line_no = 1;
  std::size_t i = 0;
  std::vector<Token> cur;
  int col = 1;
  while (i <= text.size()) {
    char ch = i < text.size() ? text[i] : '\n';
    if (ch == '\n') {
      lines.push_back(cur);
      cur.clear();
      ++line_no;
      col = 1;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(ch))) {
      ++i;
      ++col;
      continue;
    }
    int start_col = col;
    std::string tok;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) {
      tok.push_back(text[i]);
      ++i;
      ++col;
    }
    cur.push_back(Token{tok, line_no, start_col});
  }
  // drop trailing empty lines
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

bool valid_integer(const std::string& s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

std::size_t parse_dim(const Token& t) {
  if (!valid_integer(t.text) || t.text[0] == '-')
    throw ParseError("expected positive integer, got '" + t.text + "'", t.line, t.column);
  long v = std::strtol(t.text.c_str(), nullptr, 10);
  if (v <= 0)
    throw ParseError("dimension must be positive", t.line, t.column);
  return static_cast<std::size_t>(v);
}

}  // namespace

Rational parse_rational(const std::string& token, int line, int column) {
  std::size_t slash = token.find('/');
  std::string num = slash == std::string::npos ? token : token.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : token.substr(slash + 1);
  if (!valid_integer(num) || !valid_integer(den))
    throw ParseError("invalid rational '" + token + "'", line, column);
  if (num[0] == '+') num.erase(0, 1);
  if (den[0] == '+') den.erase(0, 1);
  Rational r;
  if (mpq_set_str(r.get_mpq_t(), (num + "/" + den).c_str(), 10) != 0)
    throw ParseError("invalid rational '" + token + "'", line, column);
  if (sgn(Rational(r.get_den())) == 0)
    throw ParseError("zero denominator in '" + token + "'", line, column);
  if (sgn(Rational(r.get_den())) < 0)
    throw ParseError("negative denominator in '" + token + "'", line, column);
  r.canonicalize();
  return r;
}

RatInterval parse_interval(const std::string& token, int line, int column) {
  std::size_t colon = token.find(':');
  if (colon == std::string::npos)
    throw ParseError("expected interval 'lo:hi', got '" + token + "'", line, column);
  Rational lo = parse_rational(token.substr(0, colon), line, column);
  Rational hi = parse_rational(token.substr(colon + 1), line, column + int(colon) + 1);
  if (lo > hi)
    throw ParseError("interval with lo > hi: '" + token + "'", line, column);
  return RatInterval(lo, hi);
}

QuadExt parse_quadext(const std::string& token, int line, int column) {
  // forms: "a" | "b*sqrt(d)" | "a+b*sqrt(d)" | "a-b*sqrt(d)"
  std::size_t star = token.find("*sqrt(");
  if (star == std::string::npos) {
    return QuadExt(parse_rational(token, line, column));
  }
  if (token.back() != ')')
    throw ParseError("malformed sqrt term '" + token + "'", line, column);
  std::string dstr = token.substr(star + 6, token.size() - star - 7);
  if (!valid_integer(dstr) || dstr[0] == '-')
    throw ParseError("invalid radicand in '" + token + "'", line, column);
  std::int64_t d = std::strtoll(dstr.c_str(), nullptr, 10);
  if (d <= 0) throw ParseError("radicand must be positive", line, column);

  // split "<rat>?(+|-)<rat>" before the star; the sign split is the last
  // '+'/'-' that is not part of the leading rational's own sign.
  std::string head = token.substr(0, star);
  std::size_t split = std::string::npos;
  for (std::size_t i = 1; i < head.size(); ++i) {
    if (head[i] == '+' || head[i] == '-') split = i;
  }
  Rational a(0), b;
  if (split == std::string::npos) {
    b = parse_rational(head, line, column);
  } else {
    a = parse_rational(head.substr(0, split), line, column);
    Rational mag = parse_rational(head.substr(split + 1), line, column + int(split) + 1);
    b = head[split] == '-' ? Rational(-mag) : mag;
  }
  if (sgn(b) == 0)
    throw ParseError("zero sqrt coefficient must be written as a rational", line, column);
  return QuadExt(a, b, d);
}

std::string format_interval_matrix(const IntervalMatrix& m) {
  std::ostringstream os;
  os << m.rows() << ' ' << m.cols() << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) os << ' ';
      os << m(i, j).str();
    }
    os << '\n';
  }
  return os.str();
}

IntervalMatrix parse_interval_matrix(const std::string& text) {
  auto lines = tokenize_lines(text);
  if (lines.empty() || lines[0].size() != 2)
    throw ParseError("expected header line 'p q'", 1, 1);
  std::size_t p = parse_dim(lines[0][0]);
  std::size_t q = parse_dim(lines[0][1]);
  if (lines.size() < p + 1)
    throw ParseError("expected " + std::to_string(p) + " matrix rows", int(lines.size()) + 1, 1);
  IntervalMatrix m(p, q);
  for (std::size_t i = 0; i < p; ++i) {
    const auto& row = lines[i + 1];
    if (row.size() != q)
      throw ParseError("expected " + std::to_string(q) + " entries", int(i) + 2,
                       row.empty() ? 1 : row.back().column);
    for (std::size_t j = 0; j < q; ++j)
      m(i, j) = parse_interval(row[j].text, row[j].line, row[j].column);
  }
  if (lines.size() > p + 1 && !lines[p + 1].empty())
    throw ParseError("unexpected trailing content", lines[p + 1][0].line,
                     lines[p + 1][0].column);
  return m;
}

namespace {

void format_vector(std::ostringstream& os, const std::vector<QuadExt>& v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ' ';
    os << v[i].str();
  }
  os << '\n';
}

void format_matrix_rows(std::ostringstream& os, const QuadMatrix& A) {
  for (std::size_t i = 0; i < A.rows(); ++i) {
    for (std::size_t j = 0; j < A.cols(); ++j) {
      if (j) os << ' ';
      os << A(i, j).str();
    }
    os << '\n';
  }
}

std::int64_t witness_radicand(const Witness& w);

template <class V>
std::int64_t radicand_of(const V& vals) {
  for (const auto& x : vals)
    if (x.radicand() != 0) return x.radicand();
  return 0;
}

std::int64_t radicand_of(const QuadMatrix& A) {
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j)
      if (A(i, j).radicand() != 0) return A(i, j).radicand();
  return 0;
}

std::int64_t witness_radicand(const Witness& w) {
  if (auto* d1 = std::get_if<Rank1Witness>(&w)) {
    std::int64_t d = radicand_of(d1->a);
    return d ? d : radicand_of(d1->c);
  }
  if (auto* d2 = std::get_if<Rank2Witness>(&w)) {
    for (auto* v : {&d2->a, &d2->b, &d2->c, &d2->d}) {
      std::int64_t d = radicand_of(*v);
      if (d) return d;
    }
    return 0;
  }
  if (auto* c1 = std::get_if<ColumnDep1Witness>(&w)) {
    std::int64_t d = radicand_of(c1->A);
    return d ? d : radicand_of(c1->c);
  }
  if (auto* c2 = std::get_if<ColumnDep2Witness>(&w)) {
    std::int64_t d = radicand_of(c2->A);
    if (d) return d;
    d = radicand_of(c2->b);
    return d ? d : radicand_of(c2->c);
  }
  if (auto* f = std::get_if<FullRankWitness>(&w)) return radicand_of(f->A);
  return 0;
}

}  // namespace

std::size_t witness_rows(const Witness& w) {
  if (auto* d1 = std::get_if<Rank1Witness>(&w)) return d1->a.size();
  if (auto* d2 = std::get_if<Rank2Witness>(&w)) return d2->a.size();
  if (auto* c1 = std::get_if<ColumnDep1Witness>(&w)) return c1->A.rows();
  if (auto* c2 = std::get_if<ColumnDep2Witness>(&w)) return c2->A.rows();
  if (auto* f = std::get_if<FullRankWitness>(&w)) return f->A.rows();
  return 0;
}

std::size_t witness_cols(const Witness& w) {
  if (auto* d1 = std::get_if<Rank1Witness>(&w)) return d1->c.size();
  if (auto* d2 = std::get_if<Rank2Witness>(&w)) return d2->c.size();
  if (auto* c1 = std::get_if<ColumnDep1Witness>(&w)) return c1->A.cols();
  if (auto* c2 = std::get_if<ColumnDep2Witness>(&w)) return c2->A.cols();
  if (auto* f = std::get_if<FullRankWitness>(&w)) return f->A.cols();
  return 0;
}

std::string format_witness(const Witness& w, std::size_t p, std::size_t q) {
  std::ostringstream os;
  os << "field sqrt " << witness_radicand(w) << '\n';
  if (auto* d1 = std::get_if<Rank1Witness>(&w)) {
    os << "dyad1\n" << p << ' ' << q << '\n';
    format_vector(os, d1->a);
    format_vector(os, d1->c);
  } else if (auto* d2 = std::get_if<Rank2Witness>(&w)) {
    os << "dyad2\n" << p << ' ' << q << '\n';
    format_vector(os, d2->a);
    format_vector(os, d2->b);
    format_vector(os, d2->c);
    format_vector(os, d2->d);
  } else if (auto* c1 = std::get_if<ColumnDep1Witness>(&w)) {
    os << "coldep1\n" << p << ' ' << q << '\n';
    format_matrix_rows(os, c1->A);
    format_vector(os, c1->c);
  } else if (auto* c2 = std::get_if<ColumnDep2Witness>(&w)) {
    os << "coldep2\n" << p << ' ' << q << '\n';
    format_matrix_rows(os, c2->A);
    format_vector(os, c2->b);
    format_vector(os, c2->c);
  } else if (auto* f = std::get_if<FullRankWitness>(&w)) {
    os << "matrix\n" << p << ' ' << q << '\n';
    format_matrix_rows(os, f->A);
  } else {
    fail(ErrorKind::Internal, "cannot format an empty witness");
  }
  return os.str();
}

namespace {

std::vector<QuadExt> parse_vector_line(const std::vector<Token>& row, std::size_t n,
                                       int line_no) {
  if (row.size() != n)
    throw ParseError("expected " + std::to_string(n) + " entries", line_no,
                     row.empty() ? 1 : row[0].column);
  std::vector<QuadExt> out;
  out.reserve(n);
  for (const Token& t : row) out.push_back(parse_quadext(t.text, t.line, t.column));
  return out;
}

}  // namespace

Witness parse_witness(const std::string& text) {
  auto lines = tokenize_lines(text);
  if (lines.size() < 3) throw ParseError("witness file too short", 1, 1);
  if (lines[0].size() != 3 || lines[0][0].text != "field" || lines[0][1].text != "sqrt")
    throw ParseError("expected header 'field sqrt d'", 1, 1);
  if (!valid_integer(lines[0][2].text))
    throw ParseError("invalid radicand", lines[0][2].line, lines[0][2].column);
  if (lines[1].size() != 1)
    throw ParseError("expected witness kind on line 2", 2, 1);
  std::string kind = lines[1][0].text;
  if (lines[2].size() != 2)
    throw ParseError("expected dimensions 'p q'", 3, 1);
  std::size_t p = parse_dim(lines[2][0]);
  std::size_t q = parse_dim(lines[2][1]);

  auto need_lines = [&](std::size_t n) {
    if (lines.size() < 3 + n)
      throw ParseError("witness payload truncated", int(lines.size()) + 1, 1);
  };
  auto matrix_at = [&](std::size_t first) {
    QuadMatrix A(p, q);
    for (std::size_t i = 0; i < p; ++i) {
      auto row = parse_vector_line(lines[first + i], q, int(first + i) + 1);
      for (std::size_t j = 0; j < q; ++j) A(i, j) = row[j];
    }
    return A;
  };

  if (kind == "dyad1") {
    need_lines(2);
    Rank1Witness w;
    w.a = parse_vector_line(lines[3], p, 4);
    w.c = parse_vector_line(lines[4], q, 5);
    return w;
  }
  if (kind == "dyad2") {
    need_lines(4);
    Rank2Witness w;
    w.a = parse_vector_line(lines[3], p, 4);
    w.b = parse_vector_line(lines[4], p, 5);
    w.c = parse_vector_line(lines[5], q, 6);
    w.d = parse_vector_line(lines[6], q, 7);
    return w;
  }
  if (kind == "matrix") {
    need_lines(p);
    return FullRankWitness{matrix_at(3)};
  }
  if (kind == "coldep1") {
    if (q < 2) throw ParseError("coldep1 needs q >= 2", 3, 1);
    need_lines(p + 1);
    ColumnDep1Witness w;
    w.A = matrix_at(3);
    w.c = parse_vector_line(lines[3 + p], q - 1, int(3 + p) + 1);
    return w;
  }
  if (kind == "coldep2") {
    if (q < 3) throw ParseError("coldep2 needs q >= 3", 3, 1);
    need_lines(p + 2);
    ColumnDep2Witness w;
    w.A = matrix_at(3);
    w.b = parse_vector_line(lines[3 + p], q - 2, int(3 + p) + 1);
    w.c = parse_vector_line(lines[4 + p], q - 2, int(4 + p) + 1);
    return w;
  }
  throw ParseError("unknown witness kind '" + kind + "'", 2, 1);
}

std::string format_rational_matrix(const RationalMatrix& m) {
  std::ostringstream os;
  os << m.rows() << ' ' << m.cols() << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) os << ' ';
      os << m(i, j).get_str();
    }
    os << '\n';
  }
  return os.str();
}

std::string digest_hex(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::ParseError, "cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Internal, "cannot write file: " + path);
  out << content;
}

}  // namespace intrank
