#include "sdpal/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "sdpal/errors.hpp"

namespace sdpal {

namespace {

// Tokenizer over the non-comment lines of an SDPA file. SDPA permits ',',
// '{', '}', '(' and ')' as extra separators.
class SdpaTokens {
 public:
  explicit SdpaTokens(const std::string& path) : in_(path) {
    if (!in_) throw ParseError("cannot open '" + path + "'", 0);
  }

  int line() const { return line_; }

  bool next(std::string& token) {
    while (true) {
      if (pos_ >= current_.size()) {
        if (!std::getline(in_, current_)) return false;
        ++line_;
        pos_ = 0;
        if (!current_.empty() &&
            (current_[0] == '"' || current_[0] == '*')) {
          pos_ = current_.size();  // comment line
          continue;
        }
        for (char& ch : current_) {
          if (ch == ',' || ch == '{' || ch == '}' || ch == '(' || ch == ')') {
            ch = ' ';
          }
        }
      }
      while (pos_ < current_.size() &&
             std::isspace(static_cast<unsigned char>(current_[pos_]))) {
        ++pos_;
      }
      if (pos_ >= current_.size()) continue;
      const std::size_t start = pos_;
      while (pos_ < current_.size() &&
             !std::isspace(static_cast<unsigned char>(current_[pos_]))) {
        ++pos_;
      }
      token = current_.substr(start, pos_ - start);
      return true;
    }
  }

  long require_int(const char* what) {
    std::string tok;
    if (!next(tok)) throw ParseError(std::string("expected ") + what, line_);
    std::size_t used = 0;
    long value = 0;
    try {
      value = std::stol(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) {
      throw ParseError(std::string("expected integer for ") + what + ", got '" +
                       tok + "'", line_);
    }
    return value;
  }

  double require_double(const char* what) {
    std::string tok;
    if (!next(tok)) throw ParseError(std::string("expected ") + what, line_);
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size() || !std::isfinite(value)) {
      throw ParseError(std::string("expected number for ") + what + ", got '" +
                       tok + "'", line_);
    }
    return value;
  }

 private:
  std::ifstream in_;
  std::string current_;
  std::size_t pos_ = 0;
  int line_ = 0;
};

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

SdpProblem read_sdpa(const std::string& path) {
  SdpaTokens tokens(path);

  const long m = tokens.require_int("constraint count");
  if (m < 1) throw ParseError("constraint count must be positive", tokens.line());
  const long nblocks = tokens.require_int("block count");
  if (nblocks != 1) {
    throw ParseError("only single-block problems are supported, got " +
                     std::to_string(nblocks) + " blocks", tokens.line());
  }
  const long block = tokens.require_int("block size");
  if (block < 0) {
    throw ParseError("diagonal blocks (negative size) are not supported",
                     tokens.line());
  }
  if (block == 0) throw ParseError("block size must be positive", tokens.line());
  const int n = static_cast<int>(block);

  Vector b(m);
  for (long k = 0; k < m; ++k) b[k] = tokens.require_double("rhs entry");

  Matrix f0 = Matrix::Zero(n, n);
  std::vector<std::vector<SparseEntry>> entries(m);
  std::vector<std::vector<bool>> f0_seen(n, std::vector<bool>(n, false));

  std::string tok;
  while (tokens.next(tok)) {
    std::size_t used = 0;
    long matno = 0;
    try {
      matno = std::stol(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) {
      throw ParseError("expected matrix number, got '" + tok + "'",
                       tokens.line());
    }
    const long blkno = tokens.require_int("block number");
    const long i = tokens.require_int("row");
    const long j = tokens.require_int("column");
    const double value = tokens.require_double("value");

    if (matno < 0 || matno > m) {
      throw ParseError("matrix number " + std::to_string(matno) +
                       " out of range [0," + std::to_string(m) + "]",
                       tokens.line());
    }
    if (blkno != 1) {
      throw ParseError("block number must be 1", tokens.line());
    }
    if (i < 1 || j < 1 || i > n || j > n || i > j) {
      throw ParseError("entry (" + std::to_string(i) + "," +
                       std::to_string(j) + ") violates 1 <= i <= j <= " +
                       std::to_string(n), tokens.line());
    }
    const int r = static_cast<int>(i) - 1;
    const int c = static_cast<int>(j) - 1;
    if (matno == 0) {
      if (f0_seen[r][c]) {
        throw ParseError("duplicate cost entry (" + std::to_string(i) + "," +
                         std::to_string(j) + ")", tokens.line());
      }
      f0_seen[r][c] = true;
      f0(r, c) = value;
      f0(c, r) = value;
    } else {
      entries[matno - 1].push_back({r, c, value});
    }
  }

  std::vector<ConstraintMatrix> constraints;
  constraints.reserve(m);
  for (long k = 0; k < m; ++k) {
    try {
      constraints.emplace_back(static_cast<int>(k), n, std::move(entries[k]));
    } catch (const DimensionError& e) {
      throw ParseError(std::string("constraint ") + std::to_string(k + 1) +
                       ": " + e.what(), 0);
    }
  }

  SdpProblem p(-f0, ConstraintOperator(n, std::move(constraints)),
               std::move(b), std::filesystem::path(path).stem().string());
  p.report_scale = -1.0;
  return p;
}

void write_sdpa(const SdpProblem& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'", 0);

  const int m = p.op.constraint_count();
  out << m << "\n1\n" << p.n << "\n";
  for (int k = 0; k < m; ++k) {
    out << format_double(p.b[k]) << (k + 1 < m ? " " : "\n");
  }

  const Matrix f0 = -p.C;
  for (int i = 0; i < p.n; ++i) {
    for (int j = i; j < p.n; ++j) {
      if (f0(i, j) != 0.0) {
        out << "0 1 " << i + 1 << ' ' << j + 1 << ' '
            << format_double(f0(i, j)) << "\n";
      }
    }
  }
  for (int k = 0; k < m; ++k) {
    for (const auto& e : p.op.constraints()[k].entries()) {
      if (e.value == 0.0) continue;
      out << k + 1 << " 1 " << e.row + 1 << ' ' << e.col + 1 << ' '
          << format_double(e.value) << "\n";
    }
  }
}

Graph read_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'", 0);

  std::vector<std::pair<int, int>> edges;
  int max_vertex = 0;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ss(line);
    long i = 0, j = 0;
    if (!(ss >> i)) continue;  // blank or comment
    if (!(ss >> j)) throw ParseError("expected two vertices", line_no);
    std::string extra;
    if (ss >> extra) throw ParseError("trailing tokens after edge", line_no);
    if (i < 1 || j < 1) throw ParseError("vertices are 1-based", line_no);
    if (i == j) throw ParseError("loops are not allowed", line_no);
    edges.emplace_back(static_cast<int>(std::min(i, j)) - 1,
                       static_cast<int>(std::max(i, j)) - 1);
    max_vertex = std::max(max_vertex, static_cast<int>(std::max(i, j)));
  }
  if (edges.empty()) throw ParseError("no edges in '" + path + "'", 0);

  try {
    return Graph::from_edges(max_vertex, std::move(edges));
  } catch (const DimensionError& e) {
    throw ParseError(e.what(), 0);
  }
}

void write_history_csv(const SolveReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'", 0);
  out << "k,r_P,r_D,delta,sigma,rank,primal_obj,dual_obj,wall_ms\n";
  for (const auto& rec : report.history) {
    out << rec.k << ',' << format_double(rec.r_p) << ','
        << format_double(rec.r_d) << ',' << format_double(rec.delta) << ','
        << format_double(rec.sigma) << ',' << rec.rank << ','
        << format_double(rec.primal_obj) << ','
        << format_double(rec.dual_obj) << ','
        << format_double(rec.wall_ms) << "\n";
  }
}

void write_solution(const SdpProblem& p, const SolveReport& report,
                    const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'", 0);
  out << "n " << p.n << "\nm " << p.op.constraint_count() << "\n";
  out << "y\n";
  for (Eigen::Index k = 0; k < report.y.size(); ++k) {
    out << format_double(report.y[k]) << "\n";
  }
  auto dump = [&out](const char* tag, const Matrix& mat) {
    out << tag << "\n";
    for (Eigen::Index i = 0; i < mat.rows(); ++i) {
      for (Eigen::Index j = 0; j < mat.cols(); ++j) {
        out << format_double(mat(i, j)) << (j + 1 < mat.cols() ? " " : "\n");
      }
    }
  };
  dump("X", report.X);
  dump("Z", report.Z);
}

}  // namespace sdpal
