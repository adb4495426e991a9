#include "bsfw/ingest.hpp"

#include <zlib.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>

#include "bsfw/rng.hpp"

namespace bsfw {

namespace {

bool blank_or_comment(const std::string& line) {
  for (char c : line) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    return c == '#';
  }
  return true;
}

double parse_double_token(const std::string& tok, long line_no, const char* what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw ParseError(std::string("trailing junk in ") + what, line_no);
    if (!std::isfinite(v)) throw ParseError(std::string("non-finite ") + what, line_no);
    return v;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    throw ParseError(std::string("malformed ") + what + " '" + tok + "'", line_no);
  }
}

}  // namespace

Dataset parse_libsvm(std::istream& in, int dim_override) {
  std::vector<std::vector<std::pair<int, double>>> rows;
  std::vector<double> labels;
  int max_col = 0;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank_or_comment(line)) continue;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    labels.push_back(parse_double_token(tok, line_no, "label") > 0.0 ? 1.0 : -1.0);

    std::vector<std::pair<int, double>> entries;
    int prev = 0;  // indices are 1-based in the file
    while (ls >> tok) {
      const auto colon = tok.find(':');
      if (colon == std::string::npos || colon == 0 || colon + 1 == tok.size())
        throw ParseError("malformed index:value pair '" + tok + "'", line_no);
      int idx = 0;
      const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + colon, idx);
      if (ec != std::errc() || ptr != tok.data() + colon)
        throw ParseError("malformed feature index in '" + tok + "'", line_no);
      if (idx < 1) throw ParseError("feature index must be >= 1", line_no);
      if (idx <= prev) throw ParseError("feature indices must strictly increase", line_no);
      const double val = parse_double_token(tok.substr(colon + 1), line_no, "feature value");
      prev = idx;
      entries.emplace_back(idx - 1, val);
      max_col = std::max(max_col, idx);
    }
    rows.push_back(std::move(entries));
  }

  const int dim = dim_override > 0 ? dim_override : max_col;
  if (dim_override > 0 && max_col > dim_override)
    throw ParseError("feature index exceeds the requested dimension", line_no);
  Dataset d;
  d.features = SparseRowMatrix(static_cast<int>(rows.size()), dim);
  for (std::size_t i = 0; i < rows.size(); ++i) d.features.set_row(static_cast<int>(i), rows[i]);
  d.labels = std::move(labels);
  return d;
}

Dataset parse_libsvm(const std::string& text, int dim_override) {
  std::istringstream in(text);
  return parse_libsvm(in, dim_override);
}

std::string serialize_libsvm(const Dataset& d) {
  std::string out;
  char buf[64];
  for (int i = 0; i < d.features.rows(); ++i) {
    out += d.labels[static_cast<std::size_t>(i)] > 0 ? "+1" : "-1";
    for (const auto& [col, val] : d.features.row_entries(i)) {
      std::snprintf(buf, sizeof buf, " %d:%.17g", col + 1, val);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

Dataset load_libsvm_file(const std::string& path, int dim_override) {
  std::string text;
  if (path.size() > 3 && path.compare(path.size() - 3, 3, ".gz") == 0) {
    gzFile f = gzopen(path.c_str(), "rb");
    if (f == nullptr) throw IoError("cannot open " + path);
    char buf[1 << 16];
    int got = 0;
    while ((got = gzread(f, buf, sizeof buf)) > 0) text.append(buf, static_cast<std::size_t>(got));
    const bool bad = got < 0;
    gzclose(f);
    if (bad) throw IoError("gzip read failed for " + path);
  } else {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    text = ss.str();
  }
  Dataset d = parse_libsvm(text, dim_override);
  d.provenance = path;
  return d;
}

Dataset synth_logistic(int dim, int samples, double sparsity, std::uint64_t seed) {
  if (dim < 1 || samples < 1) throw ConfigError("synth_logistic: dimensions must be positive");
  if (!(sparsity > 0.0 && sparsity <= 1.0)) throw ConfigError("synth_logistic: sparsity must lie in ]0,1]");
  Rng rng(seed);
  const int nnz = std::max(1, static_cast<int>(std::llround(sparsity * dim)));

  Vector planted(static_cast<std::size_t>(dim));
  for (double& v : planted) v = rng.next_gaussian();

  Dataset d;
  d.features = SparseRowMatrix(samples, dim);
  d.labels.resize(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) {
    const auto cols = rng.sample_without_replacement(dim, nnz);
    std::vector<std::pair<int, double>> entries;
    entries.reserve(cols.size());
    double z = 0.0;
    for (int c : cols) {
      const double v = rng.next_gaussian();
      entries.emplace_back(c, v);
      z += v * planted[static_cast<std::size_t>(c)];
    }
    d.features.set_row(i, entries);
    const double noisy = z + 0.1 * rng.next_gaussian();
    d.labels[static_cast<std::size_t>(i)] = noisy > 0.0 ? 1.0 : -1.0;
  }
  d.provenance = "synth_logistic(n=" + std::to_string(dim) + ",m=" + std::to_string(samples) +
                 ",seed=" + std::to_string(seed) + ")";
  return d;
}

std::unique_ptr<MatrixCompletionProblem> synth_completion(int rows, int cols, int observed, int rank,
                                                          std::uint64_t seed, double noise) {
  if (rows < 1 || cols < 1 || rank < 1) throw ConfigError("synth_completion: dimensions must be positive");
  if (observed < 1 || observed > rows * cols)
    throw ConfigError("synth_completion: observed count must lie in [1, rows*cols]");
  Rng rng(seed);
  DenseMatrix u(rows, rank), v(cols, rank);
  const double s = 1.0 / std::sqrt(static_cast<double>(rank));
  for (double& e : u.data()) e = s * rng.next_gaussian();
  for (double& e : v.data()) e = s * rng.next_gaussian();

  const auto flat = rng.sample_without_replacement(rows * cols, observed);
  std::vector<MatrixCompletionProblem::Observation> obs;
  obs.reserve(flat.size());
  for (int f : flat) {
    const int i = f / cols, j = f % cols;
    double y = 0.0;
    for (int r = 0; r < rank; ++r) y += u.at(i, r) * v.at(j, r);
    obs.push_back({i, j, y + noise * rng.next_gaussian()});
  }
  return std::make_unique<MatrixCompletionProblem>(rows, cols, std::move(obs));
}

}  // namespace bsfw
