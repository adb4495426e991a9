#pragma once

#include <iosfwd>
#include <memory>
#include <string>

#include "bsfw/numerics.hpp"
#include "bsfw/problems.hpp"

namespace bsfw {

struct Dataset {
  SparseRowMatrix features;
  std::vector<double> labels;  // +-1
  std::string provenance;

  bool operator==(const Dataset&) const = default;
};

// Text format, one sample per line: "<label> <index>:<value> ...". Indices
// are 1-based and must strictly increase within a line. Labels normalize by
// sign: values > 0 map to +1, everything else to -1 (covers the 0/1 and 1/2
// label conventions). Blank lines and lines starting with '#' are skipped.
// `dim_override` fixes the column count; otherwise the maximum index seen
// decides it. Malformed input raises ParseError with the line number.
Dataset parse_libsvm(std::istream& in, int dim_override = 0);
Dataset parse_libsvm(const std::string& text, int dim_override = 0);

// Canonical re-serialization of a dataset in the same text format.
std::string serialize_libsvm(const Dataset& d);

// Reads a dataset file; paths ending in ".gz" are decompressed transparently.
Dataset load_libsvm_file(const std::string& path, int dim_override = 0);

// Seeded sparse classification instance: rows carry about sparsity*n gaussian
// nonzeros, labels come from a planted linear model with label noise.
Dataset synth_logistic(int dim, int samples, double sparsity, std::uint64_t seed);

// Seeded low-rank completion instance with `observed` distinct entries and
// additive gaussian noise on the targets.
std::unique_ptr<MatrixCompletionProblem> synth_completion(int rows, int cols, int observed, int rank,
                                                          std::uint64_t seed, double noise = 0.1);

}  // namespace bsfw
