#ifndef EQTREE_IO_HPP
#define EQTREE_IO_HPP

#include <optional>
#include <string>
#include <vector>

#include "eqtree/fan.hpp"
#include "eqtree/pairs.hpp"
#include "eqtree/tree.hpp"

namespace eqtree {

enum class MatrixFormat { Phylip, Csv };

// PHYLIP: first line n, then one row per taxon, "name value...", either full
// square (diagonal zero) or lower-triangular (row i carries i-1 values).
// CSV: header row of names, square body. Square inputs are checked for
// symmetry to 1e-6 * scale and averaged. Throws ParseError with line/column.
DissimilarityMap parse_distance_matrix(const std::string& text,
                                       MatrixFormat format);

std::string serialize_phylip(const DissimilarityMap& d);
std::string serialize_csv(const DissimilarityMap& d);

// Newick with branch lengths, children sorted canonically, 12 significant
// digits, trailing ";".
std::string emit_newick(const EquidistantTree& tree);

// Minimal Newick reader used for round-trip checks: returns leaf labels in
// order of first appearance and pairwise path distances in pair_index order
// over that label order.
struct ParsedNewick {
  std::vector<std::string> labels;
  std::vector<double> distances;  // pair_index order over `labels`
};

ParsedNewick parse_newick(const std::string& text);

struct RunStats {
  std::size_t visited_chains = 0;
  std::size_t dp_edges = 0;
  std::size_t dp_pruned = 0;
  double wall_ms = 0.0;
};

// Everything `fit` reports. squared_error is recomputable from newick plus
// the input matrix.
struct RunReport {
  int n = 0;
  std::vector<std::string> taxa;
  std::string checksum;  // FNV-1a over the value vector
  std::string method;
  std::string chain;
  std::string topology;
  std::string newick;
  std::vector<double> levels;
  double squared_error = 0.0;
  double upgma_squared_error = 0.0;
  double improvement_over_upgma = 0.0;
  RunStats stats;
  std::optional<std::vector<std::string>> cone_set;
  std::optional<std::string> squared_error_exact;  // "num/den"
};

std::string report_to_json(const RunReport& report);
std::string census_to_json(const CensusReport& report);

std::string input_checksum(const DissimilarityMap& d);

}  // namespace eqtree

#endif
