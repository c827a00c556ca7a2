#pragma once

#include <string>
#include <vector>

#include "chaincert/generators.hpp"
#include "chaincert/matrix.hpp"

namespace chaincert {

// A parsed input, always in column convention (row-stochastic JSON input is
// transposed on load and the original convention recorded).
struct ParsedChain {
  Matrix P;
  std::string convention = "column";  // as given in the input
  std::string format = "json";       // "json" or "tsv"
};

// Chain JSON: {"n": int, "convention": "column"|"row", "P": [[row-major]]}.
// Throws ParseError on malformed input.
ParsedChain parse_chain_json(const std::string& text);

// Weighted-graph TSV: lines "u<TAB>v<TAB>w", 0-based ids, w > 0. Comments
// (#...) and blank lines are skipped. The chain is the random walk on the
// graph. Throws ParseError / Disconnected.
ParsedChain parse_graph_tsv(const std::string& text);

// Sniffs JSON vs TSV from the first non-space byte ('{' starts JSON).
ParsedChain parse_chain_auto(const std::string& text);

// Serializes in column convention, matching the ingestion format.
std::string chain_to_json(const Matrix& P_column);

}  // namespace chaincert
