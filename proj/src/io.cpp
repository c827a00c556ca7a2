#include "chaincert/io.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "chaincert/errors.hpp"

namespace chaincert {

using nlohmann::ordered_json;

ParsedChain parse_chain_json(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw ChainError(Errc::parse_error, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("P"))
    throw ChainError(Errc::parse_error, "chain JSON needs keys \"n\" and \"P\"");
  if (!doc["n"].is_number_integer() || doc["n"].get<long>() < 1)
    throw ChainError(Errc::parse_error, "\"n\" must be a positive integer");
  const auto n = static_cast<std::size_t>(doc["n"].get<long>());

  std::string convention = "column";
  if (doc.contains("convention")) {
    if (!doc["convention"].is_string())
      throw ChainError(Errc::parse_error, "\"convention\" must be \"column\" or \"row\"");
    convention = doc["convention"].get<std::string>();
    if (convention != "column" && convention != "row")
      throw ChainError(Errc::parse_error, "\"convention\" must be \"column\" or \"row\"");
  }

  const auto& rows = doc["P"];
  if (!rows.is_array() || rows.size() != n)
    throw ChainError(Errc::parse_error, "\"P\" must be an array of " + std::to_string(n) + " rows");
  Matrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!rows[i].is_array() || rows[i].size() != n)
      throw ChainError(Errc::parse_error, "row " + std::to_string(i) + " must have " +
                                              std::to_string(n) + " entries");
    for (std::size_t j = 0; j < n; ++j) {
      if (!rows[i][j].is_number())
        throw ChainError(Errc::parse_error, "P[" + std::to_string(i) + "][" + std::to_string(j) +
                                                "] is not a number");
      const double v = rows[i][j].get<double>();
      if (!std::isfinite(v))
        throw ChainError(Errc::parse_error, "P[" + std::to_string(i) + "][" + std::to_string(j) +
                                                "] is not finite");
      // Row-stochastic input transposes on load; everything downstream works
      // in the column convention.
      if (convention == "row")
        m(j, i) = v;
      else
        m(i, j) = v;
    }
  }
  return ParsedChain{std::move(m), convention, "json"};
}

ParsedChain parse_graph_tsv(const std::string& text) {
  std::vector<WeightedEdge> edges;
  int max_id = -1;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    std::istringstream fields(line);
    long u = -1, v = -1;
    double w = 0.0;
    if (!(fields >> u >> v >> w))
      throw ChainError(Errc::parse_error,
                       "line " + std::to_string(lineno) + ": expected \"u<TAB>v<TAB>w\"");
    std::string trailing;
    if (fields >> trailing)
      throw ChainError(Errc::parse_error,
                       "line " + std::to_string(lineno) + ": trailing content '" + trailing + "'");
    if (u < 0 || v < 0)
      throw ChainError(Errc::parse_error,
                       "line " + std::to_string(lineno) + ": vertex ids must be >= 0");
    if (!(w > 0.0) || !std::isfinite(w))
      throw ChainError(Errc::parse_error,
                       "line " + std::to_string(lineno) + ": weight must be positive and finite");
    edges.push_back(WeightedEdge{static_cast<int>(u), static_cast<int>(v), w});
    max_id = std::max(max_id, static_cast<int>(std::max(u, v)));
  }
  if (edges.empty()) throw ChainError(Errc::parse_error, "no edges in TSV input");
  return ParsedChain{walk_matrix(max_id + 1, edges), "column", "tsv"};
}

ParsedChain parse_chain_auto(const std::string& text) {
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    return c == '{' ? parse_chain_json(text) : parse_graph_tsv(text);
  }
  throw ChainError(Errc::parse_error, "empty input");
}

std::string chain_to_json(const Matrix& P_column) {
  const std::size_t n = P_column.size();
  ordered_json doc;
  doc["n"] = n;
  doc["convention"] = "column";
  ordered_json rows = ordered_json::array();
  for (std::size_t i = 0; i < n; ++i) {
    ordered_json row = ordered_json::array();
    for (std::size_t j = 0; j < n; ++j) row.push_back(P_column(i, j));
    rows.push_back(std::move(row));
  }
  doc["P"] = std::move(rows);
  return doc.dump(2) + "\n";
}

}  // namespace chaincert
