#include "eqtree/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace eqtree {

namespace {

struct Cursor {
  const std::string& text;
  std::size_t pos = 0;
  int line = 1;
  int col = 1;

  bool eof() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }
  void advance() {
    if (text[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, line, col);
  }
};

struct Token {
  std::string value;
  int line;
  int col;
};

// Whitespace-separated tokens, one vector per nonblank line.
std::vector<std::vector<Token>> tokenize_lines(const std::string& text) {
  std::vector<std::vector<Token>> lines;
  std::vector<Token> cur;
  int line = 1, col = 1;
  std::string word;
  int wline = 1, wcol = 1;
  auto flush_word = [&] {
    if (!word.empty()) {
      cur.push_back(Token{word, wline, wcol});
      word.clear();
    }
  };
  for (char c : text) {
    if (c == '\n') {
      flush_word();
      if (!cur.empty()) lines.push_back(std::move(cur));
      cur.clear();
      ++line;
      col = 1;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      flush_word();
    } else {
      if (word.empty()) {
        wline = line;
        wcol = col;
      }
      word.push_back(c);
    }
    ++col;
  }
  flush_word();
  if (!cur.empty()) lines.push_back(std::move(cur));
  return lines;
}

double parse_number(const Token& t) {
  double v;
  auto [ptr, ec] =
      std::from_chars(t.value.data(), t.value.data() + t.value.size(), v);
  if (ec != std::errc{} || ptr != t.value.data() + t.value.size())
    throw ParseError("expected a number, got '" + t.value + "'", t.line,
                     t.col);
  return v;
}

// Average a square matrix into the pair vector, checking symmetry and a zero
// diagonal to 1e-6 * scale.
DissimilarityMap from_square(TaxonSet taxa,
                             const std::vector<std::vector<double>>& m,
                             const std::vector<std::vector<Token>>& src,
                             int value_offset) {
  int n = taxa.size();
  double scale = 0.0;
  for (const auto& row : m)
    for (double v : row) scale = std::max(scale, std::abs(v));
  double tol = 1e-6 * std::max(1.0, scale);
  std::vector<double> values(pair_count(n));
  for (int i = 0; i < n; ++i) {
    if (std::abs(m[i][i]) > tol) {
      const Token& t = src[i][i + value_offset];
      throw ParseError("diagonal entry must be zero", t.line, t.col);
    }
    for (int j = i + 1; j < n; ++j) {
      if (std::abs(m[i][j] - m[j][i]) > tol) {
        const Token& t = src[j][i + value_offset];
        throw ParseError("matrix is not symmetric at (" + taxa.labels[i] +
                             ", " + taxa.labels[j] + ")",
                         t.line, t.col);
      }
      values[pair_index(i, j, n)] = (m[i][j] + m[j][i]) / 2.0;
    }
  }
  return make_dissimilarity(std::move(taxa), std::move(values));
}

DissimilarityMap parse_phylip(const std::string& text) {
  auto lines = tokenize_lines(text);
  if (lines.empty()) throw ParseError("empty input", 1, 1);
  if (lines[0].size() != 1)
    throw ParseError("first line must hold the taxon count", lines[0][1].line,
                     lines[0][1].col);
  int n = 0;
  {
    const Token& t = lines[0][0];
    auto [ptr, ec] =
        std::from_chars(t.value.data(), t.value.data() + t.value.size(), n);
    if (ec != std::errc{} || ptr != t.value.data() + t.value.size() || n < 2)
      throw ParseError("taxon count must be an integer >= 2", t.line, t.col);
  }
  if (static_cast<int>(lines.size()) != n + 1) {
    int got = static_cast<int>(lines.size()) - 1;
    throw ParseError("expected " + std::to_string(n) + " rows, found " +
                         std::to_string(got),
                     lines.back()[0].line, lines.back()[0].col);
  }
  // Distinguish square from lower-triangular by the first row's width.
  bool lower = lines[1].size() == 1;
  TaxonSet taxa;
  auto check_name = [&](const Token& t) {
    for (const auto& l : taxa.labels)
      if (l == t.value)
        throw ParseError("duplicate taxon name '" + t.value + "'", t.line,
                         t.col);
  };
  if (lower) {
    std::vector<double> values(pair_count(n));
    for (int i = 0; i < n; ++i) {
      const auto& row = lines[i + 1];
      check_name(row[0]);
      taxa.labels.push_back(row[0].value);
      if (static_cast<int>(row.size()) != i + 1) {
        const Token& t = row.size() > 1 ? row[1] : row[0];
        throw ParseError("lower-triangular row " + std::to_string(i + 1) +
                             " must hold " + std::to_string(i) + " values",
                         t.line, t.col);
      }
      for (int j = 0; j < i; ++j)
        values[pair_index(j, i, n)] = parse_number(row[j + 1]);
    }
    return make_dissimilarity(std::move(taxa), std::move(values));
  }
  std::vector<std::vector<double>> m(n);
  std::vector<std::vector<Token>> rows;
  for (int i = 0; i < n; ++i) {
    const auto& row = lines[i + 1];
    check_name(row[0]);
    taxa.labels.push_back(row[0].value);
    if (static_cast<int>(row.size()) != n + 1) {
      const Token& t = row.back();
      throw ParseError("square row must hold a name and " + std::to_string(n) +
                           " values",
                       t.line, t.col);
    }
    for (int j = 0; j < n; ++j) m[i].push_back(parse_number(row[j + 1]));
    rows.push_back(row);
  }
  return from_square(std::move(taxa), m, rows, 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      out.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  out.push_back(field);
  for (auto& f : out) {
    std::size_t a = f.find_first_not_of(" \t");
    std::size_t b = f.find_last_not_of(" \t");
    f = a == std::string::npos ? "" : f.substr(a, b - a + 1);
  }
  return out;
}

DissimilarityMap parse_csv(const std::string& text) {
  std::vector<std::string> raw_lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      raw_lines.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) raw_lines.push_back(cur);
  std::vector<std::pair<int, std::vector<std::string>>> lines;
  for (std::size_t i = 0; i < raw_lines.size(); ++i) {
    auto fields = split_csv_line(raw_lines[i]);
    bool blank = std::all_of(fields.begin(), fields.end(),
                             [](const std::string& f) { return f.empty(); });
    if (!blank) lines.emplace_back(static_cast<int>(i) + 1, std::move(fields));
  }
  if (lines.empty()) throw ParseError("empty input", 1, 1);
  const auto& header = lines[0].second;
  TaxonSet taxa;
  // Header may or may not start with an empty corner cell.
  std::size_t name_off = header.front().empty() ? 1 : 0;
  for (std::size_t j = name_off; j < header.size(); ++j) {
    if (header[j].empty())
      throw ParseError("empty taxon name in header", lines[0].first,
                       static_cast<int>(j) + 1);
    for (const auto& l : taxa.labels)
      if (l == header[j])
        throw ParseError("duplicate taxon name '" + header[j] + "'",
                         lines[0].first, static_cast<int>(j) + 1);
    taxa.labels.push_back(header[j]);
  }
  int n = taxa.size();
  if (n < 2) throw ParseError("need at least two taxa", lines[0].first, 1);
  if (static_cast<int>(lines.size()) != n + 1)
    throw ParseError("expected " + std::to_string(n) + " data rows, found " +
                         std::to_string(static_cast<int>(lines.size()) - 1),
                     lines.back().first, 1);
  std::vector<std::vector<double>> m(n);
  std::vector<std::vector<Token>> rows;
  for (int i = 0; i < n; ++i) {
    int lineno = lines[i + 1].first;
    const auto& fields = lines[i + 1].second;
    if (static_cast<int>(fields.size()) != n + 1)
      throw ParseError("row must hold a name and " + std::to_string(n) +
                           " values",
                       lineno, 1);
    if (fields[0] != taxa.labels[i])
      throw ParseError("row name '" + fields[0] + "' does not match header '" +
                           taxa.labels[i] + "'",
                       lineno, 1);
    std::vector<Token> row;
    row.push_back(Token{fields[0], lineno, 1});
    for (int j = 0; j < n; ++j) {
      Token t{fields[j + 1], lineno, j + 2};
      m[i].push_back(parse_number(t));
      row.push_back(t);
    }
    rows.push_back(std::move(row));
  }
  return from_square(std::move(taxa), m, rows, 1);
}

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

DissimilarityMap parse_distance_matrix(const std::string& text,
                                       MatrixFormat format) {
  return format == MatrixFormat::Phylip ? parse_phylip(text) : parse_csv(text);
}

std::string serialize_phylip(const DissimilarityMap& d) {
  std::ostringstream out;
  int n = d.n();
  out << n << "\n";
  for (int i = 0; i < n; ++i) {
    out << d.taxa.labels[i];
    for (int j = 0; j < n; ++j)
      out << " " << format_value(i == j ? 0.0 : d.at(i, j));
    out << "\n";
  }
  return out.str();
}

std::string serialize_csv(const DissimilarityMap& d) {
  std::ostringstream out;
  int n = d.n();
  for (int j = 0; j < n; ++j) out << "," << d.taxa.labels[j];
  out << "\n";
  for (int i = 0; i < n; ++i) {
    out << d.taxa.labels[i];
    for (int j = 0; j < n; ++j)
      out << "," << format_value(i == j ? 0.0 : d.at(i, j));
    out << "\n";
  }
  return out.str();
}

namespace {

std::string newick_node(const EquidistantTree& tree, int node) {
  const auto& nd = tree.nodes[node];
  if (nd.children.empty()) return nd.label;
  std::vector<std::string> parts;
  for (int c : nd.children)
    parts.push_back(newick_node(tree, c) + ":" +
                    format_value(tree.edge_weight(c)));
  std::sort(parts.begin(), parts.end());
  std::string out = "(";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ",";
    out += parts[i];
  }
  return out + ")";
}

}  // namespace

std::string emit_newick(const EquidistantTree& tree) {
  return newick_node(tree, tree.root()) + ";";
}

namespace {

struct NewickParser {
  Cursor cur;
  std::vector<std::string> labels;
  // (leaf index, distance to the current node) per open subtree.
  struct Sub {
    std::vector<std::pair<int, double>> leaves;
  };
  std::vector<double> dist;  // full n x n, filled as subtrees close
  int n_hint = 0;

  explicit NewickParser(const std::string& text) : cur{text} {}

  void skip_ws() {
    while (!cur.eof() && std::isspace(static_cast<unsigned char>(cur.peek())))
      cur.advance();
  }

  double parse_branch_length() {
    skip_ws();
    if (cur.eof() || cur.peek() != ':') return 0.0;
    cur.advance();
    skip_ws();
    std::size_t start = cur.pos;
    while (!cur.eof() &&
           (std::isdigit(static_cast<unsigned char>(cur.peek())) ||
            cur.peek() == '.' || cur.peek() == '-' || cur.peek() == '+' ||
            cur.peek() == 'e' || cur.peek() == 'E'))
      cur.advance();
    if (start == cur.pos) cur.fail("expected a branch length after ':'");
    double v;
    auto [ptr, ec] = std::from_chars(cur.text.data() + start,
                                     cur.text.data() + cur.pos, v);
    if (ec != std::errc{}) cur.fail("malformed branch length");
    return v;
  }

  Sub parse_subtree(std::vector<std::vector<double>>& pairdist) {
    skip_ws();
    if (cur.eof()) cur.fail("unexpected end of input");
    if (cur.peek() == '(') {
      cur.advance();
      std::vector<Sub> children;
      children.push_back(parse_subtree(pairdist));
      skip_ws();
      while (!cur.eof() && cur.peek() == ',') {
        cur.advance();
        children.push_back(parse_subtree(pairdist));
        skip_ws();
      }
      if (cur.eof() || cur.peek() != ')') cur.fail("expected ')'");
      cur.advance();
      // Cross-child leaf pairs have their path through this node.
      Sub merged;
      for (std::size_t a = 0; a < children.size(); ++a)
        for (std::size_t b = a + 1; b < children.size(); ++b)
          for (auto [i, di] : children[a].leaves)
            for (auto [j, dj] : children[b].leaves)
              pairdist[i][j] = pairdist[j][i] = di + dj;
      for (auto& ch : children)
        for (auto [i, di] : ch.leaves) merged.leaves.emplace_back(i, di);
      // Optional internal label, ignored.
      while (!cur.eof() && cur.peek() != ':' && cur.peek() != ',' &&
             cur.peek() != ')' && cur.peek() != ';' &&
             !std::isspace(static_cast<unsigned char>(cur.peek())))
        cur.advance();
      double bl = parse_branch_length();
      for (auto& [i, di] : merged.leaves) di += bl;
      return merged;
    }
    std::size_t start = cur.pos;
    while (!cur.eof() && cur.peek() != ':' && cur.peek() != ',' &&
           cur.peek() != ')' && cur.peek() != '(' && cur.peek() != ';' &&
           !std::isspace(static_cast<unsigned char>(cur.peek())))
      cur.advance();
    if (start == cur.pos) cur.fail("expected a leaf label");
    std::string label = cur.text.substr(start, cur.pos - start);
    int idx = static_cast<int>(labels.size());
    labels.push_back(label);
    for (auto& row : pairdist) row.push_back(0.0);
    pairdist.emplace_back(labels.size(), 0.0);
    Sub s;
    s.leaves.emplace_back(idx, parse_branch_length());
    return s;
  }

  ParsedNewick run() {
    std::vector<std::vector<double>> pairdist;
    parse_subtree(pairdist);
    skip_ws();
    if (cur.eof() || cur.peek() != ';') cur.fail("expected ';'");
    cur.advance();
    skip_ws();
    if (!cur.eof()) cur.fail("trailing content after ';'");
    ParsedNewick out;
    out.labels = labels;
    int n = static_cast<int>(labels.size());
    if (n < 2) cur.fail("need at least two leaves");
    out.distances.resize(pair_count(n));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        out.distances[pair_index(i, j, n)] = pairdist[i][j];
    return out;
  }
};

}  // namespace

ParsedNewick parse_newick(const std::string& text) {
  return NewickParser(text).run();
}

std::string input_checksum(const DissimilarityMap& d) {
  // FNV-1a over the serialized value bytes plus the labels.
  std::uint64_t h = 0xCBF29CE484222325ull;
  auto mix = [&](const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= p[i];
      h *= 0x100000001B3ull;
    }
  };
  for (const auto& label : d.taxa.labels) {
    mix(label.data(), label.size());
    mix("\0", 1);
  }
  for (double v : d.values) mix(&v, sizeof v);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

std::string report_to_json(const RunReport& report) {
  nlohmann::json j;
  j["n"] = report.n;
  j["taxa"] = report.taxa;
  j["input_checksum"] = report.checksum;
  j["method"] = report.method;
  j["chain"] = report.chain;
  j["topology"] = report.topology;
  j["newick"] = report.newick;
  j["levels"] = report.levels;
  j["squared_error"] = report.squared_error;
  j["upgma_squared_error"] = report.upgma_squared_error;
  j["improvement_over_upgma"] = report.improvement_over_upgma;
  j["stats"] = {{"visited_chains", report.stats.visited_chains},
                {"dp_edges", report.stats.dp_edges},
                {"dp_pruned", report.stats.dp_pruned},
                {"wall_ms", report.stats.wall_ms}};
  if (report.cone_set) j["cone_set"] = *report.cone_set;
  if (report.squared_error_exact)
    j["squared_error_exact"] = *report.squared_error_exact;
  return j.dump(2) + "\n";
}

std::string census_to_json(const CensusReport& report) {
  nlohmann::json j;
  j["samples"] = report.samples;
  j["seed"] = report.seed;
  j["discarded_boundary"] = report.discarded_boundary;
  j["max_cardinality"] = report.max_cardinality;
  nlohmann::json hits = nlohmann::json::object();
  for (auto& [card, cnt] : report.sample_hits_by_cardinality)
    hits[std::to_string(card)] = cnt;
  j["sample_hits_by_cardinality"] = hits;
  nlohmann::json distinct = nlohmann::json::object();
  for (auto& [card, cnt] : report.distinct_sets_by_cardinality)
    distinct[std::to_string(card)] = cnt;
  j["distinct_sets_by_cardinality"] = distinct;
  j["distinct_six_sets_uniform"] = report.distinct_six_sets_uniform;
  j["distinct_six_sets"] = report.distinct_six_sets;
  j["distinct_six_sets_chain_granular"] =
      report.distinct_six_sets_chain_granular;
  j["orbit_representative_hit"] = report.orbit_representative_hit;
  j["six_sets"] = report.six_sets;
  return j.dump(2) + "\n";
}

}  // namespace eqtree
