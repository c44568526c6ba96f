#include "alaam/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "alaam/errors.hpp"

namespace alaam {

namespace {

std::string strip_comment(const std::string& line) {
  const auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

bool blank(const std::string& s) {
  return s.find_first_not_of(" \t\r\n") == std::string::npos;
}

int parse_int(const std::string& token, const std::string& where) {
  int value = 0;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size())
    throw ParseError(where + ": expected an integer, got '" + token + "'");
  return value;
}

double parse_double(const std::string& token, const std::string& where) {
  try {
    std::size_t used = 0;
    const double value = std::stod(token, &used);
    if (used != token.size()) throw std::invalid_argument("");
    return value;
  } catch (const std::exception&) {
    throw ParseError(where + ": expected a number, got '" + token + "'");
  }
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) {
    while (!field.empty() && (field.back() == '\r' || field.back() == ' '))
      field.pop_back();
    std::size_t start = field.find_first_not_of(" \t");
    fields.push_back(start == std::string::npos ? std::string{}
                                                : field.substr(start));
  }
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

}  // namespace

DirectedGraph load_graph(const std::filesystem::path& path,
                         const GraphReadOptions& options) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open graph file '" + path.string() + "'");

  std::vector<std::pair<int, int>> raw;
  int declared_n = -1;
  int max_id = -1;
  std::string line;
  int line_no = 0;
  bool saw_data = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = strip_comment(line);
    if (blank(body)) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);

    std::istringstream ss(body);
    std::string first;
    ss >> first;
    if (!saw_data && first.rfind("n=", 0) == 0) {
      declared_n = parse_int(first.substr(2), where);
      if (declared_n <= 0) throw ParseError(where + ": n must be positive");
      saw_data = true;
      std::string extra;
      if (ss >> extra) throw ParseError(where + ": trailing text after n=");
      continue;
    }
    saw_data = true;
    std::string second, extra;
    if (!(ss >> second)) throw ParseError(where + ": expected 'i j'");
    if (ss >> extra) throw ParseError(where + ": expected exactly two ids");
    int i = parse_int(first, where);
    int j = parse_int(second, where);
    if (options.one_based) {
      --i;
      --j;
    }
    if (i < 0 || j < 0) throw ParseError(where + ": node id out of range");
    max_id = std::max(max_id, std::max(i, j));
    raw.emplace_back(i, j);
  }

  int n = declared_n >= 0 ? declared_n : max_id + 1;
  if (options.expected_n >= 0) {
    if (declared_n >= 0 && declared_n != options.expected_n)
      throw DimensionError("graph declares n=" + std::to_string(declared_n) +
                           ", expected " + std::to_string(options.expected_n));
    n = options.expected_n;
  }
  if (n <= 0)
    throw ParseError("graph file '" + path.string() + "' defines no nodes");
  if (max_id >= n)
    throw ParseError("node id " + std::to_string(max_id) +
                     " out of range for n=" + std::to_string(n));

  DirectedGraph g(n);
  for (const auto& [i, j] : raw) {
    bool added = g.add_arc(i, j);
    if (options.undirected && i != j) added = g.add_arc(j, i) || added;
    if (!added && options.warn)
      options.warn("duplicate arc " + std::to_string(i) + "->" +
                   std::to_string(j) + " collapsed");
  }
  return g;
}

void write_graph(const std::filesystem::path& path, const DirectedGraph& g) {
  std::ofstream out(path);
  if (!out)
    throw ParseError("cannot write graph file '" + path.string() + "'");
  out << "n=" << g.node_count() << "\n";
  for (const auto& [i, j] : g.arcs()) out << i << " " << j << "\n";
  if (!out) throw ParseError("write failed for '" + path.string() + "'");
}

AttributeData load_attributes(const std::filesystem::path& path,
                              const AttributeReadOptions& options) {
  std::ifstream in(path);
  if (!in)
    throw ParseError("cannot open attribute file '" + path.string() + "'");

  std::string line;
  if (!std::getline(in, line))
    throw ParseError("attribute file '" + path.string() + "' is empty");
  const std::vector<std::string> header = split_csv_line(line);
  if (header.empty()) throw ParseError("attribute file has an empty header");

  int outcome_col = -1;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == options.outcome_column) {
      if (outcome_col >= 0)
        throw ParseError("duplicate outcome column '" +
                         options.outcome_column + "'");
      outcome_col = static_cast<int>(c);
    }
  }
  if (outcome_col < 0)
    throw ParseError("attribute file lacks outcome column '" +
                     options.outcome_column + "'");

  std::vector<std::uint8_t> outcome, missing;
  std::vector<std::vector<double>> covariates(header.size());
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != header.size())
      throw ParseError(where + ": expected " + std::to_string(header.size()) +
                       " fields, got " + std::to_string(fields.size()));
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (static_cast<int>(c) == outcome_col) {
        if (fields[c] == "NA") {
          outcome.push_back(0);
          missing.push_back(1);
        } else if (fields[c] == "0" || fields[c] == "1") {
          outcome.push_back(fields[c] == "1" ? 1 : 0);
          missing.push_back(0);
        } else {
          throw ParseError(where + ": outcome must be 0, 1, or NA, got '" +
                           fields[c] + "'");
        }
      } else {
        covariates[c].push_back(parse_double(fields[c], where));
      }
    }
  }
  if (outcome.empty())
    throw ParseError("attribute file '" + path.string() + "' has no rows");
  if (options.expected_n >= 0 &&
      static_cast<int>(outcome.size()) != options.expected_n)
    throw DimensionError("attribute file has " +
                         std::to_string(outcome.size()) + " rows, expected " +
                         std::to_string(options.expected_n));

  AttributeData data(std::move(outcome), std::move(missing));
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (static_cast<int>(c) == outcome_col) continue;
    data.add_covariate(header[c], std::move(covariates[c]));
  }
  return data;
}

std::vector<int> load_node_list(const std::filesystem::path& path,
                                bool one_based) {
  std::ifstream in(path);
  if (!in)
    throw ParseError("cannot open node list '" + path.string() + "'");
  std::vector<int> nodes;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = strip_comment(line);
    if (blank(body)) continue;
    std::istringstream ss(body);
    std::string token;
    while (ss >> token) {
      int id = parse_int(token, path.string() + ":" + std::to_string(line_no));
      nodes.push_back(one_based ? id - 1 : id);
    }
  }
  return nodes;
}

ClampMask clamp_from_nodes(const std::vector<int>& nodes,
                           const AttributeData& data) {
  std::vector<std::uint8_t> mask(data.node_count(), 0);
  for (int id : nodes) {
    if (id < 0 || id >= data.node_count())
      throw PreconditionError("clamp node " + std::to_string(id) +
                              " out of range");
    if (data.missing()[id])
      throw PreconditionError("cannot clamp node " + std::to_string(id) +
                              ": outcome is missing");
    mask[id] = 1;
  }
  ClampMask clamp((std::move(mask)));
  if (clamp.free_count() == 0)
    throw PreconditionError("clamping every node leaves nothing to simulate");
  return clamp;
}

void require_same_node_count(const DirectedGraph& g,
                             const AttributeData& data) {
  if (g.node_count() != data.node_count())
    throw DimensionError("graph has " + std::to_string(g.node_count()) +
                         " nodes but attribute table has " +
                         std::to_string(data.node_count()) + " rows");
}

}  // namespace alaam
