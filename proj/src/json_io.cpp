#include "codebounds/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "codebounds/channels.hpp"

namespace codebounds {

namespace {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

json parse_text(const std::string& text, const char* what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded())
    throw Error(Errc::invalid_input, std::string(what) + ": malformed JSON");
  return j;
}

ordered rounded(double v) { return ordered(round_sig(v)); }

ordered rounded_list(const std::vector<double>& vs) {
  ordered arr = ordered::array();
  for (double v : vs) arr.push_back(round_sig(v));
  return arr;
}

}  // namespace

std::string format_sig(double v) {
  if (std::isinf(v)) return "inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string format_sig(ExtReal v) { return format_sig(v.as_double()); }

double round_sig(double v) {
  if (!std::isfinite(v)) return v;
  return std::strtod(format_sig(v).c_str(), nullptr);
}

std::string to_json(const DistanceMatrix& D) {
  ordered j;
  j["K"] = D.K();
  ordered rows = ordered::array();
  for (int x = 0; x < D.K(); ++x) {
    ordered row = ordered::array();
    for (int y = 0; y < D.K(); ++y) {
      ExtReal e = D(x, y);
      if (e.is_finite())
        row.push_back(round_sig(e.finite_value()));
      else
        row.push_back("inf");
    }
    rows.push_back(std::move(row));
  }
  j["entries"] = std::move(rows);
  return j.dump();
}

DistanceMatrix distance_from_json(const std::string& text) {
  json j = parse_text(text, "distance matrix");
  if (!j.is_object() || !j.contains("K") || !j.contains("entries"))
    throw Error(Errc::invalid_input, "distance matrix: need K and entries");
  int K = j["K"].get<int>();
  const json& rows = j["entries"];
  if (!rows.is_array() || static_cast<int>(rows.size()) != K)
    throw Error(Errc::invalid_input, "distance matrix: entries shape mismatch");
  std::vector<ExtReal> e;
  e.reserve(static_cast<size_t>(K) * K);
  for (const json& row : rows) {
    if (!row.is_array() || static_cast<int>(row.size()) != K)
      throw Error(Errc::invalid_input, "distance matrix: ragged entries");
    for (const json& cell : row) {
      if (cell.is_string()) {
        if (cell.get<std::string>() != "inf")
          throw Error(Errc::invalid_input,
                      "distance matrix: only \"inf\" strings allowed");
        e.push_back(ExtReal::infinity());
      } else if (cell.is_number()) {
        e.push_back(ExtReal(cell.get<double>()));
      } else {
        throw Error(Errc::invalid_input, "distance matrix: bad entry type");
      }
    }
  }
  return DistanceMatrix(K, std::move(e));
}

std::string to_json(const Channel& W) {
  ordered j;
  j["X"] = W.X;
  j["Y"] = W.Y;
  ordered rows = ordered::array();
  for (int x = 0; x < W.X; ++x) rows.push_back(rounded_list(W.row(x)));
  j["W"] = std::move(rows);
  return j.dump();
}

Channel channel_from_json(const std::string& text) {
  json j = parse_text(text, "channel");
  if (!j.is_object() || !j.contains("X") || !j.contains("Y") || !j.contains("W"))
    throw Error(Errc::invalid_channel, "channel: need X, Y, W");
  int X = j["X"].get<int>();
  int Y = j["Y"].get<int>();
  const json& rows = j["W"];
  if (!rows.is_array() || static_cast<int>(rows.size()) != X)
    throw Error(Errc::invalid_channel, "channel: W shape mismatch");
  std::vector<double> W;
  W.reserve(static_cast<size_t>(X) * Y);
  for (const json& row : rows) {
    if (!row.is_array() || static_cast<int>(row.size()) != Y)
      throw Error(Errc::invalid_channel, "channel: ragged W");
    for (const json& cell : row) W.push_back(cell.get<double>());
  }
  return make_channel(X, Y, std::move(W));
}

std::string to_json(const Code& code) {
  ordered j;
  j["K"] = code.K;
  j["n"] = code.n;
  j["words"] = code.words;
  return j.dump();
}

Code code_from_json(const std::string& text) {
  json j = parse_text(text, "code");
  if (!j.is_object() || !j.contains("K") || !j.contains("words"))
    throw Error(Errc::invalid_input, "code: need K and words");
  return make_code(j["K"].get<int>(),
                   j["words"].get<std::vector<std::vector<int>>>());
}

StochasticMatrix stochastic_from_json(const std::string& text) {
  json j = parse_text(text, "stochastic matrix");
  if (!j.is_array() || j.empty())
    throw Error(Errc::invalid_input, "stochastic matrix: need a row array");
  int rows = static_cast<int>(j.size());
  int cols = static_cast<int>(j.front().size());
  std::vector<double> p;
  for (const json& row : j) {
    if (!row.is_array() || static_cast<int>(row.size()) != cols)
      throw Error(Errc::invalid_input, "stochastic matrix: ragged rows");
    for (const json& cell : row) p.push_back(cell.get<double>());
  }
  return make_stochastic(rows, cols, std::move(p));
}

std::string to_json(const EmbeddingReport& report) {
  ordered j;
  auto put = [&](const char* key, const std::optional<bool>& v) {
    if (v.has_value())
      j[key] = *v;
    else
      j[key] = nullptr;
  };
  put("divisible", report.divisible);
  put("negative_type", report.negative_type);
  put("concave_form", report.concave_form);
  put("embeddable", report.embeddable);
  if (report.witness.has_value()) {
    ordered w = ordered::array();
    for (Eigen::Index i = 0; i < report.witness->size(); ++i)
      w.push_back(round_sig((*report.witness)(i)));
    j["witness"] = std::move(w);
  } else {
    j["witness"] = nullptr;
  }
  j["reconstruction_error"] = rounded(report.reconstruction_error);
  j["consistent"] = report.consistent();
  return j.dump();
}

std::string to_json(const ThetaResult& result) {
  ordered j;
  j["value"] = rounded(result.value);
  if (std::isinf(result.representation.rho))
    j["rho"] = "inf";
  else
    j["rho"] = rounded(result.representation.rho);
  j["per_symbol_cost"] = rounded_list(result.per_symbol_cost);
  j["status"] = solver_status_name(result.status);
  j["feasibility_margin"] = rounded(result.feasibility_margin);
  ordered gram = ordered::array();
  for (Eigen::Index r = 0; r < result.representation.gram.rows(); ++r) {
    ordered row = ordered::array();
    for (Eigen::Index c = 0; c < result.representation.gram.cols(); ++c)
      row.push_back(round_sig(result.representation.gram(r, c)));
    gram.push_back(std::move(row));
  }
  j["gram"] = std::move(gram);
  return j.dump();
}

namespace {

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"')
      out += "\"\"";
    else
      out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

}  // namespace

std::string emit_curve_csv(const BoundCurve& curve) {
  std::string out = "R,delta,method,params_json\n";
  for (const BoundPoint& p : curve.points) {
    out += format_sig(p.R);
    out += ',';
    out += format_sig(p.delta);
    out += ',';
    out += p.vacuous ? "none" : method_name(p.method);
    out += ',';
    out += csv_quote(p.params);
    out += '\n';
  }
  return out;
}

BoundCurve parse_curve_csv(const std::string& text) {
  BoundCurve curve;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "R,delta,method,params_json")
    throw Error(Errc::invalid_input, "curve CSV: missing header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != 4)
      throw Error(Errc::invalid_input, "curve CSV: need 4 fields per row");
    BoundPoint p;
    p.R = std::strtod(fields[0].c_str(), nullptr);
    p.delta = fields[1] == "inf" ? ExtReal::infinity()
                                 : ExtReal(std::strtod(fields[1].c_str(), nullptr));
    if (fields[2] == "none") {
      p.vacuous = true;
    } else {
      p.method = method_from_name(fields[2]);
    }
    p.params = fields[3];
    curve.points.push_back(std::move(p));
  }
  return curve;
}

namespace {

// "name" or "name:number"
std::pair<std::string, std::optional<double>> split_spec(const std::string& s) {
  auto pos = s.find(':');
  if (pos == std::string::npos) return {s, std::nullopt};
  const std::string arg = s.substr(pos + 1);
  char* end = nullptr;
  double v = std::strtod(arg.c_str(), &end);
  if (end == arg.c_str() || *end != '\0')
    throw Error(Errc::invalid_input, "bad numeric argument in '" + s + "'");
  return {s.substr(0, pos), v};
}

}  // namespace

DistanceMatrix builtin_distance(const std::string& spec) {
  auto [name, arg] = split_spec(spec);
  auto int_arg = [&]() {
    if (!arg || *arg != std::floor(*arg) || *arg < 2)
      throw Error(Errc::invalid_input, "'" + name + "' needs an integer K >= 2");
    return static_cast<int>(*arg);
  };
  auto no_arg = [&]() {
    if (arg)
      throw Error(Errc::invalid_input, "'" + name + "' takes no argument");
  };
  if (name == "hamming") return build_hamming(int_arg());
  if (name == "lee") return build_lee(int_arg());
  if (name == "pentagon") {
    no_arg();
    return build_cycle(5);
  }
  if (name == "square") {
    no_arg();
    return build_cycle(4);
  }
  if (name == "qpsk") {
    no_arg();
    Eigen::MatrixXd pts(4, 2);
    pts << 1, 0, 0, 1, -1, 0, 0, -1;
    return build_from_points(pts);
  }
  throw Error(Errc::invalid_input, "unknown distance '" + spec + "'");
}

WeightedGraph builtin_graph(const std::string& spec) {
  return to_similarity(builtin_distance(spec));
}

Channel builtin_channel(const std::string& spec) {
  auto [name, arg] = split_spec(spec);
  if (name == "ternary-unilateral") {
    if (!arg) throw Error(Errc::invalid_input, "ternary-unilateral needs :eps");
    return ternary_unilateral(*arg);
  }
  if (name == "bsc") {
    if (!arg) throw Error(Errc::invalid_input, "bsc needs :p");
    if (!(*arg >= 0.0 && *arg <= 1.0))
      throw Error(Errc::invalid_input, "crossover outside [0,1]");
    return make_channel(2, 2, {1.0 - *arg, *arg, *arg, 1.0 - *arg});
  }
  throw Error(Errc::invalid_input, "unknown channel '" + spec + "'");
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, ',')) {
    char* end = nullptr;
    double v = std::strtod(token.c_str(), &end);
    if (end == token.c_str())
      throw Error(Errc::invalid_input, "bad number '" + token + "'");
    out.push_back(v);
  }
  if (out.empty()) throw Error(Errc::invalid_input, "empty number list");
  return out;
}

}  // namespace codebounds
