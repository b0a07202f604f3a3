#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "codebounds/bounds.hpp"
#include "codebounds/channels.hpp"
#include "codebounds/embedding.hpp"
#include "codebounds/json_io.hpp"
#include "codebounds/oracle.hpp"
#include "codebounds/theta.hpp"

namespace cb = codebounds;
using nlohmann::ordered_json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw cb::Error(cb::Errc::invalid_input, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

cb::DistanceMatrix load_distance(const std::string& spec) {
  if (std::filesystem::exists(spec))
    return cb::distance_from_json(read_file(spec));
  return cb::builtin_distance(spec);
}

cb::Channel load_channel(const std::string& spec) {
  if (std::filesystem::exists(spec))
    return cb::channel_from_json(read_file(spec));
  return cb::builtin_channel(spec);
}

cb::WeightedGraph load_graph(const std::string& spec) {
  return cb::to_similarity(load_distance(spec));
}

double parse_rho(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0')
    throw cb::Error(cb::Errc::invalid_input, "bad rho '" + s + "'");
  return v;
}

void write_out(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw cb::Error(cb::Errc::invalid_input, "cannot write " + path);
  out << text;
}

ordered_json code_json(const cb::Code& code) {
  return ordered_json::parse(cb::to_json(code));
}

// Solver flag block shared by the theta-driven subcommands.
struct SolverFlags {
  cb::SolverOptions opts;
  std::string rho = "1";

  void attach(CLI::App* cmd, bool with_rho = true) {
    if (with_rho)
      cmd->add_option("--rho", rho, "degree parameter (or 'inf')");
    cmd->add_option("--starts", opts.starts, "solver starts");
    cmd->add_option("--seed", opts.seed, "random seed");
    cmd->add_option("--max-iter", opts.max_iter, "Newton iteration cap");
    cmd->add_option("--gap-tol", opts.gap_tol, "optimality gap target");
  }
};

std::vector<cb::Method> parse_methods(const std::string& list) {
  std::vector<cb::Method> out;
  std::istringstream in(list);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    for (char& c : tok)
      if (c == '-') c = '_';
    out.push_back(cb::method_from_name(tok));
  }
  if (out.empty()) throw cb::Error(cb::Errc::invalid_input, "no methods given");
  return out;
}

constexpr const char* kDefaultMethods =
    "umbrella,elias_binary,berlekamp,piret,blahut,circ_sym";

int run(int argc, char** argv) {
  CLI::App app{
      "codebounds: upper bounds on code minimum distances over general "
      "distances, with exhaustive small-scale oracles"};
  app.require_subcommand(1);
  std::string out_path;
  app.add_option("-o,--output", out_path, "write output here (default stdout)")
      ->capture_default_str();

  // ---- distance ----------------------------------------------------------
  auto* cmd_distance = app.add_subcommand(
      "distance", "emit a distance matrix as JSON");
  struct {
    std::string distance, channel, metric = "bhattacharyya";
  } d_args;
  cmd_distance->add_option("--distance", d_args.distance,
                           "named distance or JSON file");
  cmd_distance->add_option("--channel", d_args.channel,
                           "derive the matrix from this channel");
  cmd_distance->add_option("--metric", d_args.metric,
                           "channel metric: bhattacharyya or chernoff");
  cmd_distance->callback([&] {
    cb::DistanceMatrix D = [&] {
      if (!d_args.channel.empty()) {
        cb::Channel W = load_channel(d_args.channel);
        if (d_args.metric == "bhattacharyya") return cb::build_bhattacharyya(W);
        if (d_args.metric == "chernoff") return cb::additive_chernoff_matrix(W);
        throw cb::Error(cb::Errc::invalid_input,
                        "unknown metric '" + d_args.metric + "'");
      }
      if (d_args.distance.empty())
        throw cb::Error(cb::Errc::invalid_input,
                        "need --distance or --channel");
      return load_distance(d_args.distance);
    }();
    write_out(cb::to_json(D) + "\n", out_path);
  });

  // ---- check-embedding ---------------------------------------------------
  auto* cmd_embed = app.add_subcommand(
      "check-embedding", "test the squared-Euclidean conditions");
  struct {
    std::string distance, rho_grid, partition;
    int trials = 200;
    std::uint64_t seed = cb::kDefaultSeed;
  } e_args;
  cmd_embed->add_option("--distance", e_args.distance)->required();
  cmd_embed->add_option("--rho-grid", e_args.rho_grid,
                        "comma list for the divisibility grid");
  cmd_embed->add_option("--partition", e_args.partition,
                        "index blocks like 0,1|2,3 checked separately");
  cmd_embed->add_option("--trials", e_args.trials);
  cmd_embed->add_option("--seed", e_args.seed);
  cmd_embed->callback([&] {
    cb::DistanceMatrix D = load_distance(e_args.distance);
    std::vector<double> grid;
    if (!e_args.rho_grid.empty())
      grid = cb::parse_number_list(e_args.rho_grid);
    if (e_args.partition.empty()) {
      cb::EmbeddingReport rep =
          cb::classify(D, grid, e_args.trials, e_args.seed);
      write_out(cb::to_json(rep) + "\n", out_path);
      return;
    }
    ordered_json blocks = ordered_json::array();
    std::istringstream in(e_args.partition);
    std::string part;
    while (std::getline(in, part, '|')) {
      std::vector<double> raw = cb::parse_number_list(part);
      std::vector<int> idx(raw.begin(), raw.end());
      std::vector<cb::ExtReal> sub;
      for (int x : idx)
        for (int y : idx) {
          if (x < 0 || x >= D.K() || y < 0 || y >= D.K())
            throw cb::Error(cb::Errc::invalid_input,
                            "partition index out of range");
          sub.push_back(D(x, y));
        }
      cb::DistanceMatrix block(static_cast<int>(idx.size()), std::move(sub));
      cb::EmbeddingReport rep =
          cb::classify(block, grid, e_args.trials, e_args.seed);
      ordered_json entry;
      entry["indices"] = idx;
      entry["report"] = ordered_json::parse(cb::to_json(rep));
      blocks.push_back(std::move(entry));
    }
    write_out(blocks.dump() + "\n", out_path);
  });

  // ---- theta -------------------------------------------------------------
  auto* cmd_theta = app.add_subcommand("theta", "solve a theta value");
  struct {
    std::string distance, graph, P;
    bool classical = false;
    SolverFlags solver;
  } t_args;
  cmd_theta->add_option("--distance", t_args.distance);
  cmd_theta->add_option("--graph", t_args.graph,
                        "similarity view exp(-d) of the named distance");
  cmd_theta->add_option("--P", t_args.P, "weights: solve the weighted variant");
  cmd_theta->add_flag("--classical", t_args.classical,
                      "orthogonality-constrained classical value");
  t_args.solver.attach(cmd_theta);
  cmd_theta->callback([&] {
    cb::ThetaResult res = [&] {
      if (!t_args.graph.empty()) {
        cb::WeightedGraph G = load_graph(t_args.graph);
        if (t_args.classical) return cb::lovasz_classical(G, t_args.solver.opts);
        double rho = parse_rho(t_args.solver.rho);
        if (!t_args.P.empty())
          return cb::solve_theta_graph_P(G, rho,
                                         cb::parse_number_list(t_args.P),
                                         t_args.solver.opts);
        return cb::solve_theta_graph(G, rho, t_args.solver.opts);
      }
      if (t_args.distance.empty())
        throw cb::Error(cb::Errc::invalid_input, "need --distance or --graph");
      cb::DistanceMatrix D = load_distance(t_args.distance);
      double rho = parse_rho(t_args.solver.rho);
      if (!t_args.P.empty())
        return cb::solve_theta_P(D, rho, cb::parse_number_list(t_args.P),
                                 t_args.solver.opts);
      return cb::solve_theta(D, rho, t_args.solver.opts);
    }();
    write_out(cb::to_json(res) + "\n", out_path);
  });

  // ---- bound -------------------------------------------------------------
  auto* cmd_bound = app.add_subcommand(
      "bound", "evaluate one bound method, emitted as a CSV row");
  struct {
    std::string method, distance, lambda, Q, P, F, V;
    double R = -1.0;
    SolverFlags solver;
  } b_args;
  cmd_bound->add_option("--method", b_args.method)->required();
  cmd_bound->add_option("--distance", b_args.distance);
  cmd_bound->add_option("--lambda", b_args.lambda, "elias-binary parameters");
  cmd_bound->add_option("--Q", b_args.Q, "distribution for piret/circ-sym");
  cmd_bound->add_option("--P", b_args.P, "weights / search composition");
  cmd_bound->add_option("--F", b_args.F, "auxiliary distribution");
  cmd_bound->add_option("--V", b_args.V, "conditional family (JSON file)");
  cmd_bound->add_option("--R", b_args.R, "rate in nats");
  b_args.solver.attach(cmd_bound);
  cmd_bound->callback([&] {
    std::string name = b_args.method;
    for (char& c : name)
      if (c == '-') c = '_';
    cb::Method method = cb::method_from_name(name);
    cb::BoundOptions opts;
    opts.solver = b_args.solver.opts;
    auto need_distance = [&] {
      if (b_args.distance.empty())
        throw cb::Error(cb::Errc::invalid_input, "method needs --distance");
      return load_distance(b_args.distance);
    };
    auto need_R = [&] {
      if (b_args.R < 0.0)
        throw cb::Error(cb::Errc::invalid_input, "method needs --R >= 0");
      return b_args.R;
    };
    cb::BoundCurve curve;
    curve.distance_id = b_args.distance;
    switch (method) {
      case cb::Method::elias_binary: {
        if (b_args.lambda.empty())
          throw cb::Error(cb::Errc::invalid_input, "need --lambda");
        curve.points =
            cb::elias_binary_curve(cb::parse_number_list(b_args.lambda));
        break;
      }
      case cb::Method::umbrella:
        curve.points.push_back(cb::umbrella_point(
            need_distance(), parse_rho(b_args.solver.rho), opts));
        break;
      case cb::Method::umbrella_P: {
        cb::DistanceMatrix D = need_distance();
        if (b_args.P.empty())
          throw cb::Error(cb::Errc::invalid_input, "need --P");
        double rho = parse_rho(b_args.solver.rho);
        cb::Distribution P = cb::parse_number_list(b_args.P);
        double th = cb::solve_theta_P(D, rho, P, opts.solver).value;
        cb::BoundPoint p;
        p.R = th;
        p.delta = rho * th;
        p.method = cb::Method::umbrella_P;
        ordered_json params;
        params["rho"] = cb::round_sig(rho);
        params["P"] = P;
        p.params = params.dump();
        curve.points.push_back(std::move(p));
        break;
      }
      case cb::Method::general_elias: {
        cb::DistanceMatrix D = need_distance();
        if (b_args.F.empty() || b_args.V.empty())
          throw cb::Error(cb::Errc::invalid_input, "need --F and --V");
        curve.points.push_back(cb::general_elias_point(
            D, parse_rho(b_args.solver.rho), cb::parse_number_list(b_args.F),
            cb::stochastic_from_json(read_file(b_args.V)), opts));
        break;
      }
      case cb::Method::berlekamp:
        curve.points.push_back(
            cb::berlekamp_bound(need_distance(), need_R()).point);
        break;
      case cb::Method::piret: {
        cb::DistanceMatrix D = need_distance();
        if (b_args.Q.empty())
          throw cb::Error(cb::Errc::invalid_input, "need --Q");
        curve.points.push_back(
            cb::piret_bound(D, cb::parse_number_list(b_args.Q), need_R()));
        break;
      }
      case cb::Method::blahut: {
        cb::DistanceMatrix D = need_distance();
        double R = need_R();
        if (!b_args.F.empty() && !b_args.V.empty()) {
          curve.points.push_back(
              cb::blahut_eval(D, cb::parse_number_list(b_args.F),
                              cb::stochastic_from_json(read_file(b_args.V)), R));
        } else {
          cb::Distribution P =
              b_args.P.empty()
                  ? cb::Distribution(static_cast<size_t>(D.K()), 1.0 / D.K())
                  : cb::parse_number_list(b_args.P);
          curve.points.push_back(cb::blahut_search(D, P, R, opts));
        }
        break;
      }
      case cb::Method::circ_sym: {
        cb::DistanceMatrix D = need_distance();
        if (b_args.Q.empty())
          throw cb::Error(cb::Errc::invalid_input, "need --Q");
        curve.points.push_back(cb::circ_sym_point(
            D, cb::parse_number_list(b_args.Q),
            parse_rho(b_args.solver.rho), opts));
        break;
      }
    }
    write_out(cb::emit_curve_csv(curve), out_path);
  });

  // ---- curve -------------------------------------------------------------
  auto* cmd_curve = app.add_subcommand(
      "curve", "best-of merge of bound methods over a rate grid");
  struct {
    std::string distance, R_grid, methods = kDefaultMethods, rho_grid;
    int refine_iters = 12;
    SolverFlags solver;
  } c_args;
  cmd_curve->add_option("--distance", c_args.distance)->required();
  cmd_curve->add_option("--R-grid", c_args.R_grid, "comma list of rates")
      ->required();
  cmd_curve->add_option("--methods", c_args.methods)->capture_default_str();
  cmd_curve->add_option("--rho-grid", c_args.rho_grid,
                        "override the degree-parameter grid");
  cmd_curve->add_option("--refine-iters", c_args.refine_iters);
  c_args.solver.attach(cmd_curve, /*with_rho=*/false);
  cmd_curve->callback([&] {
    cb::DistanceMatrix D = load_distance(c_args.distance);
    cb::BoundOptions opts;
    opts.solver = c_args.solver.opts;
    opts.refine_iters = c_args.refine_iters;
    if (!c_args.rho_grid.empty())
      opts.rho_grid = cb::parse_number_list(c_args.rho_grid);
    cb::BoundCurve curve =
        cb::best_curve(D, cb::parse_number_list(c_args.R_grid),
                       parse_methods(c_args.methods), opts);
    curve.distance_id = c_args.distance;
    write_out(cb::emit_curve_csv(curve), out_path);
  });

  // ---- oracle ------------------------------------------------------------
  auto* cmd_oracle = app.add_subcommand(
      "oracle", "exhaustive small-scale ground truth");
  cmd_oracle->require_subcommand(1);
  struct {
    std::string graph, distance, code, V, P;
    int n = 1, M = 2;
    double eps = 0.0;
    int budget = cb::kOracleBudget;
    std::uint64_t seed = cb::kDefaultSeed;
  } o_args;

  auto* o_stable = cmd_oracle->add_subcommand(
      "stable", "largest eps-stable set of a graph power");
  o_stable->add_option("--graph", o_args.graph)->required();
  o_stable->add_option("--n", o_args.n);
  o_stable->add_option("--eps", o_args.eps);
  o_stable->add_option("--P", o_args.P, "restrict to a composition class");
  o_stable->add_option("--budget", o_args.budget);
  o_stable->callback([&] {
    cb::WeightedGraph G = load_graph(o_args.graph);
    std::optional<cb::Distribution> P;
    if (!o_args.P.empty()) P = cb::parse_number_list(o_args.P);
    cb::CompatibilityGraph cg =
        cb::kronecker_power(G, o_args.n, P ? &*P : nullptr, o_args.budget);
    cb::StableSetResult res = cb::max_stable_set(cg, o_args.eps);
    ordered_json j;
    j["size"] = res.size;
    j["witness"] = res.witness;
    write_out(j.dump() + "\n", out_path);
  });

  auto* o_mindist = cmd_oracle->add_subcommand(
      "mindist", "optimal minimum distance of an (n, M) code");
  o_mindist->add_option("--distance", o_args.distance)->required();
  o_mindist->add_option("--n", o_args.n)->required();
  o_mindist->add_option("--M", o_args.M)->required();
  o_mindist->add_option("--P", o_args.P, "restrict to a composition class");
  o_mindist->add_option("--budget", o_args.budget);
  o_mindist->callback([&] {
    cb::DistanceMatrix D = load_distance(o_args.distance);
    std::optional<cb::Distribution> P;
    if (!o_args.P.empty()) P = cb::parse_number_list(o_args.P);
    cb::MinDistResult res = cb::optimal_min_distance(
        o_args.n, o_args.M, D, P ? &*P : nullptr, o_args.budget);
    ordered_json j;
    if (res.distance.is_finite())
      j["distance"] = cb::round_sig(res.distance.finite_value());
    else
      j["distance"] = "inf";
    j["witness"] = code_json(res.witness);
    write_out(j.dump() + "\n", out_path);
  });

  auto* o_shift = cmd_oracle->add_subcommand(
      "shift", "largest constant-composition subcode over shifts");
  o_shift->add_option("--code", o_args.code, "code JSON file")->required();
  o_shift->add_option("--seed", o_args.seed);
  o_shift->callback([&] {
    cb::Code code = cb::code_from_json(read_file(o_args.code));
    cb::ShiftResult res = cb::shift_to_constant_composition(code, o_args.seed);
    ordered_json j;
    j["shift"] = res.shift;
    j["subcode"] = code_json(res.subcode);
    write_out(j.dump() + "\n", out_path);
  });

  auto* o_cover = cmd_oracle->add_subcommand(
      "cover", "best jointly-typical center and covered subcode");
  o_cover->add_option("--code", o_args.code, "code JSON file")->required();
  o_cover->add_option("--V", o_args.V, "conditional family (JSON file)")
      ->required();
  o_cover->add_option("--budget", o_args.budget);
  o_cover->callback([&] {
    cb::Code code = cb::code_from_json(read_file(o_args.code));
    cb::StochasticMatrix V = cb::stochastic_from_json(read_file(o_args.V));
    cb::CoverResult res = cb::best_covered_subcode(code, V, o_args.budget);
    ordered_json j;
    j["a"] = res.a;
    j["subcode"] = code_json(res.subcode);
    write_out(j.dump() + "\n", out_path);
  });

  // ---- channel -----------------------------------------------------------
  auto* cmd_channel = app.add_subcommand("channel", "channel-level distances");
  cmd_channel->require_subcommand(1);
  struct {
    std::string channel, R_grid;
    int x = -1, y = -1;
    SolverFlags solver;
  } ch_args;

  auto* ch_chernoff = cmd_channel->add_subcommand(
      "chernoff", "Chernoff distance between rows (or the full matrix)");
  ch_chernoff->add_option("--channel", ch_args.channel)->required();
  ch_chernoff->add_option("--x", ch_args.x, "first input symbol");
  ch_chernoff->add_option("--y", ch_args.y, "second input symbol");
  ch_chernoff->callback([&] {
    cb::Channel W = load_channel(ch_args.channel);
    if (ch_args.x >= 0 && ch_args.y >= 0) {
      if (ch_args.x >= W.X || ch_args.y >= W.X)
        throw cb::Error(cb::Errc::invalid_input, "input symbol out of range");
      cb::ChernoffResult r =
          cb::chernoff_distance(W.row(ch_args.x), W.row(ch_args.y));
      ordered_json j;
      if (r.value.is_finite())
        j["value"] = cb::round_sig(r.value.finite_value());
      else
        j["value"] = "inf";
      j["argmin_s"] = cb::round_sig(r.argmin_s);
      j["boundary"] = r.boundary;
      j["pairwise_reversible_pair"] = r.pairwise_reversible_pair;
      write_out(j.dump() + "\n", out_path);
      return;
    }
    write_out(cb::to_json(cb::additive_chernoff_matrix(W)) + "\n", out_path);
  });

  auto* ch_bhatt = cmd_channel->add_subcommand(
      "bhattacharyya", "Bhattacharyya distance matrix");
  ch_bhatt->add_option("--channel", ch_args.channel)->required();
  ch_bhatt->callback([&] {
    cb::Channel W = load_channel(ch_args.channel);
    write_out(cb::to_json(cb::build_bhattacharyya(W)) + "\n", out_path);
  });

  auto* ch_rev = cmd_channel->add_subcommand(
      "reversible", "pairwise reversibility check");
  ch_rev->add_option("--channel", ch_args.channel)->required();
  ch_rev->callback([&] {
    cb::Channel W = load_channel(ch_args.channel);
    ordered_json j;
    j["pairwise_reversible"] = cb::pairwise_reversible(W);
    write_out(j.dump() + "\n", out_path);
  });

  auto* ch_rel = cmd_channel->add_subcommand(
      "reliability", "error-exponent upper bound curve (CSV)");
  ch_rel->add_option("--channel", ch_args.channel)->required();
  ch_rel->add_option("--R-grid", ch_args.R_grid)->required();
  ch_args.solver.attach(ch_rel, /*with_rho=*/false);
  ch_rel->callback([&] {
    cb::Channel W = load_channel(ch_args.channel);
    cb::BoundOptions opts;
    opts.solver = ch_args.solver.opts;
    cb::BoundCurve curve =
        cb::reliability_upper(W, cb::parse_number_list(ch_args.R_grid), opts);
    write_out(cb::emit_curve_csv(curve), out_path);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 64;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const cb::BudgetError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const cb::Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
