#pragma once

#include <string>
#include <vector>

#include "codebounds/bounds.hpp"
#include "codebounds/distances.hpp"
#include "codebounds/embedding.hpp"
#include "codebounds/theta.hpp"

namespace codebounds {

// 12-significant-digit formatting used by all emitted output ("inf" for
// infinite values).
std::string format_sig(double v);
std::string format_sig(ExtReal v);
double round_sig(double v);  // value after the 12-digit round trip

std::string to_json(const DistanceMatrix& D);
DistanceMatrix distance_from_json(const std::string& text);

std::string to_json(const Channel& W);
Channel channel_from_json(const std::string& text);

std::string to_json(const Code& code);
Code code_from_json(const std::string& text);

StochasticMatrix stochastic_from_json(const std::string& text);

std::string to_json(const EmbeddingReport& report);
std::string to_json(const ThetaResult& result);

// CSV with header R,delta,method,params_json; LF line endings; params quoted.
std::string emit_curve_csv(const BoundCurve& curve);
BoundCurve parse_curve_csv(const std::string& text);

// Named distances: "hamming:K", "lee:K", "pentagon", "square", "qpsk".
DistanceMatrix builtin_distance(const std::string& spec);

// Similarity view of a named distance (g = exp(-d)).
WeightedGraph builtin_graph(const std::string& spec);

// Named channels: "ternary-unilateral:eps", "bsc:p".
Channel builtin_channel(const std::string& spec);

std::vector<double> parse_number_list(const std::string& text);

}  // namespace codebounds
