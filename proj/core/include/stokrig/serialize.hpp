#pragma once

#include <string>

#include "stokrig/sk.hpp"

namespace stokrig {

/// Serializes a fitted SK model to a JSON document: trend kind, basis
/// multi-indices and families, input scaling, beta, theta, sigma2, the
/// intrinsic-covariance diagonal, and the experimental design. Doubles
/// round-trip exactly.
std::string sk_model_to_json(const SkModel& model);

/// Rebuilds a model from sk_model_to_json output; predictions of the restored
/// model are bit-identical to the original's.
SkModel sk_model_from_json(const std::string& json_text);

}  // namespace stokrig
