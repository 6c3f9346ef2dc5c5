//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef PAGFORGE_SAMPLER_CLASS_SAMPLE_H_
#define PAGFORGE_SAMPLER_CLASS_SAMPLE_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "pagforge/sampler/gmm.h"
#include "pagforge/util/error.h"
#include "pagforge/util/rng.h"

namespace pagforge::sampler {

// q(a_i = 1 | z) in [0, 1].
using Scorer = std::function<double(const Eigen::VectorXd &)>;

struct Attribute {
  std::string name;
  Scorer score;
  bool target = true;  // false conditions on a_i = 0, i.e. 1 - q
};

/// Conditionally independent attributes; the acceptance probability of a
/// proposal z is the product of the per-attribute factors.
struct AttributeSpec {
  std::vector<Attribute> attributes;

  double accept_probability(const Eigen::VectorXd &z) const;
};

// Decodes an accepted latent; rng is a per-lane stream for stochastic decoders.
using Decoder = std::function<std::string(const Eigen::VectorXd &, Rng &)>;
// Validity of a decoded string.
using Validator = std::function<bool(const std::string &)>;

struct SampleConfig {
  long target_accepted = 100;
  long max_draws = 100000;
  int lanes = 8;     // fixed partition of the budget; independent of threads
  int threads = 0;
  std::uint64_t seed = 0;
  bool keep_rejected = true;  // store rejected draws (z omitted) in the trace

  nlohmann::json to_json() const;
};

struct Draw {
  int lane = 0;
  long index = 0;  // draw number within the lane
  Eigen::VectorXd z;
  double probability = 0.0;
  double uniform = 0.0;
  bool accepted = false;
  std::string decoded;
  bool valid = false;
};

struct SampleResult {
  std::vector<Draw> draws;  // ordered by (lane, index)
  long total_draws = 0;
  long accepted = 0;
  long valid = 0;
  double mean_proposal_probability = 0.0;
  double mean_accepted_probability = 0.0;

  double acceptance_rate() const { return total_draws ? static_cast<double>(accepted) / total_draws : 0.0; }
  double validity_rate() const { return accepted ? static_cast<double>(valid) / accepted : 0.0; }
  std::vector<const Draw *> accepted_draws() const;
  nlohmann::json manifest(const SampleConfig &config) const;
};

class BudgetExhausted: public Error {
public:
  using Error::Error;
};

/// Rejection sampling with proposal Q = gmm: draw z ~ Q, accept with
/// probability prod_i q(a_i | z), decode accepted z. Lane l uses the stream
/// Rng(seed, l) and owns an even share of both the draw budget and the
/// acceptance target. Throws BudgetExhausted if nothing is accepted.
SampleResult class_sample(const GaussianMixture &gmm, const AttributeSpec &spec,
                          const Decoder &decoder, const Validator &validator,
                          const SampleConfig &config);

} // namespace pagforge::sampler

#endif // PAGFORGE_SAMPLER_CLASS_SAMPLE_H_
