//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "pagforge/sampler/class_sample.h"

#include <algorithm>
#include <cmath>

#include "pagforge/util/parallel.h"

namespace pagforge::sampler {
namespace {

long share(long total, int lanes, int lane) {
  return total / lanes + (lane < total % lanes ? 1 : 0);
}

} // namespace

double AttributeSpec::accept_probability(const Eigen::VectorXd &z) const {
  if (attributes.empty())
    throw InvalidArgument("attribute spec is empty");
  double p = 1.0;
  for (const auto &a: attributes) {
    double q = a.score(z);
    if (!(q >= 0.0 && q <= 1.0))
      throw NumericError("attribute '" + a.name + "' returned a value outside [0, 1]");
    p *= a.target ? q : 1.0 - q;
  }
  return p;
}

nlohmann::json SampleConfig::to_json() const {
  return { { "target_accepted", target_accepted }, { "max_draws", max_draws },
           { "lanes", lanes }, { "seed", seed } };
}

std::vector<const Draw *> SampleResult::accepted_draws() const {
  std::vector<const Draw *> out;
  for (const auto &d: draws) {
    if (d.accepted)
      out.push_back(&d);
  }
  return out;
}

nlohmann::json SampleResult::manifest(const SampleConfig &config) const {
  return { { "config", config.to_json() },
           { "draws", total_draws },
           { "accepted", accepted },
           { "valid", valid },
           { "acceptance_rate", acceptance_rate() },
           { "validity_rate", validity_rate() },
           { "mean_proposal_probability", mean_proposal_probability },
           { "mean_accepted_probability", mean_accepted_probability } };
}

SampleResult class_sample(const GaussianMixture &gmm, const AttributeSpec &spec,
                          const Decoder &decoder, const Validator &validator,
                          const SampleConfig &config) {
  if (config.lanes < 1 || config.max_draws < 1 || config.target_accepted < 1)
    throw InvalidArgument("sampler config: lanes, budget and target must be positive");
  if (spec.attributes.empty())
    throw InvalidArgument("attribute spec is empty");
  std::vector<std::vector<Draw>> lanes(config.lanes);
  std::vector<long> lane_draws(config.lanes, 0);
  std::vector<double> lane_prob(config.lanes, 0.0);
  parallel_for(
      lanes.size(),
      [&](std::size_t l) {
        int lane = static_cast<int>(l);
        Rng rng(config.seed, l);
        Rng decode_rng(config.seed, 0x10000 + l);
        long budget = share(config.max_draws, config.lanes, lane);
        long target = share(config.target_accepted, config.lanes, lane);
        long got = 0;
        for (long i = 0; i < budget && got < target; ++i) {
          Draw d;
          d.lane = lane;
          d.index = i;
          d.z = gmm.sample_one(rng);
          d.probability = spec.accept_probability(d.z);
          d.uniform = rng.uniform();
          d.accepted = d.uniform < d.probability;
          ++lane_draws[l];
          lane_prob[l] += d.probability;
          if (d.accepted) {
            ++got;
            if (decoder) {
              d.decoded = decoder(d.z, decode_rng);
              d.valid = validator ? validator(d.decoded) : true;
            }
          } else if (!config.keep_rejected) {
            continue;
          }
          lanes[l].push_back(std::move(d));
        }
      },
      config.threads > 0 ? config.threads : default_threads());

  SampleResult res;
  double sum_p = 0.0, sum_acc = 0.0;
  for (int l = 0; l < config.lanes; ++l) {
    res.total_draws += lane_draws[l];
    sum_p += lane_prob[l];
    for (auto &d: lanes[l]) {
      if (d.accepted) {
        ++res.accepted;
        sum_acc += d.probability;
        res.valid += d.valid ? 1 : 0;
      }
      res.draws.push_back(std::move(d));
    }
  }
  res.mean_proposal_probability = res.total_draws ? sum_p / res.total_draws : 0.0;
  res.mean_accepted_probability = res.accepted ? sum_acc / res.accepted : 0.0;
  if (res.accepted == 0)
    throw BudgetExhausted("budget of " + std::to_string(config.max_draws) +
                          " draws exhausted with no acceptance");
  return res;
}

} // namespace pagforge::sampler
