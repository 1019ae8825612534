#include "htsgd/optimizers/output.hpp"

#include "htsgd/core/errors.hpp"

namespace htsgd {

std::string to_string(OutputStrategy s) {
  switch (s) {
    case OutputStrategy::last: return "last";
    case OutputStrategy::simple_average: return "simple_average";
    case OutputStrategy::weighted_average: return "weighted_average";
    case OutputStrategy::uniform_random: return "uniform_random";
  }
  return "unknown";
}

OutputStrategy parse_output_strategy(const std::string& name) {
  if (name == "last") return OutputStrategy::last;
  if (name == "simple_average" || name == "average") return OutputStrategy::simple_average;
  if (name == "weighted_average") return OutputStrategy::weighted_average;
  if (name == "uniform_random" || name == "random") return OutputStrategy::uniform_random;
  throw ConfigError("unknown output strategy '" + name + "'");
}

Vector select_output_prefix(const Trajectory& traj, long prefix, OutputStrategy strategy,
                            RandomStream& rng) {
  require(!traj.iterates.empty(), "select_output: empty trajectory");
  require(prefix >= 1 && prefix <= long(traj.records.size()),
          "select_output: prefix outside the recorded steps");
  require(long(traj.iterates.size()) > prefix, "select_output: run stopped before prefix");
  switch (strategy) {
    case OutputStrategy::last: return traj.iterates[std::size_t(prefix)];
    case OutputStrategy::simple_average: {
      Vector acc = Vector::Zero(traj.iterates[0].size());
      for (long t = 0; t < prefix; ++t) acc += traj.iterates[std::size_t(t)];
      return acc / double(prefix);
    }
    case OutputStrategy::weighted_average: {
      Vector acc = Vector::Zero(traj.iterates[0].size());
      double weight = 0.0;
      for (long t = 0; t < prefix; ++t) {
        const double eta = traj.records[std::size_t(t)].step;
        acc += eta * traj.iterates[std::size_t(t)];
        weight += eta;
      }
      return acc / weight;
    }
    case OutputStrategy::uniform_random: {
      long idx = long(rng.uniform() * double(prefix));
      if (idx >= prefix) idx = prefix - 1;
      return traj.iterates[std::size_t(idx)];
    }
  }
  return traj.iterates.back();
}

Vector select_output(const Trajectory& traj, OutputStrategy strategy, RandomStream& rng) {
  require(!traj.records.empty(), "select_output: empty trajectory");
  return select_output_prefix(traj, long(traj.records.size()), strategy, rng);
}

}  // namespace htsgd
