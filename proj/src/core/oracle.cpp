#include "oracle.hpp"

#include <stdexcept>

namespace spinhop {

OracleNet::OracleNet(WeightMatrix w, double uniform_threshold)
    : weights(std::move(w)),
      threshold(weights.size(), uniform_threshold),
      state(weights.size(), 0) {}

double oracle_field(const OracleNet& net, int i) {
  const int n = net.weights.size();
  if (i < 0 || i >= n) throw std::invalid_argument("unit index out of range");
  double field = 0;
  for (int j = 0; j < n; ++j)
    if (net.state[j]) field += net.weights.at(j, i);
  return field;
}

int oracle_sweep(OracleNet& net, std::span<const int> order) {
  const int n = net.weights.size();
  int flips = 0;
  for (int i : order) {
    if (i < 0 || i >= n) throw std::invalid_argument("unit index out of range");
    const double field = oracle_field(net, i);
    uint8_t next = net.state[i];
    if (field > net.threshold[i]) next = 1;
    else if (field < net.threshold[i]) next = 0;
    if (next != net.state[i]) {
      net.state[i] = next;
      ++flips;
    }
  }
  return flips;
}

int oracle_converge(OracleNet& net, Rng& rng, int max_sweeps) {
  const int n = net.weights.size();
  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    const std::vector<size_t> perm = rng.permutation(static_cast<size_t>(n));
    const std::vector<int> order(perm.begin(), perm.end());
    if (oracle_sweep(net, order) == 0) return sweep;
  }
  throw std::logic_error("oracle failed to settle within the sweep budget");
}

bool oracle_is_fixed_point(const OracleNet& net) {
  const int n = net.weights.size();
  for (int i = 0; i < n; ++i) {
    const double field = oracle_field(net, i);
    uint8_t next = net.state[i];
    if (field > net.threshold[i]) next = 1;
    else if (field < net.threshold[i]) next = 0;
    if (next != net.state[i]) return false;
  }
  return true;
}

double hopfield_energy(const OracleNet& net) {
  const int n = net.weights.size();
  double pair_term = 0;
  for (int i = 0; i < n; ++i) {
    if (!net.state[i]) continue;
    for (int j = i + 1; j < n; ++j)
      if (net.state[j])
        pair_term += 0.5 * (net.weights.at(i, j) + net.weights.at(j, i));
  }
  double thresh_term = 0;
  for (int i = 0; i < n; ++i)
    if (net.state[i]) thresh_term += net.threshold[i];
  return -pair_term + thresh_term;
}

}  // namespace spinhop
