#pragma once

#include <span>
#include <vector>

#include "network.hpp"
#include "rng.hpp"

namespace spinhop {

// Discrete {0,1} Hopfield reference model sharing a device network's weight
// matrix. Used to predict which attractor the analog dynamics should reach.
struct OracleNet {
  WeightMatrix weights;
  std::vector<double> threshold;  // per-unit firing threshold
  BitVec state;

  OracleNet(WeightMatrix w, double uniform_threshold = 0.0);
};

// Input drive on unit i given the current state.
double oracle_field(const OracleNet& net, int i);

// One ordered asynchronous pass: each unit in `order` fires iff its field
// exceeds its threshold, holds its state on an exact tie. Returns flip count.
int oracle_sweep(OracleNet& net, std::span<const int> order);

// Runs rng-shuffled sweeps until one completes with no flips. Returns the
// number of sweeps taken. Termination is guaranteed because every flip
// strictly lowers hopfield_energy; max_sweeps only guards against misuse.
int oracle_converge(OracleNet& net, Rng& rng, int max_sweeps = 100000);

bool oracle_is_fixed_point(const OracleNet& net);

// E = -1/2 sum_ij w_ij s_i s_j + sum_i T_i s_i. Never increases under sweeps.
double hopfield_energy(const OracleNet& net);

}  // namespace spinhop
