#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "circuit.hpp"
#include "graph.hpp"
#include "network.hpp"
#include "rng.hpp"

namespace spinhop {

// Simulation-level knobs shared by every experiment.
struct RunSettings {
  DeviceParams device;
  SimOptions sim;
  double w_mag = 0.1;              // V per Hebbian unit
  bool normalize_weights = false;  // divide by pattern count
  double v_c = 0.25;               // V, charge-up clamp
  CalibrationMode calibration = CalibrationMode::balanced;
  double explicit_v_dw = 0.0;      // used with CalibrationMode::explicit_value
  bool literal_branch_count = false;
  double maxcut_penalty = 1.05;
  int threads = 1;  // worker threads for independent trials
  // With sim.trace_every_steps > 0: trials whose traces are kept. Empty keeps
  // every trial's trace (memory scales with trials x samples x n).
  std::vector<long long> trace_trials;
};

// Axon supply for an n-neuron network under these settings.
double resolve_v_dw(const RunSettings& s, int n);

int hamming_distance(const BitVec& a, const BitVec& b);

// Flips exactly lround(fraction*len) distinct positions chosen by the rng.
BitVec distort(const BitVec& pattern, double fraction, Rng& rng);

// Max over every stored pattern and its inverse of (matching bits / n).
double bitwise_accuracy(const BitVec& output,
                        std::span<const BitVec> stored_patterns);

bool is_pattern_or_inverse(const BitVec& output, const BitVec& pattern);

struct TrialRecord {
  long long trial_index = 0;
  int source_pattern = -1;  // index of the distorted stored pattern, -1 = random input
  BitVec input;
  TrialReport report;
  double accuracy = 0;      // bitwise accuracy vs the stored set
  int pixel_error = 0;      // Hamming distance to the true image (image runs)
  bool full_recall = false; // exact pattern-or-inverse match
  bool equal_split_frozen = false;
  bool fault = false;
};

struct RecallStats {
  int n = 0;
  int n_patterns = 0;
  long long trials = 0;
  double full_recall_rate = 0;
  double bitwise_accuracy = 0;   // mean over non-fault trials
  double converged_rate = 0;
  double mean_t_converge = 0;    // s, over converged trials
  double mean_t_chargeup = 0;    // s
  double mean_energy = 0;        // J, over converged trials
  double mean_chargeup_energy = 0;
  double mean_avg_power = 0;     // W
  long long frozen_count = 0;
  long long fault_count = 0;
  bool v_c_below_weights = false;
  std::vector<TrialRecord> records;
};

enum class InputMode { uniform_random, distorted_stored };

struct RecallOptions {
  int n = 30;
  int n_patterns = 1;
  long long trials = 100;
  // Sweep every stored pattern x every input vector instead of sampling
  // (single stored pattern, n <= 8).
  bool exhaustive = false;
  InputMode input_mode = InputMode::uniform_random;
  double distortion = 0.0;  // used with distorted_stored
  uint64_t seed = 1;
  bool keep_records = true;
};

// Per trial: draw stored patterns (rejecting duplicate/complementary sets),
// train, write a probe input via charge-up, release, score the settled bits.
RecallStats recall_experiment(const RecallOptions& opt, const RunSettings& s);

struct ImageLevelResult {
  double distortion = 0;
  long long trials = 0;
  double mean_pixel_error = 0;
  int max_pixel_error = 0;
  double mean_t_converge = 0;  // s
  double mean_energy = 0;      // J
  long long fault_count = 0;
  std::vector<TrialRecord> records;
};

struct ImageOptions {
  std::vector<double> levels;
  long long trials_per_level = 50;
  uint64_t seed = 1;
  bool keep_records = true;
};

// Trains one network on all images, then per level distorts each image in
// round-robin, runs recall and reports pixel error against the clean image
// (min over the image and its inverse).
std::vector<ImageLevelResult> image_experiment(const std::vector<BitVec>& images,
                                               const ImageOptions& opt,
                                               const RunSettings& s);

struct MaxcutResult {
  std::string instance;
  BitVec partition;
  long long cut = 0;
  long long best_known = -1;  // negative = not provided
  double ratio = 0;           // cut / best_known; 1 for an empty edge set
  TrialReport report;
  bool fault = false;
};

// Deterministic single run: embed the graph, start all-antiparallel, release.
MaxcutResult maxcut_experiment(const Graph& g,
                               std::optional<long long> best_known,
                               const RunSettings& s,
                               const std::string& instance_name = "");

// Exhaustive optimum over 2^(n-1) partitions; n <= 24.
std::pair<long long, BitVec> brute_force_max_cut(const Graph& g);

// '0'/'1' grid, one row per line; '#' comments and blank lines skipped.
// All rows must have equal width. Returned row-major.
BitVec parse_image_grid(const std::string& text);
BitVec load_image_file(const std::string& path);

}  // namespace spinhop
