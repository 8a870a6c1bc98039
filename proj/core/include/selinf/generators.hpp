#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "selinf/lft.hpp"

namespace selinf {

/// Dataset with P = MQ for the given Q. Only nonzero components of Q are
/// visited, so this is cheap for sparse Q.
Dataset gen_classical(const ExperimentDesign& design, const QVector& q);

struct ClassicalOptions {
  /// Number of distinct assignments drawn is uniform in 1..max_atoms.
  std::size_t max_atoms = 8;
  /// Atom weights are drawn from 1..max_weight and normalized.
  int max_weight = 12;
  std::size_t column_guard = 1'000'000;
};

struct ClassicalSample {
  Dataset dataset;
  /// Generating Q, the ground truth.
  QVector q;
};

/// Random sparse Q with small-integer weights, and the dataset it generates.
/// Equal seeds give equal samples.
ClassicalSample gen_classical(const ExperimentDesign& design, std::uint64_t seed, const ClassicalOptions& options = {});

/// CHSH-shaped box: outcomes agree under (1,1), (1,2), (2,1) and disagree
/// under (2,2), each with probability 1/2 per agreeing (or disagreeing) pair.
Dataset gen_prbox();

/// Angle π·multiple, with `multiple` exact.
struct Angle {
  Rational multiple;

  double radians() const;
  friend bool operator==(const Angle&, const Angle&) = default;
};

/// Parses "0", "pi", "-pi/2", "3pi/4", "3*pi/4", "0.25pi".
Angle parse_angle(std::string_view text);

/// Measurement angles for each value of each of the two inputs.
struct AngleSpec {
  std::vector<Angle> first;
  std::vector<Angle> second;
};

/// Parses a comma-separated list of 2k angles: k for the first input, then
/// k for the second.
AngleSpec parse_angle_spec(std::string_view text);

/// Spin-singlet statistics: p_{kl|ij} = (1 + s_k s_l E_ij)/4 with s = (+1, −1)
/// and E_ij = −cos(a_i − b_j). p_{11} and p_{12} are rounded to `precision`
/// decimal digits and the table is rebuilt symmetrically from them, which
/// keeps every single marginal exactly 1/2. Requires 6 ≤ precision ≤ 15.
Dataset gen_singlet(const AngleSpec& angles, int precision = 12);

/// Three spin-½ particles in the GHZ state, each measured along X (value 1)
/// or Y (value 2); outcome 1 is +1 and outcome 2 is −1. Under XXX the
/// product of outcomes is +1, under XYY, YXY, YYX it is −1, each of the
/// four compatible tuples having probability 1/4; the other four treatments
/// are uniform.
Dataset gen_ghz();

/// Two-area Yes/No detection experiment. hit_rates[λ][w-1] is Pr[Yes] in
/// area λ at intensity w. Detections share a latent threshold with weight
/// `coupling` in [0, 1]: Pr[Yes, Yes] = c·min(r, r′) + (1 − c)·r·r′.
/// Outcome 1 is Yes and 2 is No.
Dataset gen_double_detection(const std::vector<std::vector<Rational>>& hit_rates, const Rational& coupling);

/// weight·a + (1 − weight)·b, table by table. The designs must be equal.
Dataset mix(const Dataset& a, const Dataset& b, const Rational& weight);

}  // namespace selinf
