// Copyright 2026 The TMPUD Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TMPUD_WORLD_MODEL_H_
#define TMPUD_WORLD_MODEL_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "tmpud/json_io.h"
#include "tmpud/road_network.h"

namespace tmpud {

enum class Level : std::uint8_t { kLow, kHigh };

std::string_view to_string(Level level);
Level parse_level(std::string_view text);  // throws ParseError

struct DomainFactors {
  Level density = Level::kLow;
  Level acceleration = Level::kLow;
  // Replaces the density-implied vehicle count when set (degenerate scenes).
  std::optional<int> vehicle_override;

  int vehicle_count() const;
  double acceleration_range() const;
  // "density-acceleration", e.g. "high-low"; the override is appended as "/n".
  std::string name() const;
  static DomainFactors parse(std::string_view name);

  auto operator<=>(const DomainFactors&) const = default;
};

// Index order of outcome distributions. kSuccess reads as "merge" for lane
// changes.
enum class Outcome : std::uint8_t { kSuccess, kCollide, kStop };
inline constexpr int kOutcomeCount = 3;

std::string_view outcome_name(Outcome outcome, ActionKind kind);

inline constexpr int kSafetyBuckets = 5;
// Safety histogram layout: exact 0, twenty equal bins over (0, 1), exact 1.
// The estimator produces both extremes often, so they keep their own mass.
inline constexpr int kSafetyHistogramBins = 22;
int safety_histogram_index(double mu);

// Equal-width bucket of a safety value; throws InvalidArgument outside [0, 1].
int safety_bucket(double mu, int buckets = kSafetyBuckets);

using Distribution = std::array<double, kOutcomeCount>;

// Learned statistics of one (action kind, factors) cell: outcome counts per
// safety bucket and the histogram of safety values the estimator produced.
// A cell may instead carry explicit distributions (scripted models).
struct WorldModelCell {
  std::array<std::array<int, kOutcomeCount>, kSafetyBuckets> counts{};
  std::array<int, kSafetyHistogramBins> safety_histogram{};
  std::optional<std::array<Distribution, kSafetyBuckets>> fixed;

  static WorldModelCell with_distribution(const Distribution& p);

  int episodes() const;
  // The fixed distribution if present, else the Laplace-smoothed (+1 per
  // outcome) empirical one.
  Distribution distribution(int bucket) const;

  bool operator==(const WorldModelCell&) const = default;
};

class WorldModel {
 public:
  static constexpr int kSchemaVersion = 1;

  void set_cell(ActionKind kind, const DomainFactors& factors, WorldModelCell cell);
  bool has_cell(ActionKind kind, const DomainFactors& factors) const;
  // Throws MissingCell.
  const WorldModelCell& cell(ActionKind kind, const DomainFactors& factors) const;
  Distribution distribution(ActionKind kind, const DomainFactors& factors,
                            double mu) const;

  // Adds every cell of `other`, replacing duplicates.
  void merge(const WorldModel& other);
  std::size_t cell_count() const { return cells_.size(); }

  Json to_json() const;
  static WorldModel from_json(const JsonDocument& doc);
  void save(const std::filesystem::path& path) const;
  static WorldModel load(const std::filesystem::path& path);

  bool operator==(const WorldModel&) const = default;

 private:
  std::map<std::pair<ActionKind, std::string>, WorldModelCell> cells_;
};

// Inverse-CDF draw from `p` with a uniform variate u in [0, 1).
Outcome sample_categorical(const Distribution& p, double u);

// Outcome of an action executed at safety value mu. Deterministic per seed.
// Throws InvalidArgument for mu outside [0, 1] and MissingCell.
Outcome sample_outcome(const WorldModel& model, ActionKind kind,
                       const DomainFactors& factors, double mu, std::uint64_t seed);

// Safety value drawn from the cell's histogram (uniform inside an interior
// bin, uniform over [0, 1] for an empty histogram). Throws MissingCell.
double sample_safety(const WorldModel& model, ActionKind kind,
                     const DomainFactors& factors, std::uint64_t seed);

}  // namespace tmpud

#endif  // TMPUD_WORLD_MODEL_H_
