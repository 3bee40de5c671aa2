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

#include "tmpud/world_model.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "tmpud/errors.h"
#include "tmpud/rng.h"

namespace tmpud {

std::string_view to_string(Level level) {
  return level == Level::kHigh ? "high" : "low";
}

Level parse_level(std::string_view text) {
  if (text == "high") return Level::kHigh;
  if (text == "low") return Level::kLow;
  throw ParseError("unknown level '" + std::string(text) + "' (expected low or high)");
}

int DomainFactors::vehicle_count() const {
  if (vehicle_override) return *vehicle_override;
  return density == Level::kHigh ? 3 : 1;
}

double DomainFactors::acceleration_range() const {
  return acceleration == Level::kHigh ? 1.0 : 0.5;
}

std::string DomainFactors::name() const {
  std::string out = std::string(to_string(density)) + "-" + std::string(to_string(acceleration));
  if (vehicle_override) out += "/" + std::to_string(*vehicle_override);
  return out;
}

DomainFactors DomainFactors::parse(std::string_view name) {
  DomainFactors f;
  const auto slash = name.find('/');
  if (slash != std::string_view::npos) {
    const std::string count(name.substr(slash + 1));
    std::size_t used = 0;
    int n = -1;
    try {
      n = std::stoi(count, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != count.size() || n < 0) {
      throw ParseError("bad vehicle count in factors '" + std::string(name) + "'");
    }
    f.vehicle_override = n;
    name = name.substr(0, slash);
  }
  const auto dash = name.find('-');
  if (dash == std::string_view::npos) {
    throw ParseError("factors must look like density-acceleration, got '" +
                     std::string(name) + "'");
  }
  f.density = parse_level(name.substr(0, dash));
  f.acceleration = parse_level(name.substr(dash + 1));
  return f;
}

std::string_view outcome_name(Outcome outcome, ActionKind kind) {
  switch (outcome) {
    case Outcome::kSuccess:
      return is_lane_change(kind) ? "merge" : "success";
    case Outcome::kCollide:
      return "collide";
    case Outcome::kStop:
      return "stop";
  }
  return "?";
}

int safety_bucket(double mu, int buckets) {
  if (!(mu >= 0.0 && mu <= 1.0)) throw InvalidArgument("safety value outside [0, 1]");
  return std::min(buckets - 1, static_cast<int>(mu * buckets));
}

int safety_histogram_index(double mu) {
  if (!(mu >= 0.0 && mu <= 1.0)) throw InvalidArgument("safety value outside [0, 1]");
  if (mu == 0.0) return 0;
  if (mu == 1.0) return kSafetyHistogramBins - 1;
  const int interior = kSafetyHistogramBins - 2;
  return 1 + std::min(interior - 1, static_cast<int>(mu * interior));
}

WorldModelCell WorldModelCell::with_distribution(const Distribution& p) {
  WorldModelCell c;
  c.fixed.emplace();
  c.fixed->fill(p);
  return c;
}

int WorldModelCell::episodes() const {
  int n = 0;
  for (const auto& row : counts) n += std::accumulate(row.begin(), row.end(), 0);
  return n;
}

Distribution WorldModelCell::distribution(int bucket) const {
  if (fixed) return (*fixed)[bucket];
  const auto& row = counts[bucket];
  const double total = std::accumulate(row.begin(), row.end(), 0.0) + kOutcomeCount;
  Distribution p;
  for (int o = 0; o < kOutcomeCount; ++o) p[o] = (row[o] + 1.0) / total;
  return p;
}

void WorldModel::set_cell(ActionKind kind, const DomainFactors& factors,
                          WorldModelCell cell) {
  if (cell.fixed) {
    for (const Distribution& p : *cell.fixed) {
      double sum = 0.0;
      for (double x : p) {
        if (!(x >= 0.0)) throw InvalidArgument("negative outcome probability");
        sum += x;
      }
      if (std::abs(sum - 1.0) > 1e-9) {
        throw InvalidArgument("outcome distribution does not sum to 1");
      }
    }
  }
  cells_[{kind, factors.name()}] = std::move(cell);
}

bool WorldModel::has_cell(ActionKind kind, const DomainFactors& factors) const {
  return cells_.contains({kind, factors.name()});
}

const WorldModelCell& WorldModel::cell(ActionKind kind,
                                       const DomainFactors& factors) const {
  const auto it = cells_.find({kind, factors.name()});
  if (it == cells_.end()) {
    throw MissingCell("world model has no cell for " + std::string(to_string(kind)) +
                      " under " + factors.name());
  }
  return it->second;
}

Distribution WorldModel::distribution(ActionKind kind, const DomainFactors& factors,
                                      double mu) const {
  const int bucket = safety_bucket(mu);
  return cell(kind, factors).distribution(bucket);
}

void WorldModel::merge(const WorldModel& other) {
  for (const auto& [key, cell] : other.cells_) cells_[key] = cell;
}

Json WorldModel::to_json() const {
  Json cells = Json::array();
  for (const auto& [key, cell] : cells_) {
    Json c;
    c["action"] = std::string(to_string(key.first));
    c["factors"] = key.second;
    c["safety_histogram"] = cell.safety_histogram;
    if (cell.fixed) {
      c["distributions"] = *cell.fixed;
    } else {
      c["counts"] = cell.counts;
      Json dists = Json::array();
      for (int b = 0; b < kSafetyBuckets; ++b) dists.push_back(cell.distribution(b));
      c["smoothed"] = dists;
    }
    cells.push_back(std::move(c));
  }
  Json edges = Json::array();
  for (int b = 0; b <= kSafetyBuckets; ++b) {
    edges.push_back(static_cast<double>(b) / kSafetyBuckets);
  }
  return Json{{"version", kSchemaVersion},
              {"outcomes", {"success|merge", "collide", "stop"}},
              {"bucket_edges", edges},
              {"cells", cells}};
}

WorldModel WorldModel::from_json(const JsonDocument& doc) {
  using Ptr = Json::json_pointer;
  const long long version = doc.integer(Ptr("/version"));
  if (version != kSchemaVersion) {
    doc.fail(Ptr("/version"), "unsupported world model version " + std::to_string(version));
  }
  const Json& cells = doc.at(Ptr("/cells"));
  if (!cells.is_array()) doc.fail(Ptr("/cells"), "expected an array");
  WorldModel model;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const std::string base = "/cells/" + std::to_string(i);
    const std::string action = doc.string(Ptr(base + "/action"));
    const auto kind = parse_action_kind(action);
    if (!kind) doc.fail(Ptr(base + "/action"), "unknown action '" + action + "'");
    DomainFactors factors;
    try {
      factors = DomainFactors::parse(doc.string(Ptr(base + "/factors")));
    } catch (const ParseError& e) {
      doc.fail(Ptr(base + "/factors"), e.what());
    }
    WorldModelCell cell;
    try {
      if (doc.contains(Ptr(base + "/safety_histogram"))) {
        cell.safety_histogram = doc.at(Ptr(base + "/safety_histogram"))
                                    .get<std::array<int, kSafetyHistogramBins>>();
      }
      if (doc.contains(Ptr(base + "/distributions"))) {
        cell.fixed = doc.at(Ptr(base + "/distributions"))
                         .get<std::array<Distribution, kSafetyBuckets>>();
      } else {
        cell.counts = doc.at(Ptr(base + "/counts"))
                          .get<std::array<std::array<int, kOutcomeCount>, kSafetyBuckets>>();
      }
    } catch (const nlohmann::json::exception& e) {
      doc.fail(Ptr(base), std::string("malformed cell: ") + e.what());
    }
    try {
      model.set_cell(*kind, factors, std::move(cell));
    } catch (const InvalidArgument& e) {
      doc.fail(Ptr(base), e.what());
    }
  }
  return model;
}

void WorldModel::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  out << to_json().dump(2) << "\n";
}

WorldModel WorldModel::load(const std::filesystem::path& path) {
  return from_json(JsonDocument::load(path));
}

Outcome sample_categorical(const Distribution& p, double u) {
  double acc = 0.0;
  for (int o = 0; o < kOutcomeCount; ++o) {
    acc += p[o];
    if (u < acc) return static_cast<Outcome>(o);
  }
  // Rounding left u above the cumulative sum: last outcome with mass.
  for (int o = kOutcomeCount - 1; o >= 0; --o) {
    if (p[o] > 0.0) return static_cast<Outcome>(o);
  }
  return Outcome::kSuccess;
}

Outcome sample_outcome(const WorldModel& model, ActionKind kind,
                       const DomainFactors& factors, double mu, std::uint64_t seed) {
  const Distribution p = model.distribution(kind, factors, mu);
  return sample_categorical(p, Rng(seed).uniform());
}

double sample_safety(const WorldModel& model, ActionKind kind,
                     const DomainFactors& factors, std::uint64_t seed) {
  const auto& hist = model.cell(kind, factors).safety_histogram;
  Rng rng(seed);
  const long long total = std::accumulate(hist.begin(), hist.end(), 0LL);
  if (total == 0) return rng.uniform();
  long long pick = static_cast<long long>(rng.uniform() * static_cast<double>(total));
  int bin = 0;
  for (; bin < kSafetyHistogramBins - 1; ++bin) {
    if (pick < hist[bin]) break;
    pick -= hist[bin];
  }
  if (bin == 0) return 0.0;
  if (bin == kSafetyHistogramBins - 1) return 1.0;
  const double width = 1.0 / (kSafetyHistogramBins - 2);
  return std::min(1.0, (bin - 1 + rng.uniform()) * width);
}

}  // namespace tmpud
