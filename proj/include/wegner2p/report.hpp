#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "wegner2p/experiments.hpp"
#include "wegner2p/spectral.hpp"
#include "wegner2p/stollmann.hpp"

namespace wegner2p {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

using Json = nlohmann::json;

/// Which keys an experiment config must carry.
enum class ConfigUse { kGeometry, kHamiltonian, kSingleVolume, kTwoVolume };

// -- config parsing ---------------------------------------------------------
// Every parser rejects keys it does not know with PreconditionError.

LatticePoint lattice_point_from_json(const Json& j);
Json to_json(const LatticePoint& p);
PairPoint pair_point_from_json(const Json& j);
Json to_json(const PairPoint& p);

DistributionSpec distribution_from_json(const Json& j);
Json to_json(const DistributionSpec& dist);

InteractionSpec interaction_from_json(const Json& j);
Json to_json(const InteractionSpec& spec);

/// Missing interaction defaults to U == 0 with range = dimension; missing
/// bound_mode / hopping_norm default to literal / sup. epsilon, trials and
/// master_seed have no defaults.
ExperimentConfig experiment_config_from_json(const Json& j, ConfigUse use);
/// Writes every field explicitly, so the echo alone reproduces the run.
Json to_json(const ExperimentConfig& cfg);

// -- reports ---------------------------------------------------------------

Json to_json(const SingleVolumeReport& r);
SingleVolumeReport single_volume_report_from_json(const Json& j);
Json to_json(const TwoVolumeReport& r);
TwoVolumeReport two_volume_report_from_json(const Json& j);
Json to_json(const DMReport& r);
DMReport dm_report_from_json(const Json& j);

/// Header plus one row per trial.
void write_csv(const SingleVolumeReport& r, std::ostream& os);
/// Header plus one row per conditioning round.
void write_csv(const TwoVolumeReport& r, std::ostream& os);
/// Header plus a single summary row.
void write_csv(const DMReport& r, std::ostream& os);

/// Shortest round-trip decimal for a double ("%.17g").
std::string format_double(double x);

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);
bool operator==(const SingleVolumeReport& a, const SingleVolumeReport& b);
bool operator==(const TwoVolumeRound& a, const TwoVolumeRound& b);
bool operator==(const TwoVolumeReport& a, const TwoVolumeReport& b);

}  // namespace wegner2p
